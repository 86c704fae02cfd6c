from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import sympy

from .algebra.symplectic import lagrangian_complement
from .constants import (
    CLI_MAX_G,
    CLI_MAX_Q,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    DEFAULT_WITT_PRECISION,
    EXIT_INVALID_INPUT,
    EXIT_OK,
    EXIT_SCALE,
    EXIT_VIOLATION,
    GOLDEN_FILES,
    MAX_FIELD_DEGREE,
    MAX_RANK_WEYL,
    MAX_WITT_PRECISION,
)
from .data.codec import point_to_json, ring_to_json, zip_from_json
from .data.loader import get_repository
from .display import (
    check_axioms,
    display_mod_p_to_fzip,
    display_to_triple,
    duality_check,
    random_triple,
    triple_to_display,
)
from .errors import EozipError, PropertyViolation, ScaleTooLarge
from .export.report import (
    build_classification_text,
    build_counts_text,
    build_oracle_text,
    build_strata_text,
    build_weyl_text,
    classification,
    export_json,
    export_text,
    strata_table,
    weyl_table,
)
from .fzip import SymplecticFZip, eo_type, validate
from .oracle import oracle_check
from .witt import witt_ring
from .zipmodel import count_points, orbit_class, zeta

__all__ = ["build_parser", "main"]

logger = logging.getLogger(__name__)

RANDOM_GENERATOR = "random.Random (Mersenne Twister)"


def _bounded(low: int, high: int) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
        if not low <= value <= high:
            raise argparse.ArgumentTypeError(f"must lie in {low}..{high}, got {value}")
        return value

    return parse


def _prime(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if not sympy.isprime(value):
        raise argparse.ArgumentTypeError(f"{value} is not a prime")
    return value


def _emit(args: argparse.Namespace, payload, text: str) -> None:
    if args.output:
        if args.json:
            export_json(payload, args.output)
        else:
            export_text(text, args.output)
        logger.info("wrote %s", args.output)
        return
    print(json.dumps(payload, indent=2) if args.json else text)


def _load_zip(path: Path) -> SymplecticFZip:
    with Path(path).open("r", encoding="utf-8") as handle:
        payload = json.load(handle)
    return zip_from_json(payload)


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------
def _check_golden(resource: str, table: dict) -> None:
    """Compare a report table with the vendored golden table of the same genus."""

    g = table["g"]
    expected = get_repository().load(resource).get(g)
    if expected is None:
        logger.warning("no golden %s table for g=%d", resource, g)
        return
    if expected != table:
        raise PropertyViolation(f"{resource} table for g={g} differs from {GOLDEN_FILES[resource]}")
    logger.info("%s table for g=%d matches the golden data", resource, g)


def _cmd_weyl_table(args: argparse.Namespace) -> int:
    table = weyl_table(args.g)
    _emit(args, table, build_weyl_text(table))
    if args.check_golden:
        _check_golden("weyl", table)
    return EXIT_OK


def _cmd_strata_table(args: argparse.Namespace) -> int:
    table = strata_table(args.g)
    _emit(args, table, build_strata_text(table))
    if args.check_golden:
        _check_golden("strata", table)
    return EXIT_OK


def _report_violations(violations: List[str]) -> int:
    for message in violations:
        print(f"invalid: {message}", file=sys.stderr)
    return EXIT_INVALID_INPUT


def _cmd_validate(args: argparse.Namespace) -> int:
    z = _load_zip(args.zip)
    violations = validate(z)
    _emit(args, {"valid": not violations, "violations": violations}, "\n".join(violations) or "valid")
    return EXIT_INVALID_INPUT if violations else EXIT_OK


def _cmd_classify(args: argparse.Namespace) -> int:
    z = _load_zip(args.zip)
    violations = validate(z)
    if violations:
        return _report_violations(violations)
    report = classification(z)
    _emit(args, report, build_classification_text(report))
    return EXIT_OK


def _cmd_zeta(args: argparse.Namespace) -> int:
    z = _load_zip(args.zip)
    violations = validate(z)
    if violations:
        return _report_violations(violations)
    pt = zeta(z, lagrangian_complement(z.C, z.sp), lagrangian_complement(z.D, z.sp))
    eo = orbit_class(pt)
    if eo != eo_type(z):
        raise PropertyViolation(f"orbit class {eo.bitstring()} differs from the zip's type {eo_type(z).bitstring()}")
    payload = {"point": point_to_json(pt), "orbit_class": eo.bitstring()}
    text = "\n".join(
        [
            f"P = {pt.P.L.basis.tolist()}",
            f"Q = {pt.Q.L.basis.tolist()}",
            f"g = {pt.gmat.tolist()}",
            f"orbit class {eo.bitstring()}",
        ]
    )
    _emit(args, payload, text)
    return EXIT_OK


def _cmd_display_roundtrip(args: argparse.Namespace) -> int:
    ring = witt_ring(args.p, args.k, args.n)
    rng = random.Random(args.seed)
    passed = {"triple": 0, "display": 0, "axioms": 0, "duality": 0, "reduction": 0}
    for trial in range(args.trials):
        t = random_triple(ring, args.g, rng)
        d = triple_to_display(t)
        passed["axioms"] += not check_axioms(d)
        passed["duality"] += not duality_check(d)
        back = display_to_triple(d)
        passed["triple"] += back == t
        passed["display"] += triple_to_display(back) == d
        passed["reduction"] += not validate(display_mod_p_to_fzip(d))
        logger.debug("trial %d: %s", trial, passed)
    payload = {
        "ring": ring_to_json(ring),
        "g": args.g,
        "seed": args.seed,
        "generator": RANDOM_GENERATOR,
        "trials": args.trials,
        "passed": passed,
    }
    lines = [f"{ring!r}, g={args.g}, seed {args.seed}"]
    lines.extend(f"{name}: {count}/{args.trials}" for name, count in passed.items())
    lines.append(f"{passed['triple']}/{args.trials} exact round-trips")
    _emit(args, payload, "\n".join(lines))
    if any(count != args.trials for count in passed.values()):
        raise PropertyViolation(f"display round-trips failed: {passed}")
    return EXIT_OK


def _cmd_count_points(args: argparse.Namespace) -> int:
    count = count_points(args.g, args.q, args.mode)
    _emit(args, count.as_dict(), build_counts_text(count))
    if not count.consistent:
        raise PropertyViolation("point counts disagree with the codimension formula")
    return EXIT_OK


def _cmd_oracle_check(args: argparse.Namespace) -> int:
    report = oracle_check(args.g, args.q)
    _emit(args, report.as_dict(), build_oracle_text(report))
    if not report.ok:
        raise PropertyViolation("the classifier does not separate the Sp-orbits")
    return EXIT_OK


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of a text table")
    common.add_argument("--output", type=Path, help="write the report to a file")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")

    parser = argparse.ArgumentParser(prog="eozip", description="Ekedahl-Oort strata of symplectic F-zips")
    commands = parser.add_subparsers(dest="command", required=True)

    weyl = commands.add_parser("weyl-table", parents=[common], help="^JW representatives and lengths")
    weyl.add_argument("--g", type=_bounded(1, MAX_RANK_WEYL), required=True)
    weyl.add_argument("--check-golden", action="store_true", help="compare with the vendored golden table")
    weyl.set_defaults(handler=_cmd_weyl_table)

    strata = commands.add_parser("strata-table", parents=[common], help="EO strata dimensions")
    strata.add_argument("--g", type=_bounded(1, CLI_MAX_G), required=True)
    strata.add_argument("--check-golden", action="store_true", help="compare with the vendored golden table")
    strata.set_defaults(handler=_cmd_strata_table)

    for name, handler, help_text in (
        ("classify", _cmd_classify, "EO type of a zip file"),
        ("validate", _cmd_validate, "check the invariants of a zip file"),
        ("zeta", _cmd_zeta, "the zip point of a zip file"),
    ):
        command = commands.add_parser(name, parents=[common], help=help_text)
        command.add_argument("--zip", type=Path, required=True)
        command.set_defaults(handler=handler)

    roundtrip = commands.add_parser("display-roundtrip", parents=[common], help="display <-> triple round-trips")
    roundtrip.add_argument("--p", type=_prime, required=True)
    roundtrip.add_argument("--k", type=_bounded(1, MAX_FIELD_DEGREE), default=1)
    roundtrip.add_argument("--n", type=_bounded(1, MAX_WITT_PRECISION), default=DEFAULT_WITT_PRECISION)
    roundtrip.add_argument("--g", type=_bounded(1, CLI_MAX_G), default=1)
    roundtrip.add_argument("--seed", type=int, default=DEFAULT_SEED)
    roundtrip.add_argument("--trials", type=_bounded(1, 100_000), default=DEFAULT_TRIALS)
    roundtrip.set_defaults(handler=_cmd_display_roundtrip)

    count = commands.add_parser("count-points", parents=[common], help="class counts of the opposition locus")
    count.add_argument("--g", type=_bounded(1, CLI_MAX_G), required=True)
    count.add_argument("--q", type=_bounded(2, CLI_MAX_Q), required=True)
    count.add_argument("--mode", choices=("ztilde", "exhaustive"), default="ztilde")
    count.set_defaults(handler=_cmd_count_points)

    oracle = commands.add_parser("oracle-check", parents=[common], help="classifier against brute-force orbits")
    oracle.add_argument("--g", type=_bounded(1, CLI_MAX_G), required=True)
    oracle.add_argument("--q", type=_bounded(2, CLI_MAX_Q), required=True)
    oracle.set_defaults(handler=_cmd_oracle_check)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except ScaleTooLarge as exc:
        print(f"scale: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except PropertyViolation as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (EozipError, ValueError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
