from __future__ import annotations

import json
from pathlib import Path
from typing import List, Mapping

from ..fzip import (
    SymplecticFZip,
    a_number as zip_a_number,
    canonical_filtration,
    elementary_sequence,
    eo_type,
    p_rank as zip_p_rank,
    stratum_dim,
)
from ..oracle import OracleReport
from ..weyl import (
    a_number,
    all_eo_types,
    enumerate_JW,
    eo_to_weyl,
    elementary_sequence_of,
    length,
    longest_element,
    opposition_x,
    p_rank,
    siegel,
    weyl_group,
)
from ..zipmodel import OrbitCount

__all__ = [
    "weyl_table",
    "strata_table",
    "classification",
    "build_weyl_text",
    "build_strata_text",
    "build_classification_text",
    "build_counts_text",
    "build_oracle_text",
    "export_json",
    "export_text",
]


def weyl_table(g: int) -> dict:
    """|W|, the ^JW representatives with their EO types, and the lengths of w0 and x."""

    group = weyl_group(g)
    representatives = set(enumerate_JW(g, siegel(g)))
    rows = []
    for eo in all_eo_types(g):
        w = eo_to_weyl(eo)
        if w not in representatives:  # pragma: no cover - eo_to_weyl lands in ^JW
            raise ArithmeticError(f"{w.window()} is not a minimal coset representative")
        rows.append({"eo": eo.bitstring(), "window": w.window(), "length": length(w)})
    x = opposition_x(g)
    return {
        "g": g,
        "order": len(group),
        "longest_length": length(longest_element(g)),
        "opposition": x.window(),
        "opposition_length": length(x),
        "rows": rows,
    }


def strata_table(g: int) -> dict:
    top = g * (g + 1) // 2
    rows = []
    for eo in all_eo_types(g):
        dim = stratum_dim(eo)
        rows.append(
            {
                "eo": eo.bitstring(),
                "dim": dim,
                "codim": top - dim,
                "elementary_sequence": list(elementary_sequence_of(eo)),
                "a_number": a_number(eo),
                "p_rank": p_rank(eo),
            }
        )
    return {"g": g, "dim": top, "rows": rows}


def classification(z: SymplecticFZip) -> dict:
    filtration = canonical_filtration(z)
    eo = eo_type(z)
    return {
        "g": z.g,
        "q": z.field.order,
        "eo": eo.bitstring(),
        "elementary_sequence": list(elementary_sequence(z, filtration)),
        "filtration_dims": list(filtration.dims),
        "filtration_v": list(filtration.vdims),
        "stratum_dim": stratum_dim(eo),
        "a_number": zip_a_number(z),
        "p_rank": zip_p_rank(z),
    }


# ----------------------------------------------------------------------
# Text rendering
# ----------------------------------------------------------------------
def _table(header: List[str], rows: List[List[object]]) -> List[str]:
    cells = [header] + [[str(value) for value in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(value.ljust(width) for value, width in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return lines


def build_weyl_text(table: Mapping) -> str:
    g = table["g"]
    lines: List[str] = []
    lines.append(f"W(C_{g}): {table['order']} elements")
    lines.append(f"l(w0) = {table['longest_length']}")
    lines.append(f"x = {table['opposition']}, l(x) = {table['opposition_length']}")
    lines.append("")
    lines.extend(_table(["eo", "length", "window"], [[r["eo"], r["length"], r["window"]] for r in table["rows"]]))
    return "\n".join(lines)


def build_strata_text(table: Mapping) -> str:
    lines: List[str] = []
    lines.append(f"EO strata of A_{table['g']} (dim {table['dim']})")
    lines.append("")
    lines.extend(
        _table(
            ["eo", "dim", "codim", "a", "f"],
            [[r["eo"], r["dim"], r["codim"], r["a_number"], r["p_rank"]] for r in table["rows"]],
        )
    )
    return "\n".join(lines)


def build_classification_text(report: Mapping) -> str:
    lines: List[str] = []
    lines.append(f"EO type {report['eo']} (g={report['g']}, q={report['q']})")
    lines.append(f"elementary sequence {report['elementary_sequence']}")
    lines.append(f"canonical filtration dims {report['filtration_dims']}, v {report['filtration_v']}")
    lines.append(f"stratum dim {report['stratum_dim']}, a-number {report['a_number']}, p-rank {report['p_rank']}")
    return "\n".join(lines)


def build_counts_text(count: OrbitCount) -> str:
    report = count.as_dict()
    lines: List[str] = []
    lines.append(f"opposition locus over F_{count.q}, g={count.g} ({count.mode}): {count.total} points")
    lines.append(f"dimension {report['dimension']}, |Sp| = {report['group_order']}")
    lines.append("")
    rows = [
        [bits, value, report["codims"][bits], report["expected_codims"][bits], report["degrees"][bits]]
        for bits, value in report["counts"].items()
    ]
    lines.extend(_table(["eo", "count", "codim", "expected", "degree"], rows))
    lines.append("")
    lines.append("consistent" if count.consistent else "INCONSISTENT")
    return "\n".join(lines)


def build_oracle_text(report: OracleReport) -> str:
    lines: List[str] = []
    lines.append(f"{report.zips} zips over F_{report.q} with g={report.g} in {report.orbits} orbits")
    lines.append(f"classifier constant on all orbits: {str(report.constant_on_orbits).lower()}")
    lines.append(f"classes: {len(report.classes)}")
    for bits, orbits in report.orbits_per_class.items():
        lines.append(f"  {bits}: {orbits} orbit(s)")
    return "\n".join(lines)


# ----------------------------------------------------------------------
# Writers
# ----------------------------------------------------------------------
def export_json(payload, destination: Path) -> None:
    destination = Path(destination)
    destination.parent.mkdir(parents=True, exist_ok=True)
    with destination.open("w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, ensure_ascii=False)
        handle.write("\n")


def export_text(text: str, destination: Path) -> None:
    destination = Path(destination)
    destination.parent.mkdir(parents=True, exist_ok=True)
    destination.write_text(text.rstrip() + "\n", encoding="utf-8")
