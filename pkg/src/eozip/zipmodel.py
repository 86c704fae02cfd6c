from __future__ import annotations

import logging
import random
from collections import defaultdict
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra.field import FiniteField, field_of_order
from .algebra.linalg import Subspace, frobenius_twist, inverse, projection, transform
from .algebra.symplectic import (
    SymplecticSpace,
    lagrangians,
    standard_symplectic_space,
    symplectic_group,
    symplectic_group_order,
    unipotent_radical,
)
from .constants import COUNT_MAX_G, COUNT_Q_VALUES, DEFAULT_SEED, ORACLE_MAX_G, ORACLE_MAX_Q
from .display import GroupTriple, residue_space
from .errors import (
    AmbientMismatch,
    InvalidPoint,
    InvalidTriple,
    NotComplement,
    NotIsotropic,
    NotSymplectic,
    PropertyViolation,
    ScaleTooLarge,
)
from .flags import LagrangianFlag, relpos_lagrangian
from .fzip import SymplecticFZip, eo_type, stratum_dim, validate
from .weyl import EOType, WeylElem

__all__ = [
    "ZipPoint",
    "OrbitCount",
    "zeta",
    "zip_from_point",
    "g_action",
    "orbit_class",
    "torsor_freeness_check",
    "count_points",
    "degree_table",
    "ztilde_dimension",
    "triple_to_zippoint",
]

logger = logging.getLogger(__name__)


def _transverse(u: Subspace, v: Subspace) -> bool:
    return u.dim + v.dim == u.ambient_dim and (u & v).dim == 0


@dataclass(frozen=True, eq=False)
class ZipPoint:
    """(P, Q, g) with g symplectic and Q opposite to gF(P)."""

    sp: SymplecticSpace
    P: LagrangianFlag
    Q: LagrangianFlag
    gmat: np.ndarray

    def __post_init__(self) -> None:
        sp = self.sp
        if self.P.sp != sp or self.Q.sp != sp:
            raise AmbientMismatch("P and Q must live in the point's symplectic space")
        if not sp.is_frobenius_stable:
            raise InvalidPoint("points are defined for Gram matrices with entries in F_p")
        if np.shape(self.gmat) != (sp.dim, sp.dim) or not sp.is_symplectic(self.gmat):
            raise InvalidPoint("gmat is not a symplectic matrix")
        if not _transverse(self.Q.L, self.target):
            raise InvalidPoint("Q and gF(P) are not in opposition")

    @property
    def field(self) -> FiniteField:
        return self.sp.field

    @property
    def g(self) -> int:
        return self.sp.g

    @property
    def twisted_P(self) -> Subspace:
        return frobenius_twist(self.P.L)

    @property
    def target(self) -> Subspace:
        """gF(P)."""

        return transform(self.gmat, self.twisted_P)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZipPoint):
            return NotImplemented
        return (
            self.sp == other.sp
            and self.P.L == other.P.L
            and self.Q.L == other.Q.L
            and np.array_equal(self.gmat, other.gmat)
        )


# ----------------------------------------------------------------------
# From zips to points and back
# ----------------------------------------------------------------------
def _check_isotropic_complement(sp: SymplecticSpace, u: Subspace, complement: Subspace, name: str) -> None:
    if not _transverse(u, complement):
        raise NotComplement(f"{name} is not a complement")
    if not sp.is_isotropic(complement):
        raise NotIsotropic(f"{name} is not totally isotropic")


def zeta(z: SymplecticFZip, ccompl: Subspace, dcompl: Subspace) -> ZipPoint:
    """P = C, Q = D and g = phi1 + phi0 through M^(p) = C^(p) + C'^(p) -> D' + D."""

    sp = z.sp
    _check_isotropic_complement(sp, z.C, ccompl, "Ccompl")
    _check_isotropic_complement(sp, z.D, dcompl, "Dcompl")
    if not sp.is_frobenius_stable:
        z, frame = z.standardize()
        back = inverse(sp.field, frame)
        ccompl, dcompl = transform(back, ccompl), transform(back, dcompl)
        sp = z.sp
    field = sp.field
    c_sources = field.frob(z.C.basis).T
    cc_sources = field.frob(ccompl.basis).T
    lifted = field.matmul(projection(dcompl, z.D), field.matmul(z.Phi1, c_sources))
    targets = np.hstack([lifted, field.matmul(z.Phi0, cc_sources)])
    gmat = field.matmul(targets, inverse(field, np.hstack([c_sources, cc_sources])))
    return ZipPoint(sp, LagrangianFlag(sp, z.C), LagrangianFlag(sp, z.D), gmat)


def zip_from_point(pt: ZipPoint) -> SymplecticFZip:
    """C = P, D = Q, phi0 = (projection onto Q along gF(P)) g, phi1 = g mod Q on F(P)."""

    sp, field = pt.sp, pt.field
    phi0 = field.matmul(projection(pt.Q.L, pt.target), pt.gmat)
    sources = pt.twisted_P.basis.T
    return SymplecticFZip.from_matrices(sp, pt.P.L, pt.Q.L, phi0, sources, field.matmul(pt.gmat, sources))


def orbit_class(pt: ZipPoint) -> EOType:
    z = zip_from_point(pt)
    violations = validate(z)
    if violations:
        raise InvalidPoint("; ".join(violations))
    return eo_type(z)


def g_action(h, pt: ZipPoint) -> ZipPoint:
    """h.(P, Q, g) = (hP, hQ, h g F(h)^-1)."""

    sp, field = pt.sp, pt.field
    h = field.asarray(h)
    if not sp.is_symplectic(h):
        raise NotSymplectic("only symplectic matrices act on zip points")
    gmat = field.matmul(field.matmul(h, pt.gmat), sp.inverse_of(field.frob(h)))
    return ZipPoint(
        sp,
        LagrangianFlag(sp, transform(h, pt.P.L)),
        LagrangianFlag(sp, transform(h, pt.Q.L)),
        gmat,
    )


def triple_to_zippoint(t: GroupTriple) -> ZipPoint:
    """Reduce mod p: P = S, Q = g F(T), g = gmat."""

    ring = t.ring
    field = ring.residue_field
    sp = residue_space(ring, t.gram)
    s_bar, t_bar, g_bar = ring.to_residue(t.S), ring.to_residue(t.T), ring.to_residue(t.gmat)
    p_space = Subspace.span(field, s_bar.T, sp.dim)
    q_space = Subspace.span(field, field.matmul(g_bar, field.frob(t_bar)).T, sp.dim)
    try:
        return ZipPoint(sp, LagrangianFlag(sp, p_space), LagrangianFlag(sp, q_space), g_bar)
    except ValueError as exc:
        raise InvalidTriple(f"triple does not reduce to a zip point: {exc}") from exc


# ----------------------------------------------------------------------
# Freeness of the U_Q x U_F(P) action
# ----------------------------------------------------------------------
def torsor_freeness_check(
    pt: ZipPoint, samples: Optional[int] = None, seed: int = DEFAULT_SEED
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """A pair (u, v) != (1, 1) with u g v^-1 = g, or None when the action is free at pt.

    Without `samples` every pair is examined.
    """

    sp, field = pt.sp, pt.field
    if sp.g > ORACLE_MAX_G or field.order > ORACLE_MAX_Q:
        raise ScaleTooLarge(f"freeness check needs g <= {ORACLE_MAX_G} and q <= {ORACLE_MAX_Q}")
    u_q = unipotent_radical(pt.Q.L, sp)
    u_f = unipotent_radical(pt.twisted_P, sp)
    left = field.matmul(u_q, pt.gmat)
    right = field.matmul(pt.gmat, u_f)
    identity = np.eye(sp.dim, dtype=np.int64)

    def nontrivial(i: int, j: int) -> bool:
        return not (np.array_equal(u_q[i], identity) and np.array_equal(u_f[j], identity))

    if samples is None:
        index = {matrix.tobytes(): j for j, matrix in enumerate(right)}
        for i, matrix in enumerate(left):
            j = index.get(matrix.tobytes())
            if j is not None and nontrivial(i, j):
                return u_q[i], u_f[j]
        return None
    rng = random.Random(seed)
    rows = np.array([rng.randrange(len(u_q)) for _ in range(samples)], dtype=np.int64)
    cols = np.array([rng.randrange(len(u_f)) for _ in range(samples)], dtype=np.int64)
    hits = np.nonzero(np.all(left[rows] == right[cols], axis=(1, 2)))[0]
    for k in hits:
        if nontrivial(rows[k], cols[k]):
            return u_q[rows[k]], u_f[cols[k]]
    return None


# ----------------------------------------------------------------------
# Point counts
# ----------------------------------------------------------------------
def ztilde_dimension(g: int) -> int:
    """dim Sp_2g + 2 dim U_J."""

    return g * (2 * g + 1) + g * (g + 1)


def expected_codim(eo: EOType) -> int:
    g = eo.g
    return g * (g + 1) // 2 - stratum_dim(eo)


@dataclass(slots=True)
class OrbitCount:
    g: int
    q: int
    mode: str = "ztilde"
    counts: Dict[str, int] = dataclass_field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def mass(self) -> int:
        """|Sp_2g(F_q)| q^{g(g+1)}, the count of a class of codimension 0."""

        return symplectic_group_order(self.q, self.g) * self.q ** (self.g * (self.g + 1))

    def observed_codims(self) -> Dict[str, Optional[int]]:
        """c with count * q^c = mass, or None when no such integer exists."""

        result: Dict[str, Optional[int]] = {}
        for bits, count in self.counts.items():
            codim: Optional[int] = None
            if count and self.mass % count == 0:
                ratio, c = self.mass // count, 0
                while ratio % self.q == 0:
                    ratio //= self.q
                    c += 1
                codim = c if ratio == 1 else None
            result[bits] = codim
        return result

    def expected_codims(self) -> Dict[str, int]:
        return {bits: expected_codim(EOType.parse(bits)) for bits in self.counts}

    def degrees(self) -> Dict[str, Optional[int]]:
        top = ztilde_dimension(self.g)
        return {bits: None if c is None else top - c for bits, c in self.observed_codims().items()}

    @property
    def consistent(self) -> bool:
        return len(self.counts) == 2**self.g and self.observed_codims() == self.expected_codims()

    def as_dict(self) -> dict:
        return {
            "g": self.g,
            "q": self.q,
            "mode": self.mode,
            "counts": dict(sorted(self.counts.items())),
            "total": self.total,
            "group_order": symplectic_group_order(self.q, self.g),
            "codims": dict(sorted(self.observed_codims().items())),
            "expected_codims": dict(sorted(self.expected_codims().items())),
            "degrees": dict(sorted(self.degrees().items())),
            "dimension": ztilde_dimension(self.g),
            "consistent": self.consistent,
        }


def _transverse_mask(sp: SymplecticSpace, group: np.ndarray, twisted_p: Subspace, q_space: Subspace) -> np.ndarray:
    """h with Q opposite to hF(P): the pairing between Q and hF(P) is nondegenerate."""

    field = sp.field
    left = field.matmul(q_space.basis, sp.gram)
    pairing = field.matmul(field.matmul(left, group), twisted_p.basis.T)
    return field.det(pairing) != 0


def _classify(sp: SymplecticSpace, p_space: Subspace, q_space: Subspace, gmat: np.ndarray) -> str:
    pt = ZipPoint(sp, LagrangianFlag(sp, p_space), LagrangianFlag(sp, q_space), gmat)
    return orbit_class(pt).bitstring()


def _fibre_by_orbits(sp: SymplecticSpace, group: np.ndarray, p_space: Subspace, q_space: Subspace) -> Dict[str, int]:
    """Class counts over (P, Q) fixed, classifying one g per U_Q x U_F(P) orbit."""

    field, n = sp.field, sp.dim
    twisted = frobenius_twist(p_space)
    transverse = group[_transverse_mask(sp, group, twisted, q_space)]
    u_q = unipotent_radical(q_space, sp)
    u_f_inverse = sp.inverse_of(unipotent_radical(twisted, sp))
    orbit_size = len(u_q) * len(u_f_inverse)
    index = {matrix.tobytes(): i for i, matrix in enumerate(transverse)}
    seen = np.zeros(len(transverse), dtype=bool)
    counts: Dict[str, int] = defaultdict(int)
    for i in range(len(transverse)):
        if seen[i]:
            continue
        orbit = field.matmul(field.matmul(u_q[:, None], transverse[i]), u_f_inverse[None]).reshape(-1, n, n)
        keys = {matrix.tobytes() for matrix in orbit}
        if len(keys) != orbit_size:
            raise PropertyViolation(f"U_Q x U_F(P) orbit of size {len(keys)}, expected {orbit_size}")
        for key in keys:
            j = index.get(key)
            if j is None:
                raise PropertyViolation("a U_Q x U_F(P) orbit leaves the opposition locus")
            seen[j] = True
        counts[_classify(sp, p_space, q_space, transverse[i])] += orbit_size
    return counts


def count_points(g: int, q: int, mode: str = "ztilde") -> OrbitCount:
    """Points (P, Q, g) of the opposition locus over F_q, by EO class.

    "ztilde" fixes P (G acts transitively on Lagrangians), takes one Q per
    relative position to P and classifies one point per U x U orbit;
    "exhaustive" classifies every point.
    """

    if mode not in ("ztilde", "exhaustive"):
        raise ValueError(f"unknown counting mode {mode!r}")
    if not 1 <= g <= COUNT_MAX_G or q not in COUNT_Q_VALUES:
        raise ScaleTooLarge(f"point counts need g <= {COUNT_MAX_G} and q in {COUNT_Q_VALUES}")
    if mode == "exhaustive" and g > 1 and q > 2:
        raise ScaleTooLarge("exhaustive counting is limited to g = 1, or g = 2 over F_2")
    sp = standard_symplectic_space(field_of_order(q), g)
    group = symplectic_group(sp)
    lags = lagrangians(sp)
    counts: Dict[str, int] = defaultdict(int)
    if mode == "exhaustive":
        for p_space in lags:
            twisted = frobenius_twist(p_space)
            for q_space in lags:
                for gmat in group[_transverse_mask(sp, group, twisted, q_space)]:
                    counts[_classify(sp, p_space, q_space, gmat)] += 1
    else:
        p_space = Subspace.coordinate(sp.field, sp.dim, range(1, g + 1))
        p_flag = LagrangianFlag(sp, p_space)
        by_position: Dict[WeylElem, List[Subspace]] = defaultdict(list)
        for q_space in lags:
            by_position[relpos_lagrangian(p_flag, LagrangianFlag(sp, q_space))].append(q_space)
        for position, members in sorted(by_position.items()):
            fibre = _fibre_by_orbits(sp, group, p_space, members[0])
            logger.debug("relpos %s: %d Lagrangians, fibre %s", position.window(), len(members), dict(fibre))
            for bits, count in fibre.items():
                counts[bits] += count * len(members) * len(lags)
    result = OrbitCount(g, q, mode, dict(sorted(counts.items())))
    logger.info("counted %d points for g=%d over F_%d: %s", result.total, g, q, result.counts)
    return result


def degree_table(results: Sequence[OrbitCount]) -> Dict[str, Optional[int]]:
    """Degree in q of each class count, when the same degree fits every q given."""

    table: Dict[str, Optional[int]] = {}
    for result in results:
        for bits, degree in result.degrees().items():
            if bits in table and table[bits] != degree:
                table[bits] = None
            else:
                table.setdefault(bits, degree)
    return dict(sorted(table.items()))
