from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .algebra.field import FiniteField
from .algebra.linalg import (
    MatrixF,
    SemilinearMap,
    Subspace,
    frobenius_twist,
    image,
    inverse,
    kernel,
    solve,
    transform,
)
from .algebra.symplectic import (
    SymplecticSpace,
    lagrangians,
    perp,
    random_symplectic,
    standard_symplectic_space,
    symplectic_basis_complete,
    symplectic_group,
)
from .constants import ORACLE_MAX_G, ORACLE_MAX_Q
from .errors import (
    InvalidZip,
    NotComplement,
    NotSymplectic,
    NotTotallyOrdered,
    ScaleTooLarge,
    SlopeViolation,
)
from .weyl import EOType, final_sequence

__all__ = [
    "SymplecticFZip",
    "CanonicalFiltration",
    "validate",
    "zip_operators",
    "canonical_filtration",
    "elementary_sequence",
    "eo_type",
    "stratum_dim",
    "standard_zip",
    "isomorphic_bruteforce",
    "random_zip",
    "all_zips",
    "a_number",
    "p_rank",
]

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Canonical matrices
# ----------------------------------------------------------------------
def _solve_frame(field: FiniteField, sources: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """The matrix sending each source column to the matching target column."""

    return field.matmul(targets, inverse(field, sources))


def _canonical_phi0(sp: SymplecticSpace, c: Subspace, sources: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Matrix vanishing on C^(p) and sending the columns of `sources` (a complement) to `values`."""

    field = sp.field
    twisted = frobenius_twist(c)
    frame = np.hstack([twisted.basis.T, sources])
    targets = np.hstack([np.zeros((sp.dim, c.dim), dtype=np.int64), values])
    return _solve_frame(field, frame, targets)


def _canonical_phi1(
    sp: SymplecticSpace, c: Subspace, d: Subspace, sources: np.ndarray, values: np.ndarray
) -> np.ndarray:
    """Matrix sending a basis of C^(p) to normal forms mod D, zero on the unit vectors off C's pivots."""

    field = sp.field
    units = c.complement().basis.T
    frame = np.hstack([sources, units])
    targets = np.hstack([d.reduce(values.T).T, np.zeros_like(units)])
    return _solve_frame(field, frame, targets)


def _check_complement(u: Subspace, complement: Subspace, name: str) -> None:
    if complement.dim + u.dim != u.ambient_dim or (u & complement).dim:
        raise NotComplement(f"{name} is not a complement")


# ----------------------------------------------------------------------
# The zip datum
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class SymplecticFZip:
    """(M, <,>, C, D, phi0, phi1) with both maps stored as canonical 2g x 2g matrices on M^(p).

    phi0 vanishes on C^(p) and has image D. phi1 sends C^(p) to normal
    forms modulo D and vanishes on the unit vectors off the pivots of C.
    """

    sp: SymplecticSpace
    C: Subspace
    D: Subspace
    phi0: SemilinearMap
    phi1: SemilinearMap

    @property
    def field(self) -> FiniteField:
        return self.sp.field

    @property
    def g(self) -> int:
        return self.sp.g

    @property
    def Phi0(self) -> np.ndarray:
        return self.phi0.matrix.entries

    @property
    def Phi1(self) -> np.ndarray:
        return self.phi1.matrix.entries

    @classmethod
    def _build(cls, sp: SymplecticSpace, c: Subspace, d: Subspace, phi0: np.ndarray, phi1: np.ndarray) -> "SymplecticFZip":
        field = sp.field
        return cls(
            sp,
            c,
            d,
            SemilinearMap(MatrixF(field, phi0), 1),
            SemilinearMap(MatrixF(field, phi1), 1),
        )

    @classmethod
    def from_blocks(
        cls,
        sp: SymplecticSpace,
        c: Subspace,
        d: Subspace,
        phi0_block,
        phi1_block,
        compl_c: Optional[Subspace] = None,
        compl_d: Optional[Subspace] = None,
    ) -> "SymplecticFZip":
        """Build from g x g blocks relative to complements of C and D.

        phi0(Frob c'_i) = sum_r phi0_block[r, i] d_r over the echelon basis d_r of D;
        phi1(Frob c_j) = sum_r phi1_block[r, j] d'_r modulo D.
        """

        field, n = sp.field, sp.dim
        compl_c = compl_c if compl_c is not None else c.complement()
        compl_d = compl_d if compl_d is not None else d.complement()
        _check_complement(c, compl_c, "complC")
        _check_complement(d, compl_d, "complD")
        block0 = field.asarray(phi0_block)
        block1 = field.asarray(phi1_block)
        if block0.shape != (d.dim, compl_c.dim) or block1.shape != (compl_d.dim, c.dim):
            raise InvalidZip([f"phi blocks have shapes {block0.shape} and {block1.shape}"])
        phi0 = _canonical_phi0(
            sp, c, field.frob(compl_c.basis).T, field.matmul(d.basis.T, block0) if d.dim else np.zeros((n, compl_c.dim), dtype=np.int64)
        )
        values1 = field.matmul(compl_d.basis.T, block1) if compl_d.dim else np.zeros((n, c.dim), dtype=np.int64)
        phi1 = _canonical_phi1(sp, c, d, frobenius_twist(c).basis.T, values1)
        return cls._build(sp, c, d, phi0, phi1)

    def to_blocks(
        self, compl_c: Optional[Subspace] = None, compl_d: Optional[Subspace] = None
    ) -> Tuple[np.ndarray, np.ndarray]:
        field = self.field
        compl_c = compl_c if compl_c is not None else self.C.complement()
        compl_d = compl_d if compl_d is not None else self.D.complement()
        _check_complement(self.C, compl_c, "complC")
        _check_complement(self.D, compl_d, "complD")
        images0 = field.matmul(field.frob(compl_c.basis), self.Phi0.T)
        block0 = images0[:, list(self.D.pivots)].T
        images1 = field.matmul(frobenius_twist(self.C).basis, self.Phi1.T)
        frame = np.vstack([compl_d.basis, self.D.basis])
        coords = field.matmul(images1, inverse(field, frame))
        block1 = coords[:, : compl_d.dim].T
        return block0, block1

    @classmethod
    def from_matrices(
        cls, sp: SymplecticSpace, c: Subspace, d: Subspace, phi0, sources1, values1
    ) -> "SymplecticFZip":
        """phi0 as a full matrix on M^(p); phi1 given by its values (columns) on a basis of C^(p)."""

        field = sp.field
        phi1 = _canonical_phi1(sp, c, d, field.asarray(sources1), field.asarray(values1))
        return cls._build(sp, c, d, field.asarray(phi0), phi1)

    @classmethod
    def from_phi0(
        cls, sp: SymplecticSpace, phi0, c: Optional[Subspace] = None, d: Optional[Subspace] = None
    ) -> "SymplecticFZip":
        """The zip determined by phi0 alone; phi1 is forced by the duality condition."""

        field = sp.field
        phi0 = field.asarray(phi0)
        if c is None:
            c = frobenius_twist(kernel(MatrixF(field, phi0)), -1)
        if d is None:
            d = image(MatrixF(field, phi0))
        return cls._build(sp, c, d, phi0, dual_phi1(sp, c, d, phi0))

    # ------------------------------------------------------------------
    # Zip operators
    # ------------------------------------------------------------------
    def tau_minus(self, u: Subspace) -> Subspace:
        """phi0 applied to (U + C)/C."""

        field = self.field
        return Subspace.span(field, field.matmul(field.frob(u.basis), self.Phi0.T), self.sp.dim)

    def tau_plus(self, u: Subspace) -> Subspace:
        """Preimage in M of phi1((U n C)^(p)); always contains D."""

        field = self.field
        inner = u & self.C
        images = field.matmul(field.frob(inner.basis), self.Phi1.T)
        return Subspace.span(field, np.vstack([self.D.basis, images]), self.sp.dim)

    # ------------------------------------------------------------------
    # Symmetries
    # ------------------------------------------------------------------
    def transform(self, h) -> "SymplecticFZip":
        """h . z = (hC, hD, h phi0 F(h)^-1, h phi1 F(h)^-1)."""

        sp, field = self.sp, self.field
        h = field.asarray(h)
        if not sp.is_symplectic(h):
            raise NotSymplectic("zips are transported by symplectic matrices only")
        frob_inv = inverse(field, field.frob(h))
        c, d = transform(h, self.C), transform(h, self.D)
        phi0 = field.matmul(field.matmul(h, self.Phi0), frob_inv)
        raw1 = field.matmul(field.matmul(h, self.Phi1), frob_inv)
        sources = frobenius_twist(c).basis.T
        phi1 = _canonical_phi1(sp, c, d, sources, field.matmul(raw1, sources))
        return SymplecticFZip._build(sp, c, d, phi0, phi1)

    def standardize(self) -> Tuple["SymplecticFZip", np.ndarray]:
        """Transport to the standard Gram matrix; returns the zip and the frame B (x = B x')."""

        sp, field = self.sp, self.field
        frame = symplectic_basis_complete(Subspace.zero(field, sp.dim), sp).entries
        if sp.is_standard:
            return self, frame
        target = standard_symplectic_space(field, sp.g)
        back = inverse(field, frame)
        twisted = field.frob(frame)
        c, d = transform(back, self.C), transform(back, self.D)
        phi0 = field.matmul(field.matmul(back, self.Phi0), twisted)
        raw1 = field.matmul(field.matmul(back, self.Phi1), twisted)
        sources = frobenius_twist(c).basis.T
        phi1 = _canonical_phi1(target, c, d, sources, field.matmul(raw1, sources))
        return SymplecticFZip._build(target, c, d, phi0, phi1), frame


def dual_phi1(sp: SymplecticSpace, c: Subspace, d: Subspace, phi0) -> np.ndarray:
    """Solve <phi0(x), phi1(y)> = <x, y>^p for phi1 on C^(p), modulo D."""

    field = sp.field
    phi0 = np.asarray(phi0, dtype=np.int64)
    system = field.matmul(phi0.T, sp.gram)
    twisted_gram = field.frob(sp.gram)
    sources = frobenius_twist(c).basis
    values = []
    for y in sources:
        rhs = field.matmul(twisted_gram, y[:, None])[:, 0]
        w = solve(field, system, rhs)
        if w is None:
            raise InvalidZip(["duality: phi0 admits no dual phi1"])
        values.append(w)
    values_arr = np.stack(values).T if values else np.zeros((sp.dim, 0), dtype=np.int64)
    return _canonical_phi1(sp, c, d, sources.T, values_arr)


def validate(z: SymplecticFZip) -> List[str]:
    """Every violated invariant, as messages; an empty list means the zip is valid."""

    violations: List[str] = []
    sp, field = z.sp, z.field
    n = sp.dim
    if z.C.ambient_dim != n or z.D.ambient_dim != n:
        return ["C and D must live in M"]
    if z.Phi0.shape != (n, n) or z.Phi1.shape != (n, n):
        return [f"phi matrices must be {n}x{n}"]
    if not sp.is_lagrangian(z.C):
        violations.append("C not Lagrangian")
    if not sp.is_lagrangian(z.D):
        violations.append("D not Lagrangian")
    twisted = frobenius_twist(z.C)
    if twisted.dim and np.any(field.matmul(z.Phi0, twisted.basis.T)):
        violations.append("phi0 does not vanish on C^(p)")
    if image(MatrixF(field, z.Phi0)) != z.D or twisted.dim + z.D.dim != n:
        violations.append("phi0 not an isomorphism (M/C)^(p) -> D")
    images1 = field.matmul(twisted.basis, z.Phi1.T)
    if Subspace.span(field, np.vstack([z.D.basis, images1]), n).dim != n or twisted.dim + z.D.dim != n:
        violations.append("phi1 not an isomorphism C^(p) -> M/D")
    if twisted.dim:
        lhs = field.matmul(field.matmul(field.matmul(z.Phi0.T, sp.gram), z.Phi1), twisted.basis.T)
        rhs = field.matmul(field.frob(sp.gram), twisted.basis.T)
        if not np.array_equal(lhs, rhs):
            violations.append("duality: <phi0(m), phi1(c)> != <m, c>^p")
    return violations


def zip_operators(z: SymplecticFZip) -> Callable[[Subspace], Tuple[Subspace, Subspace]]:
    return lambda u: (z.tau_minus(u), z.tau_plus(u))


# ----------------------------------------------------------------------
# Classification
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class CanonicalFiltration:
    members: Tuple[Subspace, ...]
    vdims: Tuple[int, ...]

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(member.dim for member in self.members)


def canonical_filtration(z: SymplecticFZip) -> CanonicalFiltration:
    """Close {0, M} under tau_-, tau_+ and perp; the result must be a chain.

    Sums and intersections of members of a chain are members, so the
    closure under them is implied once total order is checked.
    """

    sp = z.sp
    n = sp.dim
    start = [Subspace.zero(z.field, n), Subspace.full(z.field, n)]
    found = set(start)
    pending = list(start)
    while pending:
        u = pending.pop()
        for v in (z.tau_minus(u), z.tau_plus(u), perp(u, sp)):
            if v not in found:
                found.add(v)
                pending.append(v)
    chain = sorted(found, key=lambda u: u.dim)
    for smaller, larger in zip(chain, chain[1:]):
        if smaller.dim == larger.dim or not smaller <= larger:
            raise NotTotallyOrdered(
                f"closure contains incomparable subspaces of dimensions {smaller.dim} and {larger.dim}"
            )
    vdims = tuple(z.tau_minus(member).dim for member in chain)
    for j in range(1, len(chain)):
        step = vdims[j] - vdims[j - 1]
        width = chain[j].dim - chain[j - 1].dim
        if step not in (0, width):
            raise SlopeViolation(f"v jumps by {step} across a step of width {width}")
    logger.debug("canonical filtration dims %s, v %s", [u.dim for u in chain], vdims)
    return CanonicalFiltration(tuple(chain), vdims)


def elementary_sequence(z: SymplecticFZip, filtration: Optional[CanonicalFiltration] = None) -> Tuple[int, ...]:
    """phi(0..g) interpolated linearly along the canonical filtration."""

    filtration = filtration or canonical_filtration(z)
    dims, vdims = filtration.dims, filtration.vdims
    phi = []
    for i in range(z.g + 1):
        j = next(j for j in range(1, len(dims)) if dims[j - 1] <= i <= dims[j])
        slope = (vdims[j] - vdims[j - 1]) // (dims[j] - dims[j - 1])
        phi.append(vdims[j - 1] + slope * (i - dims[j - 1]))
    return tuple(phi)


def eo_type(z: SymplecticFZip) -> EOType:
    phi = elementary_sequence(z)
    return EOType(tuple(phi[i] - phi[i - 1] for i in range(1, z.g + 1)))


def stratum_dim(eo: EOType) -> int:
    g = eo.g
    return sum(bit * (g + 1 - i) for i, bit in enumerate(eo.bits, start=1))


def a_number(z: SymplecticFZip) -> int:
    return (z.C & z.D).dim


def p_rank(z: SymplecticFZip) -> int:
    """Dimension of the stable image of iterated tau_-."""

    current = Subspace.full(z.field, z.sp.dim)
    for _ in range(z.sp.dim):
        current = z.tau_minus(current)
    return current.dim


# ----------------------------------------------------------------------
# Representatives
# ----------------------------------------------------------------------
def standard_zip(eo: EOType, field: FiniteField) -> SymplecticFZip:
    """phi0(e_i) = e_{psi(i)} where the final sequence psi jumps at i, else 0.

    C is spanned by the e_i where psi does not jump and D = span(e_1..e_g);
    the chain span(e_1..e_i) is stable under tau_-, tau_+ and perp.
    """

    g = eo.g
    sp = standard_symplectic_space(field, g)
    n = sp.dim
    psi = final_sequence(eo)
    phi0 = np.zeros((n, n), dtype=np.int64)
    flat = []
    for i in range(1, n + 1):
        if psi[i] == psi[i - 1] + 1:
            phi0[psi[i] - 1, i - 1] = 1
        else:
            flat.append(i)
    c = Subspace.coordinate(field, n, flat)
    d = Subspace.coordinate(field, n, range(1, g + 1))
    return SymplecticFZip.from_phi0(sp, phi0, c, d)


def random_zip(eo: EOType, field: FiniteField, seed: int) -> SymplecticFZip:
    z = standard_zip(eo, field)
    rng = random.Random(seed)
    return z.transform(random_symplectic(z.sp, rng))


def _invertible_matrices(field: FiniteField, g: int) -> np.ndarray:
    entries = np.array(list(itertools.product(range(field.order), repeat=g * g)), dtype=np.int64)
    matrices = entries.reshape(-1, g, g)
    return matrices[field.det(matrices) != 0]


def all_zips(sp: SymplecticSpace) -> List[SymplecticFZip]:
    """Every valid zip on a standard space: C, D Lagrangian and phi0 any isomorphism (M/C)^(p) -> D."""

    field = sp.field
    blocks = _invertible_matrices(field, sp.g)
    zips = []
    for c in lagrangians(sp):
        sources = field.frob(c.complement().basis).T
        for d in lagrangians(sp):
            for block in blocks:
                phi0 = _canonical_phi0(sp, c, sources, field.matmul(d.basis.T, block))
                zips.append(SymplecticFZip._build(sp, c, d, phi0, dual_phi1(sp, c, d, phi0)))
    logger.info("enumerated %d zips over %r with g=%d", len(zips), field, sp.g)
    return zips


def isomorphic_bruteforce(z1: SymplecticFZip, z2: SymplecticFZip) -> bool:
    """Search Sp_{2g}(F_q) for h with h . z1 = z2."""

    if z1.g > ORACLE_MAX_G or z1.field.order > ORACLE_MAX_Q:
        raise ScaleTooLarge(f"brute-force isomorphism needs g <= {ORACLE_MAX_G} and q <= {ORACLE_MAX_Q}")
    if z1.field != z2.field or z1.g != z2.g:
        return False
    a, _ = z1.standardize()
    b, _ = z2.standardize()
    field = a.field
    group = symplectic_group(a.sp)
    lhs = field.matmul(group, a.Phi0)
    rhs = field.matmul(b.Phi0, field.frob(group))
    for index in np.nonzero(np.all(lhs == rhs, axis=(1, 2)))[0]:
        if a.transform(group[index]) == b:
            return True
    return False
