from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .algebra.linalg import Subspace, intersect, subspace_sum, transform
from .algebra.symplectic import SymplecticSpace, perp, symplectic_basis_complete
from .errors import AmbientMismatch
from .weyl import WeylElem, min_double_coset_rep, siegel

__all__ = [
    "CompleteFlag",
    "LagrangianFlag",
    "flag_from_basis",
    "standard_flag",
    "permuted_flag",
    "complete_lagrangian",
    "transform_flag",
    "relpos_complete",
    "relpos_lagrangian",
    "orbit_invariant_pair",
]


@dataclass(frozen=True)
class CompleteFlag:
    """F_1 < ... < F_{2g-1} with dim F_i = i and F_{2g-i} = perp(F_i)."""

    sp: SymplecticSpace
    members: Tuple[Subspace, ...]

    def __post_init__(self) -> None:
        n = self.sp.dim
        if len(self.members) != n - 1:
            raise ValueError(f"a complete flag in dimension {n} has {n - 1} members, got {len(self.members)}")
        for i, member in enumerate(self.members, start=1):
            if member.dim != i:
                raise ValueError(f"flag member {i} has dimension {member.dim}")
            if i > 1 and not self.members[i - 2] <= member:
                raise ValueError(f"flag member {i - 1} is not contained in member {i}")
            if perp(member, self.sp) != self.chain()[n - i]:
                raise ValueError(f"flag member {i} is not orthogonal to member {n - i}")

    def chain(self) -> List[Subspace]:
        """F_0 = 0, F_1, ..., F_{2g} = M."""

        field, n = self.sp.field, self.sp.dim
        return [Subspace.zero(field, n), *self.members, Subspace.full(field, n)]


@dataclass(frozen=True)
class LagrangianFlag:
    sp: SymplecticSpace
    L: Subspace

    def __post_init__(self) -> None:
        if not self.sp.is_lagrangian(self.L):
            raise ValueError("LagrangianFlag needs a totally isotropic subspace of dimension g")


def flag_from_basis(basis, sp: SymplecticSpace) -> CompleteFlag:
    """F_i = span of the first i columns of a symplectic basis."""

    basis = np.asarray(basis, dtype=np.int64)
    members = tuple(Subspace.span(sp.field, basis[:, :i].T, sp.dim) for i in range(1, sp.dim))
    return CompleteFlag(sp, members)


def standard_flag(sp: SymplecticSpace) -> CompleteFlag:
    frame = symplectic_basis_complete(Subspace.zero(sp.field, sp.dim), sp).entries
    return flag_from_basis(frame, sp)


def permuted_flag(basis, w: WeylElem, sp: SymplecticSpace) -> CompleteFlag:
    """G_j = span(b_{w(1)}, ..., b_{w(j)}) for a symplectic basis b."""

    basis = np.asarray(basis, dtype=np.int64)
    return flag_from_basis(basis[:, [w(i) - 1 for i in range(1, sp.dim + 1)]], sp)


def complete_lagrangian(flag: LagrangianFlag, rng: Optional[random.Random] = None) -> CompleteFlag:
    """Complete a Lagrangian to a symplectic flag.

    F_i is spanned by the first i rows of a basis of L (the echelon basis
    unless a random generator is given) and F_{2g-i} = perp(F_i).
    """

    sp, lagrangian = flag.sp, flag.L
    field, g = sp.field, sp.g
    rows = lagrangian.basis
    if rng is not None:
        while True:
            change = np.array([[rng.randrange(field.order) for _ in range(g)] for _ in range(g)], dtype=np.int64)
            candidate = field.matmul(change, rows)
            if Subspace.span(field, candidate, sp.dim).dim == g:
                rows = candidate
                break
    lower = [Subspace.span(field, rows[:i], sp.dim) for i in range(1, g + 1)]
    upper = [perp(lower[g - 1 - i], sp) for i in range(1, g)]
    return CompleteFlag(sp, tuple(lower + upper))


def transform_flag(h, flag: CompleteFlag) -> CompleteFlag:
    return CompleteFlag(flag.sp, tuple(transform(h, member) for member in flag.members))


def _same_ambient(a: SymplecticSpace, b: SymplecticSpace) -> None:
    if a != b:
        raise AmbientMismatch("flags live in different symplectic spaces")


def relpos_complete(f: CompleteFlag, g_flag: CompleteFlag) -> WeylElem:
    """pi(i) = the j where gr^G_j gr^F_i is nonzero, read off intersection dimensions."""

    _same_ambient(f.sp, g_flag.sp)
    n = f.sp.dim
    fc, gc = f.chain(), g_flag.chain()
    d = [[intersect(fc[i], gc[j]).dim for j in range(n + 1)] for i in range(n + 1)]
    perm = []
    for i in range(1, n + 1):
        hits = [j for j in range(1, n + 1) if d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1] == 1]
        if len(hits) != 1:  # pragma: no cover - guaranteed for complete flags
            raise ArithmeticError(f"row {i} of the intersection table has {len(hits)} jumps")
        perm.append(hits[0])
    return WeylElem(f.sp.g, tuple(perm))


def relpos_lagrangian(
    p: LagrangianFlag, q: LagrangianFlag, rng: Optional[random.Random] = None
) -> WeylElem:
    """Relative position in the Siegel double cosets W_J \\ W / W_J."""

    _same_ambient(p.sp, q.sp)
    w = relpos_complete(complete_lagrangian(p, rng), complete_lagrangian(q, rng))
    j = siegel(p.sp.g)
    return min_double_coset_rep(w, j, j)


def orbit_invariant_pair(f: CompleteFlag, g_flag: CompleteFlag) -> List[List[int]]:
    """dim(F_i + G_j) for 0 <= i, j <= 2g."""

    _same_ambient(f.sp, g_flag.sp)
    fc, gc = f.chain(), g_flag.chain()
    return [[subspace_sum(a, b).dim for b in gc] for a in fc]
