from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import List, Optional, Tuple

import numpy as np

from ..constants import MAX_GROUP_ORDER
from ..errors import DimensionMismatch, NotIsotropic, NotSymplectic, ScaleTooLarge
from .field import FiniteField
from .linalg import (
    MatrixF,
    Subspace,
    grassmannian,
    intersect,
    inverse,
    kernel_array,
    rref_array,
    solve,
)

__all__ = [
    "SymplecticSpace",
    "standard_gram",
    "standard_symplectic_space",
    "perp",
    "symplectic_basis_complete",
    "lagrangian_complement",
    "transvection",
    "random_symplectic",
    "symplectic_group",
    "symplectic_group_order",
    "lagrangians",
    "unipotent_radical",
]

logger = logging.getLogger(__name__)


def standard_gram(g: int) -> np.ndarray:
    """<e_i, e_{2g+1-i}> = 1 for i <= g and -1 for i > g, as integers."""

    n = 2 * g
    gram = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        gram[i, n - 1 - i] = 1 if i < g else -1
    return gram


@dataclass(frozen=True, eq=False)
class SymplecticSpace:
    field: FiniteField
    gram: np.ndarray

    def __post_init__(self) -> None:
        gram = self.gram
        n = gram.shape[0]
        if gram.shape != (n, n) or n % 2:
            raise DimensionMismatch(f"a symplectic Gram matrix must be square of even size, got {gram.shape}")
        if np.any(np.diag(gram)):
            raise NotSymplectic("Gram matrix has a nonzero diagonal entry (form not alternating)")
        if np.any(self.field.add(gram, gram.T)):
            raise NotSymplectic("Gram matrix is not skew")
        if len(rref_array(self.field, gram)[1]) != n:
            raise NotSymplectic("Gram matrix is degenerate")

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @property
    def g(self) -> int:
        return self.dim // 2

    @cached_property
    def is_standard(self) -> bool:
        return np.array_equal(self.gram, standard_gram(self.g) % self.field.p)

    @cached_property
    def is_frobenius_stable(self) -> bool:
        return np.array_equal(self.field.frob(self.gram), self.gram)

    def pair(self, x, y) -> np.ndarray:
        """Matrix of pairings <x_i, y_j> for row vectors x_i, y_j."""

        x = np.atleast_2d(np.asarray(x, dtype=np.int64))
        y = np.atleast_2d(np.asarray(y, dtype=np.int64))
        return self.field.matmul(self.field.matmul(x, self.gram), y.T)

    def is_isotropic(self, u: Subspace) -> bool:
        return u.dim == 0 or not np.any(self.pair(u.basis, u.basis))

    def is_lagrangian(self, u: Subspace) -> bool:
        return u.dim == self.g and self.is_isotropic(u)

    def is_symplectic(self, h) -> bool:
        h = np.asarray(h, dtype=np.int64)
        if h.shape[-2:] != (self.dim, self.dim):
            return False
        field = self.field
        preserved = field.matmul(field.matmul(np.swapaxes(h, -1, -2), self.gram), h)
        return bool(np.all(preserved == self.gram))

    def inverse_of(self, h) -> np.ndarray:
        """Inverse of (a batch of) symplectic matrices: G^-1 h^T G."""

        field = self.field
        return field.matmul(field.matmul(self._gram_inverse, np.swapaxes(h, -1, -2)), self.gram)

    @cached_property
    def _gram_inverse(self) -> np.ndarray:
        return inverse(self.field, self.gram)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymplecticSpace):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.gram, other.gram)

    def __hash__(self) -> int:
        return hash((self.field, self.gram.tobytes()))


def standard_symplectic_space(field: FiniteField, g: int) -> SymplecticSpace:
    return SymplecticSpace(field, standard_gram(g) % field.p)


def perp(u: Subspace, sp: SymplecticSpace) -> Subspace:
    if u.ambient_dim != sp.dim or u.field != sp.field:
        raise DimensionMismatch(f"subspace of dimension {u.ambient_dim} in a symplectic space of dimension {sp.dim}")
    if not u.dim:
        return Subspace.full(sp.field, sp.dim)
    equations = sp.field.matmul(u.basis, sp.gram)
    return Subspace.span(sp.field, kernel_array(sp.field, equations), sp.dim)


def symplectic_basis_complete(u: Subspace, sp: SymplecticSpace) -> MatrixF:
    """Columns b_1..b_2g with <b_i, b_{2g+1-i}> = 1 (i <= g), other pairings zero.

    The first dim(u) columns are the echelon basis of u. Partners of u are
    solved for directly; the remaining hyperbolic pairs are taken greedily
    from the orthogonal complement, first echelon row and first partner.
    """

    if not sp.is_isotropic(u):
        raise NotIsotropic("cannot complete a non-isotropic subspace to a symplectic basis")
    field, n, g = sp.field, sp.dim, sp.g
    basis = np.zeros((n, n), dtype=np.int64)
    m = u.dim
    partners: List[np.ndarray] = []
    for i in range(m):
        basis[:, i] = u.basis[i]
        equations = [field.matmul(u.basis, sp.gram)]
        rhs = np.zeros(m + len(partners), dtype=np.int64)
        rhs[i] = 1
        if partners:
            equations.append(field.matmul(np.stack(partners), sp.gram))
        partner = solve(field, np.vstack(equations), rhs)
        if partner is None:  # pragma: no cover - u is independent and the form perfect
            raise ArithmeticError("no symplectic partner found")
        partners.append(partner)
        basis[:, n - 1 - i] = partner
    placed = [basis[:, i] for i in range(m)] + partners
    rest = perp(Subspace.span(field, np.stack(placed), n), sp) if placed else Subspace.full(field, n)
    for t in range(m, g):
        a = rest.basis[0]
        pairings = sp.pair(a, rest.basis)[0]
        j = int(np.nonzero(pairings)[0][0])
        partner = field.mul(rest.basis[j], field.inv(pairings[j]))
        basis[:, t] = a
        basis[:, n - 1 - t] = partner
        rest = intersect(rest, perp(Subspace.span(field, np.stack([a, partner]), n), sp))
    result = field.matmul(field.matmul(basis.T, sp.gram), basis)
    if not np.array_equal(result, standard_gram(g) % field.p):  # pragma: no cover
        raise ArithmeticError("symplectic basis completion failed the Gram check")
    return MatrixF(field, basis)


def lagrangian_complement(lagrangian: Subspace, sp: SymplecticSpace) -> Subspace:
    """A Lagrangian complement of a Lagrangian subspace."""

    if not sp.is_lagrangian(lagrangian):
        raise NotIsotropic("expected a Lagrangian subspace")
    basis = symplectic_basis_complete(lagrangian, sp).entries
    return Subspace.span(sp.field, basis[:, sp.g :].T, sp.dim)


# ----------------------------------------------------------------------
# The group Sp(M)
# ----------------------------------------------------------------------
def transvection(sp: SymplecticSpace, v, a: int) -> np.ndarray:
    """x -> x + a <x, v> v."""

    field = sp.field
    v = np.asarray(v, dtype=np.int64)
    gv = field.matmul(sp.gram, v[:, None])[:, 0]
    outer = field.mul(field.mul(v[:, None], gv[None, :]), a)
    return field.add(np.eye(sp.dim, dtype=np.int64), outer)


def random_symplectic(sp: SymplecticSpace, rng: random.Random, steps: Optional[int] = None) -> np.ndarray:
    """Seeded product of random transvections."""

    field = sp.field
    q = field.order
    steps = steps if steps is not None else 4 * sp.dim
    h = np.eye(sp.dim, dtype=np.int64)
    for _ in range(steps):
        v = np.array([rng.randrange(q) for _ in range(sp.dim)], dtype=np.int64)
        if not v.any():
            continue
        h = field.matmul(transvection(sp, v, rng.randrange(1, q)), h)
    return h


def symplectic_group_order(q: int, g: int) -> int:
    order = q ** (g * g)
    for i in range(1, g + 1):
        order *= q ** (2 * i) - 1
    return order


def _generating_vectors(g: int) -> List[np.ndarray]:
    n = 2 * g
    vectors = []
    for i in range(n):
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        vectors.append(v)
    for i, j in itertools.combinations(range(n), 2):
        v = np.zeros(n, dtype=np.int64)
        v[i] = v[j] = 1
        vectors.append(v)
    return vectors


@lru_cache(maxsize=8)
def _standard_group(field: FiniteField, g: int) -> np.ndarray:
    expected = symplectic_group_order(field.order, g)
    if expected > MAX_GROUP_ORDER:
        raise ScaleTooLarge(f"|Sp_{2 * g}(F_{field.order})| = {expected} exceeds {MAX_GROUP_ORDER}")
    sp = standard_symplectic_space(field, g)
    n = sp.dim
    generators = np.stack(
        [transvection(sp, v, a) for v in _generating_vectors(g) for a in field.nonzero_elements()]
    )
    identity = np.eye(n, dtype=np.int64)
    seen = {identity.tobytes()}
    elements = [identity]
    frontier = identity[None]
    while len(frontier):
        products = field.matmul(frontier[:, None], generators[None]).reshape(-1, n * n)
        products = np.unique(products, axis=0).reshape(-1, n, n)
        fresh = []
        for matrix in products:
            key = matrix.tobytes()
            if key not in seen:
                seen.add(key)
                fresh.append(matrix)
        elements.extend(fresh)
        frontier = np.stack(fresh) if fresh else np.zeros((0, n, n), dtype=np.int64)
        logger.debug("Sp_%d(%r) closure: %d elements", n, field, len(elements))
    group = np.stack(elements)
    if len(group) != expected:  # pragma: no cover - transvections generate Sp
        raise ArithmeticError(f"transvection closure has {len(group)} elements, expected {expected}")
    logger.info("enumerated Sp_%d(%r): %d elements", n, field, len(group))
    group.setflags(write=False)
    return group


def symplectic_group(sp: SymplecticSpace) -> np.ndarray:
    """Every element of Sp(M) over F_q, stacked into an (N, 2g, 2g) array."""

    group = _standard_group(sp.field, sp.g)
    if sp.is_standard:
        return group
    field = sp.field
    frame = symplectic_basis_complete(Subspace.zero(field, sp.dim), sp).entries
    return field.matmul(field.matmul(frame, group), inverse(field, frame))


@lru_cache(maxsize=16)
def _standard_lagrangians(field: FiniteField, g: int) -> Tuple[Subspace, ...]:
    sp = standard_symplectic_space(field, g)
    return tuple(u for u in grassmannian(field, sp.dim, g) if sp.is_isotropic(u))


def lagrangians(sp: SymplecticSpace) -> Tuple[Subspace, ...]:
    """All Lagrangian subspaces; there are prod_{i=1}^g (q^i + 1) of them."""

    if sp.is_standard:
        return _standard_lagrangians(sp.field, sp.g)
    return tuple(u for u in grassmannian(sp.field, sp.dim, sp.g) if sp.is_isotropic(u))


def unipotent_radical(lagrangian: Subspace, sp: SymplecticSpace) -> np.ndarray:
    """All u = 1 + N in Sp(M) with N(M) inside the Lagrangian and N vanishing on it.

    In a symplectic basis adapted to the Lagrangian these are the block
    matrices [[1, A S], [0, 1]] with A the antidiagonal and S symmetric.
    """

    if not sp.is_lagrangian(lagrangian):
        raise NotIsotropic("the unipotent radical is defined for Lagrangian subspaces")
    field, g, n = sp.field, sp.g, sp.dim
    frame = symplectic_basis_complete(lagrangian, sp).entries
    upper = [(i, j) for i in range(g) for j in range(i, g)]
    values = np.array(list(itertools.product(range(field.order), repeat=len(upper))), dtype=np.int64)
    symmetric = np.zeros((len(values), g, g), dtype=np.int64)
    for column, (i, j) in enumerate(upper):
        symmetric[:, i, j] = values[:, column]
        symmetric[:, j, i] = values[:, column]
    blocks = np.tile(np.eye(n, dtype=np.int64), (len(values), 1, 1))
    blocks[:, :g, g:] = symmetric[:, ::-1, :]
    return field.matmul(field.matmul(frame, blocks), inverse(field, frame))
