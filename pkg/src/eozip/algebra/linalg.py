from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatch, NotComplement
from .field import FiniteField

__all__ = [
    "MatrixF",
    "Subspace",
    "SemilinearMap",
    "rref",
    "rank",
    "kernel",
    "image",
    "subspace_sum",
    "intersect",
    "solve",
    "inverse",
    "projection",
    "transform",
    "frobenius_twist",
    "annihilator",
    "semilinear_apply",
    "grassmannian",
]


# ----------------------------------------------------------------------
# Array kernels
# ----------------------------------------------------------------------
def rref_array(field: FiniteField, matrix) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Reduced row echelon form and pivot columns; zero rows are kept at the bottom."""

    reduced = np.array(matrix, dtype=np.int64, copy=True)
    if reduced.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {reduced.shape}")
    rows, cols = reduced.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.nonzero(reduced[r:, c])[0]
        if candidates.size == 0:
            continue
        i = r + int(candidates[0])
        if i != r:
            reduced[[r, i]] = reduced[[i, r]]
        reduced[r] = field.mul(reduced[r], field.inv(reduced[r, c]))
        others = np.nonzero(reduced[:, c])[0]
        others = others[others != r]
        if others.size:
            reduced[others] = field.sub(
                reduced[others], field.mul(reduced[others, c][:, None], reduced[r][None, :])
            )
        pivots.append(c)
        r += 1
    return reduced, tuple(pivots)


def kernel_array(field: FiniteField, matrix) -> np.ndarray:
    """Rows spanning the right null space {x : matrix @ x = 0}."""

    matrix = np.asarray(matrix, dtype=np.int64)
    cols = matrix.shape[1]
    reduced, pivots = rref_array(field, matrix)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for j, c in enumerate(pivots):
            basis[row, c] = field.neg(reduced[j, f])
    return basis


def _nonpivot_units(dim: int, pivots: Sequence[int]) -> np.ndarray:
    free = [c for c in range(dim) if c not in pivots]
    units = np.zeros((len(free), dim), dtype=np.int64)
    units[np.arange(len(free)), free] = 1
    return units


# ----------------------------------------------------------------------
# Types
# ----------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class MatrixF:
    field: FiniteField
    entries: np.ndarray

    @classmethod
    def of(cls, field: FiniteField, rows) -> "MatrixF":
        entries = field.asarray(rows)
        if entries.ndim != 2:
            raise DimensionMismatch(f"a matrix needs two axes, got shape {entries.shape}")
        return cls(field, entries)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def T(self) -> "MatrixF":
        return MatrixF(self.field, self.entries.T.copy())

    def __matmul__(self, other: "MatrixF") -> "MatrixF":
        if self.field != other.field:
            raise DimensionMismatch("matrices over different fields")
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return MatrixF(self.field, self.field.matmul(self.entries, other.entries))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixF):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.field, self.entries.shape, self.entries.tobytes()))

    def tolist(self) -> List[List[int]]:
        return self.entries.tolist()


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F_q^n stored by its reduced row echelon basis."""

    field: FiniteField
    ambient_dim: int
    basis: np.ndarray
    pivots: Tuple[int, ...]

    @classmethod
    def span(cls, field: FiniteField, vectors, ambient_dim: Optional[int] = None) -> "Subspace":
        vectors = np.asarray(vectors, dtype=np.int64)
        if vectors.ndim == 1:
            vectors = vectors.reshape(1, -1) if vectors.size else vectors.reshape(0, ambient_dim or 0)
        if ambient_dim is None:
            ambient_dim = vectors.shape[1]
        elif vectors.shape[1] != ambient_dim:
            raise DimensionMismatch(f"vectors of length {vectors.shape[1]} in ambient dimension {ambient_dim}")
        if vectors.shape[0] == 0:
            return cls.zero(field, ambient_dim)
        reduced, pivots = rref_array(field, vectors)
        return cls(field, ambient_dim, reduced[: len(pivots)], pivots)

    @classmethod
    def zero(cls, field: FiniteField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64), ())

    @classmethod
    def full(cls, field: FiniteField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, np.eye(ambient_dim, dtype=np.int64), tuple(range(ambient_dim)))

    @classmethod
    def coordinate(cls, field: FiniteField, ambient_dim: int, indices: Sequence[int]) -> "Subspace":
        """Span of the unit vectors e_i (1-based indices)."""

        vectors = np.zeros((len(indices), ambient_dim), dtype=np.int64)
        for row, i in enumerate(indices):
            vectors[row, i - 1] = 1
        return cls.span(field, vectors, ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def _check(self, other: "Subspace") -> None:
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(
                f"subspaces of {self.field!r}^{self.ambient_dim} and {other.field!r}^{other.ambient_dim}"
            )

    def reduce(self, vectors) -> np.ndarray:
        """Normal form of vectors modulo this subspace (entries at pivot columns cleared)."""

        vectors = np.asarray(vectors, dtype=np.int64)
        if not self.dim:
            return vectors.copy()
        rows = vectors.reshape(-1, self.ambient_dim)
        coefficients = rows[:, list(self.pivots)]
        reduced = self.field.sub(rows, self.field.matmul(coefficients, self.basis))
        return reduced.reshape(vectors.shape)

    def contains(self, vectors) -> bool:
        return not np.any(self.reduce(vectors))

    def complement(self) -> "Subspace":
        """The canonical complement spanned by unit vectors at the non-pivot columns."""

        units = _nonpivot_units(self.ambient_dim, self.pivots)
        return Subspace(self.field, self.ambient_dim, units, tuple(c for c in range(self.ambient_dim) if c not in self.pivots))

    def coordinates(self, vectors) -> np.ndarray:
        """Coordinates of vectors lying in the subspace with respect to the echelon basis."""

        vectors = np.asarray(vectors, dtype=np.int64)
        if not self.contains(vectors):
            raise ValueError("vector does not lie in the subspace")
        return vectors[..., list(self.pivots)]

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return self.dim <= other.dim and other.contains(self.basis)

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.pivots, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self.basis.tolist()})"


@dataclass(frozen=True)
class SemilinearMap:
    """x -> matrix @ Frob^e(x) on column vectors."""

    matrix: MatrixF
    twist_power: int = 1

    def apply(self, vectors) -> np.ndarray:
        """Apply to row vectors, returning row vectors."""

        field = self.matrix.field
        twisted = field.frob(vectors, self.twist_power)
        return field.matmul(twisted, self.matrix.entries.T)


# ----------------------------------------------------------------------
# Operations
# ----------------------------------------------------------------------
def rref(m: MatrixF) -> MatrixF:
    reduced, _ = rref_array(m.field, m.entries)
    return MatrixF(m.field, reduced)


def rank(m: MatrixF) -> int:
    return len(rref_array(m.field, m.entries)[1])


def kernel(m: MatrixF) -> Subspace:
    return Subspace.span(m.field, kernel_array(m.field, m.entries), m.cols)


def image(m: MatrixF) -> Subspace:
    return Subspace.span(m.field, m.entries.T, m.rows)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    u._check(v)
    return Subspace.span(u.field, np.vstack([u.basis, v.basis]), u.ambient_dim)


def annihilator(u: Subspace) -> np.ndarray:
    """Rows a with a . x = 0 for all x in u; x lies in u iff all of them vanish on x."""

    if not u.dim:
        return np.eye(u.ambient_dim, dtype=np.int64)
    return kernel_array(u.field, u.basis)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    u._check(v)
    equations = np.vstack([annihilator(u), annihilator(v)])
    if equations.shape[0] == 0:
        return Subspace.full(u.field, u.ambient_dim)
    return Subspace.span(u.field, kernel_array(u.field, equations), u.ambient_dim)


def solve(field: FiniteField, a, b) -> Optional[np.ndarray]:
    """A particular solution x of a @ x = b (free variables zero), or None."""

    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"system with {a.shape[0]} equations and {b.shape[0]} right-hand sides")
    cols = a.shape[1]
    reduced, pivots = rref_array(field, np.hstack([a, b[:, None]]))
    if pivots and pivots[-1] == cols:
        return None
    solution = np.zeros(cols, dtype=np.int64)
    for j, c in enumerate(pivots):
        solution[c] = reduced[j, cols]
    return solution


def inverse(field: FiniteField, a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatch(f"cannot invert a matrix of shape {a.shape}")
    reduced, pivots = rref_array(field, np.hstack([a, np.eye(n, dtype=np.int64)]))
    if tuple(pivots[:n]) != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return reduced[:, n:]


def projection(onto: Subspace, along: Subspace) -> np.ndarray:
    """Matrix of the projection onto `onto` with kernel `along` (acting on columns)."""

    onto._check(along)
    if onto.dim + along.dim != onto.ambient_dim or (onto & along).dim:
        raise NotComplement("subspaces are not complementary")
    field = onto.field
    frame = np.vstack([onto.basis, along.basis]).T
    coords = inverse(field, frame)
    return field.matmul(onto.basis.T, coords[: onto.dim])


def transform(h, u: Subspace) -> Subspace:
    """Image of a subspace under the linear map h (acting on columns)."""

    h = np.asarray(h, dtype=np.int64)
    if h.shape != (u.ambient_dim, u.ambient_dim):
        raise DimensionMismatch(f"cannot apply a {h.shape} matrix in dimension {u.ambient_dim}")
    return Subspace.span(u.field, u.field.matmul(u.basis, h.T), u.ambient_dim)


def frobenius_twist(u: Subspace, e: int = 1) -> Subspace:
    """Entrywise Frobenius of a subspace; echelon form and pivots are preserved."""

    return Subspace(u.field, u.ambient_dim, u.field.frob(u.basis, e), u.pivots)


def semilinear_apply(f: SemilinearMap, u: Subspace) -> Subspace:
    if f.matrix.cols != u.ambient_dim:
        raise DimensionMismatch(f"map on dimension {f.matrix.cols} applied in dimension {u.ambient_dim}")
    return Subspace.span(u.field, f.apply(u.basis), f.matrix.rows)


def grassmannian(field: FiniteField, n: int, d: int) -> Iterator[Subspace]:
    """All d-dimensional subspaces of F_q^n, one echelon pattern at a time."""

    q = field.order
    for pivots in itertools.combinations(range(n), d):
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
        base = np.zeros((d, n), dtype=np.int64)
        base[np.arange(d), list(pivots)] = 1
        for values in itertools.product(range(q), repeat=len(free)):
            basis = base.copy()
            for (r, c), value in zip(free, values):
                basis[r, c] = value
            yield Subspace(field, n, basis, pivots)
