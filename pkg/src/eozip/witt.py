from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from .algebra.field import FieldElem, FiniteField, field_create
from .algebra.linalg import rref_array
from .constants import MAX_FIELD_DEGREE, MAX_WITT_PRECISION
from .errors import LiftFailure

__all__ = [
    "WittRing",
    "WittElem",
    "witt_ring",
    "sigma",
    "tau",
    "teichmuller",
    "reduce_mod_p",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WittRing:
    """W_n(F_{p^k}) as the Galois ring (Z/p^n)[x]/(f).

    Elements are integer arrays whose last axis (length k) holds the
    coefficients of 1, x, ..., x^{k-1} modulo p^n; matrices carry that axis
    after their row and column axes.
    """

    p: int
    k: int
    n: int
    modulus: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_WITT_PRECISION:
            raise ValueError(f"truncation level must lie in 1..{MAX_WITT_PRECISION}, got {self.n}")
        if not 1 <= self.k <= MAX_FIELD_DEGREE:
            raise ValueError(f"residue degree must lie in 1..{MAX_FIELD_DEGREE}, got {self.k}")

    @property
    def characteristic(self) -> int:
        return self.p**self.n

    @cached_property
    def residue_field(self) -> FiniteField:
        return field_create(self.p, self.k, [c % self.p for c in self.modulus])

    def __repr__(self) -> str:
        return f"W_{self.n}(F_{self.p ** self.k})"

    # ------------------------------------------------------------------
    # Structure constants
    # ------------------------------------------------------------------
    def _times_x(self, vector: np.ndarray) -> np.ndarray:
        top = vector[..., -1:]
        shifted = np.concatenate([np.zeros_like(top), vector[..., :-1]], axis=-1)
        return (shifted - top * np.asarray(self.modulus[: self.k], dtype=np.int64)) % self.characteristic

    @cached_property
    def _structure(self) -> np.ndarray:
        k = self.k
        powers = np.zeros((2 * k - 1, k), dtype=np.int64)
        powers[0, 0] = 1
        for m in range(1, 2 * k - 1):
            powers[m] = self._times_x(powers[m - 1])
        table = np.zeros((k, k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                table[i, j] = powers[i + j]
        return table

    def reduce_poly(self, coeffs: Sequence[int]) -> np.ndarray:
        """Element represented by an integer polynomial of any degree."""

        result = np.zeros(self.k, dtype=np.int64)
        power = self.one()
        for c in coeffs:
            result = (result + int(c) * power) % self.characteristic
            power = self._times_x(power)
        return result

    @cached_property
    def _sigma_matrix(self) -> np.ndarray:
        """Rows r^i for the root r of f lifting x^p."""

        x = self.reduce_poly([0, 1])
        root = self.power(x, self.p)
        derivative = [i * c for i, c in enumerate(self.modulus)][1:]
        for _ in range(self.n):
            value = self._evaluate(self.modulus, root)
            slope = self._evaluate(derivative, root)
            if not self.is_unit(slope):
                raise LiftFailure(f"modulus of {self!r} is not separable mod {self.p}")
            root = self.sub(root, self.mul(value, self.inverse(slope)))
        if np.any(self._evaluate(self.modulus, root)):
            raise LiftFailure(f"Hensel lifting of the Frobenius root failed in {self!r}")
        rows = [self.one()]
        for _ in range(1, self.k):
            rows.append(self.mul(rows[-1], root))
        matrix = np.stack(rows)
        if not np.array_equal(_matrix_power(matrix, self.k, self.characteristic), np.eye(self.k, dtype=np.int64)):
            raise LiftFailure(f"lifted Frobenius of {self!r} does not have order dividing {self.k}")
        logger.debug("sigma on %r: x -> %s", self, root.tolist())
        return matrix

    @cached_property
    def _sigma_inverse_matrix(self) -> np.ndarray:
        return _matrix_power(self._sigma_matrix, self.k - 1, self.characteristic)

    def _evaluate(self, coeffs: Sequence[int], at: np.ndarray) -> np.ndarray:
        result = np.zeros(self.k, dtype=np.int64)
        for c in reversed(list(coeffs)):
            result = (self.mul(result, at) + int(c) * self.one()) % self.characteristic
        return result

    # ------------------------------------------------------------------
    # Arithmetic on coefficient arrays
    # ------------------------------------------------------------------
    def zero(self) -> np.ndarray:
        return np.zeros(self.k, dtype=np.int64)

    def one(self) -> np.ndarray:
        unit = np.zeros(self.k, dtype=np.int64)
        unit[0] = 1
        return unit

    def scalar(self, value: int) -> np.ndarray:
        return (int(value) * self.one()) % self.characteristic

    def add(self, a, b) -> np.ndarray:
        return (np.asarray(a) + np.asarray(b)) % self.characteristic

    def sub(self, a, b) -> np.ndarray:
        return (np.asarray(a) - np.asarray(b)) % self.characteristic

    def neg(self, a) -> np.ndarray:
        return (-np.asarray(a)) % self.characteristic

    def scale(self, a, c: int) -> np.ndarray:
        return (np.asarray(a) * int(c)) % self.characteristic

    def mul(self, a, b) -> np.ndarray:
        return np.einsum("...i,...j,ijl->...l", np.asarray(a), np.asarray(b), self._structure) % self.characteristic

    def power(self, a, exponent: int) -> np.ndarray:
        result = np.broadcast_to(self.one(), np.shape(a)).copy()
        base = np.asarray(a) % self.characteristic
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def is_unit(self, a) -> bool:
        return bool(np.any(np.asarray(a) % self.p))

    def inverse(self, a) -> np.ndarray:
        a = np.asarray(a) % self.characteristic
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a.tolist()} is not a unit of {self!r}")
        residue = self.residue_field
        b = self.from_residue(residue.inv(self.to_residue(a)))
        two = self.scalar(2)
        for _ in range(self.n):
            b = self.mul(b, self.sub(two, self.mul(a, b)))
        return b

    def sigma(self, a) -> np.ndarray:
        return (np.asarray(a) @ self._sigma_matrix) % self.characteristic

    def sigma_inverse(self, a) -> np.ndarray:
        return (np.asarray(a) @ self._sigma_inverse_matrix) % self.characteristic

    def tau(self, a) -> np.ndarray:
        """Verschiebung p * sigma^-1."""

        return self.scale(self.sigma_inverse(a), self.p)

    # ------------------------------------------------------------------
    # Residue field and truncation
    # ------------------------------------------------------------------
    def to_residue(self, a) -> np.ndarray:
        """Reduction mod p, as element codes of the residue field."""

        return (np.asarray(a) % self.p) @ (self.p ** np.arange(self.k, dtype=np.int64))

    def from_residue(self, codes) -> np.ndarray:
        """Lift residue codes digit by digit (coefficients in [0, p))."""

        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // (self.p ** np.arange(self.k, dtype=np.int64))) % self.p

    def truncate(self, n: int) -> "WittRing":
        if not 1 <= n <= self.n:
            raise ValueError(f"cannot truncate {self!r} to level {n}")
        return witt_ring(self.p, self.k, n, self.modulus)

    def reduce_to(self, a, target: "WittRing") -> np.ndarray:
        if (target.p, target.k, target.modulus) != (self.p, self.k, self.modulus) or target.n > self.n:
            raise ValueError(f"{target!r} is not a truncation of {self!r}")
        return np.asarray(a) % target.characteristic

    def elements(self) -> np.ndarray:
        return np.array(list(itertools.product(range(self.characteristic), repeat=self.k)), dtype=np.int64)

    def random_element(self, rng) -> np.ndarray:
        return np.array([rng.randrange(self.characteristic) for _ in range(self.k)], dtype=np.int64)

    def element(self, coeffs) -> "WittElem":
        return WittElem(self, tuple(int(c) % self.characteristic for c in coeffs))

    # ------------------------------------------------------------------
    # Matrices
    # ------------------------------------------------------------------
    def eye(self, m: int) -> np.ndarray:
        matrix = np.zeros((m, m, self.k), dtype=np.int64)
        matrix[np.arange(m), np.arange(m), 0] = 1
        return matrix

    def from_integers(self, matrix) -> np.ndarray:
        """Embed an integer matrix via Z -> Z/p^n."""

        ints = np.asarray(matrix, dtype=np.int64) % self.characteristic
        result = np.zeros(ints.shape + (self.k,), dtype=np.int64)
        result[..., 0] = ints
        return result

    def matmul(self, a, b) -> np.ndarray:
        return np.einsum("...rmi,...mcj,ijl->...rcl", np.asarray(a), np.asarray(b), self._structure) % self.characteristic

    def transpose(self, a) -> np.ndarray:
        return np.swapaxes(np.asarray(a), -3, -2)

    def inverse_matrix(self, a) -> np.ndarray:
        """Gauss-Jordan with unit pivots."""

        a = np.asarray(a) % self.characteristic
        m = a.shape[0]
        augmented = np.concatenate([a, self.eye(m)], axis=1)
        for c in range(m):
            pivot = next((r for r in range(c, m) if self.is_unit(augmented[r, c])), None)
            if pivot is None:
                raise ZeroDivisionError(f"matrix is not invertible over {self!r}")
            if pivot != c:
                augmented[[c, pivot]] = augmented[[pivot, c]]
            augmented[c] = self.mul(augmented[c], self.inverse(augmented[c, c]))
            for r in range(m):
                if r != c and np.any(augmented[r, c]):
                    augmented[r] = self.sub(augmented[r], self.mul(augmented[r, c], augmented[c]))
        return augmented[:, m:]

    def is_invertible(self, a) -> bool:
        """A matrix over a local ring is invertible iff its reduction mod p is."""

        residue = self.to_residue(a)
        return len(rref_array(self.residue_field, residue)[1]) == np.shape(a)[0] == np.shape(a)[1]


def _matrix_power(matrix: np.ndarray, exponent: int, modulus: int) -> np.ndarray:
    result = np.eye(matrix.shape[0], dtype=np.int64)
    base = matrix % modulus
    while exponent:
        if exponent & 1:
            result = (result @ base) % modulus
        base = (base @ base) % modulus
        exponent >>= 1
    return result


@dataclass(frozen=True)
class WittElem:
    ring: WittRing
    coeffs: Tuple[int, ...]

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.int64)

    def _wrap(self, array: np.ndarray) -> "WittElem":
        return WittElem(self.ring, tuple(int(c) for c in array))

    def _other(self, other) -> Optional[np.ndarray]:
        if isinstance(other, WittElem):
            if other.ring != self.ring:
                raise ValueError(f"cannot combine elements of {self.ring!r} and {other.ring!r}")
            return other.array
        if isinstance(other, (int, np.integer)):
            return self.ring.scalar(int(other))
        return None

    def __add__(self, other):
        value = self._other(other)
        return NotImplemented if value is None else self._wrap(self.ring.add(self.array, value))

    __radd__ = __add__

    def __sub__(self, other):
        value = self._other(other)
        return NotImplemented if value is None else self._wrap(self.ring.sub(self.array, value))

    def __rsub__(self, other):
        value = self._other(other)
        return NotImplemented if value is None else self._wrap(self.ring.sub(value, self.array))

    def __mul__(self, other):
        value = self._other(other)
        return NotImplemented if value is None else self._wrap(self.ring.mul(self.array, value))

    __rmul__ = __mul__

    def __neg__(self) -> "WittElem":
        return self._wrap(self.ring.neg(self.array))

    def __pow__(self, exponent: int) -> "WittElem":
        return self._wrap(self.ring.power(self.array, exponent))

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.array)

    def inverse(self) -> "WittElem":
        return self._wrap(self.ring.inverse(self.array))

    def sigma_inverse(self) -> "WittElem":
        return self._wrap(self.ring.sigma_inverse(self.array))

    def reduce_to(self, target: WittRing) -> "WittElem":
        return WittElem(target, tuple(int(c) for c in self.ring.reduce_to(self.array, target)))


@lru_cache(maxsize=None)
def _cached_ring(p: int, k: int, n: int, modulus: Tuple[int, ...]) -> WittRing:
    return WittRing(p, k, n, modulus)


def witt_ring(p: int, k: int = 1, n: int = 2, modulus: Optional[Sequence[int]] = None) -> WittRing:
    """W_n(F_{p^k}); the modulus is the residue field's, read as integers."""

    if not 1 <= n <= MAX_WITT_PRECISION:
        raise ValueError(f"truncation level must lie in 1..{MAX_WITT_PRECISION}, got {n}")
    residue = field_create(p, k, None if modulus is None else [c % p for c in modulus])
    lifted = tuple(int(c) for c in (modulus if modulus is not None else residue.modulus))
    ring = _cached_ring(p, k, n, lifted)
    ring._sigma_matrix  # lift and verify sigma eagerly
    return ring


def sigma(a: WittElem) -> WittElem:
    return WittElem(a.ring, tuple(int(c) for c in a.ring.sigma(a.array)))


def tau(a: WittElem) -> WittElem:
    return WittElem(a.ring, tuple(int(c) for c in a.ring.tau(a.array)))


def teichmuller(r: FieldElem, ring: WittRing) -> WittElem:
    """The multiplicative lift of r: iterate a -> a^q from any lift until stable."""

    if r.field != ring.residue_field:
        raise ValueError(f"{r!r} does not lie in the residue field of {ring!r}")
    q = ring.residue_field.order
    a = ring.from_residue(r.value)
    for _ in range(ring.n):
        a = ring.power(a, q)
    if not np.array_equal(ring.power(a, q), a):
        raise LiftFailure(f"Teichmuller iteration did not stabilise for {r!r}")
    return WittElem(ring, tuple(int(c) for c in a))


def reduce_mod_p(a: WittElem) -> FieldElem:
    return FieldElem(a.ring.residue_field, int(a.ring.to_residue(a.array)))
