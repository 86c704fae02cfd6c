from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
import sympy

from ..constants import MAX_FIELD_DEGREE
from ..errors import NotPrime, ReducibleModulus

__all__ = [
    "FiniteField",
    "FieldElem",
    "field_create",
    "field_of_order",
    "frobenius",
]

logger = logging.getLogger(__name__)


def _is_irreducible(p: int, modulus: Sequence[int]) -> bool:
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(modulus)), x, modulus=p).is_irreducible


def _matpow_mod(matrix: np.ndarray, exponent: int, p: int) -> np.ndarray:
    result = np.eye(matrix.shape[0], dtype=np.int64)
    base = matrix.copy()
    while exponent:
        if exponent & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        exponent >>= 1
    return result


@dataclass(frozen=True)
class FiniteField:
    """F_{p^k} with elements encoded as integers 0..q-1.

    The code of an element is the base-p number whose digits are its
    coefficients in the polynomial basis 1, x, ..., x^{k-1}. All arithmetic
    methods act elementwise on integer arrays of codes.
    """

    p: int
    k: int
    modulus: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not sympy.isprime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.k < 1 or self.k > MAX_FIELD_DEGREE:
            raise ValueError(f"extension degree must lie in 1..{MAX_FIELD_DEGREE}, got {self.k}")
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise ValueError(f"modulus {list(self.modulus)} is not monic of degree {self.k}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise ValueError(f"modulus coefficients must lie in [0, {self.p})")
        if not _is_irreducible(self.p, self.modulus):
            raise ReducibleModulus(f"{list(self.modulus)} is reducible over F_{self.p}")

    # ------------------------------------------------------------------
    # Basic data
    # ------------------------------------------------------------------
    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def __repr__(self) -> str:
        if self.is_prime_field:
            return f"F_{self.p}"
        return f"F_{self.order}[{'+'.join(f'{c}x^{i}' for i, c in enumerate(self.modulus) if c)}]"

    @cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.k, dtype=np.int64)

    @cached_property
    def _digits(self) -> np.ndarray:
        codes = np.arange(self.order, dtype=np.int64)
        return (codes[:, None] // self._powers[None, :]) % self.p

    @cached_property
    def _times_x(self) -> np.ndarray:
        k, p = self.k, self.p
        companion = np.zeros((k, k), dtype=np.int64)
        for i in range(k - 1):
            companion[i + 1, i] = 1
        companion[:, k - 1] = [(-c) % p for c in self.modulus[:k]]
        return companion

    def _mult_matrix(self, code: int) -> np.ndarray:
        k, p = self.k, self.p
        result = np.zeros((k, k), dtype=np.int64)
        power = np.eye(k, dtype=np.int64)
        for c in self.coeffs(code):
            result = (result + int(c) * power) % p
            power = (self._times_x @ power) % p
        return result

    @cached_property
    def _primitive(self) -> int:
        q = self.order
        if q == 2:
            return 1
        cofactors = [(q - 1) // r for r in sympy.factorint(q - 1)]
        unit = np.zeros(self.k, dtype=np.int64)
        unit[0] = 1
        for candidate in range(2, q):
            matrix = self._mult_matrix(candidate)
            if all(
                not np.array_equal(_matpow_mod(matrix, e, self.p)[:, 0], unit)
                for e in cofactors
            ):
                return candidate
        raise ArithmeticError(f"no primitive element found in {self!r}")

    @cached_property
    def _exp_log(self) -> Tuple[np.ndarray, np.ndarray]:
        q = self.order
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        matrix = self._mult_matrix(self._primitive)
        vector = np.zeros(self.k, dtype=np.int64)
        vector[0] = 1
        for i in range(q - 1):
            code = int(vector @ self._powers)
            exp[i] = code
            log[code] = i
            vector = (matrix @ vector) % self.p
        logger.debug("built log tables for %r (primitive element %d)", self, self._primitive)
        return exp, log

    # ------------------------------------------------------------------
    # Element conversion
    # ------------------------------------------------------------------
    def coeffs(self, code: int) -> Tuple[int, ...]:
        code = int(code)
        return tuple((code // self.p**i) % self.p for i in range(self.k))

    def from_coeffs(self, coeffs: Iterable[int]) -> int:
        """Encode a polynomial given by low-to-high coefficients, reducing mod the modulus."""

        poly = [int(c) % self.p for c in coeffs]
        k, p = self.k, self.p
        for degree in range(len(poly) - 1, k - 1, -1):
            lead = poly[degree]
            if lead:
                for i in range(k + 1):
                    poly[degree - k + i] = (poly[degree - k + i] - lead * self.modulus[i]) % p
        poly = (poly + [0] * k)[:k]
        return sum(c * p**i for i, c in enumerate(poly))

    def element(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            return value
        return FieldElem(self, self._check_code(int(value)))

    def _check_code(self, code: int) -> int:
        if not 0 <= code < self.order:
            raise ValueError(f"{code} is not an element code of {self!r}")
        return code

    def asarray(self, values) -> np.ndarray:
        array = np.asarray(values, dtype=np.int64)
        if array.size and (array.min() < 0 or array.max() >= self.order):
            raise ValueError(f"array entries are not element codes of {self!r}")
        return array

    @property
    def generator(self) -> int:
        return self.from_coeffs([0, 1])

    def primitive_element(self) -> "FieldElem":
        return FieldElem(self, self._primitive)

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def nonzero_elements(self) -> np.ndarray:
        return np.arange(1, self.order, dtype=np.int64)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    # ------------------------------------------------------------------
    # Vectorised arithmetic
    # ------------------------------------------------------------------
    def add(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.is_prime_field:
            return (a + b) % self.p
        return ((self._digits[a] + self._digits[b]) % self.p) @ self._powers

    def sub(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.is_prime_field:
            return (a - b) % self.p
        return ((self._digits[a] - self._digits[b]) % self.p) @ self._powers

    def neg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.is_prime_field:
            return (-a) % self.p
        return ((-self._digits[a]) % self.p) @ self._powers

    def mul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if self.is_prime_field:
            return (a * b) % self.p
        exp, log = self._exp_log
        product = exp[(log[a] + log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, product)

    def inv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError(f"division by zero in {self!r}")
        if self.is_prime_field:
            if self.p < 2**16:
                return self._prime_inverse_table[a]
            return np.vectorize(lambda v: pow(int(v), -1, self.p), otypes=[np.int64])(a)
        exp, log = self._exp_log
        return exp[(-log[a]) % (self.order - 1)]

    @cached_property
    def _prime_inverse_table(self) -> np.ndarray:
        table = np.zeros(self.p, dtype=np.int64)
        for v in range(1, self.p):
            table[v] = pow(v, -1, self.p)
        return table

    def div(self, a, b) -> np.ndarray:
        return self.mul(a, self.inv(b))

    def power(self, a, exponent: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if exponent < 0:
            return self.power(self.inv(a), -exponent)
        if exponent == 0:
            return np.ones_like(a)
        if self.is_prime_field:
            return np.vectorize(lambda v: pow(int(v), exponent, self.p), otypes=[np.int64])(a)
        exp, log = self._exp_log
        result = exp[(log[a] * (exponent % (self.order - 1))) % (self.order - 1)]
        return np.where(a == 0, 0, result)

    def frob(self, a, e: int = 1) -> np.ndarray:
        """Apply x -> x^(p^e) entrywise."""

        a = np.asarray(a, dtype=np.int64)
        e %= self.k
        if e == 0:
            return a.copy()
        exp, log = self._exp_log
        result = exp[(log[a] * self.p**e) % (self.order - 1)]
        return np.where(a == 0, 0, result)

    def sum(self, a, axis: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        axis %= a.ndim
        if self.is_prime_field:
            return a.sum(axis=axis) % self.p
        return (self._digits[a].sum(axis=axis) % self.p) @ self._powers

    def matmul(self, a, b) -> np.ndarray:
        """Matrix product over the field, broadcasting leading batch axes."""

        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.is_prime_field:
            return np.matmul(a, b) % self.p
        # 1-D operands follow np.matmul: a vector is promoted, then the added axis dropped
        if a.ndim == 1:
            return self.matmul(a[None, :], b)[..., 0, :]
        if b.ndim == 1:
            return self.matmul(a, b[:, None])[..., 0]
        products = self.mul(a[..., :, :, None], b[..., None, :, :])
        return (self._digits[products].sum(axis=-3) % self.p) @ self._powers

    def det(self, a) -> np.ndarray:
        """Batched determinant by the Leibniz expansion; meant for small matrices."""

        a = np.asarray(a, dtype=np.int64)
        n = a.shape[-1]
        total = np.zeros(a.shape[:-2], dtype=np.int64)
        for perm in itertools.permutations(range(n)):
            term = np.ones(a.shape[:-2], dtype=np.int64)
            for row, col in enumerate(perm):
                term = self.mul(term, a[..., row, col])
            inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
            total = self.sub(total, term) if inversions % 2 else self.add(total, term)
        return total


@dataclass(frozen=True)
class FieldElem:
    field: FiniteField
    value: int

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _coerce(self, other) -> Optional[int]:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError(f"cannot combine elements of {self.field!r} and {other.field!r}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return None

    def _wrap(self, value) -> "FieldElem":
        return FieldElem(self.field, int(value))

    def __add__(self, other):
        value = self._coerce(other)
        return NotImplemented if value is None else self._wrap(self.field.add(self.value, value))

    __radd__ = __add__

    def __sub__(self, other):
        value = self._coerce(other)
        return NotImplemented if value is None else self._wrap(self.field.sub(self.value, value))

    def __rsub__(self, other):
        value = self._coerce(other)
        return NotImplemented if value is None else self._wrap(self.field.sub(value, self.value))

    def __mul__(self, other):
        value = self._coerce(other)
        return NotImplemented if value is None else self._wrap(self.field.mul(self.value, value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        value = self._coerce(other)
        return NotImplemented if value is None else self._wrap(self.field.div(self.value, value))

    def __neg__(self) -> "FieldElem":
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, exponent: int) -> "FieldElem":
        return self._wrap(self.field.power(self.value, exponent))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        if self.field.is_prime_field:
            return f"{self.value}"
        terms = [f"{c}*t^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


@lru_cache(maxsize=None)
def _cached_field(p: int, k: int, modulus: Tuple[int, ...]) -> FiniteField:
    return FiniteField(p, k, modulus)


def field_create(p: int, k: int = 1, modulus: Optional[Sequence[int]] = None) -> FiniteField:
    """Construct F_{p^k}.

    Without an explicit modulus the first irreducible monic polynomial in
    lexicographic order (reading coefficients from x^{k-1} down to x^0) is used.
    """

    if not sympy.isprime(p):
        raise NotPrime(f"{p} is not prime")
    if modulus is not None:
        return _cached_field(p, k, tuple(int(c) for c in modulus))
    if k < 1 or k > MAX_FIELD_DEGREE:
        raise ValueError(f"extension degree must lie in 1..{MAX_FIELD_DEGREE}, got {k}")
    for tail in itertools.product(range(p), repeat=k):
        candidate = tuple(reversed(tail)) + (1,)
        if _is_irreducible(p, candidate):
            return _cached_field(p, k, candidate)
    raise ReducibleModulus(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


def frobenius(a: FieldElem, e: int = 1) -> FieldElem:
    if e < 0:
        raise ValueError("Frobenius exponent must be non-negative")
    return FieldElem(a.field, int(a.field.frob(a.value, e)))


def field_of_order(q: int) -> FiniteField:
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise NotPrime(f"{q} is not a prime power")
    ((p, k),) = factors.items()
    return field_create(int(p), int(k))
