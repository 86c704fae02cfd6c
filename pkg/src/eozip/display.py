from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .algebra.linalg import MatrixF, Subspace, image
from .algebra.symplectic import SymplecticSpace, standard_gram
from .errors import InvalidDisplay, InvalidTriple
from .fzip import SymplecticFZip, validate
from .witt import WittRing

__all__ = [
    "SplitDisplay",
    "GroupTriple",
    "check_axioms",
    "duality_check",
    "display_to_triple",
    "triple_to_display",
    "display_mod_p_to_fzip",
    "random_ring_symplectic",
    "random_triple",
    "reduce_display",
    "reduce_triple",
    "residue_space",
    "ring_symplectic",
    "standard_ring_gram",
]

logger = logging.getLogger(__name__)


def _arrays_equal(a, b) -> bool:
    return np.shape(a) == np.shape(b) and np.array_equal(a, b)


@dataclass(frozen=True, eq=False)
class SplitDisplay:
    """(S, T, F, V^-1) on the free module W_n^{2g} with a symplectic Gram matrix.

    S and T are (2g, g) column bases. F(x) = F_lin sigma(x). Vinv holds
    the values of V^-1 on the generators sigma(s_1..s_g) and [p sigma(t_1)]..[p sigma(t_g)]
    of Q^sigma, as the columns of a (2g, 2g) matrix.
    """

    ring: WittRing
    gram: np.ndarray
    S: np.ndarray
    T: np.ndarray
    F_lin: np.ndarray
    Vinv: np.ndarray

    @property
    def g(self) -> int:
        return self.S.shape[1]

    @property
    def basis(self) -> np.ndarray:
        return np.concatenate([self.S, self.T], axis=1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SplitDisplay):
            return NotImplemented
        return self.ring == other.ring and all(
            _arrays_equal(getattr(self, name), getattr(other, name))
            for name in ("gram", "S", "T", "F_lin", "Vinv")
        )


@dataclass(frozen=True, eq=False)
class GroupTriple:
    """(S, T, gmat): a Lagrangian splitting and a form-preserving matrix over W_n."""

    ring: WittRing
    gram: np.ndarray
    S: np.ndarray
    T: np.ndarray
    gmat: np.ndarray

    def __post_init__(self) -> None:
        problems = _splitting_problems(self.ring, self.gram, self.S, self.T)
        if self.gmat.shape != self.gram.shape:
            problems.append(f"gmat has shape {self.gmat.shape[:2]}, expected {self.gram.shape[:2]}")
        elif not ring_symplectic(self.ring, self.gram, self.gmat):
            problems.append("gmat does not preserve the symplectic form")
        if problems:
            raise InvalidTriple("; ".join(problems))

    @property
    def g(self) -> int:
        return self.S.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupTriple):
            return NotImplemented
        return self.ring == other.ring and all(
            _arrays_equal(getattr(self, name), getattr(other, name)) for name in ("gram", "S", "T", "gmat")
        )


# ----------------------------------------------------------------------
# Bilinear algebra over W_n
# ----------------------------------------------------------------------
def _pairing(ring: WittRing, gram, x, y) -> np.ndarray:
    """x^T G y for column blocks x, y."""

    return ring.matmul(ring.matmul(ring.transpose(x), gram), y)


def ring_symplectic(ring: WittRing, gram, h) -> bool:
    return _arrays_equal(_pairing(ring, gram, h, h), np.asarray(gram) % ring.characteristic)


def _splitting_problems(ring: WittRing, gram, s, t) -> List[str]:
    gram = np.asarray(gram)
    n = gram.shape[0]
    if gram.shape != (n, n, ring.k) or n % 2:
        return [f"Gram matrix must have shape (2g, 2g, {ring.k})"]
    g = n // 2
    if np.shape(s) != (n, g, ring.k) or np.shape(t) != (n, g, ring.k):
        return [f"S and T must be given by {g} columns each"]
    problems = []
    if np.any(gram[np.arange(n), np.arange(n)]) or np.any(ring.add(gram, ring.transpose(gram))):
        problems.append("Gram matrix is not alternating")
    if not ring.is_invertible(gram):
        problems.append("Gram matrix is not unimodular")
    if not _arrays_equal(ring.sigma(gram), gram % ring.characteristic):
        problems.append("Gram matrix is not fixed by sigma")
    if np.any(_pairing(ring, gram, s, s)):
        problems.append("S not totally isotropic")
    if np.any(_pairing(ring, gram, t, t)):
        problems.append("T not totally isotropic")
    if not ring.is_invertible(np.concatenate([s, t], axis=1)):
        problems.append("S + T is not a direct sum decomposition of M")
    return problems


# ----------------------------------------------------------------------
# Axioms
# ----------------------------------------------------------------------
def check_axioms(d: SplitDisplay) -> List[str]:
    """Violations of the splitting conditions and of (a), (b), (c); empty when valid."""

    ring = d.ring
    problems = _splitting_problems(ring, d.gram, d.S, d.T)
    if problems:
        return problems
    n, g = d.gram.shape[0], d.g
    if d.F_lin.shape != (n, n, ring.k) or d.Vinv.shape != (n, n, ring.k):
        return [f"F and V^-1 must be given by ({n}, {n}) matrices"]
    vinv_s, vinv_t = d.Vinv[:, :g], d.Vinv[:, g:]
    if not ring.is_invertible(d.Vinv):
        problems.append("(a) V^-1 is not surjective")
    if not _arrays_equal(ring.matmul(d.F_lin, ring.sigma(d.S)), ring.scale(vinv_s, ring.p)):
        problems.append("(b) F(s) != p V^-1(s) on S")
    if not _arrays_equal(ring.matmul(d.F_lin, ring.sigma(d.T)), vinv_t):
        problems.append("(b) V^-1(p t) != F(t) on T")
    generators = np.concatenate([d.S, ring.scale(d.T, ring.p)], axis=1)
    lhs = ring.tau(_pairing(ring, d.gram, d.Vinv, d.Vinv))
    if not _arrays_equal(lhs, _pairing(ring, d.gram, generators, generators)):
        problems.append("(c) tau<V^-1 y, V^-1 y'> != <y, y'> on generators of Q")
    return problems


def duality_check(d: SplitDisplay) -> List[str]:
    """The derived identities <F x, F x'> = p sigma<x, x'> and <V^-1 y, F x> = sigma<y, x>."""

    ring = d.ring
    violations = []
    if not _arrays_equal(_pairing(ring, d.gram, d.F_lin, d.F_lin), ring.scale(ring.sigma(d.gram), ring.p)):
        violations.append("<F x, F x'> != p sigma(<x, x'>)")
    generators = np.concatenate([d.S, ring.scale(d.T, ring.p)], axis=1)
    mixed = ring.matmul(ring.matmul(ring.transpose(d.Vinv), d.gram), d.F_lin)
    expected = ring.sigma(ring.matmul(ring.transpose(generators), d.gram))
    if not _arrays_equal(mixed, expected):
        violations.append("<V^-1 y, F x> != sigma(<y, x>)")
    return violations


# ----------------------------------------------------------------------
# The bijection with group triples
# ----------------------------------------------------------------------
def display_to_triple(d: SplitDisplay) -> GroupTriple:
    """gmat linearises s + t -> V^-1(s) + F(t) through M^sigma = M."""

    problems = check_axioms(d) + duality_check(d)
    if problems:
        raise InvalidDisplay(problems)
    ring, g = d.ring, d.g
    images = np.concatenate([d.Vinv[:, :g], ring.matmul(d.F_lin, ring.sigma(d.T))], axis=1)
    gmat = ring.matmul(images, ring.inverse_matrix(ring.sigma(d.basis)))
    try:
        return GroupTriple(ring, d.gram, d.S, d.T, gmat)
    except InvalidTriple as exc:
        raise InvalidDisplay([str(exc)]) from exc


def triple_to_display(t: GroupTriple) -> SplitDisplay:
    """F(s) = p gmat(s), F(t) = gmat(t), V^-1(s) = gmat(s), V^-1(p t) = gmat(t)."""

    ring = t.ring
    twisted = ring.sigma(np.concatenate([t.S, t.T], axis=1))
    g = t.g
    scaled = np.concatenate([ring.scale(twisted[:, :g], ring.p), twisted[:, g:]], axis=1)
    f_lin = ring.matmul(ring.matmul(t.gmat, scaled), ring.inverse_matrix(twisted))
    vinv = ring.matmul(t.gmat, twisted)
    return SplitDisplay(ring, t.gram, t.S, t.T, f_lin, vinv)


# ----------------------------------------------------------------------
# Constructors and truncation
# ----------------------------------------------------------------------
def standard_ring_gram(ring: WittRing, g: int) -> np.ndarray:
    return ring.from_integers(standard_gram(g))


def random_ring_symplectic(ring: WittRing, gram, rng: random.Random, steps: int) -> np.ndarray:
    """Product of transvections x -> x + a <x, v> v."""

    n = gram.shape[0]
    h = ring.eye(n)
    for _ in range(steps):
        v = np.stack([ring.random_element(rng) for _ in range(n)])
        a = ring.random_element(rng)
        gv = ring.matmul(gram, v[:, None])[:, 0]
        outer = ring.mul(ring.mul(v[:, None], gv[None, :]), a)
        h = ring.matmul(ring.add(ring.eye(n), outer), h)
    return h


def random_triple(ring: WittRing, g: int, rng: random.Random, steps: Optional[int] = None) -> GroupTriple:
    """S, T from the columns of one random symplectic matrix, gmat another."""

    gram = standard_ring_gram(ring, g)
    steps = steps if steps is not None else 6 * g
    frame = random_ring_symplectic(ring, gram, rng, steps)
    s = ring.matmul(frame, ring.eye(2 * g)[:, :g])
    t = ring.matmul(frame, ring.eye(2 * g)[:, g:])
    gmat = random_ring_symplectic(ring, gram, rng, steps)
    return GroupTriple(ring, gram, s, t, gmat)


def reduce_display(d: SplitDisplay, n: int) -> SplitDisplay:
    target = d.ring.truncate(n)
    r = d.ring.reduce_to
    return SplitDisplay(target, r(d.gram, target), r(d.S, target), r(d.T, target), r(d.F_lin, target), r(d.Vinv, target))


def reduce_triple(t: GroupTriple, n: int) -> GroupTriple:
    target = t.ring.truncate(n)
    r = t.ring.reduce_to
    return GroupTriple(target, r(t.gram, target), r(t.S, target), r(t.T, target), r(t.gmat, target))


# ----------------------------------------------------------------------
# Reduction mod p
# ----------------------------------------------------------------------
def residue_space(ring: WittRing, gram) -> SymplecticSpace:
    return SymplecticSpace(ring.residue_field, ring.to_residue(gram))


def display_mod_p_to_fzip(d: SplitDisplay) -> SymplecticFZip:
    """C = S mod p, phi0 = F mod p, phi1 = V^-1 on S mod p taken modulo D = F(T) mod p."""

    problems = check_axioms(d)
    if problems:
        raise InvalidDisplay(problems)
    ring = d.ring
    field = ring.residue_field
    sp = residue_space(ring, d.gram)
    s_bar = ring.to_residue(d.S)
    phi0 = ring.to_residue(d.F_lin)
    c = Subspace.span(field, s_bar.T, sp.dim)
    dspace = image(MatrixF(field, phi0))
    z = SymplecticFZip.from_matrices(sp, c, dspace, phi0, field.frob(s_bar), ring.to_residue(d.Vinv[:, : d.g]))
    violations = validate(z)
    if violations:
        raise InvalidDisplay(violations)
    logger.debug("reduced display over %r to a zip with C=%r, D=%r", ring, c, dspace)
    return z
