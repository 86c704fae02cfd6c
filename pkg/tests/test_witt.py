from __future__ import annotations

import random

import numpy as np
import pytest

from eozip.algebra.field import FieldElem, frobenius
from eozip.display import random_ring_symplectic, standard_ring_gram
from eozip.errors import NotPrime
from eozip.witt import reduce_mod_p, sigma, tau, teichmuller, witt_ring

SMALL_RINGS = [(2, 1, 3), (2, 2, 2), (3, 2, 2), (3, 1, 2), (2, 2, 3)]


def _pairs(ring):
    elements = ring.elements()
    return elements[:, None, :], elements[None, :, :]


@pytest.mark.parametrize(("p", "k", "n"), SMALL_RINGS)
def test_sigma_is_a_ring_automorphism(p: int, k: int, n: int) -> None:
    ring = witt_ring(p, k, n)
    a, b = _pairs(ring)
    assert np.array_equal(ring.sigma(ring.add(a, b)), ring.add(ring.sigma(a), ring.sigma(b)))
    assert np.array_equal(ring.sigma(ring.mul(a, b)), ring.mul(ring.sigma(a), ring.sigma(b)))
    elements = ring.elements()
    twisted = elements
    for _ in range(k):
        twisted = ring.sigma(twisted)
    assert np.array_equal(twisted, elements)
    assert np.array_equal(ring.sigma_inverse(ring.sigma(elements)), elements)


@pytest.mark.parametrize(("p", "k", "n"), SMALL_RINGS)
def test_sigma_lifts_the_frobenius(p: int, k: int, n: int) -> None:
    ring = witt_ring(p, k, n)
    field = ring.residue_field
    elements = ring.elements()
    assert np.array_equal(ring.to_residue(ring.sigma(elements)), field.frob(ring.to_residue(elements)))


@pytest.mark.parametrize(("p", "k", "n"), SMALL_RINGS)
def test_verschiebung(p: int, k: int, n: int) -> None:
    ring = witt_ring(p, k, n)
    elements = ring.elements()
    assert np.array_equal(ring.tau(ring.one()), ring.scalar(p))
    assert np.array_equal(ring.sigma(ring.tau(elements)), ring.scale(elements, p))
    assert np.array_equal(ring.tau(ring.sigma(elements)), ring.scale(elements, p))


def test_random_elements_of_a_larger_ring() -> None:
    ring = witt_ring(5, 2, 3)
    rng = random.Random(0)
    a = np.stack([ring.random_element(rng) for _ in range(500)])
    b = np.stack([ring.random_element(rng) for _ in range(500)])
    assert np.array_equal(ring.sigma(ring.mul(a, b)), ring.mul(ring.sigma(a), ring.sigma(b)))
    assert np.array_equal(ring.sigma(ring.sigma(a)), a)
    assert np.array_equal(ring.sigma(ring.tau(a)), ring.scale(a, 5))


def test_prime_residue_field_gives_integers_mod_p_power() -> None:
    ring = witt_ring(3, 1, 2)
    assert ring.characteristic == 9
    for a in range(9):
        for b in range(9):
            assert ring.mul(ring.scalar(a), ring.scalar(b)).tolist() == [(a * b) % 9]
    elements = ring.elements()
    assert np.array_equal(ring.sigma(elements), elements)


@pytest.mark.parametrize(("p", "k", "n"), [(2, 2, 2), (3, 2, 2), (2, 2, 3), (2, 3, 2)])
def test_teichmuller_lift(p: int, k: int, n: int) -> None:
    ring = witt_ring(p, k, n)
    field = ring.residue_field
    lifts = {int(v): teichmuller(FieldElem(field, int(v)), ring) for v in field.elements()}
    for r in field.elements():
        r_elem = FieldElem(field, int(r))
        assert reduce_mod_p(lifts[int(r)]) == r_elem
        assert sigma(lifts[int(r)]) == lifts[frobenius(r_elem).value]
        for s in field.elements():
            product = (r_elem * FieldElem(field, int(s))).value
            assert lifts[int(r)] * lifts[int(s)] == lifts[product]


def test_teichmuller_needs_the_residue_field(f3) -> None:
    with pytest.raises(ValueError):
        teichmuller(f3.element(1), witt_ring(2, 2, 2))


def test_truncation_commutes_with_sigma_and_tau() -> None:
    ring = witt_ring(2, 2, 3)
    target = ring.truncate(2)
    assert target is witt_ring(2, 2, 2)
    elements = ring.elements()
    reduced = ring.reduce_to(elements, target)
    assert np.array_equal(ring.reduce_to(ring.sigma(elements), target), target.sigma(reduced))
    assert np.array_equal(ring.reduce_to(ring.tau(elements), target), target.tau(reduced))
    with pytest.raises(ValueError):
        target.reduce_to(reduced, ring)
    with pytest.raises(ValueError):
        ring.truncate(4)


def test_inverses() -> None:
    ring = witt_ring(2, 2, 3)
    units = [a for a in ring.elements() if ring.is_unit(a)]
    assert len(units) == 64 - 16
    for a in units:
        assert np.array_equal(ring.mul(a, ring.inverse(a)), ring.one())
    with pytest.raises(ZeroDivisionError):
        ring.inverse(ring.scalar(2))


def test_element_wrapper() -> None:
    ring = witt_ring(2, 2, 2)
    x = ring.element([0, 1])
    one = ring.element([1, 0])
    assert x * x + x + 1 == ring.element([0, 0])
    assert (x * x.inverse()) == ring.element([1, 0])
    assert 1 - one == ring.element([0, 0])
    assert x**3 == ring.element([1, 0])
    assert tau(one) == ring.element([2, 0])
    assert x.sigma_inverse() == sigma(x)
    assert x.reduce_to(witt_ring(2, 2, 1)).coeffs == (0, 1)
    assert not ring.element([2, 2]).is_unit()


def test_matrix_inverse() -> None:
    ring = witt_ring(2, 2, 2)
    gram = standard_ring_gram(ring, 2)
    h = random_ring_symplectic(ring, gram, random.Random(3), 8)
    assert ring.is_invertible(h)
    assert np.array_equal(ring.matmul(h, ring.inverse_matrix(h)), ring.eye(4))
    singular = ring.scale(ring.eye(2), 2)
    assert not ring.is_invertible(singular)
    with pytest.raises(ZeroDivisionError):
        ring.inverse_matrix(singular)


def test_ring_construction_errors() -> None:
    with pytest.raises(NotPrime):
        witt_ring(4)
    with pytest.raises(ValueError):
        witt_ring(2, 1, 9)
    assert repr(witt_ring(3, 2, 2)) == "W_2(F_9)"
    assert witt_ring(3, 2, 2).residue_field.order == 9
