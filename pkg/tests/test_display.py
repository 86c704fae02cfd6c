from __future__ import annotations

import random

import numpy as np
import pytest

from eozip.algebra.field import FieldElem
from eozip.algebra.linalg import Subspace
from eozip.algebra.symplectic import lagrangian_complement
from eozip.display import (
    GroupTriple,
    SplitDisplay,
    check_axioms,
    display_mod_p_to_fzip,
    display_to_triple,
    duality_check,
    random_ring_symplectic,
    random_triple,
    reduce_display,
    reduce_triple,
    standard_ring_gram,
    triple_to_display,
)
from eozip.errors import InvalidDisplay, InvalidTriple
from eozip.fzip import eo_type, validate
from eozip.weyl import EOType
from eozip.witt import teichmuller, witt_ring
from eozip.zipmodel import orbit_class, triple_to_zippoint, zeta, zip_from_point

ROUND_TRIP_RINGS = [(2, 1, 2), (2, 2, 2), (3, 1, 3), (3, 2, 2)]


def _genus_one_display(f_entry: int) -> SplitDisplay:
    """M = (Z/4)^2 with F(e1) = 2 e2 and F(e2) = f_entry * e1."""

    ring = witt_ring(2, 1, 2)
    gram = standard_ring_gram(ring, 1)
    s = ring.from_integers([[1], [0]])
    t = ring.from_integers([[0], [1]])
    f_lin = ring.from_integers([[0, f_entry], [2, 0]])
    vinv = ring.from_integers([[0, f_entry], [1, 0]])
    return SplitDisplay(ring, gram, s, t, f_lin, vinv)


def test_genus_one_example() -> None:
    d = _genus_one_display(-1)
    assert check_axioms(d) == []
    assert duality_check(d) == []
    t = display_to_triple(d)
    assert t.gmat[..., 0].tolist() == [[0, 3], [1, 0]]
    assert triple_to_display(t) == d
    z = display_mod_p_to_fzip(d)
    assert z.C == z.D == Subspace.coordinate(z.field, 2, [1])
    assert eo_type(z) == EOType((0,))


def test_sign_flipped_example_fails_the_mixed_duality() -> None:
    d = _genus_one_display(1)
    assert check_axioms(d) == []
    assert duality_check(d) == ["<V^-1 y, F x> != sigma(<y, x>)"]
    with pytest.raises(InvalidDisplay) as info:
        display_to_triple(d)
    assert info.value.violations == ["<V^-1 y, F x> != sigma(<y, x>)"]


def test_perturbed_frobenius_is_rejected() -> None:
    d = _genus_one_display(-1)
    broken = SplitDisplay(d.ring, d.gram, d.S, d.T, d.ring.scale(d.F_lin, 2), d.Vinv)
    problems = check_axioms(broken)
    assert "(b) V^-1(p t) != F(t) on T" in problems
    with pytest.raises(InvalidDisplay):
        display_to_triple(broken)


@pytest.mark.parametrize(("p", "k", "n"), ROUND_TRIP_RINGS)
def test_round_trips_in_genus_one(p: int, k: int, n: int) -> None:
    ring = witt_ring(p, k, n)
    rng = random.Random(0)
    for _ in range(100):
        t = random_triple(ring, 1, rng)
        d = triple_to_display(t)
        assert check_axioms(d) == []
        assert duality_check(d) == []
        back = display_to_triple(d)
        assert back == t
        assert triple_to_display(back) == d


@pytest.mark.parametrize(("p", "k", "n"), ROUND_TRIP_RINGS)
def test_round_trips_in_genus_two(p: int, k: int, n: int) -> None:
    ring = witt_ring(p, k, n)
    rng = random.Random(1)
    for _ in range(10):
        t = random_triple(ring, 2, rng)
        d = triple_to_display(t)
        assert check_axioms(d) == []
        assert display_to_triple(d) == t
        assert validate(display_mod_p_to_fzip(d)) == []


def test_ordinary_triple() -> None:
    ring = witt_ring(3, 1, 2)
    gram = standard_ring_gram(ring, 1)
    t = GroupTriple(ring, gram, ring.from_integers([[1], [0]]), ring.from_integers([[0], [1]]), ring.eye(2))
    z = display_mod_p_to_fzip(triple_to_display(t))
    assert eo_type(z) == EOType((1,))
    assert (z.C & z.D).dim == 0


def test_mod_p_zip_agrees_with_the_zip_point() -> None:
    ring = witt_ring(2, 2, 2)
    rng = random.Random(6)
    for g in (1, 2):
        for _ in range(10):
            t = random_triple(ring, g, rng)
            z = display_mod_p_to_fzip(triple_to_display(t))
            pt = triple_to_zippoint(t)
            assert zip_from_point(pt) == z
            assert orbit_class(pt) == eo_type(z)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_reduction_commutes_with_zeta(g: int) -> None:
    ring = witt_ring(2, 1, 2)
    for seed in range(50):
        t = random_triple(ring, g, random.Random(seed))
        z = display_mod_p_to_fzip(triple_to_display(t))
        pt = zeta(z, lagrangian_complement(z.C, z.sp), lagrangian_complement(z.D, z.sp))
        assert orbit_class(pt) == orbit_class(triple_to_zippoint(t))


def test_gram_matrix_must_be_fixed_by_sigma() -> None:
    ring = witt_ring(2, 2, 2)
    gram = standard_ring_gram(ring, 1)
    unit = teichmuller(FieldElem(ring.residue_field, 2), ring).array
    twisted = ring.mul(gram, unit)
    assert not np.array_equal(ring.sigma(twisted), twisted)
    s, t = ring.from_integers([[1], [0]]), ring.from_integers([[0], [1]])
    with pytest.raises(InvalidTriple, match="fixed by sigma"):
        GroupTriple(ring, twisted, s, t, ring.eye(2))

    d = triple_to_display(GroupTriple(ring, gram, s, t, ring.eye(2)))
    assert check_axioms(d) == [] and duality_check(d) == []
    moved = SplitDisplay(ring, twisted, d.S, d.T, d.F_lin, d.Vinv)
    assert "Gram matrix is not fixed by sigma" in check_axioms(moved)
    assert "<F x, F x'> != p sigma(<x, x'>)" in duality_check(moved)
    with pytest.raises(InvalidDisplay):
        display_to_triple(moved)


def test_superspecial_triple_has_p_equal_to_q() -> None:
    ring = witt_ring(2, 1, 2)
    gram = standard_ring_gram(ring, 1)
    s, t = ring.from_integers([[1], [0]]), ring.from_integers([[0], [1]])
    triple = GroupTriple(ring, gram, s, t, ring.from_integers([[0, -1], [1, 0]]))
    pt = triple_to_zippoint(triple)
    assert pt.P.L == pt.Q.L
    assert orbit_class(pt) == EOType((0,))


def test_eo_type_is_invariant_under_conjugation() -> None:
    ring = witt_ring(3, 1, 2)
    gram = standard_ring_gram(ring, 2)
    rng = random.Random(9)
    for _ in range(10):
        t = random_triple(ring, 2, rng)
        h = random_ring_symplectic(ring, gram, rng, 8)
        moved = GroupTriple(
            ring,
            gram,
            ring.matmul(h, t.S),
            ring.matmul(h, t.T),
            ring.matmul(ring.matmul(h, t.gmat), ring.inverse_matrix(ring.sigma(h))),
        )
        before = eo_type(display_mod_p_to_fzip(triple_to_display(t)))
        after = eo_type(display_mod_p_to_fzip(triple_to_display(moved)))
        assert before == after


def test_truncation_is_compatible_with_the_bijection() -> None:
    ring = witt_ring(3, 1, 3)
    rng = random.Random(2)
    for _ in range(20):
        t = random_triple(ring, 1, rng)
        d = triple_to_display(t)
        assert reduce_display(d, 2) == triple_to_display(reduce_triple(t, 2))
        assert display_to_triple(reduce_display(d, 2)) == reduce_triple(t, 2)


def test_invalid_triples() -> None:
    ring = witt_ring(2, 1, 2)
    gram = standard_ring_gram(ring, 1)
    s, t = ring.from_integers([[1], [0]]), ring.from_integers([[0], [1]])
    with pytest.raises(InvalidTriple, match="does not preserve"):
        GroupTriple(ring, gram, s, t, ring.scale(ring.eye(2), 2))
    with pytest.raises(InvalidTriple, match="direct sum"):
        GroupTriple(ring, gram, s, s, ring.eye(2))
    with pytest.raises(InvalidTriple):
        GroupTriple(ring, gram, s, t, np.zeros((3, 3, 1), dtype=np.int64))
