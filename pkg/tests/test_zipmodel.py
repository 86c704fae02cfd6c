from __future__ import annotations

import random

import numpy as np
import pytest

from eozip.algebra.field import field_of_order
from eozip.algebra.linalg import Subspace
from eozip.algebra.symplectic import lagrangians, random_symplectic, standard_symplectic_space
from eozip.constants import FREENESS_SAMPLES
from eozip.errors import InvalidPoint, NotComplement, NotIsotropic, NotSymplectic, ScaleTooLarge
from eozip.flags import LagrangianFlag, relpos_lagrangian
from eozip.fzip import random_zip, standard_zip
from eozip.weyl import EOType, all_eo_types, opposition_x
from eozip.zipmodel import (
    ZipPoint,
    count_points,
    degree_table,
    g_action,
    orbit_class,
    torsor_freeness_check,
    zeta,
    zip_from_point,
    ztilde_dimension,
)


def _complements(z, rng: random.Random, limit: int):
    c_options = [u for u in lagrangians(z.sp) if (u & z.C).dim == 0]
    d_options = [u for u in lagrangians(z.sp) if (u & z.D).dim == 0]
    return [(rng.choice(c_options), rng.choice(d_options)) for _ in range(limit)]


def _point(eo: EOType, q: int, seed: int = 0) -> ZipPoint:
    z = random_zip(eo, field_of_order(q), seed)
    (ccompl, dcompl), = _complements(z, random.Random(seed), 1)
    return zeta(z, ccompl, dcompl)


def test_zeta_of_the_ordinary_zip(f2) -> None:
    z = standard_zip(EOType((1,)), f2)
    pt = zeta(z, z.D, z.C)
    assert pt.P.L == z.C and pt.Q.L == z.D
    assert orbit_class(pt) == EOType((1,))
    assert relpos_lagrangian(pt.Q, LagrangianFlag(pt.sp, pt.target)) == opposition_x(1)


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("g", [1, 2])
def test_zeta_inverts_zip_from_point(q: int, g: int) -> None:
    rng = random.Random(q * 10 + g)
    for eo in all_eo_types(g):
        z = random_zip(eo, field_of_order(q), 2)
        for ccompl, dcompl in _complements(z, rng, 3):
            pt = zeta(z, ccompl, dcompl)
            assert zip_from_point(pt) == z
            assert orbit_class(pt) == eo


@pytest.mark.parametrize("q", [2, 3])
def test_orbit_class_does_not_depend_on_the_complements(q: int) -> None:
    rng = random.Random(q)
    field = field_of_order(q)
    for g in (1, 2):
        x = opposition_x(g)
        for eo in all_eo_types(g):
            for seed in range(2):
                z = random_zip(eo, field, seed)
                classes = set()
                for c, d in _complements(z, rng, 20):
                    pt = zeta(z, c, d)
                    assert relpos_lagrangian(pt.Q, LagrangianFlag(pt.sp, pt.target)) == x
                    classes.add(orbit_class(pt))
                assert classes == {eo}


def test_zeta_rejects_bad_complements(f2) -> None:
    z = standard_zip(EOType((1, 1)), f2)
    assert z.C == Subspace.coordinate(f2, 4, [3, 4])
    isotropic = Subspace.coordinate(f2, 4, [1, 2])
    with pytest.raises(NotComplement):
        zeta(z, z.C, isotropic)
    with pytest.raises(NotIsotropic):
        zeta(z, Subspace.span(f2, [[1, 0, 0, 0], [0, 1, 0, 1]]), z.C)


def test_invalid_points(f2) -> None:
    sp = standard_symplectic_space(f2, 1)
    line = LagrangianFlag(sp, Subspace.coordinate(f2, 2, [1]))
    with pytest.raises(InvalidPoint):
        ZipPoint(sp, line, line, np.eye(2, dtype=np.int64))
    with pytest.raises(InvalidPoint):
        ZipPoint(sp, line, line, np.array([[1, 1], [1, 1]]))


def test_g_action(f4) -> None:
    rng = random.Random(12)
    for eo in all_eo_types(2):
        pt = _point(eo, 4, 3)
        for _ in range(10):
            h = random_symplectic(pt.sp, rng)
            moved = g_action(h, pt)
            assert orbit_class(moved) == eo
        h1, h2 = random_symplectic(pt.sp, rng), random_symplectic(pt.sp, rng)
        assert g_action(f4.matmul(h1, h2), pt) == g_action(h1, g_action(h2, pt))
        assert g_action(np.eye(4, dtype=np.int64), pt) == pt
    with pytest.raises(NotSymplectic):
        g_action(np.diag([1, 1, 1, 2]), pt)


@pytest.mark.parametrize("q", [2, 3])
def test_action_of_the_unipotent_radicals_is_free_in_genus_one(q: int) -> None:
    for eo in all_eo_types(1):
        for seed in range(3):
            assert torsor_freeness_check(_point(eo, q, seed)) is None


def test_action_of_the_unipotent_radicals_is_free_in_genus_two() -> None:
    for eo in all_eo_types(2):
        pt = _point(eo, 2, 1)
        assert torsor_freeness_check(pt) is None
        assert torsor_freeness_check(pt, samples=FREENESS_SAMPLES) is None


def test_freeness_check_scale_limit() -> None:
    with pytest.raises(ScaleTooLarge):
        torsor_freeness_check(_point(EOType((1,)), 4))


@pytest.mark.parametrize(("q", "expected"), [(2, {"0": 12, "1": 24}), (3, {"0": 72, "1": 216}), (5, {"0": 600, "1": 3000})])
def test_point_counts_in_genus_one(q: int, expected) -> None:
    count = count_points(1, q)
    assert count.counts == expected
    assert count.consistent
    assert count.observed_codims() == {"0": 1, "1": 0}


@pytest.mark.parametrize("q", [2, 3])
def test_exhaustive_count_agrees_with_the_orbit_count(q: int) -> None:
    assert count_points(1, q, "exhaustive").counts == count_points(1, q).counts


def test_point_counts_in_genus_two() -> None:
    count = count_points(2, 2)
    assert count.counts == {"00": 5760, "01": 11520, "10": 23040, "11": 46080}
    assert count.total == 15 * 720 * 8
    assert count.consistent
    assert count.expected_codims() == {"00": 3, "01": 2, "10": 1, "11": 0}
    assert count.as_dict()["dimension"] == ztilde_dimension(2) == 16


@pytest.mark.slow
def test_exhaustive_count_in_genus_two() -> None:
    assert count_points(2, 2, "exhaustive").counts == count_points(2, 2).counts


@pytest.mark.slow
def test_point_counts_in_genus_two_over_f3() -> None:
    assert count_points(2, 3).consistent


def test_degrees_are_stable_across_fields() -> None:
    results = [count_points(1, q) for q in (2, 3, 4, 5)]
    assert degree_table(results) == {"0": 4, "1": 5}


def test_count_limits() -> None:
    with pytest.raises(ScaleTooLarge):
        count_points(3, 2)
    with pytest.raises(ScaleTooLarge):
        count_points(1, 7)
    with pytest.raises(ScaleTooLarge):
        count_points(2, 3, "exhaustive")
    with pytest.raises(ValueError):
        count_points(1, 2, "sampled")
