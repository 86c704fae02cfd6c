from __future__ import annotations

import random

import numpy as np
import pytest

from eozip.algebra.linalg import Subspace
from eozip.algebra.symplectic import (
    lagrangians,
    random_symplectic,
    standard_symplectic_space,
    symplectic_basis_complete,
)
from eozip.errors import AmbientMismatch
from eozip.flags import (
    CompleteFlag,
    LagrangianFlag,
    complete_lagrangian,
    flag_from_basis,
    orbit_invariant_pair,
    permuted_flag,
    relpos_complete,
    relpos_lagrangian,
    standard_flag,
    transform_flag,
)
from eozip.weyl import compose, identity, inverse, opposition_x, weyl_group


def _frame(sp):
    return symplectic_basis_complete(Subspace.zero(sp.field, sp.dim), sp).entries


def test_standard_flag_is_in_identity_position(f3) -> None:
    sp = standard_symplectic_space(f3, 2)
    flag = standard_flag(sp)
    assert relpos_complete(flag, flag) == identity(2)
    assert [member.dim for member in flag.chain()] == [0, 1, 2, 3, 4]


def test_flags_must_be_self_dual(f3) -> None:
    sp = standard_symplectic_space(f3, 2)
    identity_basis = np.eye(4, dtype=np.int64)
    # e1, e4 is not isotropic, so span(e1, e2, e4) is not the perp of span(e1)
    with pytest.raises(ValueError):
        flag_from_basis(identity_basis[:, [0, 3, 1, 2]], sp)
    with pytest.raises(ValueError):
        CompleteFlag(sp, ())


@pytest.mark.parametrize("g", [1, 2])
def test_relative_position_of_permuted_flags(f3, g: int) -> None:
    sp = standard_symplectic_space(f3, g)
    frame = _frame(sp)
    base = flag_from_basis(frame, sp)
    for w in weyl_group(g).elements:
        assert relpos_complete(base, permuted_flag(frame, w, sp)) == inverse(w)


def test_relative_position_is_multiplicative(f2) -> None:
    sp = standard_symplectic_space(f2, 2)
    frame = _frame(sp)
    rng = random.Random(7)
    elements = weyl_group(2).elements
    for _ in range(20):
        a, c = rng.choice(elements), rng.choice(elements)
        f = flag_from_basis(frame, sp)
        g_flag = permuted_flag(frame, a, sp)
        h_flag = permuted_flag(frame, compose(a, c), sp)
        assert relpos_complete(f, h_flag) == compose(relpos_complete(g_flag, h_flag), relpos_complete(f, g_flag))


def test_relative_position_is_invariant_under_sp(f4) -> None:
    sp = standard_symplectic_space(f4, 2)
    frame = _frame(sp)
    f = flag_from_basis(frame, sp)
    rng = random.Random(1)
    elements = weyl_group(2).elements
    for _ in range(100):
        g_flag = permuted_flag(frame, rng.choice(elements), sp)
        h = random_symplectic(sp, rng)
        moved = relpos_complete(transform_flag(h, f), transform_flag(h, g_flag))
        assert moved == relpos_complete(f, g_flag)
        assert orbit_invariant_pair(transform_flag(h, f), transform_flag(h, g_flag)) == orbit_invariant_pair(f, g_flag)


def _random_flag_pairs(sp, rng: random.Random, count: int):
    frame = _frame(sp)
    elements = weyl_group(sp.g).elements
    pairs = []
    for _ in range(count):
        h = random_symplectic(sp, rng)
        f = transform_flag(h, flag_from_basis(frame, sp))
        if rng.random() < 0.5:
            g_flag = transform_flag(random_symplectic(sp, rng), flag_from_basis(frame, sp))
        else:
            g_flag = transform_flag(h, permuted_flag(frame, rng.choice(elements), sp))
        pairs.append((f, g_flag))
    return pairs


@pytest.mark.parametrize("g", [1, 2])
def test_relative_position_is_identity_exactly_for_equal_flags(f3, g: int) -> None:
    sp = standard_symplectic_space(f3, g)
    rng = random.Random(20 + g)
    for f, g_flag in _random_flag_pairs(sp, rng, 60) + [(f, f) for f, _ in _random_flag_pairs(sp, rng, 10)]:
        assert (relpos_complete(f, g_flag) == identity(g)) == (f.members == g_flag.members)


@pytest.mark.parametrize("g", [1, 2])
def test_lagrangian_relative_position_is_identity_exactly_for_equal_lagrangians(f2, g: int) -> None:
    sp = standard_symplectic_space(f2, g)
    found = [LagrangianFlag(sp, u) for u in lagrangians(sp)]
    for p in found:
        for q in found:
            assert (relpos_lagrangian(p, q) == identity(g)) == (p.L == q.L)


@pytest.mark.parametrize("g", [1, 2])
def test_rank_tables_separate_relative_positions(f3, g: int) -> None:
    sp = standard_symplectic_space(f3, g)
    rng = random.Random(30 + g)
    seen = []
    for f, g_flag in _random_flag_pairs(sp, rng, 60):
        table = tuple(map(tuple, orbit_invariant_pair(f, g_flag)))
        seen.append((table, relpos_complete(f, g_flag)))
    for table_a, pos_a in seen:
        for table_b, pos_b in seen:
            assert (table_a == table_b) == (pos_a == pos_b)


def test_orbit_invariant_pair_is_transposed_by_swapping(f3) -> None:
    sp = standard_symplectic_space(f3, 2)
    frame = _frame(sp)
    f = flag_from_basis(frame, sp)
    g_flag = permuted_flag(frame, opposition_x(2), sp)
    table = orbit_invariant_pair(f, g_flag)
    swapped = orbit_invariant_pair(g_flag, f)
    assert table == [list(row) for row in zip(*swapped)]
    assert table[0] == [0, 1, 2, 3, 4]
    assert table[-1] == [4, 4, 4, 4, 4]


@pytest.mark.parametrize("g", [1, 2, 3])
def test_relative_position_of_lagrangians(f2, g: int) -> None:
    sp = standard_symplectic_space(f2, g)
    lower = LagrangianFlag(sp, Subspace.coordinate(f2, 2 * g, range(1, g + 1)))
    upper = LagrangianFlag(sp, Subspace.coordinate(f2, 2 * g, range(g + 1, 2 * g + 1)))
    assert relpos_lagrangian(lower, lower) == identity(g)
    assert relpos_lagrangian(lower, upper) == opposition_x(g)


def test_lagrangian_relative_position_ignores_the_completion(f3) -> None:
    sp = standard_symplectic_space(f3, 2)
    p = LagrangianFlag(sp, Subspace.coordinate(f3, 4, [1, 2]))
    q = LagrangianFlag(sp, Subspace.span(f3, [[1, 0, 0, 0], [0, 0, 1, 0]]))
    expected = relpos_lagrangian(p, q)
    rng = random.Random(2)
    for _ in range(10):
        assert relpos_lagrangian(p, q, rng) == expected


def test_complete_lagrangian(f3) -> None:
    sp = standard_symplectic_space(f3, 2)
    lagrangian = Subspace.coordinate(f3, 4, [1, 3])
    flag = complete_lagrangian(LagrangianFlag(sp, lagrangian))
    assert flag.members[1] == lagrangian
    assert flag.members[0] <= lagrangian


def test_lagrangian_flag_rejects_non_isotropic(f3) -> None:
    sp = standard_symplectic_space(f3, 2)
    with pytest.raises(ValueError):
        LagrangianFlag(sp, Subspace.coordinate(f3, 4, [1, 4]))


def test_flags_in_different_spaces(f2, f3) -> None:
    a = standard_flag(standard_symplectic_space(f2, 1))
    b = standard_flag(standard_symplectic_space(f3, 1))
    with pytest.raises(AmbientMismatch):
        relpos_complete(a, b)
