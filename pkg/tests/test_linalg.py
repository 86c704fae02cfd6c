from __future__ import annotations

import random

import numpy as np
import pytest

from eozip.algebra.field import field_create
from eozip.algebra.linalg import (
    MatrixF,
    SemilinearMap,
    Subspace,
    frobenius_twist,
    grassmannian,
    image,
    intersect,
    inverse,
    kernel,
    projection,
    rank,
    rref,
    semilinear_apply,
    solve,
    subspace_sum,
    transform,
)
from eozip.errors import DimensionMismatch, NotComplement


def _random_matrix(field, rows: int, cols: int, rng: random.Random) -> np.ndarray:
    return np.array([[rng.randrange(field.order) for _ in range(cols)] for _ in range(rows)], dtype=np.int64)


def test_rank_kernel_and_image() -> None:
    f5 = field_create(5)
    m = MatrixF.of(f5, [[1, 2], [2, 4]])
    assert rank(m) == 1
    null = kernel(m)
    assert null.dim == 1
    assert null.contains([3, 1])
    assert image(m) == Subspace.span(f5, [[1, 2]])
    assert rref(m).tolist() == [[1, 2], [0, 0]]


def test_span_does_not_depend_on_the_generating_set(f2) -> None:
    u = Subspace.span(f2, [[1, 0, 1, 0], [0, 1, 0, 1]])
    v = Subspace.span(f2, [[1, 1, 1, 1], [0, 1, 0, 1], [1, 0, 1, 0]])
    assert u == v
    assert hash(u) == hash(v)
    assert u.dim == 2


@pytest.mark.parametrize(("p", "k"), [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_sum_and_intersection_dimensions(p: int, k: int) -> None:
    field = field_create(p, k)
    rng = random.Random(3)
    for _ in range(1000):
        n = rng.randint(1, 5)
        u = Subspace.span(field, _random_matrix(field, rng.randint(0, n), n, rng), n)
        v = Subspace.span(field, _random_matrix(field, rng.randint(0, n), n, rng), n)
        total = subspace_sum(u, v)
        common = intersect(u, v)
        assert total.dim + common.dim == u.dim + v.dim
        assert u <= total and v <= total
        assert common <= u and common <= v


def test_complement_and_reduce(f4) -> None:
    u = Subspace.span(f4, [[1, 2, 0, 3], [0, 0, 1, 1]])
    complement = u.complement()
    assert complement.dim + u.dim == 4
    assert (u & complement).dim == 0
    assert not np.any(u.reduce(u.basis))
    assert u.coordinates(u.basis).tolist() == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        u.coordinates([0, 1, 0, 0])


def test_inverse(f4) -> None:
    rng = random.Random(11)
    found = 0
    while found < 5:
        a = _random_matrix(f4, 3, 3, rng)
        if int(f4.det(a)) == 0:
            with pytest.raises(ZeroDivisionError):
                inverse(f4, a)
            continue
        found += 1
        assert np.array_equal(f4.matmul(a, inverse(f4, a)), f4.identity(3))


def test_solve(f2) -> None:
    a = np.array([[1, 1], [1, 1]])
    assert solve(f2, a, np.array([1, 0])) is None
    x = solve(f2, a, np.array([1, 1]))
    assert np.array_equal(f2.matmul(a, x[:, None])[:, 0], [1, 1])
    with pytest.raises(DimensionMismatch):
        solve(f2, a, np.array([1, 1, 1]))


def test_projection(f3) -> None:
    onto = Subspace.coordinate(f3, 4, [1, 2])
    along = Subspace.span(f3, [[1, 0, 1, 0], [0, 1, 0, 1]])
    p = projection(onto, along)
    assert np.array_equal(f3.matmul(p, p), p)
    assert not np.any(f3.matmul(p, along.basis.T))
    assert np.array_equal(f3.matmul(p, onto.basis.T), onto.basis.T)
    with pytest.raises(NotComplement):
        projection(onto, onto)


def test_transform_and_frobenius_twist(f4) -> None:
    u = Subspace.span(f4, [[1, 2, 0, 0]])
    swap = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert transform(swap, u) == Subspace.span(f4, [[2, 1, 0, 0]])
    twisted = frobenius_twist(u)
    assert twisted == Subspace.span(f4, [[1, 3, 0, 0]])
    assert frobenius_twist(twisted) == u


def test_semilinear_map(f4) -> None:
    f = SemilinearMap(MatrixF(f4, f4.identity(2)), 1)
    assert f.apply(np.array([2, 3])).tolist() == [3, 2]
    u = Subspace.span(f4, [[1, 2]])
    assert semilinear_apply(f, u) == frobenius_twist(u)


def test_grassmannian_sizes(f2, f3) -> None:
    assert sum(1 for _ in grassmannian(f2, 4, 2)) == 35
    assert sum(1 for _ in grassmannian(f3, 3, 1)) == 13
    assert len({u for u in grassmannian(f2, 4, 2)}) == 35


def test_dimension_mismatch(f2, f3) -> None:
    with pytest.raises(DimensionMismatch):
        Subspace.full(f2, 3) & Subspace.full(f2, 4)
    with pytest.raises(DimensionMismatch):
        MatrixF.of(f2, [[1]]) @ MatrixF.of(f3, [[1]])
