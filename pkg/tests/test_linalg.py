import random
from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from lgwindows import linalg

entries = st.integers(-3, 3)


def to_cols(rows):
    n = len(rows[0]) if rows else 0
    return [{i: Fraction(rows[i][j]) for i in range(len(rows)) if rows[i][j]} for j in range(n)]


matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(entries, min_size=n, max_size=n),
                                                           min_size=m, max_size=m)))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_against_sympy(rows):
    assert linalg.rank(to_cols(rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_nullspace_is_kernel(rows):
    cols = to_cols(rows)
    basis = linalg.nullspace(cols)
    assert len(basis) == len(cols) - sympy.Matrix(rows).rank()
    for v in basis:
        for i in range(len(rows)):
            assert sum(v[j] * rows[i][j] for j in range(len(cols))) == 0


@settings(max_examples=60, deadline=None)
@given(matrices, st.integers(0, 10**6))
def test_solve_consistent_systems(rows, s):
    rng = random.Random(s)
    cols = to_cols(rows)
    x = [rng.randint(-2, 2) for _ in cols]
    rhs = {i: Fraction(sum(x[j] * rows[i][j] for j in range(len(cols)))) for i in range(len(rows))}
    sol = linalg.solve(cols, rhs)
    assert sol is not None
    for i in range(len(rows)):
        assert sum(sol[j] * rows[i][j] for j in range(len(cols))) == rhs[i]


def test_solve_inconsistent():
    assert linalg.solve([{0: 1}, {0: 2}], {1: 1}) is None
    assert linalg.solve([], {0: 1}) is None
    assert linalg.solve([], {}) == []


def test_intersection_dim():
    cols = [{"a": 1, "b": 1}, {"b": 1}, {"c": 1}]
    assert linalg.intersection_dim(cols, {"a", "b"}) == 2
    assert linalg.intersection_dim(cols, {"a"}) == 1
    assert linalg.intersection_dim([{"a": 1, "b": 1}, {"c": 1}], {"a"}) == 0
    assert linalg.intersection_dim(cols, {"c"}) == 1


@settings(max_examples=80, deadline=None)
@given(matrices, st.integers(0, 10**6))
def test_sparse_path_matches_dense(rows, s):
    rng = random.Random(s)
    cols = to_cols(rows)
    x = [rng.randint(-2, 2) for _ in cols]
    rhs = {i: Fraction(sum(x[j] * rows[i][j] for j in range(len(cols)))) for i in range(len(rows))}
    saved = linalg.DENSE_LIMIT
    linalg.DENSE_LIMIT = -1
    try:
        assert linalg.rank(cols) == sympy.Matrix(rows).rank()
        kernel = linalg.nullspace(cols)
        sol = linalg.solve(cols, rhs)
        bad = linalg.solve(cols, {"elsewhere": Fraction(1)})
    finally:
        linalg.DENSE_LIMIT = saved
    assert len(kernel) == len(cols) - sympy.Matrix(rows).rank()
    for v in kernel:
        assert all(sum(v[j] * rows[i][j] for j in range(len(cols))) == 0 for i in range(len(rows)))
    assert all(sum(sol[j] * rows[i][j] for j in range(len(cols))) == rhs[i] for i in range(len(rows)))
    assert bad is None


def test_block_split_solves_each_block():
    cols = [{"a": 1}, {"b": 2}, {"a": 1, "c": 1}]
    sol = linalg.solve(cols, {"a": 3, "b": 4, "c": 1})
    assert sol == [2, 2, 1]
