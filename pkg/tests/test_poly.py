from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lgwindows.poly import (Poly, PolyError, VariableTable, bidegree, brute_force_basis, format_poly,
                            graded_basis, parse_poly)

T = VariableTable.build([("x1", 1, 0), ("x2", 1, 0), ("y1", -1, 2), ("y2", -1, 2)])

monos = st.tuples(*[st.integers(0, 3)] * 4)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(monos, coeffs, max_size=5).map(lambda d: Poly(d, T))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == T.zero()


@given(polys)
def test_format_parse_round_trip(p):
    assert parse_poly(format_poly(p), T) == p


def test_parse_examples():
    p = parse_poly("2*x1^2*y1 - 1/3*x2 + 5", T)
    assert p.coefficient((2, 0, 1, 0)) == 2
    assert p.coefficient((0, 1, 0, 0)) == Fraction(-1, 3)
    assert p.constant_term() == 5
    assert format_poly(parse_poly("x1**-1", T)) == "x1^-1"
    assert format_poly(parse_poly("x1*y1 + x2*y2", T)) == "x1*y1 + x2*y2"


@pytest.mark.parametrize("bad", ["", "x3", "x1*", "2**", "+"])
def test_parse_errors(bad):
    with pytest.raises(PolyError):
        parse_poly(bad, T)


def test_bidegree_and_homogeneity():
    assert bidegree((1, 0, 1, 0), T) == (0, 2)
    W = parse_poly("x1*y1 + x2*y2", T)
    assert W.is_bihomogeneous(0, 2)
    assert not parse_poly("x1 + y1", T).is_bihomogeneous()
    with pytest.raises(PolyError):
        bidegree((1, 0), T)


def test_table_validation():
    with pytest.raises(PolyError):
        VariableTable.build([("a", 1, 0), ("a", 1, 0)])
    with pytest.raises(PolyError):
        VariableTable.build([])


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(0, 6), st.integers(0, 5))
def test_graded_basis_matches_brute_force(g, r, bound):
    assert graded_basis(g, r, bound, T) == brute_force_basis(g, r, bound, T)


def test_graded_basis_flop_degree_one():
    assert graded_basis(1, 0, 1, T) == [(0, 1, 0, 0), (1, 0, 0, 0)]


def test_set_zero_and_division():
    p = parse_poly("x1*y1 + x2 + y2^2", T)
    assert p.set_zero([2, 3]) == parse_poly("x2", T)
    assert parse_poly("x1^2*y1", T).divide_monomial((1, 0, 1, 0)) == parse_poly("x1", T)
    with pytest.raises(PolyError):
        p.divide_monomial((1, 0, 0, 0))
