import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import SPLIT_MODELS, random_W
from lgwindows.brane import (Brane, BraneError, Morphism, check_brane, cone, d_hom, direct_sum, hom_complex,
                             identity, make_brane, mat_mul, twist_shift, zero_brane, zero_map)
from lgwindows.certificates import find_equivalence
from lgwindows.model import GaugedModel, Space
from lgwindows.spherical import build_spherical, split_W

FLOP_S = [
    ["0", "y1", "y2", "0"],
    ["x1", "0", "0", "-y2"],
    ["x2", "0", "0", "y1"],
    ["0", "-x2", "x1", "0"],
]
FLOP_S_SUMMANDS = [(0, 0), (1, -1), (1, -1), (2, -2)]


def flop_S(m):
    return make_brane(m, Space.PLUS, FLOP_S_SUMMANDS, FLOP_S)


def test_flop_superpotential_brane_is_valid(flopW):
    S = flop_S(flopW)
    rep = check_brane(S)
    assert rep.valid
    W = flopW.W
    sq = mat_mul(S.d, S.d, S.table)
    for i in range(4):
        for j in range(4):
            assert sq[i][j] == (W if i == j else 0)


def test_zero_brane_is_valid(flopW):
    assert check_brane(zero_brane(flopW)).valid


def test_sign_flip_breaks_curvature(flopW):
    bad = [row[:] for row in FLOP_S]
    bad[3][1] = "x2"
    rep = check_brane(make_brane(flopW, Space.PLUS, FLOP_S_SUMMANDS, bad))
    assert not rep.valid
    assert [c.name for c in rep.failures()] == ["curvature"]


def test_grading_violation(flopW):
    bad = [row[:] for row in FLOP_S]
    bad[0][1] = "x1"
    assert "grading" in [c.name for c in check_brane(make_brane(flopW, Space.PLUS, FLOP_S_SUMMANDS, bad)).failures()]


def test_hom_complex_single_line(flop0):
    E = make_brane(flop0, Space.STACK, [(0, 0)])
    H = hom_complex(E, E)
    assert H.square_is_zero()
    assert d_hom(identity(E)).is_zero()


def test_hom_complex_flop_S(flopW):
    S = flop_S(flopW)
    assert hom_complex(S, S).square_is_zero()


def test_hom_complex_mismatch(flopW):
    S = flop_S(flopW)
    with pytest.raises(BraneError):
        hom_complex(S, S.with_space(Space.MINUS))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2), st.integers(0, 10**6))
def test_d_squared_zero_random_spherical(which, s):
    rng = random.Random(s)
    m = random_W(SPLIT_MODELS[which], rng, degree=4)
    S = build_spherical(split_W(m, rng.choice(["lowest", "highest"])), rng.randint(-2, 2))
    T = twist_shift(build_spherical(split_W(m), 0), rng.randint(-1, 1), rng.randint(-1, 1))
    assert check_brane(S).valid and check_brane(T).valid
    assert hom_complex(S, T).square_is_zero()


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_twist_shift(k, n):
    from lgwindows.fixtures import flop

    S = flop_S(flop(True))
    T = twist_shift(S, k, n)
    assert check_brane(T).valid
    assert twist_shift(T, -k, -n).same_data(S)
    assert twist_shift(S, 0, 0).same_data(S)


def test_cone_of_identity_is_contractible(flopW):
    S = flop_S(flopW)
    C = cone(identity(S))
    assert check_brane(C).valid
    cert = find_equivalence(C, zero_brane(flopW, Space.PLUS), 2)
    assert cert.verify()


def test_cone_of_zero_is_direct_sum(flop0):
    E = make_brane(flop0, Space.STACK, [(0, 0)])
    F = make_brane(flop0, Space.STACK, [(1, 0)])
    C = cone(zero_map(E, F))
    assert C.same_data(direct_sum(twist_shift(E, 0, 1), F))


def test_flop_cone_shape(flop0):
    # O(0) -> Koszul complex of the zero section; cone matches [O(2) -> O(1)^2] after cancellation
    S = build_spherical(split_W(flop0), 0)
    E = make_brane(flop0, Space.STACK, [(0, 0)])
    eps = Morphism(E, S.with_space(Space.STACK), 0,
                   tuple((flop0.table.one() if i == 0 else flop0.table.zero(),) for i in range(4)))
    C = cone(eps)
    ref = make_brane(flop0, Space.STACK, [(1, 1), (1, 1), (2, 2)], [["0", "0", "-y2"], ["0", "0", "y1"], ["0", "0", "0"]])
    assert find_equivalence(C, ref, 2).verify()


def test_cone_rejects_open_map(flopW):
    S = flop_S(flopW)
    phi = Morphism(S, S, 0, tuple(tuple(S.table.one() if (i, j) == (1, 0) else S.table.zero() for j in range(4))
                                  for i in range(4)))
    with pytest.raises(BraneError):
        cone(phi)


def test_brane_json_round_trip(flopW):
    S = flop_S(flopW)
    back = Brane.from_dict(json.loads(S.dumps()), flopW)
    assert back.same_data(S) and back.space is S.space


def test_malformed_brane(flopW):
    with pytest.raises(BraneError):
        Brane.from_dict({"summands": [[0, 0]], "d": [["q"]]}, flopW)
    with pytest.raises(BraneError):
        make_brane(flopW, Space.PLUS, [(0, 0)], [["0", "0"]])
