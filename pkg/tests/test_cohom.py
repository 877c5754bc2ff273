import random

import pytest

from lgwindows.brane import make_brane, twist_shift
from lgwindows.cohom import (PROJVX, CohomologyTable, brute_force_projvx, hom_homology, line_cohomology)
from lgwindows.homspace import ConcentrationError
from lgwindows.model import GaugedModel, Space
from lgwindows.poly import graded_basis
from lgwindows.spherical import build_spherical, split_W


def test_projvx_flop_h0(flop0):
    tab = line_cohomology(flop0, PROJVX, 1, 4)
    assert tab.nonzero() == {(0, 0): 2}


@pytest.mark.parametrize("weights", [(1, 1), (1, 2), (1, 1, 1), (2, 3), (1, 1, 2, 2)])
def test_projvx_against_oracle(weights):
    vars_ = [(f"x{i}", w, i % 2) for i, w in enumerate(weights)] + [("p", -sum(weights), 0)]
    m = GaugedModel.from_spec(vars_, "0")
    d = sum(weights)
    for k in range(-2 * d, 2 * d + 1):
        assert line_cohomology(m, PROJVX, k, 0) == brute_force_projvx(m, k), k


def test_serre_duality_on_projvx():
    m = GaugedModel.from_spec([("a", 1, 0), ("b", 1, 0), ("c", 2, 0), ("p", -4, 0)], "0")
    for k in range(0, 6):
        h0 = line_cohomology(m, PROJVX, k, 0).dim(0)
        top = line_cohomology(m, PROJVX, -k - 4, 0).dim(2)
        assert h0 == top


def test_plus_vanishing_window(flop0):
    tab = line_cohomology(flop0, Space.PLUS, -1, 4)
    assert tab.dim(1) == 0
    # H^0 of O(-1) is spanned by invariant monomials of gauge -1
    assert tab.dim(0) == sum(len(graded_basis(-1, 0, 4, flop0.table)) for _ in [0])


def test_plus_top_cohomology_appears(flop0):
    tab = line_cohomology(flop0, Space.PLUS, -2, 3)
    assert tab.dim(1) > 0


@pytest.mark.parametrize("k", [-1, 0, 1])
def test_stack_vs_plus_h0(flopW, k):
    a = line_cohomology(flopW, Space.PLUS, k, 6)
    b = line_cohomology(flopW, Space.STACK, k, 6)
    assert a.restrict(range(0, 7)) == b.restrict(range(0, 7))


def test_minus_is_mirror(flopW):
    a = line_cohomology(flopW, Space.MINUS, 1, 4)
    assert a.dim(0) > 0
    assert line_cohomology(flopW, Space.MINUS, 2, 4).dim(1) > 0


def test_empty_side():
    m = GaugedModel.from_spec([("y", -1, 0), ("z", 0, 0)], "0")
    with pytest.raises(ConcentrationError):
        line_cohomology(m, PROJVX, 0, 2)


def test_table_json_round_trip():
    t = CohomologyTable({(0, 1): 2, (1, -3): 1}, 5, False)
    assert CohomologyTable.from_dict(t.to_dict()) == t
    assert CohomologyTable.from_dict(t.to_dict()).stabilized is False


def test_hom_homology_scalars():
    m = GaugedModel.from_spec([("x", 1, 0), ("y", -1, 2)], "0")
    E = make_brane(m, Space.STACK, [(0, 0)])
    tab = hom_homology(E, E, 4)
    assert tab.stabilized
    assert tab.nonzero() == {(0, 0): 1, (0, 2): 1, (0, 4): 1}


def test_hom_homology_identity_nonzero(flopW):
    for k in (0, 1):
        E = make_brane(GaugedModel.from_spec([("x1", 1, 0), ("x2", 1, 0), ("y", -2, 2)], "0"), Space.PLUS, [(k, 0)])
        tab = hom_homology(E, E, 6)
        assert tab.dim(r=0) == line_cohomology(E.model, Space.PLUS, 0, 6).dim(0, 0) == 1


def test_hom_homology_contractible_S(flopW):
    S = build_spherical(split_W(flopW), 0)
    S1 = twist_shift(S, 0, 0)
    # S has twists 0..2, so Hom(S, S) on the plus phase is not concentrated
    with pytest.raises(ConcentrationError):
        hom_homology(S, S1, 4)


def test_hom_homology_twist_invariance(flopW):
    S = build_spherical(split_W(flopW), 0).with_space(Space.STACK)
    a = hom_homology(S, S, 4)
    b = hom_homology(twist_shift(S, 2, 1), twist_shift(S, 2, 1), 4)
    assert a == b and a.stabilized == b.stabilized


def test_conifold_stack_ext(conifold):
    S = build_spherical(split_W(conifold), 0).with_space(Space.STACK)
    tab = hom_homology(S, S, 4)
    assert tab.stabilized
    assert tab.total == 1
