import random

import pytest

from helpers import window_pool
from lgwindows.brane import check_brane, make_brane, mat_to_strings, twist_shift, zero_brane
from lgwindows.certificates import find_equivalence
from lgwindows.cohom import hom_homology
from lgwindows.fixtures import orbifold, weighted
from lgwindows.model import GaugedModel, Space
from lgwindows.spherical import build_spherical, split_W
from lgwindows.windows import (ProjectionBoundError, Window, WindowError, euler_resolve, ext, in_window,
                               inverse_monodromy, monodromy, transport, window_project)


def test_in_window(flop0):
    w = Window.of(flop0, 3)
    assert list(w.twists) == [3, 4]
    assert in_window(make_brane(flop0, Space.PLUS, [(3, 0), (4, 0)]), w)
    assert not in_window(make_brane(flop0, Space.PLUS, [(5, 0)]), w)
    assert in_window(zero_brane(flop0, Space.PLUS), w)


def test_euler_resolve_flop_below(flop0):
    res = euler_resolve(flop0, -1, Window.of(flop0, 0), Space.PLUS)
    B = res.brane
    assert sorted(s.k for s in B.summands) == [0, 0, 1]
    assert res.certificate.verify() and res.certificate.certified


def test_euler_resolve_in_window(flop0):
    res = euler_resolve(flop0, 0, Window.of(flop0, 0), Space.PLUS)
    assert [tuple(s) for s in res.brane.summands] == [(0, 0)]
    assert res.certificate.steps == []


def test_euler_resolve_three_steps():
    m = weighted(3)
    res = euler_resolve(m, -1, Window.of(m, 0), Space.PLUS)
    assert sorted(s.k for s in res.brane.summands) == [0, 0, 0, 1, 1, 1, 2]
    assert res.certificate.verify()


def test_euler_resolve_twice_out():
    m = weighted(3)
    res = euler_resolve(m, 5, Window.of(m, 0), Space.PLUS)
    assert in_window(res.brane, Window.of(m, 0))
    assert check_brane(res.brane).valid
    assert res.certificate.verify()


def test_euler_resolve_minus_side(flop0):
    res = euler_resolve(flop0, 3, Window.of(flop0, 0), Space.MINUS)
    assert in_window(res.brane, Window.of(flop0, 0))
    assert res.brane.space is Space.MINUS
    assert res.certificate.verify()


def test_project_in_window_is_identity(flopW):
    E = make_brane(flopW, Space.PLUS, [(0, 0), (1, -1)], [["0", "y1"], ["x1", "0"]])
    E = build_spherical(split_W(flopW), 0)
    res = window_project(E, Window.of(flopW, 0), Space.PLUS)
    assert res.perturbation_log  # S has a twist-2 summand
    F = build_spherical(split_W(flopW), -1)
    proj = window_project(twist_shift(F, 1, 0), Window.of(flopW, 1), Space.PLUS)
    assert in_window(proj.brane, Window.of(flopW, 1))


def test_project_trivial_when_in_window(flop0):
    E = make_brane(flop0, Space.PLUS, [(0, 0), (1, 0)])
    res = window_project(E, Window.of(flop0, 0), Space.PLUS)
    assert res.brane.same_data(E) and res.perturbation_log == []


def test_project_flop_W_curvature(flopW):
    S = build_spherical(split_W(flopW), -1)
    res = window_project(S, Window.of(flopW, 0), Space.PLUS)
    assert check_brane(res.brane).valid
    assert in_window(res.brane, Window.of(flopW, 0))
    assert res.certificate.verify()


def test_project_bound_zero_raises(flopW):
    S = build_spherical(split_W(flopW), 0)
    with pytest.raises(ProjectionBoundError):
        window_project(S, Window.of(flopW, 0), Space.PLUS, bound=0)


def test_project_needs_phase(flop0):
    with pytest.raises(WindowError):
        window_project(make_brane(flop0, Space.PLUS, [(0, 0)]), Window.of(flop0, 0), Space.STACK)


def test_transport(flop0):
    E = make_brane(flop0, Space.PLUS, [(0, 0)])
    T = transport(E, Window.of(flop0, 0), Space.PLUS)
    assert T.space is Space.MINUS and T.summands == E.summands
    with pytest.raises(WindowError):
        transport(make_brane(flop0, Space.PLUS, [(2, 0)]), Window.of(flop0, 0), Space.PLUS)


@pytest.mark.parametrize("t", [-1, 0, 2])
def test_flop_monodromy(flop0, t):
    res = monodromy(make_brane(flop0, Space.PLUS, [(t, 0)]), t)
    ref = make_brane(flop0, Space.PLUS, [(t + 1, 0), (t + 1, 0), (t + 2, 1)],
                     [["0", "0", "-y2"], ["0", "0", "y1"], ["0", "0", "0"]])
    assert find_equivalence(res.brane, ref, 2).verify()
    fixed = monodromy(make_brane(flop0, Space.PLUS, [(t + 1, 0)]), t)
    assert [tuple(s) for s in fixed.brane.summands] == [(t + 1, 0)]


def test_monodromy_fixes_middle_twists():
    m = weighted(3)
    E = make_brane(m, Space.PLUS, [(1, 0), (2, 0)])
    assert monodromy(E, 0).brane.same_data(E)


def test_monodromy_round_trip(flop0):
    E = make_brane(flop0, Space.PLUS, [(0, 0)])
    there = monodromy(E, 0).brane
    back = inverse_monodromy(there, 0).brane
    assert find_equivalence(back, E, 3).verify()


def test_monodromy_round_trip_with_W(orb2):
    pool = window_pool(orb2)
    E = pool[0]
    there = monodromy(E, 0).brane
    back = inverse_monodromy(there, 0).brane
    assert check_brane(back).valid
    assert ext(back, back, 4) == ext(E, E, 4)


def test_fully_faithful_on_window(orb2):
    pool = window_pool(orb2)
    for E in pool[:2]:
        for F in pool[:2]:
            plus = hom_homology(E, F, 4)
            stack = hom_homology(E.with_space(Space.STACK), F.with_space(Space.STACK), 4)
            assert plus.stabilized and stack.stabilized
            assert plus == stack


def test_ext_projects_when_needed(conifold):
    S = build_spherical(split_W(conifold), 0)
    assert ext(S, S, 4).total == 0
