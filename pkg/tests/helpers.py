"""Random models, superpotentials and branes for property tests."""
from __future__ import annotations

import random
from fractions import Fraction

from lgwindows.brane import Brane, cone, make_brane, twist_shift
from lgwindows.homspace import MorphismSpace, random_closed_map
from lgwindows.model import GaugedModel, Space, decompose
from lgwindows.poly import Poly, graded_basis
from lgwindows.spherical import build_spherical, split_W
from lgwindows.windows import Window, window_project


def random_W(variables, rng: random.Random, degree: int = 4, density: float = 0.6,
             require_mixed: bool = False) -> GaugedModel:
    """Model on ``variables`` with a random W of bidegree (0, 2)."""
    m = GaugedModel.from_spec(variables, "0")
    table = m.table
    ys = decompose(m).y_indices
    monos = [mm for mm in graded_basis(0, 2, degree, table) if any(mm[i] for i in ys)]
    for _ in range(50):
        terms = {mm: Fraction(rng.choice([-3, -2, -1, 1, 2, 3])) for mm in monos if rng.random() < density}
        if not terms:
            continue
        mixed = any(sum(1 for i in ys if mm[i]) > 1 for mm in terms)
        if require_mixed and not mixed:
            continue
        return GaugedModel(table, Poly(terms, table), "random")
    raise RuntimeError("could not draw a superpotential")


SPLIT_MODELS = [
    [("x", 2, 0), ("y1", -1, 1), ("y2", -1, 1)],
    [("x1", 2, 0), ("x2", 2, 0), ("y1", -1, 1), ("y2", -1, 1), ("y3", -1, 1), ("y4", -1, 1)],
    [("x1", 2, 0), ("x2", 1, 1), ("y1", -1, 1), ("y2", -1, 1), ("y3", -1, 1)],
]


def random_closed(A: Brane, B: Brane, rng: random.Random, bound: int = 3):
    space = MorphismSpace(A, B, 0, Space.STACK, bound)
    return random_closed_map(space, rng)


def window_pool(model: GaugedModel, t: int = 0, bound: int | None = None) -> list[Brane]:
    """In-window branes on the plus phase: projected spherical twists and their shifts."""
    w = Window.of(model, t)
    S = build_spherical(split_W(model), 0)
    pool = []
    for s in range(t - w.width, t + w.width):
        P = window_project(twist_shift(S, s, 0), w, Space.PLUS, bound, certify=False).brane
        if P.rank:
            pool.append(P)
    pool += [twist_shift(P, 0, 1) for P in pool[:2]]
    return pool


def random_window_brane(pool: list[Brane], rng: random.Random) -> Brane:
    """A pool member or the cone of a random closed map between two of them."""
    A, B = rng.choice(pool), rng.choice(pool)
    if rng.random() < 0.5:
        return A
    F = random_closed(A, B, rng)
    if F is None:
        return A
    return cone(F)
