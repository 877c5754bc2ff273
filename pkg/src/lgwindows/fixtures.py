"""Bundled regression models and branes."""
from __future__ import annotations

import re

from .brane import Brane, make_brane, require_brane
from .model import GaugedModel, ModelError, Space, require_valid


class FixtureError(KeyError):
    pass


def flop(W: bool = False) -> GaugedModel:
    if W:
        return GaugedModel.from_spec(
            [("x1", 1, 0), ("x2", 1, 0), ("y1", -1, 2), ("y2", -1, 2)], "x1*y1 + x2*y2", "flop-superpotential")
    return GaugedModel.from_spec([("x1", 1, 0), ("x2", 1, 0), ("y1", -1, 0), ("y2", -1, 0)], "0", "flop")


def orbifold(k: int) -> GaugedModel:
    """``x_1..x_k`` of weight 1, ``p`` of weight ``-k``, ``W = p * (x_1^k + ... + x_k^k)``."""
    if k < 1:
        raise ModelError("orbifold needs k >= 1")
    vars_ = [(f"x{i}", 1, 0) for i in range(1, k + 1)] + [("p", -k, 2)]
    W = " + ".join(f"p*x{i}^{k}" for i in range(1, k + 1))
    return GaugedModel.from_spec(vars_, W, f"orbifold-{k}")


def conifold_xy() -> GaugedModel:
    return GaugedModel.from_spec([("x", 1, 0), ("y", -1, 2)], "x*y", "conifold-xy")


def weighted(n: int = 3) -> GaugedModel:
    """``n`` weight-1 variables and one of weight ``-n``, W = 0 and trivial R-charge."""
    vars_ = [(f"x{i}", 1, 0) for i in range(1, n + 1)] + [("p", -n, 0)]
    return GaugedModel.from_spec(vars_, "0", f"weighted-{n}")


def _spherical(model: GaugedModel, t: int = 0) -> Brane:
    from .spherical import build_spherical, split_W

    return build_spherical(split_W(model), t)


def _flop_branes():
    m = flop()
    return m, [
        ("O(0)", make_brane(m, Space.PLUS, [(0, 0)])),
        ("O(1)", make_brane(m, Space.PLUS, [(1, 0)])),
        ("S", _spherical(m)),
    ]


def _flop_w_branes():
    m = flop(True)
    # S(0) projected into the window at 0: the O(2) summand is resolved by the Euler sequence
    inwin = make_brane(m, Space.PLUS, [(0, 0), (1, -1), (1, -1), (1, -2), (1, -2), (0, -1)], [
        ["0", "y1", "y2", "0", "0", "0"],
        ["x1", "0", "0", "-x1*y2", "-x2*y2", "0"],
        ["x2", "0", "0", "x1*y1", "x2*y1", "0"],
        ["0", "0", "1", "0", "0", "-x2"],
        ["0", "-1", "0", "0", "0", "x1"],
        ["1", "0", "0", "-y2", "y1", "0"],
    ])
    return m, [("S", _spherical(m)), ("in-window", inwin)]


def _orbifold_branes(k: int):
    m = orbifold(k)
    return m, [("S", _spherical(m))]


def _conifold_branes():
    m = conifold_xy()
    return m, [("S", _spherical(m))]


def _weighted_branes(n: int):
    m = weighted(n)
    return m, [(f"O({k})", make_brane(m, Space.PLUS, [(k, 0)])) for k in range(n)]


_REGISTRY = {
    "flop": _flop_branes,
    "flop-superpotential": _flop_w_branes,
    "conifold-xy": _conifold_branes,
}


def fixture_names() -> list[str]:
    return sorted(_REGISTRY) + ["orbifold-<k>", "weighted-<n>"]


def load_fixture_labelled(name: str) -> tuple[GaugedModel, list[tuple[str, Brane]]]:
    if name in _REGISTRY:
        model, branes = _REGISTRY[name]()
    elif m := re.fullmatch(r"orbifold(?:-(\d+))?", name):
        model, branes = _orbifold_branes(int(m.group(1) or 3))
    elif m := re.fullmatch(r"weighted(?:-(\d+))?", name):
        model, branes = _weighted_branes(int(m.group(1) or 3))
    else:
        raise FixtureError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
    require_valid(model)
    for _label, b in branes:
        require_brane(b)
    return model, branes


def load_fixture(name: str) -> tuple[GaugedModel, list[Brane]]:
    model, branes = load_fixture_labelled(name)
    return model, [b for _l, b in branes]
