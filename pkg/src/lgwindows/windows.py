"""Grade-restriction windows, projection into a window, transport and monodromy.

A window of width ``d`` starting at ``t`` admits the twists ``t .. t+d-1``.
Projection replaces out-of-window summands using twisted Koszul (Euler)
complexes on the side variables, then perturbs the Koszul differential
grade by grade until the curvature identity holds again.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations

from .brane import (Brane, Morphism, Summand, identity, is_closed, mat_add, mat_identity, mat_mul,
                    mat_scale, mat_to_strings, require_brane)
from .certificates import (CertificateError, ChartContraction, LocalEquivalence, chart_contraction,
                           identity_certificate)
from .cohom import CohomologyTable, check_concentration, hom_homology
from .homspace import BoundError, ConcentrationError, MorphismSpace, morphism_vector, solve_in
from .model import GaugedModel, ModelError, Space, decompose, side_indices
from .poly import Poly


class WindowError(ValueError):
    pass


class ProjectionBoundError(BoundError):
    """The perturbation solve had no solution at this bound; raise the bound."""


def default_bound(model: GaugedModel) -> int:
    env = os.environ.get("LGWINDOWS_BOUND")
    if env:
        return int(env)
    return 2 * decompose(model).d + max(model.W.total_degree(), 0)


@dataclass(frozen=True)
class Window:
    t: int
    width: int

    @classmethod
    def of(cls, model: GaugedModel, t: int) -> "Window":
        d = decompose(model).d
        if d <= 0:
            raise WindowError("the model has no positive weights, so no windows")
        return cls(t, d)

    @property
    def twists(self) -> range:
        return range(self.t, self.t + self.width)

    def __contains__(self, k: int) -> bool:
        return self.t <= k < self.t + self.width


def in_window(E: Brane, w: Window) -> bool:
    return all(s.k in w for s in E.summands)


# ---------------------------------------------------------- exterior algebra
def subsets(indices) -> list[tuple[int, ...]]:
    """All subsets, by size then lexicographically."""
    idx = sorted(indices)
    return [J for r in range(len(idx) + 1) for J in combinations(idx, r)]


def koszul_sign(i: int, J) -> int:
    """Sign of moving ``e_i`` past the elements of ``J`` smaller than ``i``."""
    return -1 if sum(1 for j in J if j < i) % 2 else 1


def _gauge(model, J):
    return sum(model.table.gauge[i] for i in J)


def _rshift(model, J):
    return sum(1 - model.table.r[i] for i in J)


# ------------------------------------------------------------- projection
@dataclass
class ProjectionStep:
    """One replacement of the summands at an extreme twist."""

    twist: int
    kind: str  # "resolution" (map new -> old) or "coresolution" (old -> new)
    map: Morphism
    perturbation: list[Morphism]
    local: LocalEquivalence | None = None

    def failures(self) -> list[str]:
        out = []
        if self.map.charge or not is_closed(self.map):
            out.append(f"step at twist {self.twist}: map is not closed of charge 0")
        if self.local is not None:
            out += [f"step at twist {self.twist}: {f}" for f in self.local.failures()]
        return out

    def to_dict(self) -> dict:
        return {
            "twist": self.twist,
            "kind": self.kind,
            "map": mat_to_strings(self.map.matrix),
            "perturbation": [mat_to_strings(D.matrix) for D in self.perturbation],
            "local_certificate": self.local.to_dict() if self.local else None,
        }


@dataclass
class ProjectionCertificate:
    """Chain of closed maps, each an equivalence on the phase, linking input and output.

    Resolution steps point from the new brane to the old one and
    coresolution steps the other way; each carries a chart contraction of
    its cone when certification was requested.
    """

    source: Brane
    result: Brane
    steps: list[ProjectionStep] = field(default_factory=list)

    def failures(self) -> list[str]:
        out = []
        current = self.source
        for st in self.steps:
            old, new = (st.map.target, st.map.source) if st.kind == "resolution" else (st.map.source, st.map.target)
            if not old.same_data(current):
                out.append(f"step at twist {st.twist} does not start from the previous brane")
            out += st.failures()
            current = new
        if not current.same_data(self.result):
            out.append("chain does not end at the result")
        return out

    def verify(self) -> bool:
        return not self.failures()

    @property
    def certified(self) -> bool:
        return all(st.local is not None for st in self.steps)

    def to_dict(self) -> dict:
        return {"kind": "projection_chain", "steps": [s.to_dict() for s in self.steps], "verified": self.verify()}


@dataclass
class ProjectionResult:
    brane: Brane
    certificate: ProjectionCertificate
    perturbation_log: list[tuple[int, Morphism]]

    def to_dict(self) -> dict:
        return {
            "brane": self.brane.to_dict(),
            "certificate": self.certificate.to_dict(),
            "perturbation_log": [{"grade": g, "D": mat_to_strings(D.matrix)} for g, D in self.perturbation_log],
        }


def _koszul_block(model, side_vars, sigma: Summand, resolution: bool):
    """Summands, grades and internal differential entries of one replacement block.

    Returns ``(summands, grades, entries, link)``: ``entries`` are
    ``(target J, source J, poly)`` within the block, and ``link`` lists
    ``(J, poly)`` connecting the block to ``sigma``.
    """
    table = model.table
    U = tuple(sorted(side_vars))
    k, n = sigma
    var = {i: table.var(table.names[i]) for i in U}
    if resolution:
        Js = [J for J in subsets(U) if J]
        summ = {J: Summand(k - _gauge(model, J), n + _rshift(model, J) - 1) for J in Js}
        grade = {J: -(len(J) - 1) for J in Js}
        link = [((i,), var[i]) for i in U]
    else:
        Js = [J for J in subsets(U) if J != U]
        kt, nt = k + _gauge(model, U), n + 1 - _rshift(model, U)
        summ = {J: Summand(kt - _gauge(model, J), nt + _rshift(model, J)) for J in Js}
        grade = {J: len(U) - 1 - len(J) for J in Js}
        link = [(tuple(j for j in U if j != i), var[i] * koszul_sign(i, U)) for i in U]
    entries = []
    for J in Js:
        for i in J:
            K = tuple(j for j in J if j != i)
            if K in summ:
                entries.append((K, J, var[i] * koszul_sign(i, J)))
    return Js, summ, grade, entries, link


def _poly_matrix(n_rows, n_cols, table):
    z = table.zero()
    return [[z] * n_cols for _ in range(n_rows)]


def _freeze(rows):
    return tuple(tuple(r) for r in rows)


def _replace_extreme(E: Brane, side: Space, k_star: int, below: bool, bound: int, certify: bool,
                     cert_bound: int) -> ProjectionStep:
    model = E.model
    table = model.table
    U = side_indices(model, side)
    resolution = (side is Space.PLUS) != below
    sig = [a for a, s in enumerate(E.summands) if s.k == k_star]
    keep = [a for a, s in enumerate(E.summands) if s.k != k_star]
    summands = [E.summands[a] for a in keep]
    grades = [0] * len(keep)
    blocks = []
    for a in sig:
        Js, summ, grade, entries, link = _koszul_block(model, U, E.summands[a], resolution)
        pos = {J: len(summands) + r for r, J in enumerate(Js)}
        summands += [summ[J] for J in Js]
        grades += [grade[J] for J in Js]
        blocks.append((a, pos, entries, link))
    N = len(summands)
    partial = _poly_matrix(N, N, table)
    for _a, pos, entries, _link in blocks:
        for K, J, p in entries:
            partial[pos[K]][pos[J]] = p
    flat = Brane(model, side, tuple(summands), _freeze(partial))

    # the comparison map: new -> old for resolutions, old -> new otherwise
    if resolution:
        q = _poly_matrix(E.rank, N, table)
        for r, a in enumerate(keep):
            q[a][r] = table.one()
        for a, pos, _e, link in blocks:
            for J, p in link:
                q[a][pos[J]] = p
    else:
        q = _poly_matrix(N, E.rank, table)
        for r, a in enumerate(keep):
            q[r][a] = table.one()
        for a, pos, _e, link in blocks:
            for J, p in link:
                q[pos[J]][a] = p
    q = _freeze(q)

    # D_0: grade preserving, commutes with the Koszul differential, lifts d_E
    space = MorphismSpace(flat, flat, 1, Space.STACK, bound, allowed=lambda i, j: grades[i] == grades[j])
    cols = []
    for key in space.basis:
        col = {("c",) + k: v for k, v in space.d_column(key).items()}
        lift = space.left_column(q, key) if resolution else space.right_column(q, key)
        col.update({("l",) + k: v for k, v in lift.items()})
        cols.append(col)
    target = mat_mul(E.d, q, table) if resolution else mat_mul(q, E.d, table)
    rhs = {("l",) + k: v for k, v in morphism_vector(target).items()}
    D0 = solve_in(space, cols, rhs)
    if D0 is None:
        raise ProjectionBoundError(f"no lift of the differential at twist {k_star} with bound {bound}; raise bound")
    D = D0.matrix
    log = [D0]
    spread = max(grades) - min(grades)
    W_id = mat_identity(N, table, 1)
    W_id = tuple(tuple(e * model.W for e in row) for row in W_id)
    for k in range(spread + 1):
        X = mat_add(W_id, mat_scale(mat_mul(D, D, table), -1))
        rhs = {key: v for key, v in morphism_vector(X).items() if grades[key[0]] == grades[key[1]] - k}
        if not rhs:
            continue
        sp = MorphismSpace(flat, flat, 1, Space.STACK, bound,
                           allowed=lambda i, j, k=k: grades[i] == grades[j] - k - 1)
        Dk = solve_in(sp, sp.d_columns(), rhs)
        if Dk is None:
            raise ProjectionBoundError(
                f"no curvature correction in grade {-k - 1} at twist {k_star} with bound {bound}; raise bound")
        D = mat_add(D, Dk.matrix)
        log.append(Dk)
    new = Brane(model, side, tuple(summands), mat_add(flat.d, D))
    # exact post-hoc check, independent of the truncation used above
    require_brane(new)
    phi = Morphism(new, E, 0, q) if resolution else Morphism(E, new, 0, q)
    if not is_closed(phi):
        raise CertificateError(f"comparison map at twist {k_star} is not closed")
    step = ProjectionStep(k_star, "resolution" if resolution else "coresolution", phi, log)
    if certify:
        step.local = LocalEquivalence(phi, chart_contraction(_cone(phi), side, cert_bound))
    return step


def _cone(phi):
    from .brane import cone

    return cone(phi)


def window_project(E: Brane, w: Window, side, bound: int | None = None, certify: bool = True,
                   cert_bound: int | None = None, max_steps: int = 200) -> ProjectionResult:
    """Project ``E`` into the window on ``side``.

    The extreme out-of-window twist is replaced each round (below first),
    which strictly shrinks the distance to the window.
    """
    side = Space.parse(side)
    if side is Space.STACK:
        raise WindowError("projection needs a phase (plus or minus)")
    side_indices(E.model, side)
    require_brane(E)
    if bound is None:
        bound = default_bound(E.model)
    if cert_bound is None:
        cert_bound = bound + 2
    current = E.with_space(side)
    cert = ProjectionCertificate(current, current)
    log: list[tuple[int, Morphism]] = []
    for _ in range(max_steps):
        low = [s.k for s in current.summands if s.k < w.t]
        high = [s.k for s in current.summands if s.k >= w.t + w.width]
        if not low and not high:
            break
        below = bool(low)
        k_star = min(low) if below else max(high)
        step = _replace_extreme(current, side, k_star, below, bound, certify, cert_bound)
        cert.steps.append(step)
        for g, D in enumerate(step.perturbation):
            log.append((-g, D))
        current = step.map.source if step.kind == "resolution" else step.map.target
    else:
        raise WindowError("projection did not terminate")
    cert.result = current
    return ProjectionResult(current, cert, log)


def euler_resolve(model: GaugedModel, k: int, w: Window, side, n: int = 0, bound: int | None = None,
                  certify: bool = True) -> ProjectionResult:
    """In-window complex isomorphic to ``O(k)[n]`` on ``side`` (for the model with ``W = 0``)."""
    side = Space.parse(side)
    flat = GaugedModel(model.table, model.table.zero(), model.name + "|W=0")
    E = Brane(flat, side, (Summand(k, n),), ((flat.table.zero(),),))
    return window_project(E, w, side, bound if bound is not None else 2 * w.width, certify)


# -------------------------------------------------------------- transport
def transport(E: Brane, w: Window, from_side) -> Brane:
    """The same data regarded as a brane on the opposite phase."""
    side = Space.parse(from_side)
    if not in_window(E, w):
        raise WindowError(f"brane twists {E.twists} are not in the window {list(w.twists)}")
    return E.with_space(side.opposite())


@dataclass
class MonodromyResult:
    brane: Brane
    projection: ProjectionResult
    t: int

    def to_dict(self) -> dict:
        return {"t": self.t, "brane": self.brane.to_dict(), "projection": self.projection.to_dict()}


def monodromy(E: Brane, t: int, bound: int | None = None, certify: bool = True) -> MonodromyResult:
    """Go around once: transport at window ``t``, re-project at ``t + 1`` on the minus side, come back."""
    w = Window.of(E.model, t)
    if E.space is not Space.PLUS:
        raise WindowError("monodromy starts from a brane on the plus phase")
    M = transport(E, w, Space.PLUS)
    w1 = Window.of(E.model, t + 1)
    proj = window_project(M, w1, Space.MINUS, bound, certify)
    return MonodromyResult(transport(proj.brane, w1, Space.MINUS), proj, t)


def inverse_monodromy(E: Brane, t: int, bound: int | None = None, certify: bool = True) -> MonodromyResult:
    """Undo :func:`monodromy`: transport at ``t + 1``, project at ``t`` on the minus side, come back."""
    w1 = Window.of(E.model, t + 1)
    M = transport(E, w1, Space.PLUS)
    proj = window_project(M, Window.of(E.model, t), Space.MINUS, bound, certify)
    return MonodromyResult(transport(proj.brane, Window.of(E.model, t), Space.MINUS), proj, t)


# -------------------------------------------------------------------- Ext
def ext(E: Brane, F: Brane, bound: int, proj_bound: int | None = None) -> CohomologyTable:
    """Hom homology on any space; on a phase the source is first projected into a
    window adapted to the target so that every entry is concentrated in degree 0."""
    try:
        check_concentration(E, F)
        return hom_homology(E, F, bound)
    except ConcentrationError:
        pass
    d = decompose(E.model).d
    if E.space is Space.PLUS:
        t = min(F.twists)
    else:
        t = max(F.twists) - d + 1
    P = window_project(E, Window(t, d), E.space, proj_bound, certify=False)
    return hom_homology(P.brane, F, bound)
