"""The Koszul spherical brane, splittings of W, and the twist comparison."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .brane import (Brane, BraneError, Morphism, Summand, d_hom, identity, is_closed, mat_to_strings,
                    require_brane, twist_shift)
from .certificates import (HomotopyCertificate, LocalEquivalence, certificate_from_map, chart_contraction,
                           find_equivalence)
from .cohom import CohomologyTable, check_concentration, hom_homology, line_cohomology, PROJVX
from .homspace import BoundError, ConcentrationError, MorphismSpace, morphism_vector, random_closed_map
from .model import GaugedModel, Space, decompose, require_valid
from .poly import Poly, format_poly
from .windows import (MonodromyResult, Window, WindowError, _cone, default_bound, in_window, koszul_sign,
                      monodromy, subsets, window_project)

MAX_Y = 12


class SplittingError(ValueError):
    pass


def _no_z(model: GaugedModel):
    dec = decompose(model)
    if dec.z_indices:
        names = [model.table.names[i] for i in dec.z_indices]
        raise SplittingError(f"variables of gauge weight 0 are not supported here: {names}")
    if not dec.y_indices:
        raise SplittingError("the model has no negative-weight variables")
    if len(dec.y_indices) > MAX_Y:
        raise SplittingError(f"more than {MAX_Y} negative-weight variables")
    return dec


@dataclass(frozen=True)
class Splitting:
    """``W = sum_i y_i f_i`` over the negative-weight variables, in table order."""

    model: GaugedModel
    f: tuple[Poly, ...]

    @property
    def y_indices(self) -> tuple[int, ...]:
        return decompose(self.model).y_indices

    def failures(self) -> list[str]:
        ys = self.y_indices
        t = self.model.table
        out = []
        if len(self.f) != len(ys):
            return [f"expected {len(ys)} components, got {len(self.f)}"]
        total = t.zero()
        for i, fi in zip(ys, self.f):
            total = total + t.var(t.names[i]) * fi
            if not fi.is_bihomogeneous(-t.gauge[i], 2 - t.r[i]):
                out.append(f"f for {t.names[i]} is not of bidegree ({-t.gauge[i]}, {2 - t.r[i]})")
        if total != self.model.W:
            out.append("sum of y_i f_i differs from W")
        return out

    def verify(self) -> bool:
        return not self.failures()

    def to_dict(self) -> dict:
        names = self.model.table.names
        return {names[i]: format_poly(fi) for i, fi in zip(self.y_indices, self.f)}


def split_W(model: GaugedModel, order: str = "lowest") -> Splitting:
    """Greedy splitting: each monomial of W goes to its lowest (or highest) index y-variable."""
    dec = _no_z(model)
    t = model.table
    ys = dec.y_indices
    parts = {i: {} for i in ys}
    for m, c in sorted(model.W.terms.items()):
        present = [i for i in ys if m[i] > 0]
        if not present:
            raise SplittingError(f"monomial {format_poly(Poly({m: c}, t))} of W has no y-variable")
        i = present[0] if order == "lowest" else present[-1]
        q = list(m)
        q[i] -= 1
        parts[i][tuple(q)] = c
    return Splitting(model, tuple(Poly(parts[i], t) for i in ys))


def splitting_from_strings(model: GaugedModel, comps) -> Splitting:
    """Splitting from a list (in y order) or a ``{name: poly}`` mapping."""
    ys = decompose(model).y_indices
    names = model.table.names
    if isinstance(comps, dict):
        comps = [comps.get(names[i], "0") for i in ys]
    s = Splitting(model, tuple(model.poly(str(c)) for c in comps))
    bad = s.failures()
    if bad:
        raise SplittingError("; ".join(bad))
    return s


# ---------------------------------------------------------- spherical brane
def spherical_summands(model: GaugedModel, t: int) -> tuple[list, dict]:
    ys = decompose(model).y_indices
    tab = model.table
    Js = subsets(ys)
    summ = [Summand(t - sum(tab.gauge[i] for i in J), sum(1 - tab.r[i] for i in J)) for J in Js]
    return Js, summ


def build_spherical(split: Splitting, t: int = 0, space=Space.PLUS) -> Brane:
    """``d_S = sum_i y_i (contract e_i) + f_i (wedge e_i)`` on the exterior algebra of the y's."""
    bad = split.failures()
    if bad:
        raise SplittingError("; ".join(bad))
    model = split.model
    _no_z(model)
    tab = model.table
    Js, summ = spherical_summands(model, t)
    pos = {J: a for a, J in enumerate(Js)}
    z = tab.zero()
    rows = [[z] * len(Js) for _ in Js]
    f = dict(zip(split.y_indices, split.f))
    for J in Js:
        for i in split.y_indices:
            s = koszul_sign(i, J)
            if i in J:
                K = tuple(j for j in J if j != i)
                rows[pos[K]][pos[J]] = tab.var(tab.names[i]) * s
            else:
                K = tuple(sorted(J + (i,)))
                rows[pos[K]][pos[J]] = f[i] * s
    return Brane(model, Space.parse(space), tuple(summ), tuple(tuple(r) for r in rows))


# ----------------------------------------------------- splitting isomorphisms
def _elementary_map(S: Brane, T: Brane, Js, a: int, b: int, g: Poly, sign: int) -> Morphism:
    """``id + sign * g * (wedge e_a)(wedge e_b)`` from ``S`` to ``T``."""
    tab = S.table
    pos = {J: r for r, J in enumerate(Js)}
    rows = [[tab.one() if r == c else tab.zero() for c in range(len(Js))] for r in range(len(Js))]
    for J in Js:
        if a in J or b in J:
            continue
        Jb = tuple(sorted(J + (b,)))
        Jab = tuple(sorted(Jb + (a,)))
        s = koszul_sign(b, J) * koszul_sign(a, Jb) * sign
        rows[pos[Jab]][pos[J]] = g * s
    return Morphism(S, T, 0, tuple(tuple(r) for r in rows))


def elementary_moves(a: Splitting, b: Splitting) -> list[tuple[int, int, Poly]]:
    """Moves ``(p, q, g)`` with ``p < q``: ``f_p += y_q g``, ``f_q -= y_p g``, taking ``a`` to ``b``.

    The difference ``b - a`` is a syzygy of the y's; it is cleared from the
    last component down, dividing each term by its lowest y-variable.
    """
    if a.model != b.model:
        raise SplittingError("splittings of different models")
    ys = a.y_indices
    tab = a.model.table
    delta = {i: fb - fa for i, fa, fb in zip(ys, a.f, b.f)}
    check = tab.zero()
    for i in ys:
        check = check + tab.var(tab.names[i]) * delta[i]
    if not check.is_zero():
        raise SplittingError("no chain found: the splittings are of different superpotentials")
    moves = []
    for qpos in range(len(ys) - 1, 0, -1):
        q = ys[qpos]
        per = {}
        for m, c in delta[q].terms.items():
            lower = [p for p in ys[:qpos] if m[p] > 0]
            if not lower:
                raise SplittingError("no chain found: difference is not a Koszul syzygy")
            p = lower[0]
            mm = list(m)
            mm[p] -= 1
            per.setdefault(p, {})[tuple(mm)] = -c
        for p in sorted(per):
            g = Poly(per[p], tab)
            moves.append((p, q, g))
            delta[p] = delta[p] - tab.var(tab.names[q]) * g
            delta[q] = delta[q] + tab.var(tab.names[p]) * g
    if any(not v.is_zero() for v in delta.values()):
        raise SplittingError("no chain found: residual difference in the first component")
    return moves


def splitting_iso(a: Splitting, b: Splitting, t: int = 0, space=Space.PLUS) -> tuple[Morphism, Morphism]:
    """Mutually inverse closed maps ``S_a -> S_b`` and back, composed from elementary moves."""
    Sa = build_spherical(a, t, space)
    if a.f == b.f:
        return identity(Sa), identity(Sa)
    Js, _ = spherical_summands(a.model, t)
    fwd = identity(Sa)
    bwd = identity(Sa)
    cur = a
    S_cur = Sa
    tab = a.model.table
    for p, q, g in elementary_moves(a, b):
        f = dict(zip(cur.y_indices, cur.f))
        f[p] = f[p] + tab.var(tab.names[q]) * g
        f[q] = f[q] - tab.var(tab.names[p]) * g
        nxt = Splitting(a.model, tuple(f[i] for i in cur.y_indices))
        S_nxt = build_spherical(nxt, t, space)
        phi = _elementary_map(S_cur, S_nxt, Js, p, q, g, 1)
        psi = _elementary_map(S_nxt, S_cur, Js, p, q, g, -1)
        fwd = phi @ fwd
        bwd = bwd @ psi
        cur, S_cur = nxt, S_nxt
    Sb = build_spherical(b, t, space)
    fwd = Morphism(Sa, Sb, 0, fwd.matrix)
    bwd = Morphism(Sb, Sa, 0, bwd.matrix)
    if not (is_closed(fwd) and is_closed(bwd)):
        raise SplittingError("splitting isomorphism failed the closedness check")
    if not ((bwd @ fwd) - identity(Sa)).is_zero() or not ((fwd @ bwd) - identity(Sb)).is_zero():
        raise SplittingError("splitting isomorphism is not invertible")
    return fwd, bwd


# ----------------------------------------------------------- Homs into S(t)
def _constant_block(E: Brane, t: int):
    idx = [i for i, s in enumerate(E.summands) if s.k == t]
    c = {(i, j): E.d[i][j].constant_term() for i in idx for j in idx if E.d[i][j].constant_term()}
    return idx, c


def h_complex(E: Brane, t: int) -> tuple[list[int], list[int], dict]:
    """The finite complex computing Hom(E, S(t)) for in-window E.

    One generator per copy of ``O(t)`` in E, of charge ``n_i``; the
    differential is minus the transposed constant block of ``d_E`` with the
    parity sign.  Returns ``(indices, charges, columns)``.
    """
    idx, c = _constant_block(E, t)
    charges = [E.summands[i].n for i in idx]
    cols = {}
    for i in idx:
        sign = 1 if E.summands[i].n % 2 else -1
        cols[i] = {j: sign * v for (ii, j), v in c.items() if ii == i}
    return idx, charges, cols


def _h_homology(E: Brane, t: int) -> CohomologyTable:
    idx, charges, cols = h_complex(E, t)
    by_charge = {}
    for i, n in zip(idx, charges):
        by_charge.setdefault(n, []).append(i)
    out = CohomologyTable(bound=0, stabilized=True)
    for n, gens in by_charge.items():
        z = len(gens) - linalg.rank([cols[i] for i in gens])
        b = linalg.rank([cols[i] for i in by_charge.get(n - 1, [])])
        out.add(0, n, z - b)
    return out


def first_page(E: Brane, t: int, bound: int) -> CohomologyTable:
    """Cohomology on the projective base of the dual of E restricted to the zero section, twisted by t.

    Entries are ``(p, charge)``; no differential is applied.
    """
    out = CohomologyTable(bound=bound)
    for s in E.summands:
        tab = line_cohomology(E.model, PROJVX, t - s.k, bound)
        for (p, r), dim in tab.entries.items():
            out.add(p, r + s.n, dim)
    return out


def hom_to_spherical(E: Brane, t: int, bound: int | None = None) -> CohomologyTable:
    """Hom homology from E to S(t) on the plus phase.

    In-window branes use the finite complex of :func:`h_complex`, which is
    exact.  Others are first projected into the window at ``t``.
    """
    if E.space is not Space.PLUS:
        raise WindowError("Homs into S are computed on the plus phase")
    _no_z(E.model)
    w = Window.of(E.model, t)
    if not in_window(E, w):
        E = window_project(E, w, Space.PLUS, bound, certify=False).brane
    return _h_homology(E, t)


# ------------------------------------------------------------ classification
class Verdict(enum.Enum):
    SPHERICAL = "Spherical"
    ZERO = "Zero"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Classification:
    verdict: Verdict
    ext: CohomologyTable | None = None
    oracle: CohomologyTable | None = None
    contraction: object = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "ext": self.ext.to_dict() if self.ext else None,
            "oracle": self.oracle.to_dict() if self.oracle else None,
            "contraction": self.contraction.to_dict() if self.contraction else None,
            "note": self.note,
        }


def classify_spherical(split: Splitting, t: int = 0, bound: int | None = None) -> Classification:
    """Spherical, zero, or inconclusive on the plus phase.

    Zero needs an exact contracting homotopy on every chart.  Otherwise the
    endomorphisms of S are computed exactly after projecting S into the
    window; a total of 2 means spherical (the identity class is then
    automatically nonzero).  The truncated Hom homology of the projected
    brane is attached as an independent cross-check when it can be formed.
    """
    S = build_spherical(split, t)
    if bound is None:
        bound = default_bound(split.model)
    try:
        return Classification(Verdict.ZERO, contraction=chart_contraction(S, Space.PLUS, bound),
                              note="contracting homotopy on every chart of the plus phase")
    except BoundError:
        pass
    try:
        table = hom_to_spherical(S, t, bound)
    except BoundError as exc:
        return Classification(Verdict.INCONCLUSIVE, note=f"{exc}")
    oracle = None
    try:
        P = window_project(S, Window.of(split.model, t), Space.PLUS, bound, certify=False).brane
        oracle = hom_homology(P, S, bound)
    except (BoundError, ConcentrationError):
        pass
    if table.total == 2:
        return Classification(Verdict.SPHERICAL, table, oracle, note="End(S) is two-dimensional")
    note = "no contracting homotopy at this bound" if table.total == 0 else f"End(S) has dimension {table.total}"
    return Classification(Verdict.INCONCLUSIVE, table, oracle, note=note + "; raise bound")


# ------------------------------------------------------------- twist cone
@dataclass
class TwistCone:
    cone: Brane
    T: Brane
    epsilon: Morphism
    corrections: list[Morphism] = field(default_factory=list)


def build_twist_cone(E: Brane, t: int, bound: int | None = None, split: Splitting | None = None) -> TwistCone:
    """Cone (shifted by -1) of the closed map ``E -> T`` with ``T`` a sum of shifted copies of S(t).

    One copy per ``O(t)`` summand of E; copies are glued by the constant
    block of ``d_E``.  The map starts as the identity onto the empty-wedge
    summands and is corrected one exterior grade at a time.
    """
    require_brane(E)
    if E.space is not Space.PLUS:
        raise WindowError("the twist cone is built on the plus phase")
    model = E.model
    if not in_window(E, Window.of(model, t)):
        raise WindowError(f"brane twists {E.twists} are not in the window at {t}")
    if bound is None:
        bound = default_bound(model)
    split = split or split_W(model)
    S = build_spherical(split, t)
    idx, c = _constant_block(E, t)
    Js, _ = spherical_summands(model, t)
    tab = model.table
    m = len(Js)
    summ, grade, rows = [], [], []
    for i in idx:
        n_i = E.summands[i].n
        summ += [Summand(s.k, s.n + n_i) for s in S.summands]
        grade += [len(J) for J in Js]
    N = len(summ)
    rows = [[tab.zero()] * N for _ in range(N)]
    for a, i in enumerate(idx):
        sign = -1 if E.summands[i].n % 2 else 1
        for r in range(m):
            for s in range(m):
                rows[a * m + r][a * m + s] = S.d[r][s] * sign
        for b, j in enumerate(idx):
            if (i, j) in c:
                for r in range(m):
                    rows[a * m + r][b * m + r] = Poly.constant(c[(i, j)], tab)
    T = require_brane(Brane(model, Space.PLUS, tuple(summ), tuple(tuple(r) for r in rows)))
    eps = [[tab.zero()] * E.rank for _ in range(N)]
    for a, i in enumerate(idx):
        eps[a * m][i] = tab.one()
    eps = Morphism(E, T, 0, tuple(tuple(r) for r in eps))
    corrections = []
    top = max(grade, default=0)
    for k in range(top):
        err = {key: v for key, v in morphism_vector(d_hom(eps)).items() if grade[key[0]] == k}
        if not err:
            continue
        space = MorphismSpace(E, T, 0, Space.STACK, bound, allowed=lambda r, j, k=k: grade[r] == k + 1)
        cols = [{key: v for key, v in space.d_column(b).items() if grade[key[0]] == k} for b in space.basis]
        sol = linalg.solve(cols, {key: -v for key, v in err.items()})
        if sol is None:
            raise BoundError(f"no correction of exterior grade {k + 1} at bound {bound}; raise bound")
        corr = space.element(sol)
        corrections.append(corr)
        eps = eps + corr
    if not is_closed(eps):
        raise BraneError("twist map failed the closedness check")
    C = twist_shift(_cone(eps), 0, -1)
    require_brane(C)
    return TwistCone(C, T, eps, corrections)


@dataclass
class TwistComparison:
    monodromy: MonodromyResult
    twist: TwistCone
    certificate: HomotopyCertificate | LocalEquivalence

    def verify(self) -> bool:
        return self.certificate.verify()

    def to_dict(self) -> dict:
        return {
            "monodromy": self.monodromy.brane.to_dict(),
            "cone": self.twist.cone.to_dict(),
            "certificate": self.certificate.to_dict(),
            "verified": self.verify(),
        }


def twist_compare(E: Brane, t: int = 0, bound: int | None = None, seed: int = 0,
                  attempts: int = 6, certify_projection: bool = True) -> TwistComparison:
    """Certify that the window monodromy of E agrees with the twist cone.

    First tries a global homotopy equivalence with polynomial homotopies;
    failing that, a closed map whose cone contracts on every chart of the
    plus phase, which is an equivalence there.
    """
    if bound is None:
        bound = default_bound(E.model)
    mono = monodromy(E, t, bound, certify=certify_projection)
    tc = build_twist_cone(E, t, bound)
    A, B = mono.brane, tc.cone
    try:
        cert = find_equivalence(A, B, bound, seed=seed, attempts=attempts)
        return TwistComparison(mono, tc, cert)
    except BoundError:
        pass
    rng = random.Random(seed)
    space = MorphismSpace(A, B, 0, Space.STACK, bound)
    for _ in range(attempts):
        F = random_closed_map(space, rng)
        if F is None:
            break
        try:
            local = LocalEquivalence(F, chart_contraction(_cone(F), Space.PLUS, bound))
        except BoundError:
            continue
        return TwistComparison(mono, tc, local)
    raise BoundError(f"no equivalence between monodromy and twist cone found at bound {bound}; raise bound")
