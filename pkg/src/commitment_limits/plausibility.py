"""Plausible-action sets: simple, interval-cover (I) and partial (P) commitment."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cst import SymbolicCST, cournot_cst
from .equilibria import contour_set, cournot_points, cournot_set, hint_points, stackelberg_set
from .errors import RCViolated
from .game import GameSpec, best_response_follower, best_response_leader, gamma, golden_max, leader_value, partials, phi
from .intervals import IntervalUnion, Piece


@dataclass(frozen=True)
class RCReport:
    rc1: bool
    rc2: bool
    rc3: bool
    sign_u2_u12: str | None = None
    cournot: float | None = None
    follower_at_cournot: float | None = None

    @property
    def holds(self) -> bool:
        return self.rc1 and self.rc2 and self.rc3

    def to_json(self) -> dict:
        return {"rc1": self.rc1, "rc2": self.rc2, "rc3": self.rc3, "sign_u2_u12": self.sign_u2_u12,
                "cournot": self.cournot, "follower_at_cournot": self.follower_at_cournot}


def check_rc(spec: GameSpec, probe_n: int = 41) -> RCReport:
    """Sampled sign checks of the regularity conditions on an interior probe grid."""
    X, Y, tol = spec.leader_space, spec.follower_space, spec.tol
    C = cournot_set(spec)
    xc = yc = None
    rc1 = False
    if len(C) == 1 and C.pieces[0].is_point:
        xc = C.pieces[0].lo
        yc = float(best_response_follower(spec, xc))
        m = tol.merge_tol
        rc1 = X.lo + m < xc < X.hi - m and Y.lo + m < yc < Y.hi - m
    xs = np.linspace(X.lo, X.hi, probe_n + 2)[1:-1]
    ys = np.linspace(Y.lo, Y.hi, probe_n + 2)[1:-1]
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    p = partials(spec)
    s2 = np.asarray(p.u2(gx, gy)) * np.asarray(p.v2(gy, gx))
    s3 = np.asarray(p.u12(gx, gy)) * np.asarray(p.v12(gy, gx))
    rc2 = bool(np.all(s2 > tol.f_tol))
    rc3 = bool(np.all(s3 > tol.f_tol))
    sign = None
    if rc2 and rc3:
        prod = np.asarray(p.u2(gx, gy)) * np.asarray(p.u12(gx, gy))
        sign = "+" if np.median(prod) > 0 else "-"
    return RCReport(rc1, rc2, rc3, sign, xc, yc)


def _cournot_samples(spec: GameSpec) -> np.ndarray:
    pts = []
    for p in cournot_set(spec):
        pts.append(np.array([p.lo]) if p.is_point else np.linspace(p.lo, p.hi, 201))
    return np.concatenate(pts)


def simply_plausible_set(spec: GameSpec) -> IntervalUnion:
    """Actions with a Cournot action on the phi-side that pays the leader no more."""
    tol = spec.tol
    cpts = _cournot_samples(spec)
    cU = np.asarray(leader_value(spec, cpts))

    def pred(x):
        x = np.asarray(x, dtype=float)
        gap = np.asarray(phi(spec, x)) - x
        gap = np.where(np.abs(gap) <= 10 * tol.x_tol, 0.0, gap)
        ux = np.asarray(leader_value(spec, x))
        lower = cU[None, :] <= ux[:, None]
        dc = cpts[None, :] - x[:, None]
        dc = np.where(np.abs(dc) <= tol.x_tol, 0.0, dc)
        side = np.sign(gap)[:, None] * np.sign(dc) >= 0
        return np.any(lower & side, axis=1)

    return IntervalUnion.from_predicate(pred, spec.leader_space, tol.grid_n, hint_points(spec),
                                        tol.x_tol, tol.merge_tol, tol.point_width)


class _LevelSearch:
    """First/last point of a fixed set where U drops to a given level or below."""

    def __init__(self, spec: GameSpec, region: IntervalUnion, n: int):
        self.spec = spec
        xs, ids = [], []
        for k, p in enumerate(region):
            s = np.array([p.lo]) if p.is_point else np.linspace(p.lo, p.hi, n)
            xs.append(s)
            ids.append(np.full(s.size, k))
        self.xs = np.concatenate(xs) if xs else np.empty(0)
        self.ids = np.concatenate(ids) if ids else np.empty(0, dtype=int)
        self.U = np.asarray(leader_value(spec, self.xs)) if self.xs.size else np.empty(0)

    def _refine(self, good, bad, level):
        for _ in range(60):
            mid = 0.5 * (good + bad)
            ok = np.asarray(leader_value(self.spec, mid)) <= level
            good = np.where(ok, mid, good)
            bad = np.where(ok, bad, mid)
        return good

    def _first_raw(self, level):
        mask = self.U[None, :] <= level[:, None]
        has = mask.any(axis=1)
        idx = np.argmax(mask, axis=1)
        prev = np.maximum(idx - 1, 0)
        same = has & (idx > 0) & (self.ids[prev] == self.ids[idx])
        # the true first point lies in [xs[prev], xs[idx]] when same, else at xs[idx]
        return has, self.xs[np.where(same, prev, idx)], self.xs[idx], same

    def _last_raw(self, level):
        mask = self.U[None, :] <= level[:, None]
        has = mask.any(axis=1)
        n = self.xs.size
        idx = n - 1 - np.argmax(mask[:, ::-1], axis=1)
        nxt = np.minimum(idx + 1, n - 1)
        same = has & (idx < n - 1) & (self.ids[nxt] == self.ids[idx])
        return has, self.xs[idx], self.xs[np.where(same, nxt, idx)], same

    def first(self, level: np.ndarray, where: np.ndarray | None = None):
        """(exists, min) of {x in region: U(x) <= level}, one entry per level.

        Only entries flagged by ``where`` are refined past the sample bracket.
        """
        if not self.xs.size:
            return np.zeros(level.size, bool), np.full(level.size, np.nan)
        has, lo, hi, same = self._first_raw(level)
        x = hi.copy()
        sel = same if where is None else same & where
        if sel.any():
            x[sel] = self._refine(hi[sel], lo[sel], level[sel])
        return has, x

    def last(self, level: np.ndarray, where: np.ndarray | None = None):
        if not self.xs.size:
            return np.zeros(level.size, bool), np.full(level.size, np.nan)
        has, lo, hi, same = self._last_raw(level)
        x = lo.copy()
        sel = same if where is None else same & where
        if sel.any():
            x[sel] = self._refine(lo[sel], hi[sel], level[sel])
        return has, x

    def brackets(self, level: np.ndarray, at_start: bool):
        if not self.xs.size:
            e = np.full(level.size, np.nan)
            return np.zeros(level.size, bool), e, e
        has, lo, hi, _ = (self._first_raw if at_start else self._last_raw)(level)
        return has, lo, hi


def phi_regions(spec: GameSpec) -> tuple[IntervalUnion, IntervalUnion]:
    """A = {phi <= x} and B = {phi >= x}; both always contain the Cournot set."""
    tol = spec.tol
    g = lambda x: np.asarray(phi(spec, np.asarray(x, dtype=float))) - np.asarray(x, dtype=float)
    kw = dict(space=spec.leader_space, grid_n=tol.grid_n, hints=hint_points(spec), x_tol=tol.x_tol,
              merge_tol=tol.merge_tol, point_width=tol.point_width)
    C = cournot_set(spec)
    A = IntervalUnion.from_predicate(lambda x: g(x) <= 0, **kw).union(C)
    B = IntervalUnion.from_predicate(lambda x: g(x) >= 0, **kw).union(C)
    return A, B


def i_cover_bounds(spec: GameSpec, xs: np.ndarray):
    """For each x: (ok, min(LC cap A), max(LC cap B)) with LC the <=-contour at U(x)."""
    A, B = phi_regions(spec)
    n = max(spec.tol.grid_n, 2001)
    la, lb = _LevelSearch(spec, A, n), _LevelSearch(spec, B, n)
    level = np.asarray(leader_value(spec, np.asarray(xs, dtype=float)))
    ha, ma = la.first(level)
    hb, mb = lb.last(level)
    ok = ha & hb & (ma <= mb)
    return ok, ma, mb


def i_plausible_set(spec: GameSpec) -> IntervalUnion:
    """Actions implementable with an interval-cover structure."""
    tol = spec.tol
    A, B = phi_regions(spec)
    n = max(tol.grid_n, 2001)
    la, lb = _LevelSearch(spec, A, n), _LevelSearch(spec, B, n)

    def pred(x):
        level = np.atleast_1d(np.asarray(leader_value(spec, np.asarray(x, dtype=float))))
        ha, a_lo, a_hi = la.brackets(level, True)
        hb, b_lo, b_hi = lb.brackets(level, False)
        out = ha & hb & (a_hi <= b_lo)
        # sample brackets overlap: refine both ends before comparing
        open_ = ha & hb & ~out & (a_lo <= b_hi)
        if open_.any():
            _, ma = la.first(level, open_)
            _, mb = lb.last(level, open_)
            out |= open_ & (ma <= mb)
        return out

    return IntervalUnion.from_predicate(pred, spec.leader_space, tol.grid_n, hint_points(spec),
                                        tol.x_tol, tol.merge_tol, tol.point_width)


@dataclass(frozen=True)
class PResult:
    plausible: IntervalUnion
    underline_u: float
    s_set: IntervalUnion
    x_hat: float
    gamma_hat: float


def s_set(spec: GameSpec, rc: RCReport | None = None) -> IntervalUnion:
    """Actions on the Cournot side of their own gamma image."""
    rc = rc or check_rc(spec)
    if not rc.holds:
        raise RCViolated(f"regularity conditions fail: {rc.to_json()}")
    xc, tol = rc.cournot, spec.tol

    if rc.sign_u2_u12 == "+":
        def pred(x):
            x = np.asarray(x, dtype=float)
            g = gamma(spec, x, xc)
            return (x <= g) & (g <= xc)
    else:
        def pred(x):
            x = np.asarray(x, dtype=float)
            g = gamma(spec, x, xc)
            return (xc <= g) & (g <= x)

    return IntervalUnion.from_predicate(pred, spec.leader_space, tol.grid_n, hint_points(spec, [xc]),
                                        tol.x_tol, tol.merge_tol, tol.point_width)


def p_plausible_set(spec: GameSpec, rc: RCReport | None = None) -> PResult:
    """Upper contour set of the lowest payoff reachable through gamma on S."""
    rc = rc or check_rc(spec)
    S = s_set(spec, rc)
    xc = rc.cournot
    f = lambda t: np.asarray(leader_value(spec, gamma(spec, np.asarray(t, dtype=float), xc)))
    best_x, best_v = xc, float(f(np.array([xc]))[0])
    for p in S:
        if p.is_point:
            xs = np.array([p.lo])
        else:
            xs = np.linspace(p.lo, p.hi, 1001)
        v = f(xs)
        k = int(np.argmin(v))
        if v[k] < best_v:
            best_x, best_v = float(xs[k]), float(v[k])
        if xs.size > 1:
            a, b = xs[max(k - 1, 0)], xs[min(k + 1, xs.size - 1)]
            t = float(golden_max(lambda s: -f(s), np.array([a]), np.array([b]), spec.tol.x_tol * 1e-3)[0])
            vt = float(f(np.array([t]))[0])
            if vt < best_v:
                best_x, best_v = t, vt
    g_hat = float(gamma(spec, np.array([best_x]), xc)[0])
    P = contour_set(spec, best_v, ">=", extra_hints=[g_hat, xc])
    return PResult(P, best_v, S, best_x, g_hat)


# witnesses -----------------------------------------------------------------

def simple_witness(spec: GameSpec, x_star: float) -> SymbolicCST:
    """Two-interval cutoff structure implementing a simply-plausible action."""
    X = spec.leader_space
    gap = float(phi(spec, x_star)) - x_star
    if abs(gap) <= 10 * spec.tol.x_tol:
        return cournot_cst(X)
    if gap > 0:
        low = IntervalUnion.interval(X, X.lo, x_star)
        high = IntervalUnion.interval(X, x_star, X.hi, lo_closed=False)
    else:
        low = IntervalUnion.interval(X, X.lo, x_star, hi_closed=False)
        high = IntervalUnion.interval(X, x_star, X.hi)
    return SymbolicCST(X, (low, high), label="cutoff")


def i_witness(spec: GameSpec, x_star: float) -> SymbolicCST | None:
    """{x*}, [lo, x''] and [x', hi] with x' <= x'' taken from the cover bounds."""
    X = spec.leader_space
    ok, ma, mb = i_cover_bounds(spec, np.array([x_star]))
    if not ok[0]:
        return None
    a, b = float(ma[0]), float(mb[0])
    els = (IntervalUnion.points(X, [x_star]), IntervalUnion.interval(X, X.lo, max(a, b)),
           IntervalUnion.interval(X, a, X.hi))
    return SymbolicCST(X, els, label="interval cover")


def p_witness(spec: GameSpec, x_star: float, pres: PResult | None = None) -> SymbolicCST:
    """{x_hat} plus the strict upper contour set of x*, singletons elsewhere."""
    X = spec.leader_space
    pres = pres or p_plausible_set(spec)
    upper = contour_set(spec, float(leader_value(spec, x_star)), ">")
    first = IntervalUnion.points(X, [pres.x_hat]).union(upper)
    rest = first.complement()
    return SymbolicCST(X, (first,), rest, label="quasi-simple")


# diagnostics ----------------------------------------------------------------

@dataclass(frozen=True)
class LowerBoundDiagnostics:
    quasi_convex: bool
    quasi_concave: bool
    slope_product: float | None = None
    predicate: bool | None = None
    underline_u: float | None = None
    u_at_cournot: float | None = None
    observed_below: bool | None = None
    consistent: bool | None = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def quasi_verdicts(spec: GameSpec) -> tuple[bool, bool]:
    """(quasi-convex, quasi-concave) verdicts for U on the grid.

    A violation of quasi-convexity is a point exceeding, by more than f_tol,
    some point on each side of it; quasi-concavity mirrors that.
    """
    xs = np.unique(np.concatenate([spec.leader_space.linspace(spec.tol.grid_n), hint_points(spec)]))
    U = np.asarray(leader_value(spec, xs))
    ft = spec.tol.f_tol
    return not _interior_hump(U, ft), not _interior_hump(-U, ft)


def _interior_hump(V: np.ndarray, ft: float) -> bool:
    lmin = np.minimum.accumulate(V)
    rmin = np.minimum.accumulate(V[::-1])[::-1]
    inner = V[1:-1]
    return bool(np.any((inner > lmin[:-2] + ft) & (inner > rmin[2:] + ft)))


def lower_bound_diagnostics(spec: GameSpec, rc: RCReport | None = None) -> LowerBoundDiagnostics:
    qcvx, qccv = quasi_verdicts(spec)
    rc = rc or check_rc(spec)
    if not rc.holds:
        return LowerBoundDiagnostics(qcvx, qccv)
    h = 1e-5
    xc, yc = rc.cournot, rc.follower_at_cournot
    drf = (float(best_response_follower(spec, xc + h)) - float(best_response_follower(spec, xc - h))) / (2 * h)
    drl = (float(best_response_leader(spec, yc + h)) - float(best_response_leader(spec, yc - h))) / (2 * h)
    prod = drf * drl
    pres = p_plausible_set(spec, rc)
    uc = float(leader_value(spec, xc))
    below = pres.underline_u < uc - spec.tol.f_tol
    pred = prod > 0.5
    return LowerBoundDiagnostics(qcvx, qccv, prod, pred, pres.underline_u, uc, below,
                                 (not pred) or below)


# report -------------------------------------------------------------------------

@dataclass(frozen=True)
class PlausibilityReport:
    simple: IntervalUnion
    i_plausible: IntervalUnion
    rc: RCReport
    p_plausible: IntervalUnion | None = None
    underline_u: float | None = None
    s_set: IntervalUnion | None = None
    x_hat: float | None = None
    gamma_hat: float | None = None
    endpoints_closed_caveat: bool = True
    certificates: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "simple": self.simple.to_json(),
            "i_plausible": self.i_plausible.to_json(),
            "rc": self.rc.to_json(),
            "p_plausible": self.p_plausible.to_json() if self.p_plausible is not None else None,
            "underline_u": self.underline_u,
            "s_set": self.s_set.to_json() if self.s_set is not None else None,
            "x_hat": self.x_hat,
            "gamma_hat": self.gamma_hat,
            "endpoints_closed_caveat": self.endpoints_closed_caveat,
            "certificates": self.certificates,
        }
        return out


def _representatives(s: IntervalUnion) -> list[float]:
    return [p.lo if p.is_point else 0.5 * (p.lo + p.hi) for p in s]


def plausibility_report(spec: GameSpec) -> PlausibilityReport:
    simple = simply_plausible_set(spec)
    iset = i_plausible_set(spec)
    rc = check_rc(spec)
    certs = []
    for x in _representatives(simple):
        certs.append({"set": "simple", "x": x, "cst": simple_witness(spec, x).to_literal()})
    for x in _representatives(iset):
        w = i_witness(spec, x)
        if w is not None:
            certs.append({"set": "i_plausible", "x": x, "cst": w.to_literal()})
    if not rc.holds:
        return PlausibilityReport(simple, iset, rc, certificates=certs)
    pres = p_plausible_set(spec, rc)
    certs.append({"set": "p_plausible", "x": pres.x_hat, "gamma": pres.gamma_hat,
                  "underline_u": pres.underline_u})
    return PlausibilityReport(simple, iset, rc, pres.plausible, pres.underline_u, pres.s_set,
                              pres.x_hat, pres.gamma_hat, True, certs)
