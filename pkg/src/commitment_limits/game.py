"""Leader-follower game primitives.

A game is two compact action intervals plus payoffs ``u(x, y)`` for the
leader and ``v(y, x)`` for the follower (own action first).  All payoff
callables must broadcast over numpy arrays; every primitive here is
vectorised and returns a float for scalar input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BadParams, NonConcave, RCViolated

PayoffFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ActionSpace:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise BadParams(f"degenerate action space [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def linspace(self, n: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, n)


@dataclass(frozen=True)
class Tolerances:
    x_tol: float = 1e-9
    f_tol: float = 1e-10
    fd_step: float = 1e-6
    grid_n: int = 2001

    def __post_init__(self) -> None:
        if min(self.x_tol, self.f_tol, self.fd_step) <= 0 or self.grid_n < 3:
            raise BadParams("tolerances must be positive and grid_n >= 3")

    @property
    def merge_tol(self) -> float:
        return 10.0 * self.x_tol

    @property
    def point_width(self) -> float:
        # refined pieces narrower than this collapse to isolated points
        return 100.0 * self.x_tol


@dataclass(frozen=True)
class Partials:
    """Partial derivatives.

    Leader partials are evaluated at ``(x, y)``.  Follower partials are
    evaluated at ``(y, x)``: ``v1`` is the follower's own-action derivative
    and ``v2`` the derivative in the leader's action.
    """

    u1: PayoffFn
    u2: PayoffFn
    u11: PayoffFn
    u12: PayoffFn
    v1: PayoffFn
    v2: PayoffFn
    v11: PayoffFn
    v12: PayoffFn


@dataclass(frozen=True, eq=False)
class GameSpec:
    leader_space: ActionSpace
    follower_space: ActionSpace
    payoff_leader: PayoffFn
    payoff_follower: PayoffFn
    analytic_partials: Optional[Partials] = None
    tol: Tolerances = field(default_factory=Tolerances)
    name: str = "custom"
    params: tuple = ()
    landmarks: tuple = ()
    check_concavity: bool = True

    def __post_init__(self) -> None:
        if self.check_concavity:
            validate_concavity(self)

    def describe(self) -> dict:
        return {"family": self.name, **dict(self.params)}


def constant(c: float) -> PayoffFn:
    """A partial that is constant in both arguments, broadcast to their shape."""

    def fn(a, b):
        return np.full(np.broadcast(np.asarray(a), np.asarray(b)).shape, float(c))

    return fn


def _arr(x) -> tuple[np.ndarray, bool]:
    a = np.asarray(x, dtype=float)
    return a, a.ndim == 0


def _out(a: np.ndarray, scalar: bool):
    return float(a) if scalar else a


def numeric_partials(spec: GameSpec) -> Partials:
    """Central finite differences of the payoffs (used when no analytic partials)."""
    u, v = spec.payoff_leader, spec.payoff_follower
    h = spec.tol.fd_step
    h2 = max(h, 1e-4 * min(spec.leader_space.width, spec.follower_space.width))

    def d1(f, first: bool) -> PayoffFn:
        if first:
            return lambda a, b: (f(a + h, b) - f(a - h, b)) / (2 * h)
        return lambda a, b: (f(a, b + h) - f(a, b - h)) / (2 * h)

    def d11(f) -> PayoffFn:
        return lambda a, b: (f(a + h2, b) - 2 * f(a, b) + f(a - h2, b)) / h2**2

    def d12(f) -> PayoffFn:
        return lambda a, b: (
            f(a + h2, b + h2) - f(a + h2, b - h2) - f(a - h2, b + h2) + f(a - h2, b - h2)
        ) / (4 * h2**2)

    return Partials(
        u1=d1(u, True), u2=d1(u, False), u11=d11(u), u12=d12(u),
        v1=d1(v, True), v2=d1(v, False), v11=d11(v), v12=d12(v),
    )


def partials(spec: GameSpec) -> Partials:
    return spec.analytic_partials or numeric_partials(spec)


def validate_concavity(spec: GameSpec, n: int = 21) -> None:
    """Reject specs whose own-action second partials are not negative on a probe grid."""
    xs = spec.leader_space.linspace(n)
    ys = spec.follower_space.linspace(n)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    p = partials(spec)
    u11 = np.asarray(p.u11(X, Y))
    v11 = np.asarray(p.v11(Y, X))
    if not (np.all(np.isfinite(u11)) and np.all(np.isfinite(v11))):
        raise NonConcave("second partials are not finite on the probe grid")
    if np.any(u11 >= 0) or np.any(v11 >= 0):
        raise NonConcave("own-action payoffs must be strictly concave (u11 < 0, v11 < 0)")


def _maximize(f, df, d2f, lo: float, hi: float, shape, tol: Tolerances) -> np.ndarray:
    """Maximise concave maps ``t -> f(t)`` elementwise over [lo, hi].

    ``f``/``df``/``d2f`` take an array of shape ``shape`` of candidate points.
    With a derivative the bracket is bisected on its sign and finished with a
    Newton step; otherwise golden-section search is used.
    """
    a = np.full(shape, lo, dtype=float)
    b = np.full(shape, hi, dtype=float)
    steps = int(math.ceil(math.log2((hi - lo) / (tol.x_tol * 1e-3)))) + 1
    if df is not None:
        at_lo = np.asarray(df(a)) <= 0
        at_hi = (np.asarray(df(b)) >= 0) & ~at_lo
        for _ in range(steps):
            m = 0.5 * (a + b)
            up = np.asarray(df(m)) > 0
            a = np.where(up, m, a)
            b = np.where(up, b, m)
        t = 0.5 * (a + b)
        if d2f is not None:
            curv = np.asarray(d2f(t))
            if np.any(curv > tol.f_tol):
                raise NonConcave("positive own second derivative at a best response")
            with np.errstate(divide="ignore", invalid="ignore"):
                newton = t - np.asarray(df(t)) / curv
            ok = np.isfinite(newton) & (np.abs(newton - t) <= 2 * (b - a) + 1e-15)
            t = np.where(ok, np.clip(newton, lo, hi), t)
        return np.where(at_lo, lo, np.where(at_hi, hi, t))

    probe = np.linspace(0.0, 1.0, 9)
    vals = np.stack([np.asarray(f(np.full(shape, lo + s * (hi - lo)))) for s in probe])
    second = vals[2:] - 2 * vals[1:-1] + vals[:-2]
    if np.any(second > tol.f_tol * max(1.0, float(np.max(np.abs(vals))))):
        raise NonConcave("positive second difference in an own payoff")
    return golden_max(f, a, b, tol.x_tol * 1e-3)


def golden_max(f, a, b, xatol: float) -> np.ndarray:
    """Elementwise golden-section maximiser, endpoints included as candidates.

    Exact for unimodal maps; for others it returns a local maximiser.
    """
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    lo, hi = a.copy(), b.copy()
    width = float(np.max(b - a)) if a.size else 0.0
    iters = int(math.ceil(math.log(max(width, xatol) / xatol) / -math.log(_INV_GOLDEN))) + 2
    for _ in range(iters):
        c = b - _INV_GOLDEN * (b - a)
        d = a + _INV_GOLDEN * (b - a)
        left = np.asarray(f(c)) >= np.asarray(f(d))
        b = np.where(left, d, b)
        a = np.where(left, a, c)
    t = 0.5 * (a + b)
    cands = np.stack([lo, hi, t])
    cvals = np.stack([np.asarray(f(cands[k])) for k in range(3)])
    return np.take_along_axis(cands, np.argmax(cvals, axis=0)[None], axis=0)[0]


def best_response_follower(spec: GameSpec, x):
    """R_F(x): the follower's unique best response."""
    xa, sc = _arr(x)
    p = spec.analytic_partials
    ys = spec.follower_space
    res = _maximize(
        lambda y: spec.payoff_follower(y, xa),
        (lambda y: p.v1(y, xa)) if p else None,
        (lambda y: p.v11(y, xa)) if p else None,
        ys.lo, ys.hi, xa.shape, spec.tol,
    )
    return _out(res, sc)


def best_response_leader(spec: GameSpec, y):
    """R_L(y): the leader's unique best response to a follower action."""
    ya, sc = _arr(y)
    p = spec.analytic_partials
    xs = spec.leader_space
    res = _maximize(
        lambda x: spec.payoff_leader(x, ya),
        (lambda x: p.u1(x, ya)) if p else None,
        (lambda x: p.u11(x, ya)) if p else None,
        xs.lo, xs.hi, ya.shape, spec.tol,
    )
    return _out(res, sc)


def phi(spec: GameSpec, x):
    """R_L(R_F(x)); its fixed points are the Cournot actions."""
    return best_response_leader(spec, best_response_follower(spec, x))


def leader_value(spec: GameSpec, x):
    """U(x) = u(x, R_F(x))."""
    xa, sc = _arr(x)
    y = np.asarray(best_response_follower(spec, xa))
    return _out(np.asarray(spec.payoff_leader(xa, y), dtype=float), sc)


def eta(spec: GameSpec, x_tilde, x):
    """Gain from deviating to ``x_tilde`` while the follower best-responds to ``x``."""
    xt = np.asarray(x_tilde, dtype=float)
    xa = np.asarray(x, dtype=float)
    y = np.asarray(best_response_follower(spec, xa))
    res = np.asarray(spec.payoff_leader(xt, y) - spec.payoff_leader(xa, y), dtype=float)
    # exact zero on the diagonal regardless of rounding
    res = np.where(np.broadcast_to(xt == xa, res.shape), 0.0, res)
    return float(res) if res.ndim == 0 else res


def gamma(spec: GameSpec, x, cournot):
    """The far-side root of eta(., x), with boundary fallbacks.

    ``cournot`` is the unique Cournot action (a float), or an interval union
    that must hold exactly one point.
    """
    if hasattr(cournot, "pieces"):
        pts = [p for p in cournot.pieces]
        if len(pts) != 1 or pts[0].hi - pts[0].lo > spec.tol.merge_tol:
            raise RCViolated("gamma needs a unique Cournot action")
        cournot = 0.5 * (pts[0].lo + pts[0].hi)
    xc = float(cournot)
    xa, sc = _arr(x)
    xa = np.atleast_1d(xa)
    X = spec.leader_space
    y = np.asarray(best_response_follower(spec, xa))
    peak = np.asarray(best_response_leader(spec, y))
    base = np.asarray(spec.payoff_leader(xa, y))

    def g(t):
        return np.asarray(spec.payoff_leader(t, y)) - base

    right = xa < xc
    bound = np.where(right, X.hi, X.lo)
    near = np.where(right, np.maximum(peak, xa), np.minimum(peak, xa))
    g_bound = g(bound)
    no_root = g_bound > 0
    a, b = near.copy(), bound.copy()  # g(a) >= 0 > g(b) on rooted entries
    for _ in range(80):
        m = 0.5 * (a + b)
        pos = g(m) >= 0
        a = np.where(pos, m, a)
        b = np.where(pos, b, m)
    root = np.where(g_bound == 0, bound, 0.5 * (a + b))
    out = np.where(no_root, bound, root)
    out = np.where(xa == xc, xc, out)
    return float(out[0]) if sc else out
