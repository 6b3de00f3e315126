"""Commitment design: maximise an objective over plausible leader actions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cst import SymbolicCST, cournot_cst, stackelberg_cst
from .errors import RCViolated, UnsupportedClass
from .families import DuopolyParams, duopoly_closed_forms, extreme_actions_closed_form, thresholds
from .game import GameSpec, best_response_follower, golden_max
from .intervals import IntervalUnion, Piece
from .plausibility import (check_rc, i_plausible_set, i_witness, p_plausible_set, p_witness,
                           simple_witness, simply_plausible_set)

CLASSES = ("simple", "I", "P", "all")
OBJECTIVES = ("leader", "follower", "consumer_surplus", "producer_surplus", "welfare", "custom")
ALIASES = {"cs": "consumer_surplus", "ps": "producer_surplus", "w": "welfare", "u": "leader",
           "v": "follower"}


def consumer_surplus(x, y, d: float):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return (x + y) ** 2 / 2 - d * x * y


def producer_surplus(spec: GameSpec, x, y):
    return spec.payoff_leader(x, y) + spec.payoff_follower(y, x)


def welfare(spec: GameSpec, x, y, d: float):
    return consumer_surplus(x, y, d) + producer_surplus(spec, x, y)


@dataclass(frozen=True)
class Objective:
    kind: str
    custom: Callable | None = None

    def __post_init__(self) -> None:
        kind = ALIASES.get(self.kind, self.kind)
        if kind not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        if kind == "custom" and self.custom is None:
            raise ValueError("custom objective needs a callable W(x, y)")
        object.__setattr__(self, "kind", kind)

    def evaluate(self, spec: GameSpec, x):
        x = np.asarray(x, dtype=float)
        y = np.asarray(best_response_follower(spec, x))
        d = dict(spec.params).get("d", 0.0)
        if self.kind == "leader":
            return spec.payoff_leader(x, y)
        if self.kind == "follower":
            return spec.payoff_follower(y, x)
        if self.kind == "consumer_surplus":
            return consumer_surplus(x, y, d)
        if self.kind == "producer_surplus":
            return producer_surplus(spec, x, y)
        if self.kind == "welfare":
            return welfare(spec, x, y, d)
        out = np.asarray(self.custom(x, y), dtype=float)
        if not np.all(np.isfinite(out)):
            raise ValueError("custom objective returned non-finite values")
        return out


@dataclass
class DesignSolution:
    optimal_actions: IntervalUnion
    objective_value: float
    witness_cst: SymbolicCST | None
    regime: str
    plausible_set: IntervalUnion
    closed_form: list[float] | None = None
    agrees_with_closed_form: bool | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "optimal_actions": self.optimal_actions.to_json(),
            "objective_value": self.objective_value,
            "witness_cst": self.witness_cst.to_json() if self.witness_cst is not None else None,
            "regime": self.regime,
            "plausible_set": self.plausible_set.to_json(),
            "closed_form": self.closed_form,
            "agrees_with_closed_form": self.agrees_with_closed_form,
            "notes": self.notes,
        }


def _duopoly_params(spec: GameSpec) -> DuopolyParams | None:
    if spec.name != "duopoly":
        return None
    p = dict(spec.params)
    return DuopolyParams(p["r"], p["d"])


def plausible_for_class(spec: GameSpec, cst_class: str) -> IntervalUnion:
    """Plausible leader actions for a class of structures."""
    if cst_class not in CLASSES:
        raise UnsupportedClass(f"class must be one of {CLASSES}")
    if cst_class == "simple":
        return simply_plausible_set(spec)
    if cst_class == "I":
        return i_plausible_set(spec)
    rc = check_rc(spec)
    if rc.holds:
        return p_plausible_set(spec, rc).plausible
    params = _duopoly_params(spec)
    if params is None:
        raise RCViolated("P and all classes need the regularity conditions outside the duopoly family")
    # outside the regularity conditions the duopoly closed forms give the full plausible set
    return duopoly_closed_forms(params).plausible


def _maximize_over(spec: GameSpec, obj: Objective, region: IntervalUnion, n: int = 2001):
    xs_all, vs_all = [], []
    f = lambda t: np.asarray(obj.evaluate(spec, t), dtype=float)
    for p in region:
        xs = np.array([p.lo]) if p.is_point else np.linspace(p.lo, p.hi, n)
        v = f(xs)
        xs_all.append(xs)
        vs_all.append(v)
        if xs.size > 2:
            # polish interior local maxima
            k = np.nonzero((v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:]))[0] + 1
            if k.size:
                t = golden_max(f, xs[k - 1], xs[k + 1], spec.tol.x_tol * 1e-3)
                xs_all.append(t)
                vs_all.append(f(t))
    xs, vs = np.concatenate(xs_all), np.concatenate(vs_all)
    top = float(np.max(vs))
    tie = 1e-9 * max(1.0, abs(top))
    best = np.sort(xs[vs >= top - tie])
    clusters = [[best[0]]]
    for b in best[1:]:
        if b - clusters[-1][-1] <= 1e-6:
            clusters[-1].append(b)
        else:
            clusters.append([b])
    pts = []
    for c in clusters:
        c = np.asarray(c)
        pts.append(float(c[np.argmax(f(c))]))
    return pts, top


def closed_form_solution(params: DuopolyParams, obj: Objective) -> tuple[list[float], str]:
    """Optimal actions over all structures from the duopoly propositions."""
    cf = duopoly_closed_forms(params)
    r, d = params.r, params.d
    th = thresholds(d)
    edge = params.knife_edge()
    if obj.kind == "leader":
        return [cf.stackelberg], cf.regime
    if obj.kind == "follower":
        return [cf.x_min], cf.regime
    if obj.kind in ("consumer_surplus", "welfare"):
        return [cf.x_max], cf.regime
    if obj.kind == "producer_surplus":
        xc = 1 / (3 - r - d)
        if edge >= 0:
            return [0.0, params.monopoly], "r>=d+1"
        if abs(r - th.r_dag) <= 1e-12:
            return [xc, cf.stackelberg], "r=r_dag"
        if r < th.r_dag:
            return [xc], "r<r_dag"
        return [cf.stackelberg], "r_dag<r<d+1"
    raise UnsupportedClass("no closed form for custom objectives")


def _duopoly_witness(spec: GameSpec, params: DuopolyParams, obj: Objective, x: float) -> SymbolicCST:
    X = spec.leader_space
    cf = duopoly_closed_forms(params)
    r, d = params.r, params.d
    th = thresholds(d)
    g0 = cf.gamma_zero
    unique = len(cf.cournot) == 1 and cf.cournot.pieces[0].is_point
    if obj.kind == "leader":
        return stackelberg_cst(X)
    if obj.kind == "follower":
        if unique and th.r_star < r < d + 1:
            rest = IntervalUnion(X, (Piece(0.0, 0.0), Piece(g0, X.hi, False, True)))
            return SymbolicCST(X, (IntervalUnion.interval(X, 0, g0, lo_closed=False), rest),
                               label="follower-optimal")
        return cournot_cst(X)
    if obj.kind in ("consumer_surplus", "welfare"):
        xk = cf.x_max
        xc = cf.cournot.min()
        if not unique or g0 is None or g0 >= xc:
            return SymbolicCST(X, (IntervalUnion.interval(X, X.lo, xk, hi_closed=False),
                                   IntervalUnion.interval(X, xk, X.hi)), label="consumer-optimal")
        mid = IntervalUnion.points(X, [0.0]).union(
            IntervalUnion.interval(X, g0, xk, lo_closed=False, hi_closed=False))
        return SymbolicCST(X, (IntervalUnion.interval(X, 0, g0, lo_closed=False), mid,
                               IntervalUnion.interval(X, xk, X.hi)), label="consumer-optimal")
    if obj.kind == "producer_surplus":
        if abs(x - cf.stackelberg) < 1e-6 and params.knife_edge() < 0:
            return stackelberg_cst(X)
        return cournot_cst(X)
    return _generic_witness(spec, "all", x)


def _generic_witness(spec: GameSpec, cst_class: str, x: float) -> SymbolicCST | None:
    if simply_plausible_set(spec).contains(x, spec.tol.merge_tol):
        return simple_witness(spec, x)
    if cst_class == "I":
        return i_witness(spec, x)
    if check_rc(spec).holds:
        return p_witness(spec, x)
    return i_witness(spec, x)


def solve_cdp(spec: GameSpec, objective: Objective | str, cst_class: str = "all") -> DesignSolution:
    """Maximise W(x, R_F(x)) over the plausible actions of ``cst_class``."""
    obj = objective if isinstance(objective, Objective) else Objective(objective)
    region = plausible_for_class(spec, cst_class)
    pts, top = _maximize_over(spec, obj, region)
    sol = DesignSolution(IntervalUnion.points(spec.leader_space, pts), top, None, "generic", region)
    params = _duopoly_params(spec)
    if params is not None:
        sol.regime = duopoly_closed_forms(params).regime
        if cst_class == "all" and obj.kind != "custom":
            cf_pts, regime = closed_form_solution(params, obj)
            sol.regime = regime
            sol.closed_form = cf_pts
            # at r = r_dag both candidates are reported; numerics need only hit one
            hit = [min(abs(c - p) for p in pts) <= 1e-5 for c in cf_pts]
            sol.agrees_with_closed_form = any(hit) if regime == "r=r_dag" else all(hit)
            if regime == "r=r_dag":
                sol.optimal_actions = IntervalUnion.points(spec.leader_space, cf_pts)
                sol.notes.append("boundary r = r_dag: both candidates reported")
        sol.witness_cst = _duopoly_witness(spec, params, obj, pts[0]) if cst_class == "all" \
            else _generic_witness(spec, cst_class, pts[0])
    else:
        sol.witness_cst = _generic_witness(spec, cst_class, pts[0])
        sol.notes.append("numeric solution; uniqueness not asserted")
    return sol


def extreme_plausible_actions(spec: GameSpec, cst_class: str = "all") -> tuple[float, float]:
    params = _duopoly_params(spec)
    if params is not None:
        return extreme_actions_closed_form(params, cst_class)
    s = plausible_for_class(spec, cst_class)
    return s.min(), s.max()
