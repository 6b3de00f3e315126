"""Orders on commitment structures and plausibility relative to an interval."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cst import SymbolicCST
from .equilibria import cournot_set, hint_points
from .errors import NotSimple
from .game import GameSpec, best_response_follower, leader_value, phi
from .intervals import IntervalUnion, Piece
from .oracle import Grid, GridGame, project
from .plausibility import _LevelSearch, phi_regions

# strict deviation test in the continuum; η is exactly 0 on the diagonal
ETA_TOL = 1e-13


# set-wise orders ---------------------------------------------------------------

def _subset(a: IntervalUnion, b: IntervalUnion, tol: float) -> bool:
    """a ⊆ b, forgiving slivers of length <= tol but never a missing point."""
    diff = a.difference(b)
    return all(not p.is_point and p.length <= tol for p in diff)


def _same(a: IntervalUnion, b: IntervalUnion, tol: float) -> bool:
    return _subset(a, b, tol) and _subset(b, a, tol)


def _element_in(e: IntervalUnion, k: SymbolicCST, tol: float) -> bool:
    if any(_same(e, f, tol) for f in k.elements):
        return True
    return len(e) == 1 and e.pieces[0].is_point and k.singletons.contains(e.pieces[0].lo)


def is_richer(k_prime: SymbolicCST, k: SymbolicCST, tol: float = 1e-8) -> bool:
    """Every element of k is also an element of k_prime."""
    if not all(_element_in(e, k_prime, tol) for e in k.elements):
        return False
    # every singleton of k must be a singleton of k_prime
    extra = k.singletons.difference(k_prime.singletons)
    point_elements = [f.pieces[0].lo for f in k_prime.elements if len(f) == 1 and f.pieces[0].is_point]
    return all(p.is_point and p.lo in point_elements for p in extra)


def is_finer(k_prime: SymbolicCST, k: SymbolicCST, tol: float = 1e-8) -> bool:
    """Elements of k_prime sit inside elements of k, and rebuild each of them."""
    def inside_some(e: IntervalUnion) -> bool:
        if any(_subset(e, f, tol) for f in k.elements):
            return True
        return len(e) == 1 and e.pieces[0].is_point and k.singletons.contains(e.pieces[0].lo)

    if not all(inside_some(e) for e in k_prime.elements):
        return False
    # singletons of k_prime are points, so they always lie in some element of a cover
    if not _subset(k_prime.singletons, k.covered(), tol):
        return False
    for f in k.elements:
        parts = f.intersect(k_prime.singletons)
        for e in k_prime.elements:
            if _subset(e, f, tol):
                parts = parts.union(e)
        if not _same(parts, f, tol):
            return False
    # singletons of k must be singletons (or point elements) of k_prime
    return is_richer(k_prime, SymbolicCST(k.space, (), k.singletons), tol)


@dataclass(frozen=True)
class WorseVerdict:
    worse: bool | None
    no_equilibrium: bool
    min_payoff_k_prime: float | None = None
    min_payoff_k: float | None = None

    def __bool__(self) -> bool:
        return bool(self.worse)

    def to_json(self) -> dict:
        return dict(self.__dict__)


def is_worse(spec: GameSpec, grid: Grid, k_prime, k, game: GridGame | None = None) -> WorseVerdict:
    """Some SPE of k_prime pays the leader strictly less than every SPE of k."""
    game = game or GridGame(spec, grid)
    kp = project(k_prime, grid) if isinstance(k_prime, SymbolicCST) else k_prime
    kk = project(k, grid) if isinstance(k, SymbolicCST) else k
    a, b = game.spe_outcomes(kp), game.spe_outcomes(kk)
    if b.no_equilibrium:
        return WorseVerdict(None, True)
    if a.no_equilibrium:
        return WorseVerdict(False, False, None, min(o.payoff for o in b.outcomes))
    ma, mb = min(o.payoff for o in a.outcomes), min(o.payoff for o in b.outcomes)
    return WorseVerdict(ma < mb - game.tol, False, ma, mb)


# plausibility relative to an interval -------------------------------------------------

def _as_piece(interval) -> Piece:
    if isinstance(interval, Piece):
        return interval
    if isinstance(interval, IntervalUnion):
        if len(interval) != 1:
            raise ValueError("expected a single interval")
        return interval.pieces[0]
    lo, hi = interval[:2]
    return Piece(float(lo), float(hi), *(tuple(interval[2:4]) or (True, True)))


@dataclass(frozen=True)
class WrtVerdict:
    plausible: bool
    via: str | None
    boundary_ambiguous: bool = False

    def __bool__(self) -> bool:
        return self.plausible


def _accumulates(pred, piece: Piece, at_sup: bool, spec: GameSpec) -> tuple[bool, bool]:
    """(holds, ambiguous): does {pred} reach arbitrarily close to one end of ``piece``?

    The end itself counts when it belongs to the piece.  Otherwise points at
    geometric offsets below 5h are probed; the tiniest ones decide, and a
    disagreement among them is reported as ambiguous.
    """
    end = piece.hi if at_sup else piece.lo
    closed = piece.hi_closed if at_sup else piece.lo_closed
    if closed and bool(pred(np.array([end]))[0]):
        return True, False
    if piece.is_point:
        return False, False
    h = spec.leader_space.width / (spec.tol.grid_n - 1)
    top = min(5 * h, piece.length / 2)
    offs = np.geomspace(top, max(10 * spec.tol.x_tol, top * 1e-6), 40)
    pts = end - offs if at_sup else end + offs
    vals = np.asarray(pred(pts), dtype=bool)
    tail = vals[-10:]
    return bool(tail.all()), bool(tail.any() and not tail.all())


def _gap(spec: GameSpec, x):
    x = np.asarray(x, dtype=float)
    g = np.asarray(phi(spec, x)) - x
    return np.where(np.abs(g) <= 10 * spec.tol.x_tol, 0.0, g)


def simply_plausible_wrt_detail(spec: GameSpec, x_star: float, interval) -> WrtVerdict:
    piece = _as_piece(interval)
    if not piece.contains(x_star):
        raise ValueError("x_star must lie in the interval")
    tol = spec.tol
    u_star = float(leader_value(spec, x_star))
    g_star = float(_gap(spec, x_star))
    if g_star == 0:
        return WrtVerdict(True, "fixed point")
    # (a) a Cournot action on the phi side of x*, in the interval, paying no more
    for p in cournot_set(spec):
        cs = np.array([p.lo]) if p.is_point else np.linspace(p.lo, p.hi, 201)
        for c in cs:
            if not piece.contains(c):
                continue
            dc = 0.0 if abs(c - x_star) <= tol.x_tol else c - x_star
            if float(leader_value(spec, c)) <= u_star and np.sign(dc) * np.sign(g_star) >= 0:
                return WrtVerdict(True, "cournot")
    # (b) points moving the same way as x* accumulate at the far end on that side

    def pred(x):
        x = np.asarray(x, dtype=float)
        return (np.asarray(leader_value(spec, x)) <= u_star) & (_gap(spec, x) * g_star > 0)

    ok, amb = _accumulates(pred, piece, g_star > 0, spec)
    return WrtVerdict(ok, "accumulation" if ok else None, amb)


def simply_plausible_wrt(spec: GameSpec, x_star: float, interval) -> bool:
    return simply_plausible_wrt_detail(spec, x_star, interval).plausible


def i_plausible_wrt_detail(spec: GameSpec, x_star: float, interval) -> WrtVerdict:
    piece = _as_piece(interval)
    if not piece.contains(x_star):
        raise ValueError("x_star must lie in the interval")
    u_star = float(leader_value(spec, x_star))
    sub = IntervalUnion(spec.leader_space, (piece,), spec.tol.merge_tol)
    A, B = phi_regions(spec)
    n = max(spec.tol.grid_n, 2001)
    la, lb = _LevelSearch(spec, A.intersect(sub), n), _LevelSearch(spec, B.intersect(sub), n)
    lev = np.array([u_star])
    ha, ma = la.first(lev)
    hb, mb = lb.last(lev)
    if ha[0] and hb[0] and ma[0] <= mb[0]:
        return WrtVerdict(True, "pair")
    up = lambda x: (np.asarray(leader_value(spec, x)) <= u_star) & (_gap(spec, x) >= 0)
    ok, amb1 = _accumulates(up, piece, True, spec)
    if ok:
        return WrtVerdict(True, "sup")
    down = lambda x: (np.asarray(leader_value(spec, x)) <= u_star) & (_gap(spec, x) <= 0)
    ok, amb2 = _accumulates(down, piece, False, spec)
    return WrtVerdict(ok, "inf" if ok else None, amb1 or amb2)


def i_plausible_wrt(spec: GameSpec, x_star: float, interval) -> bool:
    return i_plausible_wrt_detail(spec, x_star, interval).plausible


# worse refinements of simple structures ---------------------------------------------------

@dataclass
class WorseRefinement:
    threshold: float
    spe_floor: float
    witnesses: list[dict]
    attained: bool
    boundary_ambiguous: bool = False

    def to_json(self) -> dict:
        return {"threshold": self.threshold, "spe_floor": self.spe_floor, "witnesses": self.witnesses,
                "attained": self.attained, "boundary_ambiguous": self.boundary_ambiguous}


def _element_pieces(k: SymbolicCST) -> list[Piece]:
    """Elements of an interval partition, isolated singletons included."""
    pieces = []
    for e in k.elements:
        if len(e) != 1:
            raise NotSimple("every element must be a single interval")
        pieces.append(e.pieces[0])
    for p in k.singletons:
        if not p.is_point:
            raise NotSimple("a continuum of singletons has no finite simple description")
        pieces.append(p)
    X = k.space
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            a = IntervalUnion(X, (pieces[i],))
            if not a.intersect(IntervalUnion(X, (pieces[j],))).is_empty():
                raise NotSimple("elements overlap")
    if not k.covers():
        raise NotSimple("elements do not cover the action space")
    return pieces


def admissible_in_interval(spec: GameSpec, piece: Piece) -> IntervalUnion:
    """Continuation actions of an interval element: no profitable deviation inside it."""
    X, tol = spec.leader_space, spec.tol
    if piece.is_point:
        return IntervalUnion.points(X, [piece.lo])

    def pred(b):
        b = np.asarray(b, dtype=float)
        y = np.asarray(best_response_follower(spec, b))
        t = np.clip(np.asarray(phi(spec, b)), piece.lo, piece.hi)
        gain = np.asarray(spec.payoff_leader(t, y)) - np.asarray(spec.payoff_leader(b, y))
        return np.where(t == b, 0.0, gain) <= ETA_TOL

    hints = [h for h in hint_points(spec) if piece.lo <= h <= piece.hi]
    raw = IntervalUnion.from_predicate(pred, X, tol.grid_n, hints, tol.x_tol, tol.merge_tol,
                                       tol.point_width, piece.lo, piece.hi)
    return raw.intersect(IntervalUnion(X, (piece,), tol.merge_tol))


def spe_floor(spec: GameSpec, k: SymbolicCST) -> float:
    """Lowest SPE leader payoff of a simple structure (max over elements of min over B_i)."""
    floors = []
    for p in _element_pieces(k):
        B = admissible_in_interval(spec, p)
        if B.is_empty():
            raise ValueError(f"element {p} has no continuation equilibrium")
        xs = B.sample(401)
        floors.append(float(np.min(np.asarray(leader_value(spec, xs)))))
    return max(floors)


def wrt_plausible_set(spec: GameSpec, piece: Piece) -> IntervalUnion:
    X, tol = spec.leader_space, spec.tol
    if piece.is_point:
        return IntervalUnion.points(X, [piece.lo])
    inner = lambda xs: np.array([piece.contains(x) and simply_plausible_wrt(spec, float(x), piece)
                                 for x in xs], dtype=bool)
    hints = [h for h in hint_points(spec) if piece.lo <= h <= piece.hi]
    return IntervalUnion.from_predicate(inner, X, 401, hints, tol.x_tol, tol.merge_tol, tol.point_width,
                                        piece.lo, piece.hi)


def worse_refinement_exists(spec: GameSpec, k: SymbolicCST) -> WorseRefinement | None:
    """Two-step test for a worse simple refinement of a simple structure.

    Step 1 collects, per element, the actions simply plausible relative to it.
    Step 2 takes the threshold as the largest per-element minimum of U over
    those sets; a worse refinement exists iff it lies strictly below the
    lowest SPE payoff of k.
    """
    pieces = _element_pieces(k)
    floor = spe_floor(spec, k)
    wits, attained = [], True
    for i, p in enumerate(pieces):
        W = wrt_plausible_set(spec, p)
        if W.is_empty():
            return None
        xs = W.sample(801)
        us = np.asarray(leader_value(spec, xs))
        j = int(np.argmin(us))
        x = float(xs[j])
        ok = p.contains(x) and simply_plausible_wrt(spec, x, p)
        wits.append({"element": str(p), "action": x, "payoff": float(us[j]), "attained": bool(ok)})
    top = max(w["payoff"] for w in wits)
    attained = any(w["attained"] and w["payoff"] == top for w in wits)
    amb = abs(top - floor) <= spec.tol.f_tol
    if top < floor - spec.tol.f_tol:
        return WorseRefinement(top, floor, wits, attained, amb)
    return None
