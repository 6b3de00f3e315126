"""Cournot and Stackelberg sets, and contour sets of U."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InternalError
from .game import GameSpec, golden_max, leader_value, phi
from .intervals import IntervalUnion, Piece

DIRECTIONS = (">=", ">", "<=", "<")


@dataclass(frozen=True)
class EquilibriumReport:
    cournot: IntervalUnion
    stackelberg: IntervalUnion
    u_at_cournot: tuple[float, ...]
    u_max: float

    def to_json(self) -> dict:
        return {
            "cournot": self.cournot.to_json(),
            "stackelberg": self.stackelberg.to_json(),
            "u_at_cournot": list(self.u_at_cournot),
            "u_max": self.u_max,
        }


def _bisect_sign(f, a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """Roots of f in brackets [a, b] where f(a), f(b) differ in sign."""
    fa = np.sign(f(a))
    while a.size and np.max(np.abs(b - a)) > tol:
        m = 0.5 * (a + b)
        fm = np.sign(f(m))
        same = fm == fa
        a = np.where(same, m, a)
        b = np.where(same, b, m)
    return 0.5 * (a + b)


@lru_cache(maxsize=128)
def cournot_set(spec: GameSpec) -> IntervalUnion:
    """Fixed points of phi, isolated roots and continuum runs alike."""
    X, tol = spec.leader_space, spec.tol
    xs = X.linspace(tol.grid_n)
    g = np.asarray(phi(spec, xs)) - xs
    zero = np.abs(g) <= 10 * tol.x_tol
    flat = np.abs(g) <= 100 * tol.x_tol
    pieces: list[Piece] = []

    # continuum runs of at least three flat grid points
    n = xs.size
    in_run = np.zeros(n, dtype=bool)
    i = 0
    while i < n:
        if not flat[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and flat[j + 1]:
            j += 1
        if j - i + 1 >= 3:
            in_run[i:j + 1] = True
            lo, hi = xs[i], xs[j]
            res = lambda t: (np.abs(np.asarray(phi(spec, t)) - t) <= 100 * tol.x_tol).astype(float) - 0.5
            if i > 0:
                lo = float(_bisect_sign(res, np.array([xs[i - 1]]), np.array([xs[i]]), tol.x_tol)[0])
            if j < n - 1:
                hi = float(_bisect_sign(res, np.array([xs[j]]), np.array([xs[j + 1]]), tol.x_tol)[0])
            pieces.append(Piece(float(lo), float(hi)))
        i = j + 1

    # isolated exact zeros on the grid: keep the best point of each short run
    i = 0
    while i < n:
        if not zero[i] or in_run[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and zero[j + 1] and not in_run[j + 1]:
            j += 1
        k = i + int(np.argmin(np.abs(g[i:j + 1])))
        pieces.append(Piece(float(xs[k]), float(xs[k])))
        i = j + 1

    # sign changes between non-zero neighbours
    s = np.sign(g)
    k = np.nonzero((s[:-1] * s[1:] < 0) & ~zero[:-1] & ~zero[1:] & ~in_run[:-1] & ~in_run[1:])[0]
    if k.size:
        roots = _bisect_sign(lambda t: np.asarray(phi(spec, t)) - t, xs[k].copy(), xs[k + 1].copy(),
                             tol.x_tol * 1e-3)
        pieces += [Piece(float(r), float(r)) for r in roots]

    out = IntervalUnion(X, tuple(pieces), tol.merge_tol)
    if out.is_empty():
        raise InternalError("no fixed point of phi found")
    return out


def cournot_points(spec: GameSpec, per_piece: int = 1) -> list[float]:
    """Representative Cournot actions (both ends of continuum pieces)."""
    out = []
    for p in cournot_set(spec):
        out += [p.lo] if p.is_point else list(np.linspace(p.lo, p.hi, max(2, per_piece)))
    return out


def _refine_max(spec: GameSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return golden_max(lambda t: leader_value(spec, t), a, b, spec.tol.x_tol * 1e-3)


@lru_cache(maxsize=128)
def stackelberg_set(spec: GameSpec) -> IntervalUnion:
    """Global argmax set of U, with plateaus reported as intervals."""
    X, tol = spec.leader_space, spec.tol
    xs = X.linspace(tol.grid_n)
    hints = [p for p in cournot_points(spec, 3)] + list(spec.landmarks)
    xs = np.unique(np.concatenate([xs, [h for h in hints if X.lo <= h <= X.hi]]))
    U = np.asarray(leader_value(spec, xs))
    n = xs.size
    left = np.concatenate([[-np.inf], U[:-1]])
    right = np.concatenate([U[1:], [-np.inf]])
    local = np.nonzero((U >= left) & (U >= right))[0]
    lo = xs[np.maximum(local - 1, 0)]
    hi = xs[np.minimum(local + 1, n - 1)]
    hint_arr = np.array([h for h in hints if X.lo <= h <= X.hi], dtype=float)
    # the polished maxima dominate the raw grid points they were bracketed by
    cands = np.concatenate([_refine_max(spec, lo, hi), hint_arr])
    vals = np.asarray(leader_value(spec, cands))
    top = float(np.max(np.concatenate([vals, U])))
    pieces = []
    # plateau: three or more consecutive grid points at the top level
    at_top = U >= top - tol.f_tol
    i = 0
    while i < n:
        if not at_top[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and at_top[j + 1]:
            j += 1
        if j - i + 1 >= 3:
            pieces.append(Piece(float(xs[i]), float(xs[j])))
        i = j + 1
    keep = vals >= top - tol.f_tol
    best, bval = cands[keep], vals[keep]
    order = np.argsort(best)
    best, bval = best[order], bval[order]
    i = 0
    while i < best.size:
        j = i
        while j + 1 < best.size and best[j + 1] - best[i] <= max(tol.point_width, X.width / (tol.grid_n - 1)):
            j += 1
        c = best[i + int(np.argmax(bval[i:j + 1]))]
        pinned = [b for b, v in zip(best[i:j + 1], bval[i:j + 1])
                  if b in hint_arr and v >= bval[i:j + 1].max() - tol.f_tol]
        c = pinned[0] if pinned else c
        pieces.append(Piece(float(c), float(c)))
        i = j + 1
    return IntervalUnion(X, tuple(pieces), tol.merge_tol)


def hint_points(spec: GameSpec, extra=()) -> list[float]:
    X = spec.leader_space
    pts = [X.lo, X.hi] + cournot_points(spec, 3) + list(spec.landmarks)
    pts += [p.lo for p in stackelberg_set(spec)] + [p.hi for p in stackelberg_set(spec)]
    pts += [float(e) for e in extra]
    return sorted({float(p) for p in pts if X.lo <= p <= X.hi})


def contour_set(spec: GameSpec, level: float, direction: str = ">=", extra_hints=()) -> IntervalUnion:
    """{x: U(x) <direction> level}, compared exactly in floating point."""
    ops = {
        ">=": np.greater_equal, ">": np.greater, "<=": np.less_equal, "<": np.less,
    }
    if direction not in ops:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    op = ops[direction]
    tol = spec.tol
    return IntervalUnion.from_predicate(
        lambda x: op(np.asarray(leader_value(spec, x)), level),
        spec.leader_space, tol.grid_n, hint_points(spec, extra_hints), tol.x_tol, tol.merge_tol,
        tol.point_width,
    )


def equilibrium_report(spec: GameSpec) -> EquilibriumReport:
    c = cournot_set(spec)
    s = stackelberg_set(spec)
    uc = tuple(float(leader_value(spec, x)) for x in cournot_points(spec))
    um = float(leader_value(spec, s.min()))
    return EquilibriumReport(c, s, uc, um)
