"""Finite unions of intervals of the leader's action space."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import EmptySet
from .game import ActionSpace

DEFAULT_MERGE_TOL = 1e-8


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def nonempty(self) -> bool:
        if self.lo < self.hi:
            return True
        return self.lo == self.hi and self.lo_closed and self.hi_closed

    def contains(self, x: float, tol: float = 0.0) -> bool:
        if tol > 0:
            return self.lo - tol <= x <= self.hi + tol
        if self.lo < x < self.hi:
            return True
        return (x == self.lo and self.lo_closed) or (x == self.hi and self.hi_closed)

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "lo_closed": self.lo_closed, "hi_closed": self.hi_closed}

    def __str__(self) -> str:
        if self.is_point:
            return "{%.12g}" % self.lo
        return "%s%.12g,%.12g%s" % ("[" if self.lo_closed else "(", self.lo, self.hi,
                                     "]" if self.hi_closed else ")")


def _normalize(pieces: Iterable[Piece], space: ActionSpace, merge_tol: float) -> tuple[Piece, ...]:
    clipped = []
    for p in pieces:
        lo, loc = (space.lo, True) if p.lo < space.lo else (float(p.lo), p.lo_closed)
        hi, hic = (space.hi, True) if p.hi > space.hi else (float(p.hi), p.hi_closed)
        q = Piece(lo, hi, loc, hic)
        if q.nonempty():
            clipped.append(q)
    clipped.sort(key=lambda p: (p.lo, not p.lo_closed))
    out: list[Piece] = []
    for p in clipped:
        if not out:
            out.append(p)
            continue
        cur = out[-1]
        gap = p.lo - cur.hi
        if gap > merge_tol:
            out.append(p)
            continue
        if 0 <= gap and not (cur.hi_closed or p.lo_closed):
            out.append(p)  # a puncture between two open ends
            continue
        if p.hi > cur.hi:
            hi, hic = p.hi, p.hi_closed
        elif p.hi == cur.hi:
            hi, hic = cur.hi, cur.hi_closed or p.hi_closed
        else:
            hi, hic = cur.hi, cur.hi_closed
        loc = cur.lo_closed or (p.lo == cur.lo and p.lo_closed)
        out[-1] = Piece(cur.lo, hi, loc, hic)
    return tuple(out)


@dataclass(frozen=True)
class IntervalUnion:
    space: ActionSpace
    pieces: tuple[Piece, ...] = ()
    merge_tol: float = DEFAULT_MERGE_TOL

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", _normalize(self.pieces, self.space, self.merge_tol))

    # construction -------------------------------------------------------
    @classmethod
    def empty(cls, space: ActionSpace, merge_tol: float = DEFAULT_MERGE_TOL) -> "IntervalUnion":
        return cls(space, (), merge_tol)

    @classmethod
    def full(cls, space: ActionSpace, merge_tol: float = DEFAULT_MERGE_TOL) -> "IntervalUnion":
        return cls(space, (Piece(space.lo, space.hi),), merge_tol)

    @classmethod
    def interval(cls, space: ActionSpace, lo: float, hi: float, lo_closed: bool = True,
                 hi_closed: bool = True, merge_tol: float = DEFAULT_MERGE_TOL) -> "IntervalUnion":
        return cls(space, (Piece(lo, hi, lo_closed, hi_closed),), merge_tol)

    @classmethod
    def points(cls, space: ActionSpace, xs: Iterable[float],
               merge_tol: float = DEFAULT_MERGE_TOL) -> "IntervalUnion":
        return cls(space, tuple(Piece(float(x), float(x)) for x in xs), merge_tol)

    @classmethod
    def from_predicate(cls, pred: Callable[[np.ndarray], np.ndarray], space: ActionSpace,
                       grid_n: int = 2001, hints: Iterable[float] = (), x_tol: float = 1e-9,
                       merge_tol: float | None = None, point_width: float | None = None,
                       lo: float | None = None, hi: float | None = None) -> "IntervalUnion":
        """Sample a vectorised predicate and refine its boundaries by bisection.

        ``pred`` maps an array of actions to a boolean array.  Boundary values
        are the last point found on the true side, so isolated hint points
        come back exactly.  ``lo``/``hi`` restrict the scan to a sub-interval.
        """
        merge_tol = 10 * x_tol if merge_tol is None else merge_tol
        point_width = 100 * x_tol if point_width is None else point_width
        a = space.lo if lo is None else lo
        b = space.hi if hi is None else hi
        xs = np.linspace(a, b, grid_n)
        h = [float(t) for t in hints if a <= t <= b]
        if h:
            xs = np.unique(np.concatenate([xs, np.asarray(h, dtype=float)]))
        hint_set = set(h)
        t = np.asarray(pred(xs), dtype=bool)
        if not t.any():
            return cls(space, (), merge_tol)
        k = np.nonzero(t[:-1] != t[1:])[0]
        tp = np.where(t[k], xs[k], xs[k + 1])
        fp = np.where(t[k], xs[k + 1], xs[k])
        while k.size and np.max(np.abs(tp - fp)) > x_tol:
            mid = 0.5 * (tp + fp)
            m = np.asarray(pred(mid), dtype=bool)
            tp = np.where(m, mid, tp)
            fp = np.where(m, fp, mid)
        edge = dict(zip(k.tolist(), tp.tolist()))
        pieces = []
        n = len(xs)
        i = 0
        while i < n:
            if not t[i]:
                i += 1
                continue
            j = i
            while j + 1 < n and t[j + 1]:
                j += 1
            left = xs[0] if i == 0 else edge[i - 1]
            right = xs[-1] if j == n - 1 else edge[j]
            if right - left <= point_width:
                run = xs[i:j + 1]
                pinned = [x for x in run if x in hint_set]
                c = pinned[0] if pinned else float(run[len(run) // 2])
                pieces.append(Piece(c, c))
            else:
                pieces.append(Piece(float(left), float(right)))
            i = j + 1
        return cls(space, tuple(pieces), merge_tol)

    # queries --------------------------------------------------------------
    def is_empty(self) -> bool:
        return not self.pieces

    def __bool__(self) -> bool:
        return bool(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return any(p.contains(float(x), tol) for p in self.pieces)

    def contains_many(self, xs: Sequence[float], tol: float = 0.0) -> np.ndarray:
        return np.array([self.contains(x, tol) for x in xs], dtype=bool)

    def min(self) -> float:
        if not self.pieces:
            raise EmptySet("min of an empty set")
        return self.pieces[0].lo

    def max(self) -> float:
        if not self.pieces:
            raise EmptySet("max of an empty set")
        return self.pieces[-1].hi

    def measure(self) -> float:
        return float(sum(p.length for p in self.pieces))

    def isolated_points(self) -> list[float]:
        return [p.lo for p in self.pieces if p.is_point]

    def distance_to(self, x: float) -> float:
        if not self.pieces:
            return float("inf")
        return float(min(0.0 if p.lo <= x <= p.hi else min(abs(x - p.lo), abs(x - p.hi))
                         for p in self.pieces))

    def hausdorff(self, other: "IntervalUnion") -> float:
        """Hausdorff distance between the closures of two non-empty unions."""
        if not self.pieces or not other.pieces:
            return 0.0 if not self.pieces and not other.pieces else float("inf")
        return max(self._directed(other), other._directed(self))

    def _directed(self, other: "IntervalUnion") -> float:
        cands = []
        gaps = [(a.hi, b.lo) for a, b in zip(other.pieces, other.pieces[1:])]
        gaps += [(self.space.lo - 1e300, other.pieces[0].lo), (other.pieces[-1].hi, self.space.hi + 1e300)]
        for p in self.pieces:
            cands += [p.lo, p.hi]
            for g0, g1 in gaps:
                m = min(max(0.5 * (g0 + g1), p.lo), p.hi)
                cands.append(m)
        return max(other.distance_to(c) for c in cands)

    # algebra ----------------------------------------------------------------
    def _like(self, pieces) -> "IntervalUnion":
        return IntervalUnion(self.space, tuple(pieces), self.merge_tol)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return self._like(self.pieces + other.pieces)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for a in self.pieces:
            for b in other.pieces:
                if a.lo > b.lo:
                    lo, loc = a.lo, a.lo_closed
                elif b.lo > a.lo:
                    lo, loc = b.lo, b.lo_closed
                else:
                    lo, loc = a.lo, a.lo_closed and b.lo_closed
                if a.hi < b.hi:
                    hi, hic = a.hi, a.hi_closed
                elif b.hi < a.hi:
                    hi, hic = b.hi, b.hi_closed
                else:
                    hi, hic = a.hi, a.hi_closed and b.hi_closed
                q = Piece(lo, hi, loc, hic)
                if q.nonempty():
                    out.append(q)
        return self._like(out)

    def complement(self) -> "IntervalUnion":
        out = []
        cur, cur_closed = self.space.lo, True
        for p in self.pieces:
            out.append(Piece(cur, p.lo, cur_closed, not p.lo_closed))
            cur, cur_closed = p.hi, not p.hi_closed
        out.append(Piece(cur, self.space.hi, cur_closed, True))
        return self._like([q for q in out if q.nonempty()])

    def difference(self, other: "IntervalUnion") -> "IntervalUnion":
        return self.intersect(other.complement())

    def closure(self) -> "IntervalUnion":
        return self._like([Piece(p.lo, p.hi) for p in self.pieces])

    def approx_equal(self, other: "IntervalUnion", tol: float | None = None) -> bool:
        """Closures within Hausdorff distance ``tol``; open slivers shorter than ``tol`` are ignored."""
        tol = self.merge_tol if tol is None else tol
        keep = lambda s: s._like([p for p in s.pieces
                                  if p.lo_closed or p.hi_closed or p.hi - p.lo > tol])
        a, b = keep(self), keep(other)
        return a.hausdorff(b) <= tol

    def symmetric_difference_measure(self, other: "IntervalUnion") -> float:
        return self.union(other).measure() - self.intersect(other).measure()

    def sample(self, n_per_piece: int) -> np.ndarray:
        """Points covering each piece (endpoints included; open ends too)."""
        pts = []
        for p in self.pieces:
            pts.append(np.array([p.lo]) if p.is_point else np.linspace(p.lo, p.hi, n_per_piece))
        return np.concatenate(pts) if pts else np.empty(0)

    # serialisation ---------------------------------------------------------
    def to_json(self) -> list[dict]:
        return [p.to_json() for p in self.pieces]

    @classmethod
    def from_json(cls, data: list[dict], space: ActionSpace,
                  merge_tol: float = DEFAULT_MERGE_TOL) -> "IntervalUnion":
        return cls(space, tuple(Piece(float(d["lo"]), float(d["hi"]), bool(d["lo_closed"]),
                                      bool(d["hi_closed"])) for d in data), merge_tol)

    def __str__(self) -> str:
        return " u ".join(str(p) for p in self.pieces) if self.pieces else "{}"
