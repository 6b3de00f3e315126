"""Brute-force SPE outcomes of finite commitment structures on action grids.

Each element of a structure is a set of grid indices.  Under the default
``hull`` semantics a maximal run of consecutive indices stands for the whole
interval between its first and last grid point; since eta(., b) is concave
with its peak at phi(b), "no profitable deviation inside the run" reduces to
one evaluation at phi(b) clipped to the run.  ``discrete`` semantics checks
the grid points only.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .cst import SymbolicCST
from .equilibria import cournot_points, stackelberg_set
from .errors import UnknownFamily
from .game import GameSpec, best_response_follower, leader_value, phi

FAMILIES = ("cutoff_partitions", "interval_plus_complement", "three_piece_design",
            "quasi_simple_witness", "singletons")


@dataclass(frozen=True)
class Grid:
    points: np.ndarray
    h: float

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2 or np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return int(self.points.size)

    def index_of(self, x: float, tol: float = 1e-9) -> int:
        k = int(np.argmin(np.abs(self.points - x)))
        if abs(self.points[k] - x) > tol:
            raise ValueError(f"{x} is not a grid point")
        return k

    def nearest(self, x: float) -> int:
        return int(np.argmin(np.abs(self.points - x)))

    @classmethod
    def for_spec(cls, spec: GameSpec, n: int = 201, extra: Iterable[float] = ()) -> "Grid":
        """Uniform grid plus Cournot, Stackelberg and landmark actions as exact points."""
        X = spec.leader_space
        base = X.linspace(n)
        hints = list(cournot_points(spec, 2)) + list(spec.landmarks) + [float(e) for e in extra]
        hints += [p.lo for p in stackelberg_set(spec)] + [p.hi for p in stackelberg_set(spec)]
        hints = [h for h in hints if X.lo <= h <= X.hi]
        h = X.width / (n - 1)
        # a hint replaces the uniform point it nearly coincides with
        keep = np.ones(base.size, bool)
        for t in hints:
            k = int(np.argmin(np.abs(base - t)))
            if 0 < k < base.size - 1 and abs(base[k] - t) < 1e-3 * h:
                keep[k] = False
        pts = np.unique(np.concatenate([base[keep], hints]))
        pts = pts[np.concatenate([[True], np.diff(pts) > 1e-12])]
        return cls(pts, h)


@dataclass(frozen=True)
class FiniteCST:
    """Index subsets of a grid.

    ``extents`` optionally gives, per element, the continuum intervals
    (closures) it was projected from; deviations are then checked over those
    rather than over the runs of grid indices.
    """

    elements: tuple[tuple[int, ...], ...]
    label: str = ""
    extents: tuple[tuple[tuple[float, float], ...], ...] | None = None

    def __post_init__(self) -> None:
        els = tuple(tuple(sorted(set(int(i) for i in e))) for e in self.elements)
        if any(len(e) == 0 for e in els):
            raise ValueError("CST elements must be non-empty")
        object.__setattr__(self, "elements", els)

    def covers(self, n: int) -> bool:
        return set().union(*map(set, self.elements)) == set(range(n))

    def to_json(self, grid: Grid | None = None) -> dict:
        out = {"label": self.label, "elements": [list(e) for e in self.elements]}
        if grid is not None:
            out["actions"] = [[float(grid.points[i]) for i in e] for e in self.elements]
        return out


@dataclass(frozen=True)
class AdmissiblePair:
    cst: FiniteCST
    beta: tuple[int, ...]


@dataclass(frozen=True)
class Outcome:
    leader: float
    follower: float
    payoff: float
    index: int

    def to_json(self) -> dict:
        return {"leader": self.leader, "follower": self.follower, "payoff": self.payoff}


@dataclass
class SPEResult:
    outcomes: list[Outcome]
    admissible: list[list[int]]
    threshold: float | None
    no_equilibrium: bool = False

    @property
    def indices(self) -> set[int]:
        return {o.index for o in self.outcomes}

    @property
    def leader_actions(self) -> list[float]:
        return [o.leader for o in self.outcomes]

    def to_json(self) -> dict:
        return {"outcomes": [o.to_json() for o in self.outcomes], "threshold": self.threshold,
                "no_equilibrium": self.no_equilibrium}


def _runs(idx: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    start = prev = idx[0]
    for i in idx[1:]:
        if i != prev + 1:
            out.append((start, prev))
            start = i
        prev = i
    out.append((start, prev))
    return out


class GridGame:
    """A game restricted to a grid, with best responses and payoffs cached."""

    def __init__(self, spec: GameSpec, grid: Grid, semantics: str = "hull", tol: float | None = None):
        if semantics not in ("hull", "discrete"):
            raise ValueError("semantics must be 'hull' or 'discrete'")
        self.spec, self.grid, self.semantics = spec, grid, semantics
        self.tol = spec.tol.f_tol if tol is None else tol
        xs = grid.points
        self.x = xs
        self.y = np.asarray(best_response_follower(spec, xs), dtype=float)
        self.U = np.asarray(leader_value(spec, xs), dtype=float)
        self.phi = np.asarray(phi(spec, xs), dtype=float)
        self._reach = None

    # deviation gains ----------------------------------------------------------
    def eta_at(self, targets: np.ndarray, b: np.ndarray) -> np.ndarray:
        """eta(targets, x_b) for index array b broadcast against targets."""
        t = np.asarray(targets, dtype=float)
        res = np.asarray(self.spec.payoff_leader(t, self.y[b]), dtype=float) - self.U[b]
        return np.where(t == self.x[b], 0.0, res)

    def admissible_actions(self, element: Sequence[int], extent=None) -> list[int]:
        """Actions of the element with no profitable deviation inside it."""
        idx = np.asarray(sorted(element), dtype=int)
        if self.semantics == "discrete":
            g = self.eta_at(self.x[idx][None, :], idx[:, None])
            return idx[np.max(g, axis=1) <= self.tol].tolist()
        if extent is None:
            extent = [(self.x[a], self.x[b]) for a, b in _runs(idx.tolist())]
        ok = np.ones(idx.size, bool)
        for lo, hi in extent:
            t = np.clip(self.phi[idx], lo, hi)
            ok &= self.eta_at(t, idx) <= self.tol
        return idx[ok].tolist()

    def _admissible_all(self, cst: FiniteCST) -> list[list[int]]:
        ext = cst.extents or (None,) * len(cst.elements)
        return [self.admissible_actions(e, x) for e, x in zip(cst.elements, ext)]

    # equilibrium outcomes -------------------------------------------------------
    def _outcome(self, i: int) -> Outcome:
        return Outcome(float(self.x[i]), float(self.y[i]), float(self.U[i]), int(i))

    def spe_outcomes(self, cst: FiniteCST) -> SPEResult:
        adm = self._admissible_all(cst)
        if any(len(b) == 0 for b in adm):
            return SPEResult([], adm, None, True)
        T = max(float(np.min(self.U[b])) for b in adm)
        cand = sorted(set(itertools.chain.from_iterable(adm)))
        out = [self._outcome(i) for i in cand if self.U[i] >= T - self.tol]
        return SPEResult(out, adm, T)

    def spe_outcomes_leader_preferred(self, cst: FiniteCST) -> SPEResult:
        adm = self._admissible_all(cst)
        if any(len(b) == 0 for b in adm):
            return SPEResult([], adm, None, True)
        chosen = []
        for b in adm:
            top = float(np.max(self.U[b]))
            chosen.append([i for i in b if self.U[i] >= top - self.tol])
        T = max(float(self.U[c[0]]) for c in chosen)
        cand = sorted(set(itertools.chain.from_iterable(chosen)))
        return SPEResult([self._outcome(i) for i in cand if self.U[i] >= T - self.tol], chosen, T)

    # interval fast path -------------------------------------------------------------
    def reach(self) -> tuple[np.ndarray, np.ndarray]:
        """Per action b: the widest index interval [lo_b, hi_b] around b keeping b admissible.

        Only valid for hull semantics, where admissibility in an interval
        [i, k] containing b is monotone in both ends.
        """
        if self._reach is not None:
            return self._reach
        n = self.grid.n
        lo = np.zeros(n, int)
        hi = np.full(n, n - 1)
        # right side: t = min(phi_b, x_k) for k >= b; admissible while eta <= tol
        for b in range(n):
            k = np.arange(b, n)
            t = np.minimum(self.phi[b], self.x[k])
            bad = self.eta_at(np.maximum(t, self.x[b]), np.full(k.size, b)) > self.tol
            hi[b] = k[np.argmax(bad)] - 1 if bad.any() else n - 1
            k = np.arange(0, b + 1)
            t = np.maximum(self.phi[b], self.x[k])
            bad = self.eta_at(np.minimum(t, self.x[b]), np.full(k.size, b)) > self.tol
            lo[b] = k[len(k) - 1 - np.argmax(bad[::-1])] + 1 if bad.any() else 0
        self._reach = (lo, hi)
        return self._reach

    def interval_min_table(self) -> np.ndarray:
        """M[i, k] = min U over actions admissible in the run [i, k] (inf if none)."""
        lo, hi = self.reach()
        n = self.grid.n
        M = np.full((n, n), np.inf)
        for i in range(n):
            b = np.arange(i, n)
            good_b = lo[b] <= i
            # b admissible in [i, k] iff lo_b <= i and b <= k <= hi_b
            vals = np.where(good_b, self.U[b], np.inf)
            for bi, v in zip(b, vals):
                if np.isfinite(v):
                    seg = M[i, bi:hi[bi] + 1]
                    np.minimum(seg, v, out=seg)
        return M


# structure projection -------------------------------------------------------------

def project(sym: SymbolicCST, grid: Grid) -> FiniteCST:
    """Grid version of a symbolic structure; every grid point must be covered."""
    els, ext = [], []
    for e in sym.elements:
        idx = [i for i, x in enumerate(grid.points) if e.contains(x)]
        if idx:
            els.append(tuple(idx))
            ext.append(tuple((p.lo, p.hi) for p in e.pieces))
    for i, x in enumerate(grid.points):
        if sym.singletons.contains(x):
            els.append((i,))
            ext.append(((float(x), float(x)),))
    cst = FiniteCST(tuple(els), sym.label, tuple(ext))
    if not cst.covers(grid.n):
        missing = sorted(set(range(grid.n)) - set().union(*map(set, cst.elements)))
        raise ValueError(f"structure leaves grid points uncovered, e.g. x = {grid.points[missing[0]]}")
    return cst


# families ---------------------------------------------------------------------------

def _cutoff(n: int, max_cuts: int) -> Iterator[FiniteCST]:
    for m in range(1, max_cuts + 1):
        for cuts in itertools.combinations(range(1, n), m):
            bounds = (0,) + cuts + (n,)
            yield FiniteCST(tuple(tuple(range(a, b)) for a, b in zip(bounds, bounds[1:])),
                            "cutoff")


def _interval_plus_complement(n: int) -> Iterator[FiniteCST]:
    full = tuple(range(n))
    for c in range(n - 1):
        yield FiniteCST((full, tuple(range(c + 1))), "whole+lower")
        yield FiniteCST((full, tuple(range(c + 1, n))), "whole+upper")
    for p in range(n):
        for b in range(n):
            for a in range(0, min(b + 1, n - 1) + 1):
                yield FiniteCST(((p,), tuple(range(b + 1)), tuple(range(a, n))), "point+cover")
            if b + 2 < n and p == b + 1:
                yield FiniteCST(((p,), tuple(range(b + 1)), tuple(range(b + 2, n))), "point+cover")


def _three_piece(n: int) -> Iterator[FiniteCST]:
    for c1 in range(1, n - 1):
        for c2 in range(c1 + 1, n + 1):
            first = tuple(range(1, c1 + 1))
            mid = (0,) + tuple(range(c1 + 1, c2))
            els = (first, mid) if c2 == n else (first, mid, tuple(range(c2, n)))
            yield FiniteCST(els, "three-piece")


def _quasi_simple(grid: Grid, x_star: float, game: GridGame | None, x_hat: float | None) -> Iterator[FiniteCST]:
    n, s = grid.n, grid.index_of(x_star)
    below, above = list(range(0, s + 1)), list(range(s + 1, n))
    for p in range(0, s):
        rest = tuple(i for i in below if i != p)
        yield FiniteCST(((p,) + tuple(above), rest), "quasi-simple")
    below_open, above_closed = list(range(0, s)), list(range(s, n))
    for p in range(s + 1, n):
        rest = tuple(i for i in above_closed if i != p)
        yield FiniteCST(((p,) + tuple(below_open), rest), "quasi-simple")
    if game is not None and x_hat is not None:
        k = grid.nearest(x_hat)
        first = sorted({k} | {i for i in range(n) if game.U[i] > game.U[s]})
        others = [(i,) for i in range(n) if i not in first]
        yield FiniteCST((tuple(first),) + tuple(others), "quasi-simple")


def enumerate_cst_family(grid: Grid, family: str, *, max_cuts: int = 1, x_star: float | None = None,
                         game: GridGame | None = None, x_hat: float | None = None) -> Iterator[FiniteCST]:
    """Lazily yield the structures of a named family on ``grid``."""
    n = grid.n
    if family == "cutoff_partitions":
        return _cutoff(n, max_cuts)
    if family == "interval_plus_complement":
        return _interval_plus_complement(n)
    if family == "three_piece_design":
        return _three_piece(n)
    if family == "quasi_simple_witness":
        if x_star is None:
            raise ValueError("quasi_simple_witness needs x_star")
        return _quasi_simple(grid, x_star, game, x_hat)
    if family == "singletons":
        return iter([FiniteCST(tuple((i,) for i in range(n)), "Stackelberg")])
    raise UnknownFamily(f"unknown CST family {family!r}; known: {', '.join(FAMILIES)}")


def certify(spec: GameSpec, grid: Grid, x_star: float, families: Sequence[str],
            game: GridGame | None = None, max_cuts: int = 2, x_hat: float | None = None) -> FiniteCST | None:
    """First structure in ``families`` with x_star among its SPE leader actions."""
    game = game or GridGame(spec, grid)
    s = grid.index_of(x_star)
    for fam in ("singletons",) if not families else families:
        if fam == "interval_plus_complement" and game.semantics == "hull":
            w = interval_cover_witness(game, s)
            if w is not None and s in game.spe_outcomes(w).indices:
                return w
            continue
        kw = dict(max_cuts=max_cuts)
        if fam == "quasi_simple_witness":
            kw.update(x_star=x_star, game=game, x_hat=x_hat)
        for cst in enumerate_cst_family(grid, fam, **kw):
            if s in game.spe_outcomes(cst).indices:
                return cst
    return None


def is_worse(game: GridGame, worse: FiniteCST, than: FiniteCST) -> bool:
    """Some SPE of ``worse`` pays the leader strictly less than every SPE of ``than``."""
    a, b = game.spe_outcomes(worse), game.spe_outcomes(than)
    if a.no_equilibrium or b.no_equilibrium:
        return False
    return min(o.payoff for o in a.outcomes) < min(o.payoff for o in b.outcomes) - game.tol


# certified sets over whole families (fast paths) -----------------------------------------

def certified_cutoff(game: GridGame, max_cuts: int = 2) -> np.ndarray:
    """Boolean mask of grid actions that are SPE outcomes of some cutoff partition."""
    n = game.grid.n
    lo, hi = game.reach()
    M = game.interval_min_table()
    U, tol = game.U, game.tol
    out = np.zeros(n, bool)
    for m in range(0, max_cuts + 1):
        for cuts in itertools.combinations(range(1, n), m):
            bounds = (0,) + cuts + (n,)
            pieces = [(a, b - 1) for a, b in zip(bounds, bounds[1:])]
            T = max(M[a, b] for a, b in pieces)
            if not np.isfinite(T):
                continue
            for a, b in pieces:
                idx = np.arange(a, b + 1)
                ok = (lo[idx] <= a) & (hi[idx] >= b) & (U[idx] >= T - tol)
                out[idx[ok]] = True
    return out


def certified_interval_cover(game: GridGame) -> np.ndarray:
    """Grid actions certified by the interval-cover family.

    Covers {{p}, [lo, b], [a, hi]} with a <= b + 1 (or a = b + 2 and p = b + 1)
    plus {X, [lo, c]} and {X, [c, hi]}.  Prefix/suffix tables of the smallest
    admissible payoff replace the cubic enumeration of (p, a, b).
    """
    n = game.grid.n
    lo, hi = game.reach()
    M = game.interval_min_table()
    U, tol = game.U, game.tol
    idx = np.arange(n)
    pre = M[0, :]          # runs [0, b]
    suf = M[:, n - 1]      # runs [a, n-1]
    umin = float(np.min(U))
    in_pre = lambda b: (lo <= 0) & (idx <= b) & (hi >= b)
    in_suf = lambda a: (hi >= n - 1) & (idx >= a) & (lo <= a)
    out = np.zeros(n, bool)

    # overlapping covers: p is free, so the point element costs nothing extra
    suf_best = np.minimum.accumulate(suf)               # min over a <= j
    pre_best = np.minimum.accumulate(pre[::-1])[::-1]   # min over b >= j
    floor_b = np.maximum(pre, suf_best[np.minimum(idx + 1, n - 1)])
    floor_a = np.maximum(suf, pre_best[np.maximum(idx - 1, 0)])
    if np.isfinite(floor_b).any():
        out |= U >= float(np.min(floor_b)) - tol        # the point element itself
    for j in range(n):
        if np.isfinite(floor_b[j]):
            out |= in_pre(j) & (U >= max(floor_b[j], umin) - tol)
        if np.isfinite(floor_a[j]):
            out |= in_suf(j) & (U >= max(floor_a[j], umin) - tol)

    # gap covers: the point fills the single missing index
    for b in range(n - 2):
        p = b + 1
        T = max(pre[b], suf[b + 2], U[p])
        if np.isfinite(T):
            out[p] |= U[p] >= T - tol
            out |= (in_pre(b) | in_suf(b + 2)) & (U >= T - tol)

    # the whole space next to a lower or upper interval
    whole = in_pre(n - 1)
    full = M[0, n - 1]
    for c in range(n - 1):
        for T, part in ((max(full, pre[c]), in_pre(c)), (max(full, suf[c + 1]), in_suf(c + 1))):
            if np.isfinite(T):
                out |= (whole | part) & (U >= T - tol)
    return out


def interval_cover_witness(game: GridGame, s: int) -> FiniteCST | None:
    """A member of the interval-cover family certifying index s, found from the tables."""
    n = game.grid.n
    lo, hi = game.reach()
    M = game.interval_min_table()
    U, tol = game.U, game.tol
    pre, suf = M[0, :], M[:, n - 1]
    cap = U[s] + tol
    full = tuple(range(n))
    in_pre = lambda b: lo[s] <= 0 and s <= b <= hi[s]
    in_suf = lambda a: hi[s] >= n - 1 and lo[s] <= a <= s
    # taking the point element at s is never worse than any other choice of point
    best_a = np.minimum.accumulate(suf)
    for b in range(n):
        j = min(b + 1, n - 1)
        if pre[b] <= cap and best_a[j] <= cap:
            a = int(np.argmax(suf[: j + 1] <= cap))
            return FiniteCST(((s,), tuple(range(b + 1)), tuple(range(a, n))), "point+cover")
    for b in range(n - 2):
        p = b + 1
        if p != s and (in_pre(b) or in_suf(b + 2)) and max(pre[b], suf[b + 2], U[p]) <= cap:
            return FiniteCST(((p,), tuple(range(b + 1)), tuple(range(b + 2, n))), "point+cover")
    whole = in_pre(n - 1)
    for c in range(n - 1):
        if (whole or in_pre(c)) and max(M[0, n - 1], pre[c]) <= cap:
            return FiniteCST((full, tuple(range(c + 1))), "whole+lower")
        if (whole or in_suf(c + 1)) and max(M[0, n - 1], suf[c + 1]) <= cap:
            return FiniteCST((full, tuple(range(c + 1, n))), "whole+upper")
    return None


def certified_bruteforce(game: GridGame, csts: Iterable[FiniteCST]) -> np.ndarray:
    out = np.zeros(game.grid.n, bool)
    for cst in csts:
        for i in game.spe_outcomes(cst).indices:
            out[i] = True
    return out
