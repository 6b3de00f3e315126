"""Built-in game families and the duopoly closed forms."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import BadParams
from .game import ActionSpace, GameSpec, Partials, Tolerances, constant
from .intervals import IntervalUnion, Piece

KNIFE_EDGE_TOL = 1e-12


def _cbrt(v: float) -> float:
    return float(np.cbrt(v))

# actions the worked examples sit on; added to oracle grids when in range
DUOPOLY_LANDMARKS = (1 / 8, 1 / 3, 5 / 18, 3 / 2, 5 / 3, 5 / 17, 5 / 9, 5 / 4, 5 / 11)
COORDINATION_LANDMARKS = (1 / 9, 4 / 9, 0.05, 0.95, 0.1, 0.25, 0.4, 0.6, 0.75, 0.9)


@dataclass(frozen=True)
class DuopolyParams:
    r: float
    d: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.r) and self.r < 2):
            raise BadParams(f"duopoly needs r < 2, got {self.r}")
        if not (0.0 <= self.d <= 1.0):
            raise BadParams(f"duopoly needs d in [0, 1], got {self.d}")

    @property
    def monopoly(self) -> float:
        return 1.0 / (2.0 - self.r)

    @property
    def top(self) -> float:
        return 2.0 / (2.0 - self.r)

    def knife_edge(self) -> int:
        """Sign of r - (d + 1), with exact ties resolved at 1e-12."""
        gap = self.r - (self.d + 1.0)
        if abs(gap) <= KNIFE_EDGE_TOL:
            return 0
        return 1 if gap > 0 else -1


@dataclass(frozen=True)
class CoordinationParams:
    a: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and self.a >= 0):
            raise BadParams(f"coordination needs a >= 0, got {self.a}")


def make_duopoly(params: DuopolyParams | tuple, tol: Tolerances | None = None) -> GameSpec:
    if not isinstance(params, DuopolyParams):
        params = DuopolyParams(*params)
    r, d = params.r, params.d
    k, c = 1.0 - d, 1.0 - r / 2.0

    def u(x, y):
        return x - k * x * y - c * x * x

    space = ActionSpace(0.0, params.top)
    parts = Partials(
        u1=lambda x, y: 1.0 - k * y - (2.0 - r) * x,
        u2=lambda x, y: -k * x + 0.0 * y,
        u11=constant(-(2.0 - r)),
        u12=constant(-k),
        v1=lambda y, x: 1.0 - k * x - (2.0 - r) * y,
        v2=lambda y, x: -k * y + 0.0 * x,
        v11=constant(-(2.0 - r)),
        v12=constant(-k),
    )
    marks = tuple(m for m in DUOPOLY_LANDMARKS if 0.0 <= m <= params.top)
    return GameSpec(space, space, u, u, parts, tol or Tolerances(), "duopoly",
                    (("r", r), ("d", d)), marks)


def make_coordination(params: CoordinationParams | float, tol: Tolerances | None = None) -> GameSpec:
    if not isinstance(params, CoordinationParams):
        params = CoordinationParams(float(params))
    a = params.a
    pen = 1.5 * (1.0 + a)

    def u(x, y):
        return x * y + (1 - x) * (1 - y) - 0.5 * (x - 0.5) ** 2 - pen * (y - 0.5) ** 2

    parts = Partials(
        u1=lambda x, y: 2 * y - x - 0.5,
        u2=lambda x, y: 2 * x - 1 - 2 * pen * (y - 0.5),
        u11=constant(-1.0),
        u12=constant(2.0),
        v1=lambda y, x: 2 * x - y - 0.5,
        v2=lambda y, x: 2 * y - 1 - 2 * pen * (x - 0.5),
        v11=constant(-1.0),
        v12=constant(2.0),
    )
    space = ActionSpace(0.0, 1.0)
    return GameSpec(space, space, u, u, parts, tol or Tolerances(), "coordination",
                    (("a", a),), COORDINATION_LANDMARKS)


def _read_matrix(path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    cols = np.array([float(c) for c in rows[0][1:]])
    if any(len(r) != cols.size + 1 for r in rows[1:]):
        raise BadParams(f"{path}: ragged payoff matrix")
    idx = np.array([float(r[0]) for r in rows[1:]])
    vals = np.array([[float(c) for c in r[1:]] for r in rows[1:]])
    return idx, cols, vals


def make_tabulated(leader_csv: str | Path, follower_csv: str | Path | None = None,
                   tol: Tolerances | None = None) -> GameSpec:
    """A game from sampled payoffs, bilinearly interpolated.

    Each CSV holds a matrix whose first row lists follower actions and whose
    first column lists leader actions.  The follower file holds v at the same
    (leader row, follower column) layout; without it the game is taken to be
    symmetric, v(y, x) = u(y, x).
    """
    from scipy.interpolate import RegularGridInterpolator

    xs, ys, uvals = _read_matrix(Path(leader_csv))
    if follower_csv is not None:
        xs2, ys2, vvals = _read_matrix(Path(follower_csv))
        if not (np.allclose(xs, xs2) and np.allclose(ys, ys2)):
            raise BadParams("leader and follower tables must share axes")
    else:
        if not np.allclose(xs, ys):
            raise BadParams("symmetric tabulated game needs identical axes")
        vvals = uvals.T
    ui = RegularGridInterpolator((xs, ys), uvals, bounds_error=False, fill_value=None)
    vi = RegularGridInterpolator((xs, ys), vvals, bounds_error=False, fill_value=None)

    def u(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        return ui(np.stack([x.ravel(), y.ravel()], axis=-1)).reshape(x.shape)

    def v(y, x):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        return vi(np.stack([x.ravel(), y.ravel()], axis=-1)).reshape(x.shape)

    return GameSpec(ActionSpace(float(xs[0]), float(xs[-1])), ActionSpace(float(ys[0]), float(ys[-1])),
                    u, v, None, tol or Tolerances(), "tabulated",
                    (("file", str(leader_csv)),), (), check_concavity=False)


# --- thresholds -----------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdRow:
    d: float
    r_star: float
    r_2star: float
    r_3star: float
    r_dag: float
    r_2dag: float
    r_3dag: float

    def ordered(self) -> bool:
        return 2 * self.d < self.r_2dag < self.r_3dag < self.r_dag < self.r_star < self.d + 1


def _slopes() -> dict[str, float]:
    c2 = _cbrt(math.sqrt(57) / 9 + 1)
    cd = _cbrt(3 * (9 - math.sqrt(78)))
    c3 = _cbrt(80 - 9 * math.sqrt(79))
    return {
        "star": math.sqrt(2),
        "2star": c2 + 2 / (3 * c2),
        "dag": cd / 3 + 1 / cd,
        "2dag": math.sqrt(3),
        "3dag": -((1 - c3) / 3 - 1 / (3 * c3)),
    }


_SLOPE = _slopes()


def thresholds(d: float) -> ThresholdRow:
    """All regime thresholds in r for a given differentiation level."""
    if not 0.0 <= d <= 1.0:
        raise BadParams(f"d must lie in [0, 1], got {d}")
    e = 1.0 - d
    return ThresholdRow(
        d=d,
        r_star=2 - _SLOPE["star"] * e,
        r_2star=2 - _SLOPE["2star"] * e,
        r_3star=0.5 * (3 - math.sqrt(5) + (1 + math.sqrt(5)) * d),
        r_dag=2 - _SLOPE["dag"] * e,
        r_2dag=2 - _SLOPE["2dag"] * e,
        r_3dag=2 - _SLOPE["3dag"] * e,
    )


# --- closed forms -------------------------------------------------------------

@dataclass(frozen=True)
class DuopolyClosedForms:
    params: DuopolyParams
    thresholds: ThresholdRow
    cournot: IntervalUnion
    stackelberg: float
    simply_plausible: IntervalUnion
    i_plausible: IntervalUnion
    plausible: IntervalUnion
    x_min: float
    x_max: float
    regime: str
    gamma_zero: Optional[float]

    def follower_response(self, x):
        return duopoly_follower_response(self.params, x)

    def leader_value(self, x):
        return duopoly_leader_value(self.params, x)

    def phi(self, x):
        return duopoly_phi(self.params, x)


def duopoly_follower_response(p: DuopolyParams, x):
    x = np.asarray(x, dtype=float)
    return np.maximum(0.0, (1 - (1 - p.d) * x) / (2 - p.r))


def duopoly_phi(p: DuopolyParams, x):
    x = np.asarray(x, dtype=float)
    e = 1 - p.d
    inner = (p.d + 1 - p.r + e * e * x) / (2 - p.r) ** 2
    out = np.maximum(0.0, inner)
    if e > 0:
        out = np.where(x >= 1 / e, p.monopoly, out)
    return out


def duopoly_leader_value(p: DuopolyParams, x):
    """U in closed form; the first branch applies for x <= 1/(1-d)."""
    x = np.asarray(x, dtype=float)
    r, d = p.r, p.d
    inner = (2 * (1 - r + d) * x - ((2 - r) ** 2 - 2 * (1 - d) ** 2) * x * x) / (2 * (2 - r))
    outer = x - (1 - r / 2) * x * x
    if d < 1:
        return np.where(x <= 1 / (1 - d), inner, outer)
    return inner


def duopoly_closed_forms(params: DuopolyParams | tuple) -> DuopolyClosedForms:
    if not isinstance(params, DuopolyParams):
        params = DuopolyParams(*params)
    r, d = params.r, params.d
    e = 1 - d
    th = thresholds(d)
    space = ActionSpace(0.0, params.top)
    xm, top = params.monopoly, params.top
    edge = params.knife_edge()
    xc = 1 / (3 - r - d)

    def iv(lo, hi):
        return Piece(lo, hi)

    if edge < 0:
        cournot = IntervalUnion.points(space, [xc])
    elif edge == 0:
        cournot = IntervalUnion(space, (iv(0.0, xm),))
    else:
        cournot = IntervalUnion.points(space, [0.0, xc, xm])

    if edge > 0:
        xs = xm
    elif r < th.r_3star:
        xs = (d + 1 - r) / ((2 - r) ** 2 - 2 * e * e)
    else:
        xs = 1 / e

    lower_multi = 2 * (r - d - 1) / (2 * e * e - (2 - r) ** 2) if edge > 0 else None
    if edge < 0:
        if r < th.r_2star:
            upper = (2 - r) ** 2 / ((3 - r - d) * ((2 - r) ** 2 - 2 * e * e))
        else:
            upper = (math.sqrt(e * (5 - 2 * r - d)) - r - d + 3) / ((2 - r) * (3 - r - d))
        simple = IntervalUnion(space, (iv(xc, upper),))
        ip = simple
    elif edge == 0:
        simple = IntervalUnion.full(space)
        ip = simple
    else:
        simple = IntervalUnion(space, (iv(0.0, 0.0), iv(lower_multi, xc), iv(xm, top)))
        ip = IntervalUnion(space, (iv(0.0, 0.0), iv(lower_multi, top)))

    gamma0 = None
    if edge < 0 and r >= th.r_star:
        lo = 2 * (d + 1 - r) / (2 - r) ** 2
        disc = (2 - r) ** 4 - 8 * e * e * (d + 1 - r) ** 2
        hi = ((2 - r) ** 2 + math.sqrt(max(disc, 0.0))) / (2 - r) ** 3
        plaus = IntervalUnion(space, (iv(lo, hi),))
        gamma0 = lo
    else:
        plaus = ip
    if edge < 0:
        gamma0 = 2 * (1 + d - r) / (2 - r) ** 2

    if edge >= 0:
        regime = "r=d+1" if edge == 0 else "r>d+1"
    elif r >= th.r_star:
        regime = "r*<=r<d+1"
    elif r >= th.r_2star:
        regime = "r**<=r<r*"
    else:
        regime = "r<r**"
    return DuopolyClosedForms(params, th, cournot, xs, simple, ip, plaus,
                              plaus.min(), plaus.max(), regime, gamma0)


def extreme_actions_closed_form(params: DuopolyParams | tuple, cst_class: str = "all") -> tuple[float, float]:
    cf = duopoly_closed_forms(params)
    sets = {"simple": cf.simply_plausible, "I": cf.i_plausible, "P": cf.plausible, "all": cf.plausible}
    if cst_class not in sets:
        raise BadParams(f"unknown class {cst_class!r}")
    s = sets[cst_class]
    return s.min(), s.max()


FamilyFactory = Callable[..., GameSpec]


def make_family(family: str, r: float | None = None, d: float | None = None,
                a: float | None = None, table: str | None = None, table_v: str | None = None,
                tol: Tolerances | None = None) -> GameSpec:
    from .errors import UnknownFamily

    if family == "duopoly":
        if r is None or d is None:
            raise BadParams("duopoly needs --r and --d")
        return make_duopoly(DuopolyParams(r, d), tol)
    if family == "coordination":
        return make_coordination(CoordinationParams(0.0 if a is None else a), tol)
    if family == "tabulated":
        if table is None:
            raise BadParams("tabulated needs a payoff table")
        return make_tabulated(table, table_v, tol)
    raise UnknownFamily(family)


SWEEP_D = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
SWEEP_R = (0.3, 0.6, 0.9, 1.15, 1.45, 1.7, 1.9)


def sweep_grid(ds=SWEEP_D, rs=SWEEP_R, clearance: float = 0.02, nudge: float = 0.013):
    """(r, d) pairs with r moved off every regime threshold and the r = d + 1 edge."""
    out = []
    for d in ds:
        th = thresholds(d)
        edges = (d + 1, th.r_star, th.r_2star, th.r_3star, th.r_dag, th.r_2dag, th.r_3dag)
        for r in rs:
            while min(abs(r - e) for e in edges) < clearance:
                r += nudge
            out.append((round(r, 6), d))
    return out
