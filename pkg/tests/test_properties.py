"""Randomized invariants, 200 probes per family (hypothesis profile set in conftest)."""
import functools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from commitment_limits.equilibria import contour_set, cournot_points, stackelberg_set
from commitment_limits.game import (best_response_follower, eta, leader_value, numeric_partials,
                                    phi)
from commitment_limits.oracle import FiniteCST, Grid, GridGame, is_worse
from commitment_limits.plausibility import (check_rc, i_plausible_set, p_plausible_set,
                                            simply_plausible_set)

from conftest import coordination, duopoly

POOL = {
    "duopoly": [(0.4, 0.0), (0.8, 0.0), (1.2, 0.0), (1.3, 0.0), (0.9, 0.3), (1.45, 0.2),
                (0.6, 0.5), (1.7, 0.5)],
    "coordination": [0.0, 0.01, 0.05, 0.2],
}
SET_TOL = 1e-6


def spec_for(family, k):
    p = POOL[family][k % len(POOL[family])]
    return duopoly(*p) if family == "duopoly" else coordination(p)


@functools.lru_cache(maxsize=None)
def sets_for(family, k):
    spec = spec_for(family, k)
    rc = check_rc(spec)
    p = p_plausible_set(spec, rc).plausible if rc.holds else None
    return stackelberg_set(spec), simply_plausible_set(spec), i_plausible_set(spec), p


@functools.lru_cache(maxsize=None)
def grid_game(family, k, n=31):
    spec = spec_for(family, k)
    return GridGame(spec, Grid(spec.leader_space.linspace(n), spec.leader_space.width / (n - 1)))


def point_in(s, u):
    """Map u in [0, 1] to a point of the interval union s."""
    pieces = list(s)
    p = pieces[min(int(u * len(pieces)), len(pieces) - 1)]
    frac = u * len(pieces) - int(u * len(pieces))
    return p.lo + frac * (p.hi - p.lo)


FAMILIES = pytest.mark.parametrize("family", sorted(POOL))
index = st.integers(0, 63)
unit = st.floats(0.0, 1.0)


@FAMILIES
@given(k=index, u=unit)
def test_sandwich_inclusions(family, k, u):
    stack, simple, iset, pset = sets_for(family, k)
    for p in stack:
        assert simple.contains(p.lo, SET_TOL)
    x = point_in(simple, u)
    assert iset.contains(x, SET_TOL)
    if pset is not None:
        assert pset.contains(x, SET_TOL)


@FAMILIES
@given(k=index, u1=unit, u2=unit)
def test_contour_nesting(family, k, u1, u2):
    spec = spec_for(family, k)
    U = leader_value(spec, spec.leader_space.linspace(401))
    lo, hi = float(np.min(U)), float(np.max(U))
    l_hi, l_lo = lo + max(u1, u2) * (hi - lo), lo + min(u1, u2) * (hi - lo)
    tight, loose = contour_set(spec, l_hi, ">="), contour_set(spec, l_lo, ">=")
    for p in tight:
        assert loose.contains(p.lo, SET_TOL) and loose.contains(p.hi, SET_TOL)


@FAMILIES
@given(k=index, x=unit, y=unit)
def test_fixed_point_and_response_residuals(family, k, x, y):
    spec = spec_for(family, k)
    X, Y = spec.leader_space, spec.follower_space
    for c in cournot_points(spec, 3):
        assert abs(float(phi(spec, c)) - c) <= 10 * spec.tol.x_tol
    xs = X.lo + x * X.width
    ys = Y.lo + y * Y.width
    assert eta(spec, xs, xs) == 0.0
    br = float(best_response_follower(spec, xs))
    assert spec.payoff_follower(br, xs) >= spec.payoff_follower(ys, xs) - spec.tol.f_tol


def random_partition(n, cuts):
    bounds = [0] + sorted(set(c for c in cuts if 0 < c < n)) + [n]
    return tuple(tuple(range(a, b)) for a, b in zip(bounds, bounds[1:]))


@FAMILIES
@given(k=index, cuts=st.lists(st.integers(1, 30), max_size=3), a=st.integers(0, 30), w=st.integers(0, 30))
def test_richer_never_worse_and_payoff_monotone(family, k, cuts, a, w):
    game = grid_game(family, k)
    n = game.grid.n
    base = random_partition(n, cuts)
    extra = tuple(range(a, min(a + w, n - 1) + 1))
    K = FiniteCST(base)
    K2 = FiniteCST(base + (extra,))
    r1, r2 = game.spe_outcomes(K), game.spe_outcomes(K2)
    if r1.no_equilibrium or r2.no_equilibrium:
        return
    assert not is_worse(game, K2, K)
    top1 = max(o.payoff for o in r1.outcomes)
    top2 = max(o.payoff for o in r2.outcomes)
    assert top2 >= top1 - game.tol


@FAMILIES
@given(k=index, x=unit, y=unit)
def test_finite_differences_match_analytic_partials(family, k, x, y):
    spec = spec_for(family, k)
    X, Y = spec.leader_space, spec.follower_space
    # keep the stencil inside the action spaces
    xs = X.lo + 0.01 * X.width + 0.98 * x * X.width
    ys = Y.lo + 0.01 * Y.width + 0.98 * y * Y.width
    an, fd = spec.analytic_partials, numeric_partials(spec)
    for name in ("u1", "u2", "u11", "u12"):
        a, f = float(getattr(an, name)(xs, ys)), float(getattr(fd, name)(xs, ys))
        assert abs(a - f) <= 1e-5 * max(1.0, abs(a)), name
    for name in ("v1", "v2", "v11", "v12"):
        a, f = float(getattr(an, name)(ys, xs)), float(getattr(fd, name)(ys, xs))
        assert abs(a - f) <= 1e-5 * max(1.0, abs(a)), name
