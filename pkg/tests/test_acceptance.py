"""Acceptance criteria 1-11, one check each; a PASS/FAIL line per criterion is printed.

Run with pytest (lines appear in the terminal summary) or directly:
``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from commitment_limits.cli import oracle_campaign
from commitment_limits.cst import parse_cst
from commitment_limits.design import solve_cdp
from commitment_limits.equilibria import cournot_set, stackelberg_set
from commitment_limits.families import (duopoly_closed_forms, make_coordination, make_duopoly,
                                        sweep_grid, thresholds)
from commitment_limits.game import leader_value
from commitment_limits.intervals import IntervalUnion
from commitment_limits.oracle import Grid, GridGame, project
from commitment_limits.plausibility import (check_rc, i_plausible_set, lower_bound_diagnostics,
                                            p_plausible_set, simply_plausible_set)
from commitment_limits.refinement import is_finer, is_worse, worse_refinement_exists

RESULTS: dict[int, tuple[bool, str, str]] = {}
HERE = Path(__file__).resolve().parent


def pieces(s):
    return [(p.lo, p.hi) for p in s]


def close_pieces(s, want, tol):
    got = pieces(s)
    return len(got) == len(want) and np.allclose(got, want, atol=tol, rtol=0)


def spe(spec, literal, extra):
    g = Grid.for_spec(spec, 201, extra=extra)
    game = GridGame(spec, g)
    cst = project(parse_cst(literal, spec.leader_space), g)
    return g, game.spe_outcomes(cst), game.spe_outcomes_leader_preferred(cst)


def c1():
    s = simply_plausible_set(make_duopoly((1.2, 0.0)))
    assert close_pieces(s, [(0, 0), (5 / 17, 5 / 9), (5 / 4, 5 / 2)], 1e-6), pieces(s)
    return "simple set at r=6/5 is {0} u [5/17,5/9] u [5/4,5/2]"


def c2():
    s = i_plausible_set(make_duopoly((1.2, 0.0)))
    assert close_pieces(s, [(0, 0), (5 / 17, 5 / 2)], 1e-6), pieces(s)
    return "I-plausible set at r=6/5 is {0} u [5/17,5/2]"


def c3():
    spec = make_duopoly((0.8, 0.0))
    assert close_pieces(cournot_set(spec), [(5 / 11, 5 / 11)], 1e-6)
    assert close_pieces(stackelberg_set(spec), [(1, 1)], 1e-6)
    res = p_plausible_set(spec)
    assert abs(res.plausible.min() - 5 / 18) <= 1e-6
    assert abs(res.underline_u - float(leader_value(spec, 5 / 18))) <= 1e-9
    assert res.plausible.contains(1 / 3) and not simply_plausible_set(spec).contains(1 / 3)
    return "r=4/5: Cournot 5/11, Stackelberg 1, P-set from 5/18, 1/3 plausible but not simply"


def c4():
    spec = make_coordination(0.0)
    for s in (cournot_set(spec), stackelberg_set(spec), simply_plausible_set(spec)):
        assert close_pieces(s, [(0, 0), (0.5, 0.5), (1, 1)], 1e-6), pieces(s)
    for x in (0.6, 0.75, 0.9):
        g, res, _ = spe(spec, f"[0,{x}]|[{1 - x},1]", [x, 1 - x])
        assert g.index_of(x) in res.indices, x
    return "coordination: three-point sets; 0.6, 0.75, 0.9 certified by two-interval covers"


def c5():
    t0 = time.perf_counter()
    games = [make_duopoly((0.8, 0.0)), make_duopoly((1.2, 0.0)), make_coordination(0.0)]
    bad = []
    for spec in games:
        camp = oracle_campaign(spec, Grid.for_spec(spec, 201))
        bad += camp["discrepancies"]
    took = time.perf_counter() - t0
    assert not bad, bad[:5]
    assert took < 300, took
    return f"oracle campaigns agree on all three games ({took:.1f} s)"


def c6():
    low = make_duopoly((0.8, 0.0))
    g, res, _ = spe(low, "[0,3/2)|[3/2,5/3]", [1.5])
    assert len(res.leader_actions) == 1 and abs(res.leader_actions[0] - 1.5) <= g.h
    g, res, _ = spe(low, "(1/8,1/3]|[0,1/8]u(1/3,5/3]", [1 / 8, 1 / 3])
    got = sorted(res.leader_actions)
    assert len(got) == 2 and abs(got[0] - 1 / 3) <= g.h and abs(got[1] - 5 / 11) <= g.h
    coord = make_coordination(0.0)
    g, res, pref = spe(coord, "[1/9,4/9)|[0,1/9)u[4/9,1]", [1 / 9, 4 / 9])
    floor = min(float(leader_value(coord, x)) for x in (0.0, 0.5, 1.0))
    low_out = [o for o in res.outcomes if abs(o.leader - 4 / 9) <= g.h and o.payoff < floor]
    assert low_out
    assert not [o for o in pref.outcomes if abs(o.leader - 4 / 9) <= g.h]
    return "worked SPE examples: {3/2}, {1/3, 5/11}, low-payoff 4/9 dropped by leader preference"


def c7():
    worst = {"cournot": 0.0, "stackelberg": 0.0, "sets": 0.0}
    for r, d in sweep_grid():
        spec = make_duopoly((r, d))
        cf = duopoly_closed_forms((r, d))
        h = spec.leader_space.width / (spec.tol.grid_n - 1)
        worst["cournot"] = max(worst["cournot"], cournot_set(spec).hausdorff(cf.cournot))
        want_s = IntervalUnion.points(spec.leader_space, [cf.stackelberg])
        worst["stackelberg"] = max(worst["stackelberg"], stackelberg_set(spec).hausdorff(want_s))
        pairs = [(simply_plausible_set(spec), cf.simply_plausible), (i_plausible_set(spec), cf.i_plausible)]
        rc = check_rc(spec)
        if rc.holds:
            pairs.append((p_plausible_set(spec, rc).plausible, cf.plausible))
        for a, b in pairs:
            worst["sets"] = max(worst["sets"], a.hausdorff(b) / h)
    assert worst["cournot"] <= 1e-5 and worst["stackelberg"] <= 1e-5, worst
    assert worst["sets"] <= 2, worst
    for d in (0.0, 0.2, 0.4, 0.6, 0.8):
        assert thresholds(d).ordered(), d
    return "7x7 sweep matches closed forms (worst set gap %.2g spacings); thresholds ordered" % worst["sets"]


def c8():
    for rd in [(0.4, 0.0), (0.8, 0.0), (1.3, 0.0), (0.8, 0.3)]:
        spec, cf = make_duopoly(rd), duopoly_closed_forms(rd)
        for obj, target in (("leader", cf.stackelberg), ("cs", cf.x_max), ("welfare", cf.x_max)):
            sol = solve_cdp(spec, obj)
            assert min(abs(p.lo - target) for p in sol.optimal_actions) <= 1e-5, (rd, obj)
    ps = solve_cdp(make_duopoly((0.4, 0.0)), "ps")
    assert [p.lo for p in ps.optimal_actions] == pytest.approx([1 / 2.6], abs=1e-5)
    ps = solve_cdp(make_duopoly((1.3, 0.0)), "ps")
    assert sorted(p.lo for p in ps.optimal_actions) == pytest.approx([0.0, 1 / 0.7], abs=1e-5)
    return "design regimes: leader, consumer surplus, welfare and producer-surplus branches"


def c9():
    checked = 0
    for r, d in sweep_grid():
        spec = make_duopoly((r, d))
        rc = check_rc(spec)
        if not rc.holds:
            continue
        diag = lower_bound_diagnostics(spec, rc)
        if diag.slope_product > 0.5 + 1e-4:
            checked += 1
            assert diag.underline_u < diag.u_at_cournot - 1e-9, (r, d)
    assert checked > 0
    return f"lower bound falls below U(x^C) at all {checked} sweep points with slope product > 1/2"


def c10():
    spec = make_coordination(0.01)
    X = spec.leader_space
    K = parse_cst("{0}|(0,1)|{1}", X)
    Kp = parse_cst("{0}|[0.05,0.95]|{1}|*(0,0.05)|*(0.95,1)", X)
    assert is_finer(Kp, K)
    verdict = is_worse(spec, Grid.for_spec(spec, 201, extra=[0.05, 0.95]), Kp, K)
    assert verdict.worse, verdict
    found = worse_refinement_exists(spec, K)
    assert found is not None
    return f"refinement is finer and worse; witness threshold {found.threshold:.6g}"


def c11():
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           str(HERE / "test_properties.py")], capture_output=True, text=True,
                          cwd=HERE.parent)
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    assert proc.returncode == 0, tail
    return f"property suite: {tail} ({time.perf_counter() - t0:.0f} s)"


CRITERIA = {1: c1, 2: c2, 3: c3, 4: c4, 5: c5, 6: c6, 7: c7, 8: c8, 9: c9, 10: c10, 11: c11}


def run_one(n: int) -> tuple[bool, str]:
    try:
        msg = CRITERIA[n]()
        RESULTS[n] = (True, msg, "")
    except Exception as exc:  # recorded, then re-raised by the pytest wrapper
        RESULTS[n] = (False, CRITERIA[n].__name__, f"{type(exc).__name__}: {exc}")
    return RESULTS[n][0], RESULTS[n][2]


def line(n: int) -> str:
    ok, msg, err = RESULTS[n]
    return f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {msg}" + ("" if ok else f" -- {err}")


def summary_lines() -> list[str]:
    return [line(n) for n in sorted(RESULTS)]


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, err = run_one(n)
    print(line(n))
    assert ok, err


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        run_one(n)
        print(line(n), flush=True)
    sys.exit(0 if all(v[0] for v in RESULTS.values()) else 1)
