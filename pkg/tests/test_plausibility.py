import numpy as np
import pytest

from commitment_limits.equilibria import contour_set, cournot_points, stackelberg_set
from commitment_limits.game import leader_value
from commitment_limits.oracle import Grid, GridGame, certify, project
from commitment_limits.plausibility import (check_rc, i_plausible_set, i_witness,
                                            lower_bound_diagnostics, p_plausible_set,
                                            plausibility_report, simple_witness,
                                            simply_plausible_set)

from conftest import duopoly


def pieces(s):
    return [(p.lo, p.hi) for p in s]


def subset(a, b, tol=1e-6):
    return all(b.contains(p.lo, tol) and b.contains(p.hi, tol) and
               b.contains(0.5 * (p.lo + p.hi), tol) for p in a)


def test_simple_set_high_r(high_r):
    got = pieces(simply_plausible_set(high_r))
    want = [(0, 0), (5 / 17, 5 / 9), (5 / 4, 5 / 2)]
    assert np.allclose(got, want, atol=1e-6)


def test_i_set_high_r(high_r):
    assert np.allclose(pieces(i_plausible_set(high_r)), [(0, 0), (5 / 17, 5 / 2)], atol=1e-6)


def test_p_set_low_r(low_r):
    res = p_plausible_set(low_r)
    assert res.plausible.min() == pytest.approx(5 / 18, abs=1e-6)
    assert res.underline_u == pytest.approx(float(leader_value(low_r, 5 / 18)), abs=1e-9)
    assert res.x_hat == pytest.approx(0.0) and res.gamma_hat == pytest.approx(5 / 18, abs=1e-9)
    assert res.s_set.min() == pytest.approx(0.0) and res.s_set.max() == pytest.approx(5 / 11, abs=1e-6)
    assert res.plausible.contains(1 / 3)
    assert not simply_plausible_set(low_r).contains(1 / 3)


def test_regularity_checks(low_r, high_r, coord):
    assert check_rc(low_r).holds
    assert not check_rc(high_r).rc1
    assert not check_rc(coord).rc1


def test_coordination_sets(coord):
    assert np.allclose(pieces(simply_plausible_set(coord)), [(0, 0), (0.5, 0.5), (1, 1)], atol=1e-6)
    assert np.allclose(pieces(i_plausible_set(coord)), [(0, 1)], atol=1e-6)


@pytest.mark.parametrize("rd", [(0.4, 0.0), (0.8, 0.0), (0.9, 0.3), (0.6, 0.5)])
def test_unique_cournot_collapses_simple_and_i(rd):
    spec = duopoly(*rd)
    (xc,) = cournot_points(spec)
    upper = contour_set(spec, float(leader_value(spec, xc)), ">=")
    s, i = simply_plausible_set(spec), i_plausible_set(spec)
    assert s.hausdorff(i) < 1e-6 and s.hausdorff(upper) < 1e-6


@pytest.mark.parametrize("name", ["low_r", "high_r", "coord"])
def test_contour_corollaries(name, request):
    spec = request.getfixturevalue(name)
    cs = cournot_points(spec)
    cu = [float(leader_value(spec, c)) for c in cs]
    simple, iset = simply_plausible_set(spec), i_plausible_set(spec)
    # every simply plausible action has some Cournot action paying no more
    for x in simple.sample(25):
        assert min(cu) <= float(leader_value(spec, x)) + 1e-9
    # the intersection of all Cournot upper contour sets is simply plausible
    assert subset(contour_set(spec, max(cu), ">="), simple)
    for u in cu:
        assert subset(contour_set(spec, u, ">="), iset)


def test_sandwich(low_r, high_r):
    for spec in (low_r, high_r):
        assert subset(stackelberg_set(spec), simply_plausible_set(spec))
        assert subset(simply_plausible_set(spec), i_plausible_set(spec))
    assert subset(simply_plausible_set(low_r), p_plausible_set(low_r).plausible)


@pytest.mark.parametrize("x_star", [0.3, 1 / 3, 0.4, 1.0, 1.5])
def test_plausible_actions_have_quasi_simple_witnesses(low_r, x_star):
    pres = p_plausible_set(low_r)
    assert pres.plausible.contains(x_star)
    g = Grid.for_spec(low_r, 201, extra=[x_star, pres.x_hat])
    w = certify(low_r, g, x_star, ["quasi_simple_witness"], x_hat=pres.x_hat)
    assert w is not None


@pytest.mark.parametrize("x_star", [5 / 11, 0.8, 1.5])
def test_simple_witness_certifies(low_r, x_star):
    g = Grid.for_spec(low_r, 201, extra=[x_star])
    game = GridGame(low_r, g)
    w = project(simple_witness(low_r, x_star), g)
    assert g.index_of(x_star) in game.spe_outcomes(w).indices


@pytest.mark.parametrize("x_star", [0.4, 0.7, 1.0])
def test_i_witness_certifies(high_r, x_star):
    w = i_witness(high_r, x_star)
    assert w is not None
    g = Grid.for_spec(high_r, 201, extra=[x_star])
    game = GridGame(high_r, g)
    assert g.index_of(x_star) in game.spe_outcomes(project(w, g)).indices


def test_lower_bound_diagnostics(low_r):
    diag = lower_bound_diagnostics(low_r)
    assert diag.slope_product == pytest.approx(25 / 36, abs=1e-4)
    assert diag.predicate and diag.observed_below and diag.consistent


def test_p_set_equals_simple_when_s_is_cournot():
    spec = duopoly(0.8, 0.3)
    res = p_plausible_set(spec)
    (xc,) = cournot_points(spec)
    assert res.s_set.min() == pytest.approx(xc, abs=1e-6) and res.s_set.max() == pytest.approx(xc, abs=1e-6)
    assert res.plausible.hausdorff(simply_plausible_set(spec)) < 1e-6


def test_report_omits_p_outside_rc(high_r):
    rep = plausibility_report(high_r)
    assert rep.p_plausible is None and rep.to_json()["p_plausible"] is None
    assert any(c["set"] == "simple" for c in rep.certificates)
