import numpy as np
import pytest

from commitment_limits.errors import BadParams, UnknownFamily
from commitment_limits.families import (DuopolyParams, duopoly_closed_forms, make_family,
                                        make_tabulated, sweep_grid, thresholds)
from commitment_limits.plausibility import simply_plausible_set


@pytest.mark.parametrize("d", [0.0, 0.2, 0.4, 0.6, 0.8])
def test_threshold_ordering(d):
    assert thresholds(d).ordered()


def test_thresholds_at_zero():
    th = thresholds(0.0)
    assert th.r_star == pytest.approx(2 - np.sqrt(2))
    assert th.r_3star == pytest.approx((3 - np.sqrt(5)) / 2)


def test_duopoly_symmetry(low_r):
    rng = np.random.default_rng(0)
    x, y = rng.uniform(0, 5 / 3, (2, 50))
    assert np.allclose(low_r.payoff_leader(x, y), low_r.payoff_follower(x, y))


def test_closed_forms_low_r():
    cf = duopoly_closed_forms((0.8, 0.0))
    assert cf.cournot.isolated_points() == [pytest.approx(5 / 11)]
    assert cf.stackelberg == pytest.approx(1.0)
    assert cf.plausible.min() == pytest.approx(5 / 18)
    assert cf.gamma_zero == pytest.approx(5 / 18)


def test_closed_forms_high_r():
    cf = duopoly_closed_forms((1.2, 0.0))
    assert [p.lo for p in cf.cournot] == pytest.approx([0.0, 5 / 9, 5 / 4])
    assert cf.i_plausible.min() == 0.0 and cf.i_plausible.pieces[1].lo == pytest.approx(5 / 17)
    assert cf.regime == "r>d+1"


def test_knife_edge_continuum():
    cf = duopoly_closed_forms((1.0, 0.0))
    assert len(cf.cournot) == 1 and not cf.cournot.pieces[0].is_point


def test_parameter_validation():
    with pytest.raises(BadParams):
        DuopolyParams(2.0, 0.0)
    with pytest.raises(BadParams):
        DuopolyParams(1.0, 1.5)
    with pytest.raises(UnknownFamily):
        make_family("auction")
    with pytest.raises(BadParams):
        make_family("duopoly", r=1.0)


def test_sweep_grid_avoids_edges():
    pts = sweep_grid()
    assert len(pts) == 49
    for r, d in pts:
        th = thresholds(d)
        edges = (d + 1, th.r_star, th.r_2star, th.r_3star, th.r_dag, th.r_2dag, th.r_3dag)
        assert min(abs(r - e) for e in edges) >= 0.02


def test_tabulated_matches_source(tmp_path):
    xs = np.linspace(0, 1, 41)
    u = lambda x, y: x * y + (1 - x) * (1 - y) - 0.5 * (x - 0.5) ** 2 - 1.5 * (y - 0.5) ** 2
    rows = ["," + ",".join("%.6f" % v for v in xs)]
    for x in xs:
        rows.append("%.6f," % x + ",".join("%.12f" % u(x, y) for y in xs))
    path = tmp_path / "coord.csv"
    path.write_text("\n".join(rows))
    spec = make_tabulated(path)
    assert spec.payoff_leader(0.25, 0.5) == pytest.approx(u(0.25, 0.5), abs=1e-3)
    s = simply_plausible_set(spec)
    for c in (0.0, 0.5, 1.0):
        assert s.distance_to(c) < 0.03


def test_tabulated_ragged(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(",0,1\n0,1\n1,2,3\n")
    with pytest.raises(BadParams):
        make_tabulated(path)
