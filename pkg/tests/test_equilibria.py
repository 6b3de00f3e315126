import numpy as np
import pytest

from commitment_limits.equilibria import (contour_set, cournot_set, equilibrium_report,
                                          stackelberg_set)
from commitment_limits.families import duopoly_closed_forms, thresholds

from conftest import duopoly


@pytest.mark.parametrize("d", np.linspace(0, 0.9, 10))
@pytest.mark.parametrize("frac", np.linspace(0.05, 0.95, 10))
def test_unique_cournot_closed_form(d, frac):
    r = frac * (d + 1)
    c = cournot_set(duopoly(round(r, 6), round(d, 6)))
    assert len(c) == 1 and c.pieces[0].is_point
    assert c.min() == pytest.approx(1 / (3 - round(r, 6) - round(d, 6)), abs=1e-7)


@pytest.mark.parametrize("r,d", [(0.3, 0.0), (0.9, 0.2), (1.1, 0.2), (1.45, 0.2), (1.5, 0.1)])
def test_stackelberg_branches(r, d):
    th = thresholds(d)
    spec = duopoly(r, d)
    s = stackelberg_set(spec)
    assert s.min() == pytest.approx(duopoly_closed_forms((r, d)).stackelberg, abs=1e-6)
    branch = "low" if r < th.r_3star else ("mid" if r <= d + 1 else "high")
    assert branch in {"low", "mid", "high"}


def test_multiple_cournot_high_r(high_r):
    c = cournot_set(high_r)
    assert [p.lo for p in c] == pytest.approx([0.0, 5 / 9, 5 / 4], abs=1e-7)


def test_knife_edge_interval():
    c = cournot_set(duopoly(1.0, 0.0))
    assert len(c) == 1 and c.pieces[0].hi - c.pieces[0].lo > 0.5


def test_coordination_equilibria(coord):
    rep = equilibrium_report(coord)
    assert [p.lo for p in rep.cournot] == pytest.approx([0.0, 0.5, 1.0], abs=1e-6)
    assert [p.lo for p in rep.stackelberg] == pytest.approx([0.0, 0.5, 1.0], abs=1e-6)


def test_contour_nesting(low_r):
    levels = np.linspace(0.0, 0.15, 7)
    sets = [contour_set(low_r, lv, ">=") for lv in levels]
    for hi_set, lo_set in zip(sets[1:], sets[:-1]):
        for p in hi_set:
            assert lo_set.contains(p.lo, 1e-8) and lo_set.contains(p.hi, 1e-8)
