import numpy as np
import pytest

from commitment_limits.cst import cournot_cst, parse_cst, stackelberg_cst
from commitment_limits.errors import NotSimple
from commitment_limits.oracle import Grid
from commitment_limits.plausibility import i_plausible_set, simply_plausible_set
from commitment_limits.refinement import (i_plausible_wrt, is_finer, is_richer, is_worse,
                                          simply_plausible_wrt, worse_refinement_exists)

from conftest import coordination

K_TEXT = "{0}|(0,1)|{1}"
K_PRIME_TEXT = "{0}|[0.05,0.95]|{1}|*(0,0.05)|*(0.95,1)"


@pytest.fixture(scope="module")
def coord01():
    return coordination(0.01)


def test_finer_and_richer_orders(coord01):
    X = coord01.leader_space
    K, Kp = parse_cst(K_TEXT, X), parse_cst(K_PRIME_TEXT, X)
    assert is_finer(Kp, K) and not is_finer(K, Kp)
    assert is_finer(K, cournot_cst(X)) and is_finer(K, K)
    assert not is_finer(cournot_cst(X), stackelberg_cst(X))
    assert is_richer(K, K)
    extra = parse_cst(K_TEXT + "|[0,1]", X)
    assert is_richer(extra, K) and not is_richer(stackelberg_cst(X), cournot_cst(X))


def test_refinement_is_worse(coord01):
    X = coord01.leader_space
    K, Kp = parse_cst(K_TEXT, X), parse_cst(K_PRIME_TEXT, X)
    g = Grid.for_spec(coord01, 201, extra=[0.05, 0.95])
    v = is_worse(coord01, g, Kp, K)
    assert v.worse and v.min_payoff_k == pytest.approx(0.5)
    assert v.min_payoff_k_prime == pytest.approx(0.49625, abs=1e-9)
    assert not is_worse(coord01, g, K, K).worse


def test_worse_refinement_procedure(coord01, low_r):
    res = worse_refinement_exists(coord01, parse_cst(K_TEXT, coord01.leader_space))
    assert res is not None
    assert res.threshold == pytest.approx(0.49625, abs=1e-6)
    assert res.spe_floor == pytest.approx(0.5) and res.attained
    assert worse_refinement_exists(low_r, cournot_cst(low_r.leader_space)) is None


def test_worse_refinement_needs_simple(coord01):
    with pytest.raises(NotSimple):
        worse_refinement_exists(coord01, parse_cst("[0,0.5]u[0.7,1]|(0.5,0.7)", coord01.leader_space))


def test_relative_plausibility_examples(low_r, high_r):
    full = (high_r.leader_space.lo, high_r.leader_space.hi)
    assert not simply_plausible_wrt(high_r, 0.7, full)
    assert i_plausible_wrt(high_r, 0.7, full)
    assert not i_plausible_wrt(high_r, 0.2, full)
    full8 = (low_r.leader_space.lo, low_r.leader_space.hi)
    assert simply_plausible_wrt(low_r, 0.5, full8)
    assert simply_plausible_wrt(low_r, 5 / 11, full8)
    assert i_plausible_wrt(low_r, 5 / 11, full8)


@pytest.mark.parametrize("name", ["low_r", "high_r", "coord"])
def test_wrt_full_space_agrees_with_sets(name, request):
    spec = request.getfixturevalue(name)
    X = spec.leader_space
    simple, iset = simply_plausible_set(spec), i_plausible_set(spec)
    probes = np.linspace(X.lo, X.hi, 101)
    # probes within a hair of a set boundary are decided by the boundary convention alone
    edges = [e for s in (simple, iset) for p in s for e in (p.lo, p.hi)]
    for x in probes:
        if min(abs(x - e) for e in edges) < 1e-6 and not any(
                p.is_point for s in (simple, iset) for p in s if abs(p.lo - x) < 1e-6):
            continue
        assert simply_plausible_wrt(spec, x, (X.lo, X.hi)) == simple.contains(x, 1e-9), x
        assert i_plausible_wrt(spec, x, (X.lo, X.hi)) == iset.contains(x, 1e-9), x
