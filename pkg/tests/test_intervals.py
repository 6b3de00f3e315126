import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commitment_limits.game import ActionSpace
from commitment_limits.intervals import IntervalUnion, Piece

X = ActionSpace(0.0, 1.0)


@st.composite
def unions(draw):
    raw = draw(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1), st.booleans(), st.booleans()),
                        max_size=4))
    pieces = tuple(Piece(min(a, b), max(a, b), c1, c2) for a, b, c1, c2 in raw)
    return IntervalUnion(X, pieces)


def same(a, b):
    return a.approx_equal(b, 1e-7)


def test_basic_constructors():
    assert IntervalUnion.empty(X).is_empty()
    assert IntervalUnion.full(X).measure() == 1.0
    s = IntervalUnion.points(X, [0.2, 0.7])
    assert len(s) == 2 and s.isolated_points() == [0.2, 0.7]
    assert s.contains(0.2) and not s.contains(0.21)


def test_overlapping_pieces_merge():
    s = IntervalUnion(X, (Piece(0.1, 0.4), Piece(0.3, 0.6), Piece(0.8, 0.8)))
    assert len(s) == 2
    assert s.min() == 0.1 and s.max() == 0.8


def test_distance_and_hausdorff():
    a = IntervalUnion.interval(X, 0.2, 0.4)
    assert a.distance_to(0.5) == pytest.approx(0.1)
    assert a.distance_to(0.3) == 0.0
    b = IntervalUnion.interval(X, 0.2, 0.45)
    assert a.hausdorff(b) == pytest.approx(0.05)


def test_json_round_trip():
    a = IntervalUnion(X, (Piece(0.0, 0.0), Piece(0.25, 0.5, False, True)))
    assert IntervalUnion.from_json(a.to_json(), X).to_json() == a.to_json()


def test_from_predicate_refines_boundaries():
    s = IntervalUnion.from_predicate(lambda x: (x >= 1 / 3) & (x <= 0.7), X, grid_n=101)
    assert s.min() == pytest.approx(1 / 3, abs=1e-8)
    assert s.max() == pytest.approx(0.7, abs=1e-8)


@settings(max_examples=100)
@given(unions(), unions(), unions())
def test_union_intersection_laws(a, b, c):
    assert same(a.union(a), a) and same(a.intersect(a), a)
    assert same(a.union(b), b.union(a))
    assert same(a.intersect(b), b.intersect(a))
    assert same(a.union(b).union(c), a.union(b.union(c)))
    assert same(a.intersect(b).intersect(c), a.intersect(b.intersect(c)))


@settings(max_examples=100)
@given(unions())
def test_double_complement(a):
    assert same(a.complement().complement(), a)


@settings(max_examples=50)
@given(st.floats(0, 1), st.floats(0, 1))
def test_from_predicate_monotone(t1, t2):
    lo, hi = min(t1, t2), max(t1, t2)
    small = IntervalUnion.from_predicate(lambda x: x >= hi, X, grid_n=101)
    big = IntervalUnion.from_predicate(lambda x: x >= lo, X, grid_n=101)
    for p in small:
        assert big.contains(p.lo, 1e-8) and big.contains(p.hi, 1e-8)
