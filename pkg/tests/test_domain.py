"""Interval-set domain algebra, checked against plain Python set semantics."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sheetcsp.domain import Domain

values = st.sets(st.integers(min_value=-30, max_value=30), max_size=20)


def well_formed(d: Domain) -> bool:
    """Intervals sorted, non-empty, non-overlapping, non-adjacent."""
    for lo, hi in d.intervals:
        if lo > hi:
            return False
    for (a, b), (c, _) in zip(d.intervals, d.intervals[1:]):
        if c <= b + 1:
            return False
    return True


def test_constructors():
    assert Domain.interval(1, 3).intervals == ((1, 3),)
    assert Domain.interval(3, 1).empty
    assert Domain.singleton(7).intervals == ((7, 7),)
    assert Domain.from_values([8, 1, 2, 3, 7]).intervals == ((1, 3), (7, 8))
    assert Domain.from_values([]).empty


def test_accessors():
    d = Domain.from_values([1, 2, 3, 7, 8])
    assert d.min == 1 and d.max == 8 and d.size == 5
    assert not d.is_singleton
    assert 2 in d and 5 not in d
    assert list(d) == [1, 2, 3, 7, 8]


def test_singleton_value():
    assert Domain.singleton(4).value == 4
    assert Domain.singleton(4).is_singleton
    with pytest.raises(ValueError):
        Domain.interval(1, 2).value


def test_clamp():
    d = Domain.from_values([1, 2, 3, 7, 8])
    assert list(d.clamp(2, 7)) == [2, 3, 7]
    assert list(d.clamp(None, 7)) == [1, 2, 3, 7]
    assert list(d.clamp(4, None)) == [7, 8]
    assert d.clamp(9, None).empty


def test_remove_value_splits_interval():
    d = Domain.interval(1, 5).remove_value(3)
    assert d.intervals == ((1, 2), (4, 5))
    assert Domain.singleton(3).remove_value(3).empty
    assert Domain.interval(1, 5).remove_value(9).intervals == ((1, 5),)


@given(values, values)
def test_intersect_matches_sets(xs, ys):
    got = Domain.from_values(xs).intersect(Domain.from_values(ys))
    assert set(got) == xs & ys
    assert well_formed(got)


@given(values, values)
def test_union_matches_sets(xs, ys):
    got = Domain.from_values(xs).union(Domain.from_values(ys))
    assert set(got) == xs | ys
    assert well_formed(got)


@given(values, st.integers(min_value=-30, max_value=30))
def test_remove_value_matches_sets(xs, v):
    got = Domain.from_values(xs).remove_value(v)
    assert set(got) == xs - {v}
    assert well_formed(got)


@given(values, st.integers(-32, 32), st.integers(-32, 32))
def test_clamp_matches_sets(xs, lo, hi):
    got = Domain.from_values(xs).clamp(lo, hi)
    assert set(got) == {v for v in xs if lo <= v <= hi}
    assert well_formed(got)


@given(values)
def test_from_values_normalizes(xs):
    d = Domain.from_values(xs)
    assert well_formed(d)
    assert set(d) == xs
    assert d.size == len(xs)
    if xs:
        assert d.min == min(xs) and d.max == max(xs)
    else:
        assert d.empty
