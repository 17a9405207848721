import os

import pytest
from hypothesis import given, settings, strategies as st

from aectopo.gmetric import (Ball, DegreeMismatch, GroupElement, all_points, alternating_family, ball,
                             ball_cylinder_sweep, cauchy_and_limit, coinitial_sequence, constant_family,
                             converging_family, first_below, first_difference_metric, group_grid, group_laws_sweep,
                             max_g, metric_axioms_sweep, metric_ball_members, point, point_text)

DEGREE = 4
elements = st.lists(st.integers(-5, 5), min_size=DEGREE, max_size=DEGREE).map(lambda c: GroupElement(tuple(c)))


def sign_of_leading(g: GroupElement) -> int:
    """Independent order oracle: the sign of the first nonzero coordinate."""
    for v in g.coeffs:
        if v:
            return 1 if v > 0 else -1
    return 0


@settings(max_examples=300, deadline=None)
@given(elements, elements, elements)
def test_ordered_group_laws(a, b, c):
    zero = GroupElement.zero(DEGREE)
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + (-a) == zero and a - a == zero and a + zero == a
    assert (a < b) == (sign_of_leading(b - a) > 0)
    assert [a < b, a == b, b < a].count(True) == 1
    if a < b:
        assert a + c < b + c
    assert max_g(a, b) >= a and max_g(a, b) >= b


@settings(max_examples=100, deadline=None)
@given(elements)
def test_text_roundtrip(g):
    assert GroupElement.parse(str(g), DEGREE) == g


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        GroupElement.zero(2) + GroupElement.zero(3)
    with pytest.raises(DegreeMismatch):
        GroupElement.zero(2) < GroupElement.zero(3)
    with pytest.raises(IndexError):
        GroupElement.unit(4, 4)


def test_coinitial_sequence_decreases_and_is_positive():
    units = [coinitial_sequence(a, DEGREE) for a in range(DEGREE)]
    assert all(u.is_positive() for u in units)
    assert all(u > v for u, v in zip(units, units[1:]))
    # every positive element with some nonzero entry before the last index lies above a unit
    assert first_below(GroupElement.sparse({0: 1}, DEGREE)) == 1
    assert first_below(GroupElement.sparse({2: 1, 3: -7}, DEGREE)) == 3
    assert first_below(GroupElement.sparse({3: 1}, DEGREE)) is None


points_ = st.integers(1, DEGREE).flatmap(
    lambda L: st.tuples(*[st.lists(st.integers(0, 2), min_size=L, max_size=L).map(tuple)] * 3))


@settings(max_examples=300, deadline=None)
@given(points_)
def test_metric_matches_common_prefix(pts):
    x, y, z = pts
    d = lambda p, q: first_difference_metric(p, q, DEGREE)
    k = len(os.path.commonprefix([list(x), list(y)]))
    assert d(x, y) == (GroupElement.zero(DEGREE) if x == y else GroupElement.unit(k, DEGREE))
    assert d(x, z) <= max_g(d(x, y), d(y, z))
    assert d(x, y) == d(y, x)


def test_metric_rejects_bad_points():
    with pytest.raises(ValueError):
        first_difference_metric((0, 1), (0,), DEGREE)
    with pytest.raises(ValueError):
        first_difference_metric((0,) * 5, (1,) * 5, DEGREE)


@pytest.mark.parametrize("length", [1, 2, 3])
def test_metric_sweeps(length):
    pts = all_points(length, 3)
    results = metric_axioms_sweep(pts, DEGREE)
    assert [r.name for r in results] == ["identity", "symmetry", "triangle", "ultrametric"]
    assert all(r.passed for r in results)
    assert results[2].checked == len(pts) ** 3
    assert ball_cylinder_sweep(pts, DEGREE).passed


def test_balls_are_cylinders():
    x = point("0120")
    assert str(ball(x, coinitial_sequence(0, DEGREE))) == "cylinder 0"
    assert str(ball(x, coinitial_sequence(2, DEGREE))) == "cylinder 012"
    assert str(ball(x, GroupElement.sparse({0: 5}, DEGREE))) == "all"
    tiny = ball(x, GroupElement.sparse({3: 1}, DEGREE))
    assert tiny.prefix == x
    assert metric_ball_members(x, GroupElement.sparse({3: 1}, DEGREE), all_points(4, 3)) == {x}
    with pytest.raises(ValueError):
        ball(x, GroupElement.zero(DEGREE))
    assert point_text(x) == "0120"


def test_cauchy_families():
    x, y = point("0120"), point("1201")
    r = cauchy_and_limit(constant_family(x, head=[y]), DEGREE)
    assert r.is_cauchy and r.limit == x
    r = cauchy_and_limit(alternating_family(x, y), DEGREE)
    assert not r.is_cauchy and r.limit is None and r.witnesses[0] is None
    r = cauchy_and_limit(converging_family(x, filler=2), DEGREE)
    assert r.is_cauchy and r.limit == x
    # the witness index grows with the precision demanded
    assert [r.witnesses[a] for a in range(DEGREE)] == sorted(r.witnesses[a] for a in range(DEGREE))


def test_group_grid_sweep_small():
    grid = group_grid(3, (0, 1), -1, 1)
    assert len(grid) == 9
    assert all(r.passed for r in group_laws_sweep(grid))
