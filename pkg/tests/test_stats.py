from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from cvflab.errors import EmptyHistogramError, FitError
from cvflab.stats import ExactAccumulator, least_squares, mean, round_half_away


def test_mean_zero_sum():
    assert mean(ExactAccumulator(Fraction(0), 162)) == 0


def test_mean_negative_half():
    assert mean(ExactAccumulator(Fraction(-3), 2)) == Fraction(-3, 2)


def test_mean_of_empty_accumulator():
    with pytest.raises(EmptyHistogramError):
        mean(ExactAccumulator())


@given(st.lists(st.fractions(max_denominator=50), min_size=1), st.integers(0, 30))
def test_merge_equals_single_pass(values, cut):
    cut = min(cut, len(values))
    a, b, whole = ExactAccumulator(), ExactAccumulator(), ExactAccumulator()
    a.extend(values[:cut])
    b.extend(values[cut:])
    whole.extend(values)
    merged = a.merge(b)
    assert (merged.sum, merged.count) == (whole.sum, whole.count)
    assert merged.mean() == whole.mean()


def test_least_squares_unit_line():
    assert least_squares([(0, 0), (1, 1)]) == pytest.approx((1, 0, 1))


def test_least_squares_flat_line_has_r2_one():
    assert least_squares([(0, 1), (1, 1), (2, 1)]) == pytest.approx((0, 1, 1))


def test_least_squares_hand_computed():
    slope, intercept, r2 = least_squares([(1, -1.13), (2, -2.13), (3, -3.13)])
    assert slope == pytest.approx(-1)
    assert intercept == pytest.approx(-0.13)
    assert r2 == pytest.approx(1)


def test_least_squares_degenerate_x():
    with pytest.raises(FitError):
        least_squares([(2, 0), (2, 1)])
    with pytest.raises(FitError):
        least_squares([(0, 0)])


finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(st.lists(st.tuples(finite, finite), min_size=2, max_size=30))
def test_least_squares_r2_in_unit_interval(points):
    assume(len({x for x, _ in points}) >= 2)
    assume(max(x for x, _ in points) - min(x for x, _ in points) > 1e-3)
    _, _, r2 = least_squares(points)
    assert 0 <= r2 <= 1


@given(finite, finite, st.lists(st.floats(-50, 50, allow_nan=False), min_size=2, max_size=20, unique=True))
def test_least_squares_recovers_exact_lines(a, b, xs):
    assume(max(xs) - min(xs) > 1e-2)
    slope, intercept, r2 = least_squares([(x, a * x + b) for x in xs])
    assert slope == pytest.approx(a, abs=1e-6)
    assert intercept == pytest.approx(b, abs=1e-4)
    assert r2 == pytest.approx(1)


@pytest.mark.parametrize("x,expected", [(0.5, 1), (-0.5, -1), (1.5, 2), (-2.5, -3), (0.49, 0), (-0.49, 0),
                                         (2.4999999999999, 3), (0.0, 0)])
def test_round_half_away(x, expected):
    assert round_half_away(x) == expected


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_round_half_away_is_odd(x):
    assert round_half_away(-x) == -round_half_away(x)
    assert abs(round_half_away(x) - x) <= 0.5 + 1e-6
