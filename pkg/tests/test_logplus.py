import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nevanlinna.errors import DomainError
from nevanlinna.logplus import (
    LOG2,
    log_plus,
    minimal_constant_scan,
    product_inequality_residual,
    random_pairs,
    sum_inequality_residual,
)

nonneg = st.floats(0, 1e12, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("t,expected", [(1, 0), (math.e, 1), (-5, 0), (0, 0), (0.5, 0)])
def test_log_plus_examples(t, expected):
    assert log_plus(t) == pytest.approx(expected, abs=1e-15)


def test_log_plus_never_nan_or_inf():
    out = log_plus(np.array([-np.inf, -1.0, 0.0, 1e-300, 1.0]))
    assert np.all(np.isfinite(out)) and np.all(out == 0.0)


@settings(max_examples=200)
@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_log_plus_nondecreasing(a, b):
    lo, hi = min(a, b), max(a, b)
    assert log_plus(lo) <= log_plus(hi)


@pytest.mark.parametrize("eps", [1e-6, 1e-9, 1e-12])
def test_log_plus_continuous_at_one(eps):
    assert abs(log_plus(1 + eps)) <= 2 * eps
    assert abs(log_plus(1 - eps)) <= 2 * eps


@pytest.mark.parametrize("s,t,expected", [(1, 1, 0.0), (0, 0, LOG2), (math.e, math.e, 1.0)])
def test_sum_residual_examples(s, t, expected):
    assert sum_inequality_residual(s, t) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("s,t,expected", [(math.e, math.e, 0.0), (0.5, 0.5, 0.0), (2, 0.5, LOG2)])
def test_product_residual_examples(s, t, expected):
    assert product_inequality_residual(s, t) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("fn", [sum_inequality_residual, product_inequality_residual])
def test_residuals_reject_negative(fn):
    with pytest.raises(DomainError):
        fn(-1.0, 2.0)
    with pytest.raises(DomainError):
        fn(np.array([1.0, 2.0]), np.array([1.0, -2.0]))


@settings(max_examples=500)
@given(nonneg, nonneg)
def test_residuals_nonnegative(s, t):
    assert sum_inequality_residual(s, t) >= -1e-12
    assert product_inequality_residual(s, t) >= -1e-12


@settings(max_examples=300)
@given(nonneg, nonneg)
def test_sum_residual_symmetric(s, t):
    assert sum_inequality_residual(s, t) == sum_inequality_residual(t, s)


def test_smaller_constant_breaks_inequality():
    assert sum_inequality_residual(1.0, 1.0, c=0.5) < 0


def test_random_pairs_range():
    s, t = random_pairs(np.random.default_rng(1), 10000)
    assert s.min() >= 1e-9 and t.max() <= 1e9
    # roughly log-uniform: about half below 1
    assert 0.45 < np.mean(s < 1) < 0.55


def test_scan_finds_log2_at_one_one():
    res = minimal_constant_scan(1000, 1e6)
    assert res.value == pytest.approx(LOG2, abs=1e-12)
    assert res.attained_at == (1.0, 1.0)


def test_scan_tiny_grid():
    assert minimal_constant_scan(2, 2).value >= LOG2 - 1e-12


def test_scan_gap_vanishes_where_sum_small():
    s = np.linspace(0, 1, 101)
    S, T = np.meshgrid(s, s)
    mask = S + T <= 1
    gap = log_plus(S + T) - log_plus(S) - log_plus(T)
    assert np.all(gap[mask] == 0.0)


@pytest.mark.parametrize("grid,s_max", [(1, 10), (10, 1.5), (10, np.inf), (2.5, 10)])
def test_scan_bad_parameters(grid, s_max):
    with pytest.raises(DomainError):
        minimal_constant_scan(grid, s_max)
