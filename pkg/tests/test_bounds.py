import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from faregame import demand_coefficients, existence_bound, finite_player_coefficients, uniqueness_bound
from faregame.bounds import log10_existence_bound


def test_existence_examples():
    assert existence_bound(1, 1.0, 1.0) == 1 / 512
    lg = log10_existence_bound(100, 200.0, 0.04)
    assert abs(lg - (-39.5)) <= 0.1
    assert existence_bound(100, 200.0, 0.04) == pytest.approx(10**lg, rel=1e-12)
    assert existence_bound(100, 200.0, 0.04) == pytest.approx(3.08e-40, rel=1e-2)


def test_existence_exact_against_rationals():
    # min(1 + K T, sqrt r) = sqrt r for these inputs; r chosen with an exact square root
    for K, T, r in [(3, 2.0, 0.25), (10, 4.0, 0.0625), (40, 0.5, 1.0)]:
        exact = Fraction(math.isqrt(int(r * 10**4)), 100) / (K * K * Fraction(T) * 2 ** (K + 8))
        assert existence_bound(K, T, r) == float(exact)


def test_existence_strictly_decreasing_in_K():
    values = [existence_bound(K, 200.0, 0.04) for K in range(1, 150)]
    assert all(a > b for a, b in zip(values, values[1:]))
    logs = [log10_existence_bound(K, 200.0, 0.04) for K in range(1, 5000, 7)]
    assert all(a > b for a, b in zip(logs, logs[1:]))


def test_existence_large_K_underflows_but_log_is_finite():
    assert existence_bound(10_000, 200.0, 0.04) == 0.0
    lg = log10_existence_bound(10_000, 200.0, 0.04)
    assert math.isfinite(lg) and lg < -3000


def test_existence_rejects_bad_inputs():
    for args in [(0, 1.0, 1.0), (1, 0.0, 1.0), (1, 1.0, 0.0)]:
        with pytest.raises(ValueError):
            existence_bound(*args)
        with pytest.raises(ValueError):
            log10_existence_bound(*args)


def test_uniqueness_examples():
    assert uniqueness_bound(2) == 2.0
    assert abs(uniqueness_bound(100) - 2 / 99) <= 1e-12
    assert uniqueness_bound(1) == math.inf
    with pytest.raises(ValueError):
        uniqueness_bound(0)


@given(st.integers(2, 500), st.floats(1.0, 1e3), st.floats(1e-6, 1.0))
def test_existence_below_uniqueness(K, T, r):
    assert existence_bound(K, T, r) <= uniqueness_bound(K)


def test_finite_player_examples():
    for n, N in [(1, 2), (3, 7), (10, 10)]:
        assert finite_player_coefficients(n, N, 0.0) == (1.0, 1.0, 0.0)
    a, b, c = finite_player_coefficients(2, 2, 0.4)
    eps = Fraction(2, 5)
    share = eps
    denom = (1 + share) * (1 - eps)
    assert a == pytest.approx(float(1 / (1 + share)), abs=1e-15)
    assert b == pytest.approx(float(1 / denom), abs=1e-15)
    assert c == pytest.approx(float(share / denom), abs=1e-15)
    assert (round(a, 7), round(b, 7), round(c, 7)) == (0.7142857, 1.1904762, 0.4761905)


def test_finite_player_rejects_bad_inputs():
    for args in [(0, 5, 0.1), (6, 5, 0.1), (1, 1, 0.1), (2, 5, 4.0), (2, 5, -0.1)]:
        with pytest.raises(ValueError):
            finite_player_coefficients(*args)


def _limit_error(n, N, eps):
    a_n, b_n, c_n = finite_player_coefficients(n, N, eps)
    a, c = demand_coefficients(n / N, eps)
    return max(abs(a_n - a), abs(b_n - 1.0), abs(c_n - c))


def test_finite_player_continuum_limit():
    rng = np.random.default_rng(7)
    N = 10**6
    for _ in range(20):
        eta, eps = rng.uniform(1e-3, 1.0), rng.uniform(0.0, 1.0)
        n = max(1, int(round(eta * N)))
        assert _limit_error(n, N, eps) <= 1e-5


def test_finite_player_first_order_rate():
    rng = np.random.default_rng(8)
    shrink = []
    for _ in range(20):
        q, eps = int(rng.integers(1, 1001)), rng.uniform(0.05, 1.0)
        N = 10_000
        # eta = q / 1000 exactly, so n = eta N is an integer at both sizes
        e1 = _limit_error(q * N // 1000, N, eps)
        e2 = _limit_error(q * 2 * N // 1000, 2 * N, eps)
        shrink.append(e1 / e2)
    assert 1.8 <= np.median(shrink) <= 2.2
    assert min(shrink) >= 1.5
