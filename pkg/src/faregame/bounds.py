"""Explicit interaction-strength constants and finite-player demand coefficients."""
from __future__ import annotations

import math


def log10_existence_bound(K: int, T: float, r: float) -> float:
    if K < 1 or not T > 0 or not r > 0:
        raise ValueError("need K >= 1, T > 0, r > 0")
    return (
        math.log10(min(1.0 + K * T, math.sqrt(r)))
        - 2 * math.log10(K)
        - math.log10(T)
        - (K + 8) * math.log10(2.0)
    )


def existence_bound(K: int, T: float, r: float) -> float:
    """``min(1 + K T, sqrt r) / (K^2 T 2^(K+8))``; underflows to 0 for very large K.

    Use :func:`log10_existence_bound` for the exponent when that matters.
    """
    if K < 1 or not T > 0 or not r > 0:
        raise ValueError("need K >= 1, T > 0, r > 0")
    # ldexp keeps the power of two exact and sidesteps overflow of 2**(K+8)
    return math.ldexp(min(1.0 + K * T, math.sqrt(r)) / (K * K * T), -(K + 8))


def uniqueness_bound(K: int) -> float:
    """``2 / (K - 1)``, or ``inf`` for a single inventory level."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return math.inf if K == 1 else 2.0 / (K - 1)


def finite_player_coefficients(n: int, N: int, epsilon: float):
    """Linear demand coefficients ``(a_n, b_n, c_n)`` with ``n`` of ``N`` sellers active."""
    if N < 2 or not 1 <= n <= N:
        raise ValueError("need N >= 2 and 1 <= n <= N")
    if epsilon < 0 or epsilon >= N - 1:
        raise ValueError(f"epsilon must lie in [0, N-1), got {epsilon!r}")
    share = epsilon * (n - 1) / (N - 1)
    denom = (1.0 + share) * (1.0 - epsilon / (N - 1))
    a = 1.0 / (1.0 + share)
    b = (1.0 + epsilon * (n - 2) / (N - 1)) / denom
    c = share / denom
    return a, b, c
