"""Core types and the piecewise linear demand model.

Array conventions used throughout the package (n = ``n_steps``):

* distribution ``m``: shape ``(K+1, n+1)``, row ``k`` is the mass at inventory k
* value ``V``: shape ``(K, n+1)``, row ``k-1`` holds ``V_k``; ``V_0 = 0`` is implicit
* mean price ``p_bar``: shape ``(n+1,)``
* policy: two ``(K, n+1)`` arrays of prices and sale intensities

All scalar formulas below broadcast over numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ETA_FLOOR = 1e-12
NEG_SLACK = 1e-8


class DegenerateMarketError(ValueError):
    """Raised when a mean price is requested for a market with no active sellers."""


@dataclass(frozen=True)
class ModelParams:
    K: int = 100
    T: float = 200.0
    r: float = 0.04
    epsilon: float = 0.4
    n_steps: int = 1000
    tol: float = 1e-6
    max_iters: int = 100

    def __post_init__(self):
        checks = [
            ("K", self.K >= 1 and int(self.K) == self.K),
            ("T", self.T > 0),
            ("r", self.r > 0),
            ("epsilon", self.epsilon >= 0),
            ("n_steps", self.n_steps >= 2 and int(self.n_steps) == self.n_steps),
            ("tol", self.tol > 0),
            ("max_iters", self.max_iters >= 1),
        ]
        for name, ok in checks:
            if not ok:
                raise ValueError(f"invalid ModelParams.{name}: {getattr(self, name)!r}")

    @property
    def dt(self) -> float:
        return self.T / self.n_steps

    @property
    def grid(self) -> np.ndarray:
        return time_grid(self)


def time_grid(params: ModelParams) -> np.ndarray:
    """Uniform grid ``t_0 = 0 < ... < t_n = T`` with exact endpoints."""
    t = np.arange(params.n_steps + 1) * (params.T / params.n_steps)
    t[-1] = params.T
    return t


@dataclass(frozen=True)
class Policy:
    prices: np.ndarray
    intensities: np.ndarray


def initial_distribution(M, K: int | None = None) -> np.ndarray:
    """Validate an initial inventory distribution and return it as a float array."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 1:
        raise ValueError("initial distribution must be one-dimensional")
    if K is not None and M.shape[0] != K + 1:
        raise ValueError(f"initial distribution has {M.shape[0]} entries, expected K+1={K + 1}")
    if np.any(M < 0) or np.any(M > 1):
        raise ValueError("initial distribution entries must lie in [0, 1]")
    if abs(M.sum() - 1.0) > 1e-12:
        raise ValueError(f"initial distribution sums to {M.sum()!r}, not 1")
    return M


def bimodal_distribution(K: int = 100, groups=((20, 24), (50, 54))) -> np.ndarray:
    """Equal mass spread over the inclusive inventory ranges in ``groups``."""
    levels = np.concatenate([np.arange(lo, hi + 1) for lo, hi in groups])
    if levels.min() < 1 or levels.max() > K:
        raise ValueError(f"bimodal groups {groups} do not fit in 1..{K}")
    M = np.zeros(K + 1)
    M[levels] = 1.0 / len(levels)
    return M


def active_fraction(m) -> np.ndarray | float:
    """Mass of sellers with positive inventory, ``1 - m_0``, taken along axis 0."""
    m = np.asarray(m, dtype=float)
    if np.any(m < -NEG_SLACK):
        raise ValueError("distribution has negative entries")
    eta = np.sum(m[1:], axis=0)
    return np.clip(eta, 0.0, 1.0)


def demand_coefficients(eta, epsilon):
    """Demand intercept ``a`` and cross-price sensitivity ``c``; ``a + c = 1``."""
    x = np.multiply(epsilon, eta)
    a = 1.0 / (1.0 + x)
    c = x / (1.0 + x)
    return a, c


def intensity(p, p_bar, eta, epsilon):
    """Sale intensity ``(a - p + c p_bar)^+``."""
    a, c = demand_coefficients(eta, epsilon)
    return np.maximum(a - p + c * p_bar, 0.0)


def optimal_price(delta_v, p_bar, eta, epsilon):
    """Maximiser over ``p >= 0`` of ``intensity(p) * (p - delta_v)``."""
    a, c = demand_coefficients(eta, epsilon)
    return 0.5 * np.maximum(a + c * p_bar + delta_v, 0.0)


def hamiltonian(delta_v, p_bar, eta, epsilon):
    """Value of ``sup_p intensity(p) * (p - delta_v)`` at the closed-form maximiser."""
    p = optimal_price(delta_v, p_bar, eta, epsilon)
    return intensity(p, p_bar, eta, epsilon) * (p - delta_v)


def mean_price(m, prices) -> float:
    """Average quoted price over active sellers; the sold-out state is excluded."""
    m = np.asarray(m, dtype=float)
    eta = active_fraction(m)
    if eta <= ETA_FLOOR:
        raise DegenerateMarketError(f"active mass {eta!r} below floor {ETA_FLOOR}")
    return float(np.dot(m[1:], prices) / eta)


def equilibrium_mean_price(m, delta_vs, epsilon) -> float:
    """Closed-form self-consistent mean price, ``(a + <m, dV>/eta) / (2 - c)``.

    Only valid when no price clamp is active; used as a cross-check.
    """
    m = np.asarray(m, dtype=float)
    eta = active_fraction(m)
    if eta <= ETA_FLOOR:
        raise DegenerateMarketError(f"active mass {eta!r} below floor {ETA_FLOOR}")
    a, c = demand_coefficients(eta, epsilon)
    return float((a + np.dot(m[1:], delta_vs) / eta) / (2.0 - c))


def phi_eps(m, delta_vs, epsilon) -> float:
    m = np.asarray(m, dtype=float)
    eta = active_fraction(m)
    return float((np.dot(m[1:], delta_vs) - eta) / (2.0 + epsilon * eta))


def delta_v(V: np.ndarray) -> np.ndarray:
    """Inventory differences ``V_k - V_{k-1}`` for k = 1..K (``V_0 = 0``)."""
    return np.diff(V, axis=0, prepend=np.zeros((1,) + V.shape[1:]))


def check_distribution_path(m: np.ndarray, slack: float = NEG_SLACK, sum_tol: float = 1e-6) -> None:
    """Raise ``ValueError`` if ``m`` violates the distribution-path invariants."""
    if not np.all(np.isfinite(m)):
        raise ValueError("distribution path has non-finite entries")
    if m.min() < -slack or m.max() > 1 + slack:
        raise ValueError(f"distribution entries outside [0, 1]: [{m.min()}, {m.max()}]")
    drift = np.abs(m.sum(axis=0) - 1.0).max()
    if drift > sum_tol:
        raise ValueError(f"distribution column sums drift from 1 by {drift}")
    if np.any(np.diff(m[0]) < -slack):
        raise ValueError("sold-out mass m_0 decreases in time")
