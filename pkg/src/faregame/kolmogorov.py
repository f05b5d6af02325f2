"""Forward Kolmogorov solve for the inventory distribution."""
from __future__ import annotations

import numpy as np

from .model import ModelParams, initial_distribution, time_grid
from .ode import IntegrationError, PiecewiseLinear, integrate_on_grid

KOLMOGOROV_RTOL = 1e-8
KOLMOGOROV_ATOL = 1e-10
RENORMALIZE_DRIFT = 1e-9


def kolmogorov_rhs(lam, m):
    """``dm/dt`` for sale intensities ``lam`` (levels 1..K) and distribution ``m`` (0..K)."""
    flow = lam * m[1:]  # sales out of each level k >= 1
    dm = np.empty_like(m)
    dm[:-1] = flow
    dm[-1] = 0.0
    dm[1:] -= flow
    return dm


def solve_kolmogorov(params: ModelParams, intensities, M, rtol=KOLMOGOROV_RTOL, atol=KOLMOGOROV_ATOL) -> np.ndarray:
    """Distribution path ``m_k(t)``, shape ``(K+1, n+1)``, started from ``M``."""
    M = initial_distribution(M, params.K)
    lam = np.asarray(intensities, dtype=float)
    n = params.n_steps
    if lam.shape != (params.K, n + 1):
        raise ValueError("intensities must have shape (K, n_steps+1)")
    if not np.all(np.isfinite(lam)):
        raise IntegrationError("non-finite intensities supplied to Kolmogorov solve")
    if np.any(lam < 0):
        raise ValueError("intensities must be nonnegative")

    grid = time_grid(params)
    lam_t = PiecewiseLinear(grid, lam.T)

    def rhs(t, m, seg):
        return kolmogorov_rhs(lam_t(t, seg), m)

    m = integrate_on_grid(rhs, M, grid, rtol=rtol, atol=atol).T
    return _repair(m)


def _repair(m: np.ndarray) -> np.ndarray:
    """Clamp round-off negatives and renormalise, only on columns that drifted."""
    drift = np.abs(m.sum(axis=0) - 1.0)
    bad = drift > RENORMALIZE_DRIFT
    if np.any(bad):
        cols = np.clip(m[:, bad], 0.0, None)
        m = m.copy()
        m[:, bad] = cols / cols.sum(axis=0)
    return np.ascontiguousarray(m)
