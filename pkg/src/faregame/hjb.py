"""Backward HJB solve for the representative seller given a market flow."""
from __future__ import annotations

import numpy as np

from .model import ModelParams, Policy, active_fraction, delta_v, hamiltonian, intensity, optimal_price, time_grid
from .ode import IntegrationError, PiecewiseLinear, integrate_on_grid

HJB_RTOL = 1e-8
HJB_ATOL = 1e-10


def solve_hjb(params: ModelParams, p_bar, m, rtol=HJB_RTOL, atol=HJB_ATOL) -> np.ndarray:
    """Value functions ``V_k(t)`` for k = 1..K on the model grid.

    Solves ``dV_k/dt = r V_k - H(dV_k; p_bar(t), m(t))`` backward from
    ``V_k(T) = 0``, with ``H`` the optimised revenue rate.  ``p_bar`` and
    ``m`` are linearly interpolated between grid nodes.
    """
    grid = time_grid(params)
    n = params.n_steps
    p_bar = np.asarray(p_bar, dtype=float)
    m = np.asarray(m, dtype=float)
    if p_bar.shape != (n + 1,) or m.shape != (params.K + 1, n + 1):
        raise ValueError("p_bar and m must be sampled on the model grid")
    if not (np.all(np.isfinite(p_bar)) and np.all(np.isfinite(m))):
        raise IntegrationError("non-finite market path supplied to HJB solve")

    eta = PiecewiseLinear(grid, active_fraction(m))
    pb = PiecewiseLinear(grid, p_bar)
    r, eps = params.r, params.epsilon

    def rhs(t, V, seg):
        lo = n - 1 - seg  # integrating over the reversed grid
        dV = np.diff(V, prepend=0.0)
        return r * V - hamiltonian(dV, pb(t, lo), eta(t, lo), eps)

    out = integrate_on_grid(rhs, np.zeros(params.K), grid[::-1], rtol=rtol, atol=atol)
    return np.ascontiguousarray(out[::-1].T)


def extract_policy(V, p_bar, m, params: ModelParams) -> Policy:
    """Optimal prices and the induced sale intensities on the grid."""
    dV = delta_v(np.asarray(V, dtype=float))
    eta = active_fraction(m)
    prices = optimal_price(dV, p_bar, eta, params.epsilon)
    return Policy(prices=prices, intensities=intensity(prices, p_bar, eta, params.epsilon))
