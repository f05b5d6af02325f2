"""Analytic and semi-analytic solution of the uncoupled (epsilon = 0) system.

With no competition every seller is a monopolist, the value equations no
longer see the market, and the first inventory difference solves a scalar
Riccati equation in closed form.  These routines are the reference against
which the general solvers are checked, so they deliberately use different
numerical routes (scipy's 8th-order integrator in difference form,
trapezoidal quadrature of the explicit distribution formulas).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, cumulative_trapezoid, solve_ivp

from .model import ModelParams, delta_v, initial_distribution, time_grid

MONOPOLY_RTOL = 1e-12
MONOPOLY_ATOL = 1e-14


@dataclass(frozen=True)
class MonopolyConstants:
    rho: float
    theta: float
    A1: float
    B1: float


def monopoly_constants(r: float) -> MonopolyConstants:
    """Riccati roots ``A1 < 1 < B1`` and the intensity floor ``rho`` for rate ``r``."""
    if not r > 0:
        raise ValueError(f"discount rate must be positive, got {r!r}")
    theta = math.sqrt(r * r + r)
    # r / (theta + r) == theta - r without cancellation at large r
    rho = r / (theta + r)
    # A1 = 1 - 2 rho = rho / (theta + r) and B1 = 1 / A1; this form keeps A1 * B1 = 1 for large r
    A1 = r / (theta + r) ** 2
    B1 = (theta + r) ** 2 / r
    return MonopolyConstants(rho=rho, theta=theta, A1=A1, B1=B1)


def delta_v1_closed_form(t, params: ModelParams):
    """Marginal value of the last unit for a monopolist.

    ``A1 (1 - e^{-theta s}) / (1 - (A1/B1) e^{-theta s})`` with ``s = T - t``;
    vanishes at ``t = T`` and increases towards ``A1`` as the horizon grows.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > params.T):
        raise ValueError("t must lie in [0, T]")
    c = monopoly_constants(params.r)
    decay = np.exp(-c.theta * (params.T - t))
    out = c.A1 * (-np.expm1(-c.theta * (params.T - t))) / (1.0 - (c.A1 / c.B1) * decay)
    return out if out.ndim else float(out)


def _monopoly_delta_rhs(r):
    def rhs(t, d):
        # d/dt dV_k = r dV_k - (1 - dV_k)^2/4 + (1 - dV_{k-1})^2/4; no coupling term for k = 1
        out = r * d - 0.25 * (1.0 - d) ** 2
        out[1:] += 0.25 * (1.0 - d[:-1]) ** 2
        return out

    return rhs


def solve_monopoly_value(params: ModelParams) -> np.ndarray:
    """Monopoly value functions ``V_k(t)``, shape ``(K, n+1)``.

    The difference equations form a lower-triangular chain (level k only
    reads level k-1), so integrating them together is the same as the
    level-by-level induction.
    """
    grid = time_grid(params)
    sol = solve_ivp(
        _monopoly_delta_rhs(params.r),
        (params.T, 0.0),
        np.zeros(params.K),
        method="DOP853",
        t_eval=grid[::-1],
        rtol=MONOPOLY_RTOL,
        atol=MONOPOLY_ATOL,
    )
    if not sol.success:
        raise RuntimeError(f"monopoly value integration failed: {sol.message}")
    dV = sol.y[:, ::-1]
    return np.cumsum(dV, axis=0)


def monopoly_intensities(V: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 - delta_v(V))


def _cascade(params: ModelParams, M, lambdas, refine: int):
    grid = time_grid(params)
    fine = np.linspace(0.0, params.T, params.n_steps * refine + 1)
    lam = np.array([np.interp(fine, grid, row) for row in np.asarray(lambdas, dtype=float)])
    Lam = cumulative_trapezoid(lam, fine, axis=1, initial=0.0)

    m = np.zeros((params.K + 1, fine.size))
    inflow = np.zeros(fine.size)  # lam_{k+1} m_{k+1}
    for k in range(params.K, 0, -1):
        growth = np.exp(Lam[k - 1])
        acc = cumulative_simpson(inflow * growth, x=fine, initial=0.0)
        m[k] = (M[k] + acc) / growth
        inflow = lam[k - 1] * m[k]
    return fine, lam, m


def solve_monopoly_distribution(params: ModelParams, M, lambdas, refine: int = 16) -> np.ndarray:
    """Distribution path from the explicit cascade of exponential integrals.

    ``m_K = M_K exp(-Lambda_K)`` and, going down,
    ``m_k(t) = e^{-Lambda_k(t)} [M_k + int_0^t lam_{k+1} m_{k+1} e^{Lambda_k}]``,
    with ``Lambda_k`` the cumulative intensity.  Intensities are linear
    between grid nodes, so ``Lambda_k`` is exact under the trapezoidal rule
    on the grid refined ``refine`` times; the exponentially weighted inflow
    integrals use Simpson's rule on the same refinement (the trapezoidal
    rule loses ~1e-2 to the growth factor at the default grid).  ``m_0``
    closes the mass balance.
    """
    M = initial_distribution(M, params.K)
    _, _, m = _cascade(params, M, lambdas, refine)
    m[0] = 1.0 - m[1:].sum(axis=0)
    return np.ascontiguousarray(m[:, ::refine])


def sold_out_by_quadrature(params: ModelParams, M, lambdas, refine: int = 16) -> np.ndarray:
    """``m_0(t) = M_0 + int_0^t lam_1 m_1`` integrated directly, for cross-checks."""
    M = initial_distribution(M, params.K)
    fine, lam, m = _cascade(params, M, lambdas, refine)
    m0 = M[0] + cumulative_simpson(lam[0] * m[1], x=fine, initial=0.0)
    return m0[::refine]


@dataclass
class BoundReport:
    """Worst violation (positive = violated) of each monopoly bound family."""

    delta_v_lower: float
    delta_v_upper: float
    delta_v_slope: float
    intensity_lower: float
    intensity_upper: float
    distribution_lower: float
    distribution_upper: float
    eta_range: float
    mass_drift: float

    def worst(self) -> float:
        return max(vars(self).values())

    def ok(self, slack: float = 1e-8, slope_slack: float = 1e-6, mass_tol: float = 1e-6) -> bool:
        return (
            max(self.delta_v_lower, self.delta_v_upper, self.intensity_lower, self.intensity_upper,
                self.distribution_lower, self.distribution_upper, self.eta_range) <= slack
            and self.delta_v_slope <= slope_slack
            and self.mass_drift <= mass_tol
        )


def check_proposition1(V, m, params: ModelParams) -> BoundReport:
    """Measure how far a monopoly solution strays from its a-priori bounds.

    Bounds: ``0 <= dV_k <= 1 - 2 rho``, ``dV_k`` nonincreasing in t,
    ``rho <= (1 - dV_k)/2 <= 1/2``, ``0 <= m_k, eta <= 1`` and unit mass.
    The slope is checked by forward differences on the grid.
    """
    c = monopoly_constants(params.r)
    dV = delta_v(np.asarray(V, dtype=float))
    m = np.asarray(m, dtype=float)
    lam = 0.5 * (1.0 - dV)
    eta = m[1:].sum(axis=0)
    slope = np.diff(dV, axis=1) / params.dt
    return BoundReport(
        delta_v_lower=float(-dV.min()),
        delta_v_upper=float(dV.max() - (1.0 - 2.0 * c.rho)),
        delta_v_slope=float(slope.max()),
        intensity_lower=float(c.rho - lam.min()),
        intensity_upper=float(lam.max() - 0.5),
        distribution_lower=float(-m.min()),
        distribution_upper=float(m.max() - 1.0),
        eta_range=float(max(-eta.min(), eta.max() - 1.0)),
        mass_drift=float(np.abs(m.sum(axis=0) - 1.0).max()),
    )
