"""Picard iteration between the HJB and Kolmogorov solves."""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .bounds import uniqueness_bound
from .hjb import extract_policy, solve_hjb
from .kolmogorov import solve_kolmogorov
from .model import ETA_FLOOR, ModelParams, Policy, initial_distribution, time_grid

log = logging.getLogger(__name__)


@dataclass
class IterationTrace:
    errors: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


@dataclass
class EquilibriumSolution:
    V: np.ndarray
    m: np.ndarray
    p_bar: np.ndarray
    policy: Policy
    trace: IterationTrace

    @property
    def eta(self) -> np.ndarray:
        return self.m[1:].sum(axis=0)


def distance(a, b, grid) -> float:
    """Squared L2-in-time gap between two ``(p_bar, m)`` pairs, summed over levels."""
    (pa, ma), (pb, mb) = a, b
    pa, pb, ma, mb = (np.asarray(x, dtype=float) for x in (pa, pb, ma, mb))
    if pa.shape != pb.shape or ma.shape != mb.shape or pa.shape[-1] != len(grid) or ma.shape[-1] != len(grid):
        raise ValueError("paths are not sampled on the same grid")
    return float(trapezoid((pa - pb) ** 2, grid) + trapezoid((ma - mb) ** 2, grid, axis=1).sum())


def default_initial_guess(params: ModelParams, M):
    """Constant mean price 1/2 with the initial distribution frozen in time."""
    M = initial_distribution(M, params.K)
    n = params.n_steps + 1
    return np.full(n, 0.5), np.repeat(M[:, None], n, axis=1)


def random_initial_guess(params: ModelParams, M, seed):
    """Uniform prices on [0, 1] and uniform points of the simplex, drawn per node.

    ``seed`` is anything ``numpy.random.default_rng`` accepts (an int or a
    tuple of ints).
    """
    initial_distribution(M, params.K)
    rng = np.random.default_rng(seed)
    n = params.n_steps + 1
    p_bar = rng.uniform(0.0, 1.0, size=n)
    m = rng.dirichlet(np.ones(params.K + 1), size=n).T
    m /= m.sum(axis=0)
    return p_bar, np.ascontiguousarray(m)


def update_mean_price(m, prices, previous=None):
    """Mean price over active sellers, carried forward wherever the market is empty."""
    eta = m[1:].sum(axis=0)
    weighted = np.einsum("kt,kt->t", m[1:], prices)
    p_bar = np.empty_like(eta)
    last = 0.5 if previous is None else previous[0]
    for i, (e, w) in enumerate(zip(eta, weighted)):
        if e > ETA_FLOOR:
            last = w / e
        p_bar[i] = last
    return p_bar


def picard_step(params: ModelParams, M, p_bar, m):
    """One best-response pass: values and policy for ``(p_bar, m)``, then the induced flow."""
    V = solve_hjb(params, p_bar, m)
    policy = extract_policy(V, p_bar, m, params)
    m_new = solve_kolmogorov(params, policy.intensities, M)
    p_new = update_mean_price(m_new, policy.prices, p_bar)
    return V, policy, p_new, m_new


def solve_equilibrium(params: ModelParams, M, guess=None, relaxation: float = 1.0) -> EquilibriumSolution:
    """Mean field equilibrium by Picard iteration from ``guess``.

    Stops once the distance between successive ``(p_bar, m)`` iterates drops
    below ``params.tol``.  The returned ``m`` and ``p_bar`` are the flow
    induced by the returned policy.  ``relaxation < 1`` damps the update
    (``1`` is the plain iteration).  Running out of iterations is reported
    through ``trace.converged`` rather than raised; the iterate with the
    smallest step is returned in that case.
    """
    M = initial_distribution(M, params.K)
    if not 0 < relaxation <= 1:
        raise ValueError("relaxation must lie in (0, 1]")
    if params.epsilon >= uniqueness_bound(params.K):
        warnings.warn(
            f"epsilon={params.epsilon} is outside the proven uniqueness range (< {uniqueness_bound(params.K):.4g})",
            stacklevel=2,
        )
    grid = time_grid(params)
    p_bar, m = default_initial_guess(params, M) if guess is None else guess
    p_bar = np.array(p_bar, dtype=float)
    m = np.array(m, dtype=float)

    trace = IterationTrace()
    best = None
    for it in range(params.max_iters):
        V, policy, p_new, m_new = picard_step(params, M, p_bar, m)
        err = distance((p_new, m_new), (p_bar, m), grid)
        trace.errors.append(err)
        trace.iterations = it + 1
        log.info("picard iteration %d: L = %.3e", it + 1, err)
        if best is None or err < best[0]:
            best = (err, V, policy, p_new, m_new)
        if err < params.tol:
            trace.converged = True
            return EquilibriumSolution(V=V, m=m_new, p_bar=p_new, policy=policy, trace=trace)
        if relaxation == 1.0:
            p_bar, m = p_new, m_new
        else:
            p_bar = p_bar + relaxation * (p_new - p_bar)
            m = m + relaxation * (m_new - m)

    _, V, policy, p_new, m_new = best
    return EquilibriumSolution(V=V, m=m_new, p_bar=p_new, policy=policy, trace=trace)
