"""Adaptive Dormand-Prince 5(4) integration with steps aligned to a fixed grid.

Forcing terms in this package are piecewise linear in time between grid
nodes, so the right-hand side has a kink at every node.  Stepping across a
kink ruins the error estimate of an embedded pair; here every step stays
inside a single grid interval and the solution is recorded exactly at the
nodes, so no dense-output interpolant is needed.
"""
from __future__ import annotations

import numpy as np

# Dormand & Prince (1980) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [np.array(row) for row in [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# fifth-order minus embedded fourth-order weights
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


class IntegrationError(RuntimeError):
    pass


def integrate_on_grid(fun, y0, nodes, rtol=1e-8, atol=1e-10, max_substeps=10_000):
    """Integrate ``y' = fun(t, y, seg)`` through ``nodes`` (increasing or decreasing).

    ``seg`` is the index of the grid interval ``[nodes[seg], nodes[seg+1]]``
    containing the current stage time, which lets callers interpolate forcing
    without a search.  Returns an array of shape ``(len(nodes),) + y0.shape``
    with the solution at every node.
    """
    nodes = np.asarray(nodes, dtype=float)
    y = np.array(y0, dtype=float)
    out = np.empty((len(nodes),) + y.shape)
    out[0] = y
    k = np.empty((7,) + y.shape)

    h_abs = abs(nodes[1] - nodes[0])
    f = None
    for seg in range(len(nodes) - 1):
        t, t_end = nodes[seg], nodes[seg + 1]
        direction = np.sign(t_end - t)
        # forcing may jump in slope at a node, so the FSAL stage is not reused
        f = fun(t, y, seg)
        substeps = 0
        while True:
            remaining = abs(t_end - t)
            last = h_abs >= remaining
            h = direction * (remaining if last else h_abs)
            k[0] = f
            for s in range(1, 7):
                dy = np.tensordot(_A[s], k[:s], axes=1)
                k[s] = fun(t + _C[s] * h, y + h * dy, seg)
            y_new = y + h * np.tensordot(_B, k, axes=1)
            err = h * np.tensordot(_E, k, axes=1)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = np.sqrt(np.mean((err / scale) ** 2))
            if not np.isfinite(err_norm):
                raise IntegrationError(f"non-finite derivative near t={t}")

            if err_norm <= 1.0:
                factor = _MAX_FACTOR if err_norm == 0 else min(_MAX_FACTOR, _SAFETY * err_norm ** -0.2)
                t = t_end if last else t + h
                y = y_new
                f = k[6]
                if not last:
                    h_abs = abs(h) * factor
                else:
                    # a step clipped to the node says little about the admissible size
                    h_abs = min(h_abs, abs(h) * factor) if factor < 1.0 else h_abs
                if last:
                    break
            else:
                h_abs = abs(h) * max(_MIN_FACTOR, _SAFETY * err_norm ** -0.2)
            substeps += 1
            if substeps > max_substeps:
                raise IntegrationError(f"step budget exhausted in interval {seg}")
        out[seg + 1] = y
    return out


class PiecewiseLinear:
    """Linear interpolation of time-major samples on a uniform grid.

    ``values`` has shape ``(n+1, ...)``; calls take the time and the interval
    index supplied by :func:`integrate_on_grid`.
    """

    def __init__(self, grid, values):
        self.t0 = float(grid[0])
        self.dt = float(grid[1] - grid[0])
        self.values = np.ascontiguousarray(values, dtype=float)

    def __call__(self, t, seg):
        w = (t - self.t0) / self.dt - seg
        lo = self.values[seg]
        return lo + w * (self.values[seg + 1] - lo)
