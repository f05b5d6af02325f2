import numpy as np
import pytest
from scipy.integrate import solve_ivp

from faregame.ode import IntegrationError, PiecewiseLinear, integrate_on_grid


def test_linear_decay_exact():
    nodes = np.linspace(0.0, 5.0, 11)
    out = integrate_on_grid(lambda t, y, seg: -0.7 * y, np.array([1.0, 2.0]), nodes)
    np.testing.assert_allclose(out[:, 0], np.exp(-0.7 * nodes), rtol=1e-8)
    np.testing.assert_allclose(out[:, 1], 2 * np.exp(-0.7 * nodes), rtol=1e-8)


def test_backward_nodes():
    nodes = np.linspace(3.0, 0.0, 31)
    out = integrate_on_grid(lambda t, y, seg: np.cos(t) * np.ones_like(y), np.zeros(1), nodes)
    np.testing.assert_allclose(out[:, 0], np.sin(nodes) - np.sin(3.0), atol=1e-9)


def test_matches_scipy_on_nonlinear_system():
    def f(t, y, seg=None):
        return np.array([y[1], -np.sin(y[0]) - 0.1 * y[1]])

    nodes = np.linspace(0.0, 20.0, 201)
    ours = integrate_on_grid(f, np.array([2.0, 0.0]), nodes, rtol=1e-12, atol=1e-14)
    ref = solve_ivp(f, (0, 20), [2.0, 0.0], method="DOP853", t_eval=nodes, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(ours, ref.y.T, atol=1e-9)


def test_segment_index_passed_to_rhs():
    nodes = np.linspace(0.0, 1.0, 5)
    seen = set()

    def f(t, y, seg):
        assert nodes[seg] - 1e-12 <= t <= nodes[seg + 1] + 1e-12
        seen.add(seg)
        return np.zeros_like(y)

    integrate_on_grid(f, np.zeros(1), nodes)
    assert seen == {0, 1, 2, 3}


def test_nonfinite_rhs_raises():
    with pytest.raises(IntegrationError):
        integrate_on_grid(lambda t, y, seg: np.full_like(y, np.nan), np.ones(1), np.linspace(0, 1, 3))


def test_piecewise_linear_interpolation():
    grid = np.array([0.0, 1.0, 2.0])
    f = PiecewiseLinear(grid, np.array([[0.0, 10.0], [2.0, 20.0], [1.0, 0.0]]))
    np.testing.assert_allclose(f(0.25, 0), [0.5, 12.5])
    np.testing.assert_allclose(f(1.5, 1), [1.5, 10.0])
    np.testing.assert_allclose(f(2.0, 1), [1.0, 0.0])
