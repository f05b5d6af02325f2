import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faregame import ModelParams, solve_kolmogorov, solve_monopoly_distribution, time_grid
from faregame.kolmogorov import kolmogorov_rhs
from faregame.ode import IntegrationError


def test_rhs_conserves_mass(rng):
    lam = rng.uniform(0, 1, 6)
    m = rng.dirichlet(np.ones(7))
    dm = kolmogorov_rhs(lam, m)
    assert abs(dm.sum()) < 1e-15
    assert dm[0] == pytest.approx(lam[0] * m[1])
    assert dm[-1] == pytest.approx(-lam[-1] * m[-1])
    assert dm[3] == pytest.approx(lam[3] * m[4] - lam[2] * m[3])


def test_no_sales_freezes_distribution():
    params = ModelParams(K=4, T=10.0, n_steps=20)
    M = np.array([0.1, 0.2, 0.3, 0.0, 0.4])
    m = solve_kolmogorov(params, np.zeros((4, 21)), M)
    np.testing.assert_array_equal(m, np.repeat(M[:, None], 21, axis=1))


@pytest.mark.parametrize("c", [0.1, 0.5, 0.9])
def test_single_level_constant_intensity(c):
    params = ModelParams(K=1, T=10.0, n_steps=100)
    t = time_grid(params)
    m = solve_kolmogorov(params, np.full((1, 101), c), [0.2, 0.8])
    np.testing.assert_allclose(m[1], 0.8 * np.exp(-c * t), atol=1e-9)
    np.testing.assert_allclose(m[0], 1 - 0.8 * np.exp(-c * t), atol=1e-9)


def test_two_levels_constant_intensity_closed_form():
    # m_2 = e^{-t}, m_1 = t e^{-t} for unit intensities started at the top
    params = ModelParams(K=2, T=8.0, n_steps=80)
    t = time_grid(params)
    m = solve_kolmogorov(params, np.ones((2, 81)), [0.0, 0.0, 1.0])
    np.testing.assert_allclose(m[2], np.exp(-t), atol=1e-9)
    np.testing.assert_allclose(m[1], t * np.exp(-t), atol=1e-9)


def test_matches_monopoly_quadrature(monopoly, bimodal):
    params, _, lam, m_ref = monopoly
    m = solve_kolmogorov(params, lam, bimodal)
    assert np.abs(m - m_ref).max() <= 1e-6


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_invariants_for_random_intensities(seed):
    rng = np.random.default_rng(seed)
    K, n = 12, 60
    params = ModelParams(K=K, T=30.0, n_steps=n)
    lam = rng.uniform(0, 1, (K, n + 1))
    M = rng.dirichlet(np.ones(K + 1))
    m = solve_kolmogorov(params, lam, M)
    np.testing.assert_allclose(m[:, 0], M, atol=0)
    assert np.abs(m.sum(axis=0) - 1).max() <= 1e-6
    assert m.min() >= -1e-8
    assert np.all(np.diff(m[0]) >= -1e-8)
    assert np.all(np.diff(m[1:].sum(axis=0)) <= 1e-8)


def test_rejects_bad_intensities():
    params = ModelParams(K=2, T=1.0, n_steps=4)
    M = [0.0, 0.5, 0.5]
    with pytest.raises(IntegrationError):
        solve_kolmogorov(params, np.full((2, 5), np.inf), M)
    with pytest.raises(ValueError):
        solve_kolmogorov(params, np.full((2, 5), -0.1), M)
    with pytest.raises(ValueError):
        solve_kolmogorov(params, np.zeros((3, 5)), M)


def test_monopoly_cascade_agrees_for_random_intensities(rng):
    params = ModelParams(K=8, T=20.0, n_steps=200, epsilon=0.0)
    lam = rng.uniform(0.1, 0.6, (8, 201))
    M = rng.dirichlet(np.ones(9))
    a = solve_kolmogorov(params, lam, M)
    b = solve_monopoly_distribution(params, M, lam)
    assert np.abs(a - b).max() <= 1e-6
