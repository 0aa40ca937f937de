import math

import numpy as np
import pytest

from oacqam.analysis import (
    EXACT,
    LEMMA,
    closed_form_mse,
    exact_axis_mse,
    exact_coefficients,
    mse_coefficients,
    mu,
)
from oacqam.grid import ConstellationParams, DomainError
from oacqam.noise import NoiseModel
from oacqam.optimizer import PowerBudget
from oacqam.simulator import UNIFORM_GRID, McConfig, run_monte_carlo

from oracles import axis_mse_by_enumeration, axis_mse_monte_carlo

LEMMA_DEFECT = ("the published coefficients and arctan arguments do not describe clamped nearest-point "
                "rounding; only the exact form reproduces the enumeration and simulation oracles")


@pytest.mark.parametrize("N", [2, 3, 7, 31, 701])
def test_alpha_formula(N):
    c = mse_coefficients(N)
    m = np.arange(1, N)
    assert len(c.alpha) == N - 1
    np.testing.assert_allclose(c.alpha, 2 * m - 1 + (3 * m * (1 - m) - 1) / N, rtol=0, atol=1e-12)
    assert c.alpha[0] == pytest.approx(1 - 1 / N, abs=1e-15)
    assert c.alpha[0] > 0


def test_coefficients_cached_and_immutable():
    assert mse_coefficients(50) is mse_coefficients(50)
    with pytest.raises(ValueError):
        mse_coefficients(50).alpha[0] = 3.0
    with pytest.raises(DomainError):
        mse_coefficients(1)


@pytest.mark.parametrize("x,gamma", [(1.0, 1.0), (0.2, 3.0), (7.0, 0.01)])
def test_mu_two_points(x, gamma):
    assert mu(x, gamma, 2) == pytest.approx(math.atan(gamma / x) / math.pi, rel=1e-14)


def test_mu_domain():
    for x in (0.0, -1.0):
        with pytest.raises(DomainError):
            mu(x, 1.0, 5)


def test_mu_limits():
    N = 31
    tail = [mu(x, 1.0, N) for x in np.logspace(2, 8, 30)]
    assert all(a > b for a, b in zip(tail, tail[1:]))
    assert tail[-1] < 1e-4
    assert mu(1e-300, 1.0, N) == pytest.approx(mse_coefficients(N).alpha.sum(), rel=1e-9)


@pytest.mark.parametrize("N", [2, 3, 10, 25, 50, 100, 200])
def test_mu_strictly_decreasing_above_small_spacing(N):
    vals = np.array([mu(x, 1.0, N) for x in np.logspace(np.log10(0.05), 4, 400)])
    assert np.all(np.diff(vals) < 0)


@pytest.mark.xfail(strict=True, reason="negative alpha_m make the published form increase for spacing below ~0.02 gamma")
@pytest.mark.parametrize("N", [10, 50, 200])
def test_mu_strictly_decreasing_full_range(N):
    vals = np.array([mu(x, 1.0, N) for x in np.logspace(-4, 4, 400)])
    assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("N", [2, 10, 50, 200])
def test_exact_form_strictly_decreasing_full_range(N):
    vals = np.array([exact_axis_mse(x, 1.0, N) for x in np.logspace(-4, 4, 400)])
    assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("c", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("N", [3, 41, 301])
def test_mu_scale_covariance(c, N):
    for x, g in [(0.3, 1.0), (2.0, 0.05)]:
        assert mu(c * x, c * g, N) == pytest.approx(mu(x, g, N), rel=1e-12)


def test_closed_form_combination():
    p = ConstellationParams(4, 10, 0.6, 0.6)
    m = NoiseModel(0.3)
    assert closed_form_mse(p, m) == pytest.approx(17 * mu(0.6, 0.3, p.N), rel=1e-14)
    p2 = ConstellationParams(8, 3, 0.2, 0.9)
    assert closed_form_mse(p2, m) == pytest.approx(mu(0.2, 0.3, p2.N) + 64 * mu(0.9, 0.3, p2.N), rel=1e-14)
    assert closed_form_mse(p2, NoiseModel(1e-12)) < 1e-8


def test_closed_form_rejects_unknown_form():
    with pytest.raises(ValueError):
        closed_form_mse(ConstellationParams(2, 2, 1, 1), NoiseModel(1), "gaussian")


# exact form: enumeration oracle

def test_exact_form_frozen_value():
    # frozen from axis_mse_by_enumeration(1.0, 1.0, 3)
    assert exact_axis_mse(1.0, 1.0, 3) == pytest.approx(0.8442225934214198, rel=1e-12)
    assert axis_mse_by_enumeration(1.0, 1.0, 3) == pytest.approx(0.8442225934214198, rel=1e-12)


@pytest.mark.parametrize("N", range(2, 10))
@pytest.mark.parametrize("x,gamma", [(1.0, 1.0), (0.3, 0.05), (2.5, 4.0)])
def test_exact_form_matches_enumeration(N, x, gamma):
    assert exact_axis_mse(x, gamma, N) == pytest.approx(axis_mse_by_enumeration(x, gamma, N), rel=1e-9, abs=1e-12)


def test_exact_coefficients_nonnegative():
    assert np.all(exact_coefficients(701).alpha > 0)


@pytest.mark.xfail(strict=True, reason=LEMMA_DEFECT)
@pytest.mark.parametrize("N", [3, 9])
def test_published_form_matches_enumeration(N):
    assert mu(1.0, 1.0, N) == pytest.approx(axis_mse_by_enumeration(1.0, 1.0, N), rel=1e-9)


# Monte-Carlo oracle, N = 3 (K=2, q=2), gamma = 1, x = 1

@pytest.fixture(scope="module")
def mc_three_point():
    return axis_mse_monte_carlo(1.0, 1.0, 3, 1_000_000, seed=31)


def test_exact_form_matches_three_point_mc(mc_three_point):
    mean, se = mc_three_point
    assert abs(exact_axis_mse(1.0, 1.0, 3) - mean) <= 3 * se


@pytest.mark.xfail(strict=True, reason=LEMMA_DEFECT)
def test_published_form_matches_three_point_mc(mc_three_point):
    mean, se = mc_three_point
    assert abs(mu(1.0, 1.0, 3) - mean) <= 3 * se


# end-to-end: K=10, q=4, P=1, equal spacing, 1/gamma = 10 dB, uniform-grid simulation

@pytest.fixture(scope="module")
def mc_uniform_grid():
    d = PowerBudget(1.0, 16).equal_spacing()
    p = ConstellationParams(4, 10, d, d)
    m = NoiseModel.from_snr_db(10.0)
    return p, m, run_monte_carlo(McConfig(p, m, 1_000_000, seed=4, symbol_mode=UNIFORM_GRID))


def test_exact_closed_form_matches_simulation(mc_uniform_grid):
    p, m, res = mc_uniform_grid
    assert abs(closed_form_mse(p, m, EXACT) - res.mse) <= 3 * res.std_error


@pytest.mark.xfail(strict=True, reason=LEMMA_DEFECT)
def test_published_closed_form_matches_simulation(mc_uniform_grid):
    p, m, res = mc_uniform_grid
    assert abs(closed_form_mse(p, m, LEMMA) - res.mse) <= 3 * res.std_error
