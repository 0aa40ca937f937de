"""Closed-form MSE of the decoded sum under componentwise Cauchy noise.

Two per-axis error functions are provided.

``mu`` is the published closed form::

    mu(x) = (2/pi) * sum_{m=1}^{N-1} alpha_m * arctan(gamma / ((2m-1) x))
    alpha_m = 2m - 1 + (3m(1-m) - 1) / N

``exact_axis_mse`` is the mean squared index error of clamped nearest-point
rounding on an N-point axis with spacing ``x`` and a uniformly drawn true
point, obtained by summing Cauchy tail probabilities over the decision
boundaries ``(m - 1/2) x``::

    E[e^2] = (2/pi) * sum_{m=1}^{N-1} (2m-1)(N-m)/N * arctan(gamma / ((m - 1/2) x))

The two agree for the first coefficient only; the simulator reproduces the
second.  ``closed_form_mse`` combines either one as ``f(d1) + q^2 f(d2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import ConstellationParams, DomainError
from .noise import NoiseModel

LEMMA = "lemma"
EXACT = "exact"
FORMS = (LEMMA, EXACT)


@dataclass(frozen=True)
class MseCoefficients:
    """Weights and arctan denominators of one per-axis error sum (index m-1 holds term m)."""

    N: int
    alpha: np.ndarray
    denom: np.ndarray

    def __post_init__(self):
        self.alpha.setflags(write=False)
        self.denom.setflags(write=False)


def _check_N(N: int) -> int:
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N!r}")
    return int(N)


@lru_cache(maxsize=256)
def mse_coefficients(N: int) -> MseCoefficients:
    """Published coefficients ``alpha_m`` with denominators ``2m-1``."""
    N = _check_N(N)
    m = np.arange(1, N, dtype=float)
    alpha = 2 * m - 1 + (3 * m * (1 - m) - 1) / N
    return MseCoefficients(N, alpha, 2 * m - 1)


@lru_cache(maxsize=256)
def exact_coefficients(N: int) -> MseCoefficients:
    """Exact clamped-rounding weights ``(2m-1)(N-m)/N`` with denominators ``m - 1/2``."""
    N = _check_N(N)
    m = np.arange(1, N, dtype=float)
    return MseCoefficients(N, (2 * m - 1) * (N - m) / N, m - 0.5)


def coefficients(N: int, form: str = LEMMA) -> MseCoefficients:
    if form == LEMMA:
        return mse_coefficients(N)
    if form == EXACT:
        return exact_coefficients(N)
    raise ValueError(f"unknown MSE form {form!r}; expected one of {FORMS}")


def axis_error(x: float, gamma: float, coeffs: MseCoefficients) -> float:
    """``(2/pi) * sum_m w_m * arctan(gamma / (c_m x))`` with compensated summation."""
    if not x > 0:
        raise DomainError(f"spacing must be positive, got {x!r}")
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    terms = coeffs.alpha * np.arctan(gamma / (coeffs.denom * x))
    return 2.0 / math.pi * math.fsum(terms)


def mu(x: float, gamma: float, N: int) -> float:
    """Published per-axis error term."""
    return axis_error(x, gamma, mse_coefficients(N))


def exact_axis_mse(x: float, gamma: float, N: int) -> float:
    """Exact per-axis mean squared index error of clamped rounding, uniform true point."""
    return axis_error(x, gamma, exact_coefficients(N))


def spacing_mse(d1: float, d2: float, q: int, N: int, gamma: float, form: str = LEMMA) -> float:
    c = coefficients(N, form)
    return axis_error(d1, gamma, c) + q * q * axis_error(d2, gamma, c)


def closed_form_mse(params: ConstellationParams, model: NoiseModel, form: str = LEMMA) -> float:
    """MSE of the recovered sum, ``f(d1) + q^2 f(d2)`` with ``f`` chosen by ``form``."""
    return spacing_mse(params.d1, params.d2, params.q, params.N, model.gamma, form)
