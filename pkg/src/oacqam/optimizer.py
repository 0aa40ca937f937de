"""Power-constrained spacing design.

The spacings live on the circle ``d1^2 + d2^2 = rho^2`` with
``rho = sqrt(6P / (Q-1))`` and are parametrised by ``t`` in ``(-1/2, 1/2)``::

    d1 = rho * sqrt(1/2 - t),   d2 = rho * sqrt(1/2 + t)

``solve_t_star`` bisects the large-K stationarity function ``g_function``;
``exact_scan`` minimises the closed-form MSE along the circle directly and
serves as its oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import LEMMA, coefficients, mse_coefficients
from .grid import DomainError

EDGE = 1e-12
THEOREM_ROOT = "theorem_root"
EXACT_SCAN = "exact_scan"
POWER_MATCHED = "power-matched"
CAPTION = "caption"
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PowerBudget:
    P: float
    Q: int

    def __post_init__(self):
        if not (math.isfinite(self.P) and self.P > 0):
            raise DomainError(f"power must be positive, got {self.P!r}")
        if self.Q < 4:
            raise DomainError(f"Q must be q^2 with q >= 2, got {self.Q!r}")

    @property
    def rho(self) -> float:
        return math.sqrt(6.0 * self.P / (self.Q - 1))

    def equal_spacing(self, baseline: str = POWER_MATCHED) -> float:
        """Common spacing of the symmetric reference design.

        ``power-matched`` sits on the design circle (``d = rho/sqrt(2)``), so
        ``average_power`` reports exactly ``P``.  ``caption`` uses
        ``d = sqrt(6P/(Q-1)) = rho``, which ``average_power`` counts as ``2P``
        but whose zero-mean symbol energy is exactly ``P``.
        """
        if baseline == POWER_MATCHED:
            return self.rho / math.sqrt(2.0)
        if baseline == CAPTION:
            return self.rho
        raise ValueError(f"unknown baseline {baseline!r}")


@dataclass(frozen=True)
class OptimizationResult:
    t_star: float
    d1_star: float
    d2_star: float
    g_residual: float
    kkt_residual: float
    method: str
    rho: float


def spacings(t, rho):
    t = np.asarray(t, dtype=float)
    return rho * np.sqrt(0.5 - t), rho * np.sqrt(0.5 + t)


def _thetas(N: int, gamma: float) -> np.ndarray:
    return (2.0 * np.arange(1, N) - 1.0) / gamma


def g_function(t, q, N, gamma, rho, theta_power: int = 2):
    """Large-K stationarity function; its positive root is the optimal split.

    ``theta_power=1`` evaluates the variant with ``theta_m`` (not
    ``theta_m^2``) in the denominators, kept only for comparison.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(t) >= 0.5) or not np.all(np.isfinite(t)):
        raise DomainError("t must lie strictly inside (-0.5, 0.5)")
    if theta_power not in (1, 2):
        raise ValueError("theta_power must be 1 or 2")
    th = _thetas(N, gamma)
    w = th ** 2
    c = th ** theta_power * rho * rho
    lo = (0.5 - t)[:, None]
    hi = (0.5 + t)[:, None]
    left = np.sum(w / (np.sqrt(lo) * (1.0 + c * lo)), axis=1)
    right = np.sum(q * q * w / (np.sqrt(hi) * (1.0 + c * hi)), axis=1)
    g = left - right
    return float(g[0]) if scalar else g


def kkt_terms(d1, d2, q, N, gamma, weights: str = "exact") -> tuple[float, float]:
    """Both sides of the ratio-form stationarity condition.

    ``weights="exact"`` uses ``alpha_m (2m-1)``; ``"large_k"`` uses ``(2m-1)^2``.
    """
    if not (d1 > 0 and d2 > 0):
        raise DomainError("spacings must be positive")
    odd = 2.0 * np.arange(1, N) - 1.0
    if weights == "exact":
        gm = mse_coefficients(N).alpha * odd
    elif weights == "large_k":
        gm = odd ** 2
    else:
        raise ValueError(f"unknown weights {weights!r}")
    th = odd / gamma
    lhs = math.fsum(gm / (d1 * (1.0 + (th * d1) ** 2)))
    rhs = math.fsum(q * q * gm / (d2 * (1.0 + (th * d2) ** 2)))
    return lhs, rhs


def kkt_residual(d1, d2, q, N, gamma, weights: str = "exact") -> float:
    lhs, rhs = kkt_terms(d1, d2, q, N, gamma, weights)
    return lhs - rhs


def _result(t, q, N, gamma, rho, method) -> OptimizationResult:
    d1, d2 = spacings(t, rho)
    return OptimizationResult(
        t_star=float(t),
        d1_star=float(d1),
        d2_star=float(d2),
        g_residual=g_function(t, q, N, gamma, rho),
        kkt_residual=kkt_residual(float(d1), float(d2), q, N, gamma),
        method=method,
        rho=rho,
    )


def solve_t_star(q, N, gamma, rho, tol: float = 1e-12) -> OptimizationResult:
    """Bisection for the positive root of ``g_function`` on ``(0, 1/2 - 1e-12)``."""
    if int(q) != q or q < 2:
        raise DomainError(f"q must be an integer >= 2, got {q!r}")
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N!r}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    lo, hi = 0.0, 0.5 - EDGE
    g_lo = g_function(lo, q, N, gamma, rho)
    g_hi = g_function(hi, q, N, gamma, rho)
    if not (g_lo < 0.0 < g_hi):
        raise DomainError(f"no sign change of G on (0, 0.5): G(0)={g_lo}, G(0.5-)={g_hi}")
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        g_mid = g_function(mid, q, N, gamma, rho)
        if abs(g_mid) <= tol:
            lo = hi = mid
            break
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
    return _result(0.5 * (lo + hi), q, N, gamma, rho, THEOREM_ROOT)


def circle_mse(t, q, N, gamma, rho, form: str = LEMMA):
    """Closed-form MSE along the power circle; vectorised over ``t``."""
    c = coefficients(N, form)
    d1, d2 = spacings(np.atleast_1d(t), rho)

    def axis(d):
        return 2.0 / math.pi * np.sum(c.alpha * np.arctan(gamma / (c.denom * d[:, None])), axis=1)

    out = axis(d1) + q * q * axis(d2)
    return float(out[0]) if np.ndim(t) == 0 else out


def golden_section(f, a: float, b: float, tol: float = 1e-10) -> float:
    """Minimiser of a unimodal ``f`` on ``[a, b]`` to bracket width ``tol``."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def exact_scan(q, K, gamma, rho, grid_points: int = 2001, form: str = LEMMA,
               N: int | None = None) -> OptimizationResult:
    """Direct constrained minimisation of the closed-form MSE.

    A uniform grid over ``t`` (endpoints ``-1/2+1e-12`` and ``1/2-1e-12``
    included) locates the best cell, which is then refined by golden-section
    search.  ``N`` overrides ``K(q-1)+1``, which allows probing
    the symmetric ``q = 1`` objective.
    """
    if grid_points < 100:
        raise DomainError("grid_points must be >= 100")
    N = K * (q - 1) + 1 if N is None else N
    t = np.linspace(-0.5 + EDGE, 0.5 - EDGE, int(grid_points))
    vals = circle_mse(t, q, N, gamma, rho, form)
    i = int(np.argmin(vals))
    a, b = t[max(i - 1, 0)], t[min(i + 1, len(t) - 1)]
    best = golden_section(lambda s: circle_mse(s, q, N, gamma, rho, form), float(a), float(b))
    # golden-section never lands on an endpoint; keep the grid point if the minimum sits there
    if vals[i] < circle_mse(best, q, N, gamma, rho, form):
        best = float(t[i])
    d1, d2 = spacings(best, rho)
    return OptimizationResult(
        t_star=float(best),
        d1_star=float(d1),
        d2_star=float(d2),
        g_residual=g_function(best, q, N, gamma, rho),
        kkt_residual=kkt_residual(float(d1), float(d2), q, N, gamma),
        method=EXACT_SCAN,
        rho=rho,
    )


def g_monotonicity_check(q, N, gamma, rho, samples: int = 1000, t=None) -> bool:
    """True iff ``g_function`` strictly increases over ``samples`` points of ``(0, 1/2)``."""
    if t is None:
        if samples < 10:
            raise DomainError("samples must be >= 10")
        t = np.linspace(0.0, 0.5, int(samples) + 2)[1:-1]
    g = g_function(np.asarray(t, dtype=float), q, N, gamma, rho)
    return bool(np.all(np.diff(g) > 0.0))


def g_sign_changes(q, N, gamma, rho, points: int = 10_000) -> int:
    """Number of sign changes of ``g_function`` on an interior grid of ``(0, 1/2)``."""
    t = np.linspace(0.0, 0.5, int(points) + 2)[1:-1]
    s = np.sign(g_function(t, q, N, gamma, rho))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))
