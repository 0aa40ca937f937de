"""Monte-Carlo estimate of the sum-recovery MSE over the Cauchy MAC.

Trials are processed in fixed blocks of ``BLOCK`` consecutive indices.  Each
block reduces to an exact integer sum of squared errors plus a float sum of
their squares, and blocks are combined in index order, so the result does not
depend on how many workers computed them.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .grid import ConstellationParams, DomainError
from .noise import NoiseModel
from .optimizer import POWER_MATCHED, PowerBudget, solve_t_star

PER_NODE_UNIFORM = "per_node_uniform"
UNIFORM_GRID = "uniform_grid"
MODES = (PER_NODE_UNIFORM, UNIFORM_GRID)
BLOCK = 1 << 15


@dataclass(frozen=True)
class McConfig:
    params: ConstellationParams
    model: NoiseModel
    trials: int
    seed: int = 0
    symbol_mode: str = PER_NODE_UNIFORM

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must fit in 64 unsigned bits")
        if self.symbol_mode not in MODES:
            raise DomainError(f"symbol_mode must be one of {MODES}, got {self.symbol_mode!r}")


@dataclass(frozen=True)
class McResult:
    mse: float
    std_error: float
    trials: int
    max_abs_error: float


@dataclass(frozen=True)
class SweepRecord:
    xi_db: float
    mse_opt: float
    mse_eq: float
    se_opt: float
    se_eq: float


def _errors(config: McConfig, start: int, count: int) -> np.ndarray:
    p = config.params
    return _kernels.squared_errors(
        config.seed, start, count, p.K, p.q, p.d1, p.d2, config.model.gamma,
        config.symbol_mode == UNIFORM_GRID,
    )


def run_trial(config: McConfig, trial_index: int) -> float:
    """Squared error ``(f - f_hat)^2`` of a single trial."""
    if not 0 <= trial_index < config.trials:
        raise DomainError(f"trial_index {trial_index} outside [0, {config.trials})")
    return float(_errors(config, trial_index, 1)[0])


def _block_stats(config: McConfig, start: int, count: int):
    e2 = _errors(config, start, count)
    return int(e2.sum()), float(np.sum(e2.astype(np.float64) ** 2)), int(e2.max())


def run_monte_carlo(config: McConfig, workers: int = 1) -> McResult:
    n = config.trials
    blocks = [(s, min(BLOCK, n - s)) for s in range(0, n, BLOCK)]
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            stats = list(ex.map(lambda b: _block_stats(config, *b), blocks))
    else:
        stats = [_block_stats(config, *b) for b in blocks]
    total = sum(s[0] for s in stats)
    total_sq = math.fsum(s[1] for s in stats)
    mse = total / n
    if n > 1:
        var = max(total_sq / n - mse * mse, 0.0)
        se = math.sqrt(var / n)
    else:
        se = 0.0
    return McResult(mse=mse, std_error=se, trials=n, max_abs_error=math.sqrt(max(s[2] for s in stats)))


def snr_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive dB grid; a step wider than the range yields only ``start``."""
    if not step > 0:
        raise DomainError("snr step must be positive")
    if stop < start:
        raise DomainError("snr stop must not be below start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(n)]


def sweep_snr(
    base: McConfig,
    budget: PowerBudget,
    snr_db_list: Iterable[float],
    designs: Sequence[str] = ("optimized", "equal"),
    baseline: str = POWER_MATCHED,
    workers: int = 1,
) -> list[SweepRecord]:
    """Optimized vs. equal-spacing MSE at each ``snr_db = 10 log10(P/gamma)``.

    Every point reuses ``base.seed``, so all designs and SNRs see the same
    symbols and the same uniform noise stream (common random numbers).
    Columns of designs not requested are NaN.
    """
    unknown = set(designs) - {"optimized", "equal"}
    if unknown:
        raise DomainError(f"unknown designs {sorted(unknown)}")
    p = base.params
    if budget.Q != p.Q:
        raise DomainError("power budget and constellation disagree on Q")
    d_eq = budget.equal_spacing(baseline)
    records = []
    for snr in snr_db_list:
        if not math.isfinite(snr):
            raise DomainError("snr values must be finite")
        model = NoiseModel.from_snr_db(snr, budget.P)
        opt = eq = None
        if "optimized" in designs:
            res = solve_t_star(p.q, p.N, model.gamma, budget.rho)
            cfg = McConfig(p.with_spacing(res.d1_star, res.d2_star), model, base.trials, base.seed, base.symbol_mode)
            opt = run_monte_carlo(cfg, workers)
        if "equal" in designs:
            cfg = McConfig(p.with_spacing(d_eq, d_eq), model, base.trials, base.seed, base.symbol_mode)
            eq = run_monte_carlo(cfg, workers)
        nan = float("nan")
        records.append(SweepRecord(
            xi_db=float(snr),
            mse_opt=opt.mse if opt else nan,
            mse_eq=eq.mse if eq else nan,
            se_opt=opt.std_error if opt else nan,
            se_eq=eq.std_error if eq else nan,
        ))
    return records


def horizontal_shift(xi_db, mse_a, mse_b, levels) -> list[float]:
    """SNR gap (dB) by which curve ``b`` trails curve ``a`` at each MSE level.

    Each curve is inverted by linear interpolation of dB against ``log10(MSE)``;
    curves must decrease with SNR.  Positive values mean ``a`` reaches the level
    at a lower SNR.
    """
    xi = np.asarray(xi_db, dtype=float)
    la, lb = np.log10(np.asarray(mse_a)), np.log10(np.asarray(mse_b))

    def invert(logm, level):
        # np.interp wants increasing x
        return float(np.interp(level, logm[::-1], xi[::-1]))

    return [invert(lb, math.log10(L)) - invert(la, math.log10(L)) for L in levels]


def interior_levels(mse_a, mse_b, count: int = 3) -> list[float]:
    """``count`` MSE levels spaced evenly in log inside the range both curves cover."""
    lo = max(np.min(mse_a), np.min(mse_b))
    hi = min(np.max(mse_a), np.max(mse_b))
    if not lo < hi:
        raise DomainError("curves share no MSE range")
    frac = np.arange(1, count + 1) / (count + 1)
    return list(10 ** (math.log10(lo) + frac * (math.log10(hi) - math.log10(lo))))
