"""Hot Monte-Carlo kernels.

Every trial draws its randomness from a counter-based generator keyed by
``(seed, trial_index, stream)``, so a batch of trials can be split across any
number of workers without changing a single draw.  Two interchangeable
backends compute the per-trial squared errors:

* ``squared_errors_numba`` -- a ``@njit(nogil=True)`` loop, the default;
* ``squared_errors_numpy`` -- a vectorised pure-numpy path.

Set ``OACQAM_DISABLE_NUMBA=1`` (or run without numba installed) to select the
numpy path.  Both backends produce identical integer errors.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

_DISABLED = os.environ.get("OACQAM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLED

# splitmix64 constants
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53

# stream layout inside one trial: noise first, then symbols
NOISE_RE, NOISE_IM, FIRST_SYMBOL = 0, 1, 2


def _mix_np(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def trial_keys(seed, trials) -> np.ndarray:
    """Per-trial 64-bit keys for an array of trial indices."""
    with np.errstate(over="ignore"):
        base = _mix_np(np.asarray([seed], dtype=np.uint64))[0]
        t = np.asarray(trials, dtype=np.uint64)
        return _mix_np(base + t * _GOLDEN)


def uniforms(keys, streams) -> np.ndarray:
    """Open-interval uniforms, shape ``keys.shape + (len(streams),)``.

    Values are ``(k + 0.5) * 2**-53`` for a 53-bit integer ``k``, so 0 and 1
    are never produced and the tangent transform stays finite.
    """
    keys = np.asarray(keys, dtype=np.uint64)
    s = np.asarray(streams, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix_np(keys[..., None] + (s + _ONE) * _GOLDEN)
    return ((z >> _S11).astype(np.float64) + 0.5) * _INV53


def _round_clamp_np(x: np.ndarray, top: int) -> np.ndarray:
    # half away from zero, then clamp to [0, top]
    r = np.sign(x) * np.floor(np.abs(x) + 0.5)
    return np.clip(r, 0.0, float(top)).astype(np.int64)


def squared_errors_numpy(seed, start, count, K, q, d1, d2, gamma, uniform_grid) -> np.ndarray:
    """Squared sum-estimation errors for trials ``start .. start+count-1``."""
    N = K * (q - 1) + 1
    Q = q * q
    keys = trial_keys(seed, np.arange(start, start + count, dtype=np.uint64))
    noise = uniforms(keys, [NOISE_RE, NOISE_IM])
    z1 = gamma * np.tan(np.pi * (noise[:, 0] - 0.5))
    z2 = gamma * np.tan(np.pi * (noise[:, 1] - 0.5))
    if uniform_grid:
        u = uniforms(keys, [FIRST_SYMBOL, FIRST_SYMBOL + 1])
        A = np.minimum(np.floor(u[:, 0] * N), N - 1).astype(np.int64)
        B = np.minimum(np.floor(u[:, 1] * N), N - 1).astype(np.int64)
    else:
        u = uniforms(keys, np.arange(FIRST_SYMBOL, FIRST_SYMBOL + K))
        s = np.minimum(np.floor(u * Q), Q - 1).astype(np.int64)
        A = (s % q).sum(axis=1)
        B = (s // q).sum(axis=1)
    a_hat = _round_clamp_np(A + z1 / d1, N - 1)
    b_hat = _round_clamp_np(B + z2 / d2, N - 1)
    err = (a_hat - A) + q * (b_hat - B)
    return err * err


if HAVE_NUMBA:
    import math

    @numba.njit(cache=True, inline="always")
    def _mix_nb(z):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
        return z ^ (z >> _S31)

    @numba.njit(cache=True, inline="always")
    def _uniform_nb(key, stream):
        z = _mix_nb(key + (np.uint64(stream) + _ONE) * _GOLDEN)
        return (np.float64(z >> _S11) + 0.5) * _INV53

    @numba.njit(cache=True, inline="always")
    def _round_clamp_nb(x, top):
        r = math.floor(abs(x) + 0.5)
        if x < 0.0:
            r = -r
        if r < 0.0:
            return 0
        if r > top:
            return top
        return np.int64(r)

    @numba.njit(cache=True, nogil=True)
    def squared_errors_numba(seed, start, count, K, q, d1, d2, gamma, uniform_grid):
        N = K * (q - 1) + 1
        Q = q * q
        out = np.empty(count, dtype=np.int64)
        base = _mix_nb(np.uint64(seed))
        for i in range(count):
            key = _mix_nb(base + np.uint64(start + i) * _GOLDEN)
            z1 = gamma * math.tan(math.pi * (_uniform_nb(key, NOISE_RE) - 0.5))
            z2 = gamma * math.tan(math.pi * (_uniform_nb(key, NOISE_IM) - 0.5))
            A = 0
            B = 0
            if uniform_grid:
                A = min(np.int64(math.floor(_uniform_nb(key, FIRST_SYMBOL) * N)), N - 1)
                B = min(np.int64(math.floor(_uniform_nb(key, FIRST_SYMBOL + 1) * N)), N - 1)
            else:
                for k in range(K):
                    s = min(np.int64(math.floor(_uniform_nb(key, FIRST_SYMBOL + k) * Q)), Q - 1)
                    A += s % q
                    B += s // q
            a_hat = _round_clamp_nb(A + z1 / d1, N - 1)
            b_hat = _round_clamp_nb(B + z2 / d2, N - 1)
            e = (a_hat - A) + q * (b_hat - B)
            out[i] = e * e
        return out
else:  # pragma: no cover
    squared_errors_numba = None


def squared_errors(seed, start, count, K, q, d1, d2, gamma, uniform_grid) -> np.ndarray:
    """Dispatch to the active backend."""
    args = (np.uint64(seed), int(start), int(count), int(K), int(q),
            float(d1), float(d2), float(gamma), bool(uniform_grid))
    if USE_NUMBA:
        return squared_errors_numba(*args)
    return squared_errors_numpy(*args)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
