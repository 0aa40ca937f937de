"""Sum-preserving QAM-like encoder, superimposed grid and nearest-point decoder.

A node with integer input ``s`` in ``[0, q*q - 1]`` transmits the point
``(s mod q) * d1 + floor(s / q) * d2 * 1j``.  Because the map is additive, the
noiseless superposition of ``K`` such points is ``A * d1 + B * d2 * 1j`` with
``A + q * B == sum(s)``, where ``A, B`` lie on an ``N x N`` grid,
``N = K * (q - 1) + 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


@dataclass(frozen=True)
class ConstellationParams:
    q: int
    K: int
    d1: float
    d2: float

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 2:
            raise DomainError(f"q must be an integer >= 2, got {self.q!r}")
        if int(self.K) != self.K or self.K < 1:
            raise DomainError(f"K must be an integer >= 1, got {self.K!r}")
        for name in ("d1", "d2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite spacing, got {v!r}")

    @property
    def Q(self) -> int:
        """Per-node alphabet size."""
        return self.q * self.q

    @property
    def N(self) -> int:
        """Points per axis of the superimposed grid."""
        return self.K * (self.q - 1) + 1

    def with_spacing(self, d1: float, d2: float) -> "ConstellationParams":
        return ConstellationParams(self.q, self.K, d1, d2)


class GridPoint(NamedTuple):
    a: int
    b: int


def encode(s: int, params: ConstellationParams) -> complex:
    if int(s) != s or not 0 <= s <= params.Q - 1:
        raise DomainError(f"symbol {s!r} outside [0, {params.Q - 1}]")
    s = int(s)
    return complex((s % params.q) * params.d1, (s // params.q) * params.d2)


def constellation(params: ConstellationParams) -> np.ndarray:
    """All ``Q`` transmit points, indexed by symbol."""
    s = np.arange(params.Q)
    return (s % params.q) * params.d1 + 1j * (s // params.q) * params.d2


def average_power(params: ConstellationParams) -> float:
    """Power figure ``(Q-1)(d1^2+d2^2)/6`` that defines the design constraint.

    This is exactly twice the energy of the zero-mean version of the grid and
    differs from the raw mean of ``|encode(s)|^2`` unless ``q == 2``; see
    ``symbol_energy`` for the enumerated quantities.
    """
    return (params.Q - 1) * (params.d1 ** 2 + params.d2 ** 2) / 6.0


def symbol_energy(params: ConstellationParams, centered: bool = False) -> float:
    """Mean of ``|encode(s)|^2`` over equiprobable symbols.

    With ``centered=True`` the per-axis mean ``(q-1)d/2`` is removed first,
    which a transmitter can do for free because the receiver knows the offset.
    """
    q = params.q
    per_axis = (q * q - 1) / 12.0 if centered else (q - 1) * (2 * q - 1) / 6.0
    return per_axis * (params.d1 ** 2 + params.d2 ** 2)


def superimpose(symbols: Sequence[int], params: ConstellationParams) -> complex:
    """Noiseless channel output for one symbol per node."""
    if len(symbols) != params.K:
        raise DomainError(f"expected {params.K} symbols, got {len(symbols)}")
    A = B = 0
    for s in symbols:
        if int(s) != s or not 0 <= s <= params.Q - 1:
            raise DomainError(f"symbol {s!r} outside [0, {params.Q - 1}]")
        A += int(s) % params.q
        B += int(s) // params.q
    return complex(A * params.d1, B * params.d2)


def _round_half_away(x: float) -> float:
    return math.copysign(math.floor(abs(x) + 0.5), x)


def decode(r: complex, params: ConstellationParams) -> GridPoint:
    """Nearest superimposed grid point to ``r``.

    For the componentwise Cauchy channel this is the maximum-likelihood rule:
    the density is decreasing in ``|r - y|`` and the grid is a product set, so
    each axis is rounded independently.  Indices outside the grid are clamped
    to ``[0, N-1]``; exact half-way ties round away from zero.
    """
    r = complex(r)
    if not (math.isfinite(r.real) and math.isfinite(r.imag)):
        raise DomainError(f"received sample must be finite, got {r!r}")
    top = params.N - 1
    a = min(max(_round_half_away(r.real / params.d1), 0.0), top)
    b = min(max(_round_half_away(r.imag / params.d2), 0.0), top)
    return GridPoint(int(a), int(b))


def estimate_sum(p: GridPoint, params: ConstellationParams) -> int:
    """Map a decoded grid point back to the sum, ``a + q*b``."""
    return int(p.a) + params.q * int(p.b)
