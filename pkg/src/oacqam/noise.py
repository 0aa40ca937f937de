"""Componentwise complex Cauchy noise ``z = z1 + 1j*z2``, ``z1, z2 ~ Cauchy(0, gamma)`` i.i.d."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import DomainError


@dataclass(frozen=True)
class NoiseModel:
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise DomainError(f"gamma must be positive and finite, got {self.gamma!r}")

    @classmethod
    def from_snr_db(cls, snr_db: float, power: float = 1.0) -> "NoiseModel":
        """``snr_db = 10 log10(P / gamma)``; with ``P = 1`` this is ``1/gamma`` in dB."""
        return cls(power / 10.0 ** (snr_db / 10.0))


def density(r: complex, y: complex, model: NoiseModel) -> float:
    """Channel transition density ``gamma / (pi (gamma^2 + |r - y|^2))``."""
    g = model.gamma
    return g / (math.pi * (g * g + abs(complex(r) - complex(y)) ** 2))


def cauchy_from_uniform(u, gamma: float):
    """Inverse-CDF transform ``gamma * tan(pi (u - 1/2))``."""
    return gamma * np.tan(np.pi * (np.asarray(u, dtype=float) - 0.5))


def sample(model: NoiseModel, rng: np.random.Generator, size=None):
    """Draw complex noise; one uniform per component, real part first.

    Returns a Python ``complex`` when ``size`` is None, else a complex array.
    A uniform of exactly 0 (the only value ``Generator.random`` can return
    that sits on the pole) is redrawn.
    """
    n = 1 if size is None else int(np.prod(size))
    u = rng.random((n, 2))
    bad = u == 0.0
    while bad.any():
        u[bad] = rng.random(int(bad.sum()))
        bad = u == 0.0
    z = cauchy_from_uniform(u, model.gamma)
    out = z[:, 0] + 1j * z[:, 1]
    if size is None:
        return complex(out[0])
    return out.reshape(size)
