"""Uniformly sampled 2*pi-periodic scalar fields."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

TWO_PI = 2.0 * np.pi


def grid(N: int) -> np.ndarray:
    """Nodes ``x_i = 2*pi*i/N``, ``i = 0..N-1``."""
    return TWO_PI * np.arange(N) / N


@dataclass(frozen=True, eq=False)
class PeriodicField:
    """Values of a 2*pi-periodic function at ``x_i = 2*pi*i/N``.

    The value array is copied and made read-only on construction, so a field
    can be shared between snapshots and threads without defensive copies.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if v.size < 1:
            raise ValueError("a periodic field needs at least one sample")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], N: int) -> "PeriodicField":
        return cls(func(grid(N)))

    @classmethod
    def zeros(cls, N: int) -> "PeriodicField":
        return cls(np.zeros(N))

    @property
    def N(self) -> int:
        return self.values.size

    @property
    def dx(self) -> float:
        return TWO_PI / self.N

    @property
    def x(self) -> np.ndarray:
        return grid(self.N)

    def mean(self) -> float:
        return float(self.values.mean())

    def reflected(self) -> "PeriodicField":
        """The field ``f(-x)`` sampled on the same grid."""
        return PeriodicField(np.roll(self.values[::-1], 1))

    def shifted(self, shift: float) -> "PeriodicField":
        """The field ``f(x - shift)`` by exact trigonometric interpolation."""
        return PeriodicField(fourier_shift(self.values, shift))

    def __len__(self) -> int:
        return self.N

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)


def fourier_shift(values: np.ndarray, shift: float) -> np.ndarray:
    """Translate periodic samples by ``shift`` (``f(x) -> f(x - shift)``)."""
    N = values.size
    k = np.fft.rfftfreq(N, d=1.0 / N)
    raw = np.fft.rfft(values)
    spectrum = raw * np.exp(-1j * k * shift)
    if N % 2 == 0:
        # the Nyquist mode cannot carry a phase on a real grid
        spectrum[-1] = raw[-1].real * np.cos(k[-1] * shift)
    return np.fft.irfft(spectrum, n=N)


def l2_norm(values: np.ndarray, dx: float) -> float:
    return float(np.sqrt(np.sum(np.asarray(values) ** 2) * dx))
