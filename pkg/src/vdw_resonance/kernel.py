"""Odd periodic kernels, the convolution operator and the linear dispersion relation.

The convolution ``Gamma * int_0^{2pi} K(x - y) sigma(y) dy`` is evaluated with the
periodic trapezoid rule. For a sine series of order ``M`` sampled on ``N >= 4M``
points that sum is diagonal in the discrete Fourier basis, so it is applied as a
multiplier on the FFT of the field. :func:`convolve_trapezoid` performs the
literal O(N^2) sum and is kept for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GridTooCoarseError
from .field import PeriodicField


@dataclass(frozen=True)
class SineKernel:
    """``K(x) = sum_{n=1}^{M} A_n sin(n x)``."""

    coefficients: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coefficients)
        if len(coeffs) < 1:
            raise ValueError("a sine kernel needs at least one coefficient")
        if not all(np.isfinite(coeffs)):
            raise ValueError("kernel coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def M(self) -> int:
        return len(self.coefficients)

    @property
    def max_abs_coefficient(self) -> float:
        return max(abs(a) for a in self.coefficients)

    def __call__(self, x):
        return evaluate_kernel(self, x)


SINGLE_MODE = SineKernel((1.0,))


def evaluate_kernel(kernel: SineKernel, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for n, a in enumerate(kernel.coefficients, start=1):
        out = out + a * np.sin(n * x)
    return out if out.ndim else float(out)


@lru_cache(maxsize=64)
def _multiplier(coefficients: tuple[float, ...], N: int) -> np.ndarray:
    m = np.zeros(N // 2 + 1, dtype=complex)
    for n, a in enumerate(coefficients, start=1):
        m[n] = -1j * np.pi * a
    m.setflags(write=False)
    return m


def check_resolution(kernel: SineKernel, N: int) -> None:
    if N < 4 * kernel.M:
        raise GridTooCoarseError(
            f"N={N} points cannot resolve a kernel of order M={kernel.M}; need N >= {4 * kernel.M}"
        )


def convolve_array(kernel: SineKernel, values: np.ndarray) -> np.ndarray:
    """Unscaled ``K * sigma`` on raw samples; the solver's inner loop uses this."""
    N = values.shape[-1]
    return np.fft.irfft(np.fft.rfft(values) * _multiplier(kernel.coefficients, N), n=N)


def convolve(kernel: SineKernel, field: PeriodicField, Gamma: float = 1.0) -> PeriodicField:
    """``Gamma * int_0^{2pi} K(x - y) sigma(y) dy`` sampled on the field's grid."""
    check_resolution(kernel, field.N)
    return PeriodicField(Gamma * convolve_array(kernel, field.values))


def convolve_trapezoid(kernel: SineKernel, field: PeriodicField, Gamma: float = 1.0) -> PeriodicField:
    """Direct composite trapezoid rule, O(N^2)."""
    check_resolution(kernel, field.N)
    x = field.x
    K = evaluate_kernel(kernel, x[:, None] - x[None, :])
    return PeriodicField(Gamma * (K @ field.values) * field.dx)


def dispersion_omega(kernel: SineKernel, k: int, Gamma: float) -> float:
    """Frequency of the linear mode ``exp(i(kx - omega t))``.

    ``omega(k) = -i Gamma int K(xi) exp(-i k xi) dxi``, which for a sine series
    is ``-pi Gamma sign(k) A_|k|`` (zero beyond the truncation order).
    """
    k = int(k)
    if k == 0:
        raise ValueError("wave number must be nonzero for zero-mean fields")
    n = abs(k)
    if n > kernel.M:
        return 0.0
    return float(-np.pi * Gamma * np.sign(k) * kernel.coefficients[n - 1])
