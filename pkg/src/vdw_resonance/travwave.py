"""The one-parameter traveling-wave family of the single equation and the pair system.

With ``K(x) = sin x`` the single equation admits exact solutions

    sigma(x, t) = s/Lambda + (Gamma/Lambda) * gamma * sqrt(1 + alpha cos(x - s t + phi))

for ``|alpha| <= 1``. Both ``gamma`` and the speed ``s`` are fixed by one-dimensional
integrals over a period, evaluated here with adaptive Gauss-Kronrod quadrature
(QUADPACK via scipy). Integrands are symmetric about ``x = pi`` so every
integral is taken as twice the integral over ``[0, pi]``; this also places the
``|alpha| = 1`` kink on a panel boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .coefficients import ModelCoefficients
from .field import PeriodicField, grid

QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-13


def _half_period_integral(f) -> float:
    value, _ = integrate.quad(f, 0.0, math.pi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200)
    return 2.0 * value


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not abs(alpha) <= 1.0:
        raise ValueError(f"alpha={alpha!r} outside [-1, 1]")
    return alpha


def _radicand(alpha: float, c: float) -> float:
    # clipped so that |alpha| = 1 does not produce sqrt(-1e-17) at x = pi
    return max(1.0 + alpha * c, 0.0)


def quad_P(alpha: float) -> float:
    """``P(alpha) = int_0^{2pi} cos x sqrt(1 + alpha cos x) dx`` (odd in alpha)."""
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        return 0.0
    return _half_period_integral(lambda x: math.cos(x) * math.sqrt(_radicand(alpha, math.cos(x))))


def quad_Q(alpha: float) -> float:
    """``Q(alpha) = int_0^{2pi} sqrt(1 + alpha cos x) dx`` (even in alpha)."""
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        return 2.0 * math.pi
    return _half_period_integral(lambda x: math.sqrt(_radicand(alpha, math.cos(x))))


def gamma_of_alpha(alpha: float) -> float:
    """``gamma(alpha) = 2 P(alpha) / alpha``, with ``gamma(0) = pi``.

    Since ``int cos x dx = 0``, ``P(alpha) = alpha int cos^2 x / (1 + sqrt(1 + alpha cos x)) dx``,
    which removes the 0/0 at the origin and the cancellation near it.
    """
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        return math.pi
    return 2.0 * _half_period_integral(
        lambda x: math.cos(x) ** 2 / (1.0 + math.sqrt(_radicand(alpha, math.cos(x))))
    )


def speed_of_alpha(alpha: float, Gamma: float) -> float:
    """Propagation speed ``s = -(Gamma gamma / 2 pi) Q(alpha)`` (negative for Gamma > 0)."""
    return -Gamma * gamma_of_alpha(alpha) * quad_Q(alpha) / (2.0 * math.pi)


def amplitude_of_alpha(alpha: float, coeffs: ModelCoefficients) -> float:
    """Half the peak-to-trough height of the wave."""
    a = abs(_check_alpha(alpha))
    return 0.5 * coeffs.coupling_ratio * gamma_of_alpha(a) * (math.sqrt(1.0 + a) - math.sqrt(1.0 - a))


def monotonicity_function(alpha: float) -> float:
    """``alpha P(alpha) / Q(alpha)^3``, increasing on ``alpha >= 0``."""
    return alpha * quad_P(alpha) / quad_Q(alpha) ** 3


@dataclass(frozen=True)
class TravelingWaveParams:
    alpha: float
    phi: float = 0.0
    sign: int = 1

    def __post_init__(self):
        _check_alpha(self.alpha)
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be -1 or +1, got {self.sign!r}")


@dataclass(frozen=True)
class TravelingWave:
    params: TravelingWaveParams
    gamma: float
    s: float
    A: float
    Lambda: float
    Gamma: float

    @property
    def alpha(self) -> float:
        return self.params.alpha

    @property
    def period(self) -> float:
        """Time to translate one spatial period, ``2 pi / |s|``."""
        return 2.0 * math.pi / abs(self.s) if self.s != 0.0 else math.inf

    def profile(self, x, t: float = 0.0):
        """Evaluate the wave at arbitrary phases ``x`` and time ``t``."""
        x = np.asarray(x, dtype=float)
        psi = x - self.s * t + self.params.phi
        root = np.sqrt(np.maximum(1.0 + self.alpha * np.cos(psi), 0.0))
        return self.s / self.Lambda + (self.Gamma / self.Lambda) * self.gamma * root


def make_traveling_wave(alpha: float, coeffs: ModelCoefficients, phi: float = 0.0) -> TravelingWave:
    params = TravelingWaveParams(alpha=alpha, phi=phi, sign=1)
    gamma = gamma_of_alpha(alpha)
    s = -coeffs.Gamma * gamma * quad_Q(alpha) / (2.0 * math.pi)
    return TravelingWave(
        params=params,
        gamma=gamma,
        s=s,
        A=amplitude_of_alpha(alpha, coeffs),
        Lambda=coeffs.Lambda,
        Gamma=coeffs.Gamma,
    )


def sample_traveling_wave(tw: TravelingWave, coeffs: ModelCoefficients, N: int, t: float = 0.0) -> PeriodicField:
    """Point samples of the exact wave on the uniform ``N``-point grid.

    The samples are not renormalised: for ``|alpha| < 1`` the discrete mean
    vanishes to rounding, at ``|alpha| = 1`` the kink leaves an ``O(dx^2)`` mean.
    """
    if N < 8:
        raise ValueError(f"N={N} too small; need N >= 8")
    if tw.params.sign != 1:
        raise ValueError("the single equation only carries the sign=+1 branch")
    if (tw.Lambda, tw.Gamma) != (coeffs.Lambda, coeffs.Gamma):
        tw = make_traveling_wave(tw.alpha, coeffs, tw.params.phi)
    return PeriodicField(tw.profile(grid(N), t))


def pair_traveling_waves(
    alpha: float,
    sign: int,
    coeffs: ModelCoefficients,
    N: int,
    t: float = 0.0,
    phi: float = 0.0,
) -> tuple[PeriodicField, PeriodicField]:
    """Traveling-wave pair ``(u1, u2)`` for the symmetric two-field system.

    Both members travel at the common speed ``s = -sign Gamma gamma Q(alpha) / 2 pi``.
    ``u1`` and ``u2`` are the left- and right-going amplitudes written in a
    common phase (see :func:`vdw_resonance.solver.evolve_pair` for the mapping
    onto the duct amplitudes ``a1(theta) = u1(-theta)``, ``a3 = u2``).
    """
    alpha = _check_alpha(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("pair traveling waves take alpha in [0, 1]; use sign to pick the branch")
    if sign not in (-1, 1):
        raise ValueError(f"sign must be -1 or +1, got {sign!r}")
    gamma = gamma_of_alpha(alpha)
    s = -sign * coeffs.Gamma * gamma * quad_Q(alpha) / (2.0 * math.pi)
    psi = grid(N) - s * t + phi
    scale = sign * coeffs.coupling_ratio * gamma
    u1 = scale * np.sqrt(np.maximum(1.0 + alpha * np.cos(psi), 0.0)) + s / coeffs.Lambda
    u2 = scale * np.sqrt(np.maximum(1.0 + sign * alpha * np.cos(psi), 0.0)) + s / coeffs.Lambda
    return PeriodicField(u1), PeriodicField(u2)


def pair_speed(alpha: float, sign: int, Gamma: float) -> float:
    return -sign * Gamma * gamma_of_alpha(alpha) * quad_Q(alpha) / (2.0 * math.pi)
