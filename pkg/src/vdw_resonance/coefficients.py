"""Model coefficients of the resonant acoustics equation for a van der Waals gas.

The gas enters the evolution model only through two dimensionless numbers,
``delta = R/c_v`` and the excluded volume ``b``. Everything downstream uses the
four derived constants collected in :class:`ModelCoefficients`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import ParameterDomainError

DELTA_MAX = 2.0 / 3.0


@dataclass(frozen=True)
class GasParameters:
    """Physical inputs: ``delta`` in (0, 2/3] and ``b`` in [0, 1).

    ``allow_out_of_range`` relaxes the ``delta`` bound (a warning is emitted
    instead of an error). The bound on ``b`` is never relaxed because every
    coefficient carries a power of ``1 - b`` in the denominator.
    """

    delta: float = 0.4
    b: float = 0.0
    allow_out_of_range: bool = False

    def __post_init__(self):
        if not math.isfinite(self.b) or not 0.0 <= self.b < 1.0:
            raise ParameterDomainError("b", self.b, "require 0 <= b < 1")
        if not math.isfinite(self.delta) or self.delta <= 0.0:
            raise ParameterDomainError("delta", self.delta, "require delta > 0")
        if self.delta > DELTA_MAX:
            if not self.allow_out_of_range:
                raise ParameterDomainError("delta", self.delta, "require 0 < delta <= 2/3")
            warnings.warn(
                f"delta={self.delta} lies outside (0, 2/3]; continuing on request",
                RuntimeWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class ModelCoefficients:
    """Sound speed ``c0``, nonlinearity ``G``, self-interaction ``Lambda``
    and resonant coupling ``Gamma``."""

    c0: float
    G: float
    Lambda: float
    Gamma: float

    @property
    def coupling_ratio(self) -> float:
        """``Gamma / Lambda``; sets the amplitude of every traveling wave."""
        return self.Gamma / self.Lambda


def compute_coefficients(params: GasParameters) -> ModelCoefficients:
    delta, b = params.delta, params.b
    one_minus_b = 1.0 - b
    c0 = math.sqrt((1.0 + delta) / one_minus_b)
    G = (delta + 2.0) / (2.0 * one_minus_b)
    Gamma = (1.0 + delta) ** 1.5 / (4.0 * one_minus_b**1.5)
    return ModelCoefficients(c0=c0, G=G, Lambda=c0 * G, Gamma=Gamma)


def characteristic_speeds(coeffs: ModelCoefficients) -> tuple[float, float, float]:
    """Equilibrium characteristic speeds: left acoustic, entropy, right acoustic."""
    return (-coeffs.c0, 0.0, coeffs.c0)
