"""Resonant acoustic waves in a dense (van der Waals) gas in a closed duct.

The package reduces the resonant interaction of the two acoustic families to a
nonlinear integro-differential equation, exposes its exact traveling-wave
family, and integrates it numerically with a second-order shock-capturing
scheme.
"""

__version__ = "0.1.0"

from .coefficients import GasParameters, ModelCoefficients, characteristic_speeds, compute_coefficients
from .diagnostics import (
    AttractorReport,
    DiagnosticsConfig,
    DiagnosticsRecord,
    FamilyMatcher,
    PeriodEstimate,
    RecurrenceConfig,
    attractor_report,
    distance_to_family,
    energy,
    estimate_periods,
    measure,
    total_variation,
)
from .errors import (
    CFLViolationError,
    ConfigError,
    GridTooCoarseError,
    NoRecurrenceError,
    NonFiniteStateError,
    ParameterDomainError,
    ResonanceError,
)
from .field import PeriodicField, grid
from .kernel import SINGLE_MODE, SineKernel, convolve, convolve_trapezoid, dispersion_omega
from .solver import EvolutionRecord, PairEvolutionRecord, SolverConfig, evolve, evolve_pair, strang_step
from .travwave import (
    TravelingWave,
    TravelingWaveParams,
    amplitude_of_alpha,
    gamma_of_alpha,
    make_traveling_wave,
    pair_traveling_waves,
    sample_traveling_wave,
    speed_of_alpha,
)

__all__ = [name for name in dir() if not name.startswith("_")]
