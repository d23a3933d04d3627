"""Split-step integrator for the integro-differential Burgers equation.

The evolution ``sigma_t + Lambda (sigma^2/2)_x + Gamma K*sigma = 0`` is split into
a Burgers part, advanced with a second-order Godunov scheme (UNO slopes,
MUSCL-Hancock predictor, exact Riemann fluxes), and a linear convolution part,
advanced with the explicit midpoint rule. The two are composed symmetrically:
half a convolution step, a full Burgers step, half a convolution step.

Grid nodes ``x_i = 2 pi i / N`` are treated as cell centres of width ``dx``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from dataclasses import field as dc_field
from typing import Sequence

import numpy as np

from .coefficients import ModelCoefficients
from .errors import CFLViolationError, NonFiniteStateError, ParameterDomainError
from .field import PeriodicField
from .kernel import SineKernel, check_resolution, convolve_array

log = logging.getLogger(__name__)

# slack on the CFL check so that a step sized exactly at the bound passes
_CFL_SLACK = 1e-12
_EPS_SPEED = 1e-12


def minmod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Smaller-magnitude argument when signs agree, else zero; ties pick ``a``."""
    return np.where(a * b > 0.0, np.where(np.abs(a) <= np.abs(b), a, b), 0.0)


def uno_slopes(u: np.ndarray) -> np.ndarray:
    """Second-order UNO cell slopes (undivided) on a periodic grid.

    Each one-sided difference is corrected by half the minmod of the adjacent
    second differences, and the two corrected candidates are combined with
    minmod. Near smooth extrema the corrected differences agree in sign, so
    the slope is not clipped to zero there.
    """
    d = np.roll(u, -1) - u  # u_{j+1} - u_j
    dm = np.roll(d, 1)  # u_j - u_{j-1}
    D = d - dm  # u_{j+1} - 2 u_j + u_{j-1}
    mD_right = minmod(D, np.roll(D, -1))
    mD_left = np.roll(mD_right, 1)
    return minmod(d - 0.5 * mD_right, dm + 0.5 * mD_left)


def limited_slopes(u: np.ndarray) -> np.ndarray:
    """UNO slopes capped by the TVD bound ``|s| <= 2 min(|d-|, |d+|)``.

    The cap zeroes the slope at discrete extrema, which keeps the total
    variation of the Burgers step from growing at corners and smooth peaks.
    """
    s = uno_slopes(u)
    d = np.roll(u, -1) - u
    dm = np.roll(d, 1)
    cap = np.where(d * dm > 0.0, 2.0 * np.minimum(np.abs(d), np.abs(dm)), 0.0)
    return np.sign(s) * np.minimum(np.abs(s), cap)


def godunov_flux(uL: np.ndarray, uR: np.ndarray, c: float) -> np.ndarray:
    """Exact Riemann flux for ``f(u) = c u^2 / 2`` (either sign of ``c``).

    For ``c > 0`` the flux is convex: ``uL > uR`` is a shock moving at the
    Rankine-Hugoniot speed ``c (uL + uR) / 2``, otherwise a rarefaction whose
    interface state is the sonic point ``u = 0`` when the fan straddles it.
    Both cases are the classical ``min``/``max`` characterisation of the
    Godunov flux, which also covers the concave case ``c < 0``.
    """
    fL = 0.5 * c * uL * uL
    fR = 0.5 * c * uR * uR
    straddles = uL * uR < 0.0
    if c >= 0.0:
        rarefaction = np.where(straddles, 0.0, np.minimum(fL, fR))
        shock = np.maximum(fL, fR)
    else:
        rarefaction = np.minimum(fL, fR)
        shock = np.where(straddles, 0.0, np.maximum(fL, fR))
    return np.where(uL <= uR, rarefaction, shock)


def max_stable_dt(values: np.ndarray, Lambda: float, dx: float, cfl: float) -> float:
    return cfl * dx / (abs(Lambda) * float(np.max(np.abs(values))) + _EPS_SPEED)


def _burgers(u: np.ndarray, c: float, dt: float, dx: float) -> np.ndarray:
    if c == 0.0 or dt == 0.0:
        return u.copy()
    courant = abs(c) * float(np.max(np.abs(u))) * dt / dx
    if courant > 1.0 + _CFL_SLACK:
        raise CFLViolationError(f"Courant number {courant:.4g} exceeds 1 (dt={dt:.4g})")
    slope = limited_slopes(u)
    lo = u - 0.5 * slope
    hi = u + 0.5 * slope
    # MUSCL-Hancock half-step predictor
    corr = 0.25 * c * (dt / dx) * (hi * hi - lo * lo)
    lo = lo - corr
    hi = hi - corr
    F = godunov_flux(hi, np.roll(lo, -1), c)  # flux through face j+1/2
    return u - (dt / dx) * (F - np.roll(F, 1))


def burgers_substep(field: PeriodicField, Lambda: float, dt: float) -> PeriodicField:
    """One conservative step of ``sigma_t + Lambda (sigma^2/2)_x = 0``.

    Raises :class:`CFLViolationError` when ``dt Lambda max|sigma| / dx > 1``.
    """
    return PeriodicField(_burgers(field.values, Lambda, dt, field.dx))


def _rk2(u: np.ndarray, kernel: SineKernel, Gamma: float, dt: float) -> np.ndarray:
    if Gamma == 0.0 or dt == 0.0:
        return u.copy()
    half = u - 0.5 * dt * Gamma * convolve_array(kernel, u)
    return u - dt * Gamma * convolve_array(kernel, half)


def convolution_substep(field: PeriodicField, kernel: SineKernel, Gamma: float, dt: float) -> PeriodicField:
    """Explicit midpoint step of ``sigma_t = -Gamma K*sigma``."""
    check_resolution(kernel, field.N)
    return PeriodicField(_rk2(field.values, kernel, Gamma, dt))


def _strang(u: np.ndarray, kernel: SineKernel, Lambda: float, Gamma: float, dt: float, dx: float) -> np.ndarray:
    u = _rk2(u, kernel, Gamma, 0.5 * dt)
    u = _burgers(u, Lambda, dt, dx)
    return _rk2(u, kernel, Gamma, 0.5 * dt)


def strang_step(field: PeriodicField, kernel: SineKernel, coeffs: ModelCoefficients, dt: float) -> PeriodicField:
    """Convolution half step, Burgers full step, convolution half step."""
    check_resolution(kernel, field.N)
    return PeriodicField(_strang(field.values, kernel, coeffs.Lambda, coeffs.Gamma, dt, field.dx))


@dataclass(frozen=True)
class SolverConfig:
    """Run controls for :func:`evolve` and :func:`evolve_pair`.

    Snapshots are taken at ``snapshot_times`` when given, else every
    ``snapshot_interval`` time units, else every ``snapshot_stride`` steps;
    ``t = 0`` and ``t_end`` are always included. Steps are shortened so that
    requested snapshot times are hit exactly.
    """

    N: int = 1024
    cfl: float = 0.45
    t_end: float = 1.0
    snapshot_stride: int | None = None
    snapshot_interval: float | None = None
    snapshot_times: tuple[float, ...] | None = None
    mode: str = "single"
    dt_max: float | None = None
    trace_steps: bool = False

    def __post_init__(self):
        if self.N < 16:
            raise ParameterDomainError("N", self.N, "require N >= 16")
        if not 0.0 < self.cfl <= 1.0:
            raise ParameterDomainError("cfl", self.cfl, "require 0 < cfl <= 1")
        if not self.t_end >= 0.0 or not math.isfinite(self.t_end):
            raise ParameterDomainError("t_end", self.t_end, "require a finite t_end >= 0")
        if self.mode not in ("single", "pair"):
            raise ParameterDomainError("mode", self.mode, "expected 'single' or 'pair'")
        if self.snapshot_stride is not None and self.snapshot_stride < 1:
            raise ParameterDomainError("snapshot_stride", self.snapshot_stride, "require >= 1")
        if self.snapshot_interval is not None and not self.snapshot_interval > 0.0:
            raise ParameterDomainError("snapshot_interval", self.snapshot_interval, "require > 0")
        if self.snapshot_times is not None:
            times = tuple(sorted(float(t) for t in self.snapshot_times))
            if times and (times[0] < 0.0 or times[-1] > self.t_end):
                raise ParameterDomainError("snapshot_times", self.snapshot_times, "times must lie in [0, t_end]")
            object.__setattr__(self, "snapshot_times", times)
        if self.N & (self.N - 1):
            log.info("N=%d is not a power of two", self.N)

    def target_times(self) -> list[float]:
        """Snapshot times fixed in advance (empty when the cadence is by steps)."""
        if self.snapshot_times is not None:
            times = list(self.snapshot_times)
        elif self.snapshot_interval is not None:
            n = int(math.floor(self.t_end / self.snapshot_interval + 1e-9))
            times = [k * self.snapshot_interval for k in range(n + 1)]
        else:
            times = []
        times = sorted(set([0.0, *times, self.t_end]))
        # merge times closer than rounding noise
        merged: list[float] = []
        for t in times:
            if not merged or t - merged[-1] > 1e-12 * max(1.0, self.t_end):
                merged.append(t)
        merged[-1] = max(merged[-1], self.t_end)
        return merged


@dataclass
class StepTrace:
    """Per-step history of scalar observables (``SolverConfig.trace_steps``)."""

    t: list[float] = dc_field(default_factory=list)
    energy: list[float] = dc_field(default_factory=list)
    mean: list[float] = dc_field(default_factory=list)
    max_jump: list[float] = dc_field(default_factory=list)
    tv_in: list[float] = dc_field(default_factory=list)
    tv_out: list[float] = dc_field(default_factory=list)


@dataclass
class EvolutionRecord:
    times: list[float]
    fields: list[PeriodicField]
    diagnostics: list = dc_field(default_factory=list)
    steps: int = 0
    trace: StepTrace | None = None

    def __len__(self) -> int:
        return len(self.times)

    def final(self) -> PeriodicField:
        return self.fields[-1]

    def energies(self) -> np.ndarray:
        return np.array([d.energy for d in self.diagnostics])

    def shock_flags(self) -> np.ndarray:
        return np.array([d.shock_flag for d in self.diagnostics], dtype=bool)

    def corner_flags(self) -> np.ndarray:
        return np.array([d.corner_flag for d in self.diagnostics], dtype=bool)


def convolution_dt_bound(kernel: SineKernel, Gamma: float) -> float:
    scale = abs(Gamma) * math.pi * kernel.max_abs_coefficient * kernel.M
    return 0.5 / scale if scale > 0.0 else math.inf


def _time_loop(config, state, advance, speed, dx, snapshot, trace_hook=None):
    """Drive ``advance(state, dt) -> state`` from 0 to ``t_end``.

    ``speed(state)`` bounds the characteristic speed for the CFL step;
    ``snapshot(t, state)`` is called at every output time.
    """
    targets = config.target_times()
    dt_cap = config.dt_max if config.dt_max is not None else math.inf
    t = 0.0
    steps = 0
    snapshot(t, state)
    next_idx = 1 if targets and targets[0] == 0.0 else 0
    stride = config.snapshot_stride if (config.snapshot_times is None and config.snapshot_interval is None) else None
    while t < config.t_end:
        dt = min(config.cfl * dx / (speed(state) + _EPS_SPEED), dt_cap)
        target = targets[next_idx] if next_idx < len(targets) else config.t_end
        landing = t + dt >= target - 1e-12 * max(1.0, target)
        if landing:
            dt = target - t
        state = advance(state, dt)
        steps += 1
        t = target if landing else t + dt
        if trace_hook is not None:
            trace_hook(t, state)
        if not all(np.all(np.isfinite(s)) for s in state):
            raise NonFiniteStateError(t)
        if landing:
            next_idx += 1
            snapshot(t, state)
        elif stride is not None and steps % stride == 0:
            snapshot(t, state)
    return steps


def evolve(
    config: SolverConfig,
    initial: PeriodicField,
    kernel: SineKernel,
    coeffs: ModelCoefficients,
    diagnostics_config=None,
) -> EvolutionRecord:
    """Integrate the single equation from ``initial`` to ``config.t_end``.

    Time steps follow ``dt = cfl dx / (Lambda max|sigma| + eps)``, further
    limited by :func:`convolution_dt_bound` and ``config.dt_max``.
    """
    from .diagnostics import DEFAULT_DIAGNOSTICS, measure_array, total_variation

    if config.mode != "single":
        raise ParameterDomainError("mode", config.mode, "evolve integrates the single equation")
    if initial.N != config.N:
        raise ParameterDomainError("N", initial.N, f"initial field has {initial.N} points, config says {config.N}")
    check_resolution(kernel, config.N)
    dcfg = diagnostics_config or DEFAULT_DIAGNOSTICS
    Lambda, Gamma, dx = coeffs.Lambda, coeffs.Gamma, initial.dx
    conv_cap = convolution_dt_bound(kernel, Gamma)
    cap = min(conv_cap, config.dt_max) if config.dt_max is not None else conv_cap
    config_run = replace(config, dt_max=cap if math.isfinite(cap) else None)

    record = EvolutionRecord(times=[], fields=[], trace=StepTrace() if config.trace_steps else None)

    def snapshot(t, state):
        f = PeriodicField(state[0])
        record.times.append(t)
        record.fields.append(f)
        record.diagnostics.append(measure_array(f.values, t, dcfg))

    if config.trace_steps:
        tr = record.trace

        def advance(state, dt):
            u = _rk2(state[0], kernel, Gamma, 0.5 * dt)
            v = _burgers(u, Lambda, dt, dx)
            tr.tv_in.append(total_variation(u))
            tr.tv_out.append(total_variation(v))
            return (_rk2(v, kernel, Gamma, 0.5 * dt),)

        def hook(t, state):
            u = state[0]
            tr.t.append(t)
            tr.energy.append(float(np.sum(u * u) * dx))
            tr.mean.append(float(u.mean()))
            tr.max_jump.append(float(np.max(np.abs(np.roll(u, -1) - u))))
    else:
        hook = None

        def advance(state, dt):
            return (_strang(state[0], kernel, Lambda, Gamma, dt, dx),)

    record.steps = _time_loop(
        config_run,
        (np.array(initial.values),),
        advance,
        lambda state: abs(Lambda) * float(np.max(np.abs(state[0]))),
        dx,
        snapshot,
        hook,
    )
    return record


def _reflect(u: np.ndarray) -> np.ndarray:
    return np.roll(u[::-1], 1)


def _pair_rhs(a1: np.ndarray, a3: np.ndarray, kernel: SineKernel, Gamma: float):
    # int K(theta + xi) a(xi) dxi is the ordinary convolution of K with a(-xi)
    return (
        Gamma * convolve_array(kernel, _reflect(a3)),
        -Gamma * convolve_array(kernel, _reflect(a1)),
    )


def _pair_rk2(a1, a3, kernel, Gamma, dt):
    if Gamma == 0.0 or dt == 0.0:
        return a1.copy(), a3.copy()
    k1, k3 = _pair_rhs(a1, a3, kernel, Gamma)
    m1, m3 = a1 + 0.5 * dt * k1, a3 + 0.5 * dt * k3
    k1, k3 = _pair_rhs(m1, m3, kernel, Gamma)
    return a1 + dt * k1, a3 + dt * k3


def _pair_strang(a1, a3, kernel, Lambda, Gamma, dt, dx):
    a1, a3 = _pair_rk2(a1, a3, kernel, Gamma, 0.5 * dt)
    a1 = _burgers(a1, -Lambda, dt, dx)
    a3 = _burgers(a3, Lambda, dt, dx)
    return _pair_rk2(a1, a3, kernel, Gamma, 0.5 * dt)


def pair_strang_step(
    fields: tuple[PeriodicField, PeriodicField],
    kernel: SineKernel,
    coeffs: ModelCoefficients,
    dt: float,
) -> tuple[PeriodicField, PeriodicField]:
    a1, a3 = fields
    check_resolution(kernel, a1.N)
    n1, n3 = _pair_strang(a1.values, a3.values, kernel, coeffs.Lambda, coeffs.Gamma, dt, a1.dx)
    return PeriodicField(n1), PeriodicField(n3)


def pair_from_common_phase(u1: PeriodicField, u2: PeriodicField) -> tuple[PeriodicField, PeriodicField]:
    """Map a common-phase pair ``(u1, u2)`` to duct amplitudes ``(a1, a3)``.

    ``a1(theta) = u1(-theta)`` and ``a3 = u2``; in these variables the pair
    system becomes the symmetric form in which both members share one speed.
    """
    return u1.reflected(), u2


@dataclass
class PairEvolutionRecord:
    times: list[float]
    a1: list[PeriodicField]
    a3: list[PeriodicField]
    diagnostics_a1: list = dc_field(default_factory=list)
    diagnostics_a3: list = dc_field(default_factory=list)
    steps: int = 0

    def __len__(self) -> int:
        return len(self.times)


def evolve_pair(
    config: SolverConfig,
    initial: tuple[PeriodicField, PeriodicField],
    kernel: SineKernel,
    coeffs: ModelCoefficients,
    diagnostics_config=None,
) -> PairEvolutionRecord:
    """Integrate the two-amplitude system for the left/right acoustic waves.

    ``a1_t - Lambda a1 a1_theta - Gamma int K(theta + xi) a3(xi) dxi = 0``
    ``a3_t + Lambda a3 a3_theta + Gamma int K(theta + xi) a1(xi) dxi = 0``

    Same splitting as :func:`evolve`; the two convolution updates are
    advanced together by one midpoint step. Mirror data ``a1(theta) = a3(-theta)``
    reproduces the single equation with ``sigma = a3``.
    """
    from .diagnostics import DEFAULT_DIAGNOSTICS, measure_array

    a1, a3 = initial
    if a1.N != a3.N:
        raise ParameterDomainError("N", (a1.N, a3.N), "both amplitudes must share one grid")
    if a1.N != config.N:
        raise ParameterDomainError("N", a1.N, f"initial fields have {a1.N} points, config says {config.N}")
    check_resolution(kernel, config.N)
    dcfg = diagnostics_config or DEFAULT_DIAGNOSTICS
    Lambda, Gamma, dx = coeffs.Lambda, coeffs.Gamma, a1.dx
    cap = convolution_dt_bound(kernel, Gamma)
    if config.dt_max is not None:
        cap = min(cap, config.dt_max)
    config_run = replace(config, dt_max=cap if math.isfinite(cap) else None)

    record = PairEvolutionRecord(times=[], a1=[], a3=[])

    def snapshot(t, state):
        f1, f3 = PeriodicField(state[0]), PeriodicField(state[1])
        record.times.append(t)
        record.a1.append(f1)
        record.a3.append(f3)
        record.diagnostics_a1.append(measure_array(f1.values, t, dcfg))
        record.diagnostics_a3.append(measure_array(f3.values, t, dcfg))

    record.steps = _time_loop(
        config_run,
        (np.array(a1.values), np.array(a3.values)),
        lambda state, dt: _pair_strang(state[0], state[1], kernel, Lambda, Gamma, dt, dx),
        lambda state: abs(Lambda) * max(float(np.max(np.abs(state[0]))), float(np.max(np.abs(state[1])))),
        dx,
        snapshot,
    )
    return record
