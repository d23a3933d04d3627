"""Observables for the evolutionary stages: energy, shocks, corners, attractors.

Shocks and corners are told apart by how first and second differences scale
with the mesh width. Across a captured shock ``|delta sigma|`` stays O(1) as
``dx -> 0``; across a corner (slope jump, continuous values) the first
difference is O(dx) but the second difference is O(dx), i.e. ``sigma''``
blows up like ``1/dx``. Smooth profiles have O(dx) and O(dx^2) respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from .coefficients import ModelCoefficients
from .errors import NoRecurrenceError
from .field import PeriodicField, TWO_PI, grid
from .travwave import make_traveling_wave


@dataclass(frozen=True)
class DiagnosticsConfig:
    c_shock: float = 0.5
    c_corner: float = 1.0


DEFAULT_DIAGNOSTICS = DiagnosticsConfig()


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    energy: float
    mean: float
    tv: float
    max_gradient: float
    shock_flag: bool
    corner_flag: bool


def total_variation(values: np.ndarray) -> float:
    return float(np.sum(np.abs(np.roll(values, -1) - values)))


def energy(values: np.ndarray, dx: float) -> float:
    return float(np.sum(values * values) * dx)


def measure_array(values: np.ndarray, t: float = 0.0, config: DiagnosticsConfig = DEFAULT_DIAGNOSTICS) -> DiagnosticsRecord:
    N = values.size
    dx = TWO_PI / N
    jumps = np.roll(values, -1) - values
    max_gradient = float(np.max(np.abs(jumps))) / dx
    shock = max_gradient > config.c_shock / dx
    curvature = float(np.max(np.abs(jumps - np.roll(jumps, 1)))) / dx**2
    corner = (not shock) and curvature > config.c_corner / math.sqrt(dx)
    return DiagnosticsRecord(
        t=float(t),
        energy=energy(values, dx),
        mean=float(np.sum(values) * dx / TWO_PI),
        tv=total_variation(values),
        max_gradient=max_gradient,
        shock_flag=bool(shock),
        corner_flag=bool(corner),
    )


def measure(field: PeriodicField, t: float = 0.0, config: DiagnosticsConfig = DEFAULT_DIAGNOSTICS) -> DiagnosticsRecord:
    """Energy ``sum sigma^2 dx``, mean, total variation and singularity flags.

    ``shock_flag``: some neighbour jump exceeds ``c_shock``
    (``max_gradient > c_shock / dx``).
    ``corner_flag``: no shock, and ``max |delta^2 sigma| / dx^2 > c_corner / sqrt(dx)``.
    """
    return measure_array(field.values, t, config)


@dataclass(frozen=True)
class PeriodEstimate:
    kind: str  # "translation" or "shape"
    period: float
    confidence: float

    def __post_init__(self):
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "confidence", float(self.confidence))


@dataclass(frozen=True)
class AttractorReport:
    best_alpha: float
    best_phi: float
    distance: float
    period_estimates: tuple[PeriodEstimate, ...] = ()

    def summary(self) -> str:
        lines = [
            f"nearest traveling wave: alpha={self.best_alpha:.6f} phi={self.best_phi:.6f}",
            f"L2 distance: {self.distance:.6e}",
        ]
        if not self.period_estimates:
            lines.append("periods: none detected")
        for p in self.period_estimates:
            lines.append(f"{p.kind} period: {p.period:.6f} (confidence {p.confidence:.3f})")
        kinds = {p.kind for p in self.period_estimates}
        if kinds == {"translation", "shape"}:
            lines.append("classification: quasiperiodic (two periods)")
        elif kinds == {"translation"}:
            lines.append("classification: traveling wave (one period)")
        return "\n".join(lines)


def _best_shift(u_hat: np.ndarray, v_hat: np.ndarray, N: int) -> tuple[float, float]:
    """Shift ``d`` maximising ``<u, v(. - d)>`` and that maximal inner product (grid sum).

    Integer-shift maximum from one inverse FFT, refined by a parabola through
    the peak and its neighbours.
    """
    corr = np.fft.irfft(u_hat * np.conj(v_hat), n=N)
    k = int(np.argmax(corr))
    ym, y0, yp = corr[k - 1], corr[k], corr[(k + 1) % N]
    denom = ym - 2.0 * y0 + yp
    frac = 0.5 * (ym - yp) / denom if denom < 0.0 else 0.0
    frac = min(max(frac, -0.5), 0.5)
    peak = y0 - 0.25 * (ym - yp) * frac
    return (k + frac) * TWO_PI / N, float(peak)


class FamilyMatcher:
    """Nearest member of the traveling-wave family to a sampled field.

    Profiles for every ``alpha`` on the search grid are built once; the phase
    is searched over ``phi_grid`` (or by FFT correlation when ``phi_grid`` is
    ``None``) and the best candidate is polished with Nelder-Mead.
    """

    def __init__(self, coeffs: ModelCoefficients, N: int, alpha_grid=None, phi_grid=None):
        self.coeffs = coeffs
        self.N = N
        self.x = grid(N)
        self.dx = TWO_PI / N
        self.alpha_grid = np.linspace(0.0, 1.0, 21) if alpha_grid is None else np.asarray(alpha_grid, float)
        if self.alpha_grid.size == 0:
            raise ValueError("alpha_grid must be nonempty")
        self.phi_grid = None if phi_grid is None else np.asarray(phi_grid, float)
        if self.phi_grid is not None and self.phi_grid.size == 0:
            raise ValueError("phi_grid must be nonempty")
        self._waves = {}
        self._profiles = np.array([self._wave(a).profile(self.x) for a in self.alpha_grid])

    def _wave(self, alpha: float):
        key = round(float(alpha), 14)
        w = self._waves.get(key)
        if w is None:
            w = make_traveling_wave(key, self.coeffs)
            self._waves[key] = w
        return w

    def _distance(self, values: np.ndarray, alpha: float, phi: float) -> float:
        alpha = float(np.clip(alpha, -1.0, 1.0))
        w = self._wave(alpha).profile(self.x + phi)
        return float(np.sqrt(np.sum((values - w) ** 2) * self.dx))

    def coarse(self, values: np.ndarray) -> tuple[float, float, float]:
        """Grid search only: ``(alpha, phi, distance)``."""
        best = (math.inf, 0.0, 0.0)
        norm_u = float(np.sum(values * values))
        if self.phi_grid is None:
            u_hat = np.fft.rfft(values)
            for alpha, prof in zip(self.alpha_grid, self._profiles):
                shift, peak = _best_shift(u_hat, np.fft.rfft(prof), self.N)
                d2 = max(norm_u + float(np.sum(prof * prof)) - 2.0 * peak, 0.0) * self.dx
                # profile(x + phi) = prof(x - shift)
                best = min(best, (math.sqrt(d2), float(alpha), -shift))
        else:
            for alpha in self.alpha_grid:
                w = self._wave(alpha)
                profs = w.profile(self.x[None, :] + self.phi_grid[:, None])
                d = np.sqrt(np.sum((values[None, :] - profs) ** 2, axis=1) * self.dx)
                j = int(np.argmin(d))
                best = min(best, (float(d[j]), float(alpha), float(self.phi_grid[j])))
        dist, alpha, phi = best
        return alpha, float(np.mod(phi, TWO_PI)), dist

    def fit(self, values: np.ndarray, refine: bool = True) -> AttractorReport:
        values = np.asarray(values, float)
        if values.size != self.N:
            raise ValueError(f"field has {values.size} points, matcher built for {self.N}")
        alpha, phi, dist = self.coarse(values)
        if refine and dist > 0.0:
            step = 0.5 * float(np.min(np.diff(np.unique(self.alpha_grid)))) if self.alpha_grid.size > 1 else 0.05
            res = optimize.minimize(
                lambda p: self._distance(values, p[0], p[1]),
                x0=[alpha, phi],
                method="Nelder-Mead",
                options={
                    "xatol": 1e-9,
                    "fatol": 1e-13,
                    "maxiter": 400,
                    "initial_simplex": [[alpha, phi], [alpha + step if alpha < 0.5 else alpha - step, phi], [alpha, phi + 0.05]],
                },
            )
            if res.fun < dist:
                alpha, phi, dist = float(np.clip(res.x[0], -1.0, 1.0)), float(np.mod(res.x[1], TWO_PI)), float(res.fun)
        return AttractorReport(best_alpha=alpha, best_phi=phi, distance=dist)


def distance_to_family(
    field: PeriodicField,
    coeffs: ModelCoefficients,
    alpha_grid: Sequence[float] | None = None,
    phi_grid: Sequence[float] | None = None,
    refine: bool = True,
) -> AttractorReport:
    """L2 distance from ``field`` to the nearest traveling wave ``(alpha, phi)``."""
    matcher = FamilyMatcher(coeffs, field.N, alpha_grid, phi_grid)
    return matcher.fit(field.values, refine=refine)


@dataclass(frozen=True)
class RecurrenceConfig:
    """Thresholds for :func:`estimate_periods`, relative to the RMS field norm.

    A return counts when the recurrence function dips below
    ``threshold * norm``. The shape oscillation is reported only when the
    shift-minimised recurrence rises above ``min_shape_variation * norm``
    somewhere and then falls back by at least half.
    """

    threshold: float = 0.1
    min_shape_variation: float = 0.01
    max_base_times: int = 48


def _local_minima(r: np.ndarray) -> list[int]:
    return [i for i in range(1, r.size - 1) if r[i] <= r[i - 1] and r[i] < r[i + 1]]


def _parabolic_min(r: np.ndarray, i: int, h: float) -> tuple[float, float]:
    ym, y0, yp = r[i - 1], r[i], r[i + 1]
    denom = ym - 2.0 * y0 + yp
    frac = 0.5 * (ym - yp) / denom if denom > 0.0 else 0.0
    frac = min(max(frac, -0.5), 0.5)
    return (i + frac) * h, float(y0 - 0.25 * (ym - yp) * frac)


def _refined_peaks(corr: np.ndarray) -> np.ndarray:
    """Row maxima of periodic correlations, refined by a parabola through the peak."""
    rows = np.arange(corr.shape[0])
    k = np.argmax(corr, axis=1)
    N = corr.shape[1]
    ym, y0, yp = corr[rows, k - 1], corr[rows, k], corr[rows, (k + 1) % N]
    denom = ym - 2.0 * y0 + yp
    safe = np.where(denom < 0.0, denom, -1.0)
    frac = np.clip(np.where(denom < 0.0, 0.5 * (ym - yp) / safe, 0.0), -0.5, 0.5)
    return np.maximum(y0 - 0.25 * (ym - yp) * frac, y0)


def recurrence_functions(snapshots: np.ndarray, max_base_times: int = 48) -> tuple[np.ndarray, np.ndarray]:
    """Mean plain and shift-minimised L2 distances between snapshots ``lag`` apart.

    ``snapshots`` is an ``(n, N)`` array at uniform time spacing. Lags run
    from 0 to ``n // 2``; each is averaged over up to ``max_base_times``
    evenly spread base snapshots.
    """
    n, N = snapshots.shape
    dx = TWO_PI / N
    lags = n // 2
    n_base = n - lags
    base = np.unique(np.linspace(0, n_base - 1, min(max_base_times, n_base)).round().astype(int))
    spectra = np.fft.rfft(snapshots, axis=1)
    sq = np.sum(snapshots * snapshots, axis=1)
    plain = np.zeros(lags + 1)
    shape = np.zeros(lags + 1)
    for lag in range(lags + 1):
        j = base + lag
        inner = np.sum(snapshots[base] * snapshots[j], axis=1)
        plain[lag] = np.mean(np.sqrt(np.maximum(sq[base] + sq[j] - 2.0 * inner, 0.0) * dx))
        corr = np.fft.irfft(spectra[base] * np.conj(spectra[j]), n=N, axis=1)
        peak = _refined_peaks(corr)
        shape[lag] = np.mean(np.sqrt(np.maximum(sq[base] + sq[j] - 2.0 * peak, 0.0) * dx))
    return plain, shape


def estimate_periods(
    record,
    window: tuple[float, float] | None = None,
    config: RecurrenceConfig = RecurrenceConfig(),
) -> list[PeriodEstimate]:
    """Translation and shape-oscillation periods from snapshot recurrences.

    Two recurrence functions are averaged over the window: the plain L2
    distance between ``sigma(., t)`` and ``sigma(., t + tau)``, whose first
    deep minimum is the translation period, and the same distance minimised
    over spatial shifts, which ignores translation and dips at the period of
    the shape oscillation. A steady shape (traveling wave) yields a single
    period. Raises :class:`NoRecurrenceError` when neither function returns
    below the threshold. Snapshots in the window must be evenly spaced.
    """
    times = np.asarray(record.times, float)
    lo, hi = (times[0], times[-1]) if window is None else window
    sel = np.where((times >= lo - 1e-12) & (times <= hi + 1e-12))[0]
    if sel.size < 10:
        raise ValueError(f"window {lo}..{hi} holds {sel.size} snapshots; need at least 10")
    t = times[sel]
    h = float(np.mean(np.diff(t)))
    if np.max(np.abs(np.diff(t) - h)) > 1e-6 * max(h, 1.0):
        raise ValueError("snapshots in the window are not evenly spaced")
    snaps = np.array([record.fields[i].values for i in sel])
    dx = TWO_PI / snaps.shape[1]
    norm = float(np.mean(np.sqrt(np.sum(snaps * snaps, axis=1) * dx)))
    if norm == 0.0:
        raise NoRecurrenceError("field is identically zero; no recurrence to measure")
    plain, shape = recurrence_functions(snaps, config.max_base_times)
    limit = config.threshold * norm
    out: list[PeriodEstimate] = []

    for i in _local_minima(plain):
        if plain[i] < limit and plain[i] <= 0.5 * float(np.max(plain[: i + 1])):
            tau, r = _parabolic_min(plain, i, h)
            out.append(PeriodEstimate("translation", tau, 1.0 - r / float(np.max(plain[: i + 1]))))
            break

    if float(np.max(shape)) > config.min_shape_variation * norm:
        for i in _local_minima(shape):
            peak = float(np.max(shape[: i + 1]))
            if shape[i] < limit and peak > config.min_shape_variation * norm and shape[i] <= 0.5 * peak:
                tau, r = _parabolic_min(shape, i, h)
                out.append(PeriodEstimate("shape", tau, 1.0 - r / peak))
                break

    if not out:
        raise NoRecurrenceError(f"no return below {config.threshold:g} x RMS norm in window {lo}..{hi}")
    return out


def attractor_report(
    record,
    coeffs: ModelCoefficients,
    window: tuple[float, float] | None = None,
    alpha_grid=None,
    phi_grid=None,
    recurrence: RecurrenceConfig = RecurrenceConfig(),
) -> AttractorReport:
    """Family fit of the last snapshot plus the period estimates of the window."""
    fit = distance_to_family(record.fields[-1], coeffs, alpha_grid, phi_grid)
    try:
        periods = tuple(estimate_periods(record, window, recurrence))
    except NoRecurrenceError:
        periods = ()
    return AttractorReport(fit.best_alpha, fit.best_phi, fit.distance, periods)
