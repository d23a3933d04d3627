"""Run configuration: an INI-style file (sections of ``key = value`` lines).

Example::

    [run]
    scenario = evolve
    output_dir = out/fig3

    [gas]
    delta = 0.4
    b = 0.02

    [solver]
    N = 1024
    t_end = 80
    snapshot_times = 0, 0.15, 0.35, 0.8, 2.5, 5, 15, 50, 80

    [initial]
    # (harmonic, cosine coeff, sine coeff, phase): c cos(n x + p) + s sin(n x + p)
    harmonics = (1, 0, 2, 0); (2, 3, 0, -2)

Every key is optional; see ``README.md`` for the full list and defaults.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .coefficients import GasParameters
from .diagnostics import DiagnosticsConfig, RecurrenceConfig
from .errors import ConfigError, ParameterDomainError
from .field import PeriodicField, grid
from .kernel import SineKernel
from .solver import SolverConfig

SCENARIOS = ("coeffs", "dispersion", "travwave", "evolve", "evolve-pair", "attractor", "sweep")

STAGES_INITIAL = ((1, 0.0, 2.0, 0.0), (2, 3.0, 0.0, -2.0))
STAGES_TIMES = (0.0, 0.15, 0.35, 0.8, 2.5, 5.0, 15.0, 50.0, 80.0)
ATTRACTOR_INITIAL = ((1, 0.0, 1.5, 0.0),)

_KNOWN_KEYS = {
    "run": {"scenario", "output_dir"},
    "gas": {"delta", "b", "allow_out_of_range"},
    "kernel": {"coefficients"},
    "solver": {"n", "cfl", "t_end", "snapshot_stride", "snapshot_interval", "snapshot_times", "mode", "dt_max"},
    "initial": {"harmonics", "amplitude_scale"},
    "diagnostics": {"c_shock", "c_corner"},
    "dispersion": {"k_max"},
    "travwave": {"alphas", "profile_alphas", "b_values"},
    "attractor": {"window_start", "window_end", "threshold", "min_shape_variation", "alpha_grid_size"},
    "sweep": {"b_values", "evolve", "stages_t_end", "attractor_t_end", "attractor_interval"},
}


@dataclass(frozen=True)
class Harmonic:
    n: int
    cos_coeff: float
    sin_coeff: float
    phase: float = 0.0

    def __call__(self, x):
        arg = self.n * x + self.phase
        return self.cos_coeff * np.cos(arg) + self.sin_coeff * np.sin(arg)


@dataclass(frozen=True)
class InitialCondition:
    """Finite Fourier series without a constant term (zero mean by construction)."""

    harmonics: tuple[Harmonic, ...]
    amplitude_scale: float = 1.0

    @classmethod
    def from_tuples(cls, terms, amplitude_scale: float = 1.0) -> "InitialCondition":
        return cls(tuple(Harmonic(int(n), float(c), float(s), float(p)) for n, c, s, p in terms), amplitude_scale)

    def __call__(self, x):
        x = np.asarray(x, float)
        out = np.zeros_like(x)
        for h in self.harmonics:
            out = out + h(x)
        return self.amplitude_scale * out

    def sample(self, N: int) -> PeriodicField:
        return PeriodicField(self(grid(N)))

    def describe(self) -> str:
        terms = [f"({h.n}, {h.cos_coeff:g}, {h.sin_coeff:g}, {h.phase:g})" for h in self.harmonics]
        return "; ".join(terms)


@dataclass(frozen=True)
class TravwaveOptions:
    alphas: tuple[float, ...] = tuple(round(0.05 * i, 10) for i in range(21))
    profile_alphas: tuple[float, ...] = (0.2, 0.6, 1.0)
    b_values: tuple[float, ...] | None = None


@dataclass(frozen=True)
class AttractorOptions:
    window_start: float | None = None
    window_end: float | None = None
    recurrence: RecurrenceConfig = RecurrenceConfig()
    alpha_grid_size: int = 41


@dataclass(frozen=True)
class SweepOptions:
    b_values: tuple[float, ...] = (0.0, 0.02, 0.04)
    evolve: bool = True
    stages_t_end: float = 80.0
    attractor_t_end: float = 20.0
    attractor_interval: float = 0.2


@dataclass(frozen=True)
class RunConfig:
    scenario: str = "coeffs"
    gas: GasParameters = GasParameters()
    kernel: SineKernel = SineKernel()
    solver: SolverConfig = SolverConfig()
    initial_condition: InitialCondition | None = None
    output_dir: Path = Path("out")
    diagnostics: DiagnosticsConfig = DiagnosticsConfig()
    dispersion_k_max: int = 8
    travwave: TravwaveOptions = TravwaveOptions()
    attractor: AttractorOptions = AttractorOptions()
    sweep: SweepOptions = SweepOptions()

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["output_dir"] = str(self.output_dir)
        if self.initial_condition is not None:
            d["initial_condition"] = {
                "harmonics": self.initial_condition.describe(),
                "amplitude_scale": self.initial_condition.amplitude_scale,
            }
        return d


def _key_lines(text: str) -> dict[tuple[str, str], int]:
    lines: dict[tuple[str, str], int] = {}
    section = None
    for no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        m = re.match(r"^\[([^\]]+)\]", stripped)
        if m:
            section = m.group(1).strip().lower()
            continue
        m = re.match(r"^([^=:#;\s][^=:]*?)\s*[=:]", stripped)
        if m and section is not None and not line[:1].isspace():
            lines[(section, m.group(1).strip().lower())] = no
    return lines


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, lines: dict):
        self.parser = parser
        self.lines = lines

    def error(self, section: str, key: str, message: str) -> ConfigError:
        return ConfigError(message, line=self.lines.get((section, key)), field=f"{section}.{key}")

    def raw(self, section: str, key: str):
        if not self.parser.has_section(section) or not self.parser.has_option(section, key):
            return None
        value = self.parser.get(section, key).strip()
        return value if value != "" else None

    def get(self, section, key, conv, default):
        raw = self.raw(section, key)
        if raw is None:
            return default
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            raise self.error(section, key, f"cannot parse {raw!r}: {exc}") from None

    def floats(self, section, key, default):
        return self.get(section, key, _parse_floats, default)


def _parse_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("value must be finite")
    return value


def _parse_floats(text: str) -> tuple[float, ...]:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if not parts:
        raise ValueError("empty list")
    return tuple(_parse_float(p) for p in parts)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _parse_int(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError("expected an integer")
    return int(value)


def parse_harmonics(text: str) -> tuple[tuple[int, float, float, float], ...]:
    """Parse ``(n, c, s, p); (n, c, s, p)`` groups (phase optional)."""
    groups = re.findall(r"\(([^()]*)\)", text)
    leftover = re.sub(r"\(([^()]*)\)", "", text)
    if not groups or leftover.replace(";", "").replace(",", "").strip():
        raise ValueError("expected groups like (1, 0, 2, 0); (2, 3, 0, -2)")
    terms = []
    for g in groups:
        nums = [p for p in re.split(r"[,\s]+", g.strip()) if p]
        if len(nums) not in (3, 4):
            raise ValueError(f"group ({g}) needs 3 or 4 numbers")
        n = _parse_int(nums[0])
        if n < 1:
            raise ValueError(f"harmonic {n} not allowed: harmonics start at 1 (zero-mean data)")
        c, s = _parse_float(nums[1]), _parse_float(nums[2])
        p = _parse_float(nums[3]) if len(nums) == 4 else 0.0
        terms.append((n, c, s, p))
    return tuple(terms)


def parse_config(text: str, base_dir: Path | None = None) -> RunConfig:
    """Parse and validate a run configuration; missing keys take defaults."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside any [section]", line=exc.lineno) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", line=exc.lineno) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r} in [{exc.section}]", line=exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ConfigError(f"cannot parse {line.strip()!r}", line=lineno) from None
    lines = _key_lines(text)
    r = _Reader(parser, lines)

    for section in parser.sections():
        known = _KNOWN_KEYS.get(section.lower())
        if known is None:
            raise ConfigError(f"unknown section [{section}]", line=_section_line(text, section))
        for key in parser.options(section):
            if key not in known:
                raise r.error(section, key, f"unknown key {key!r} in [{section}]")

    scenario = r.get("run", "scenario", str, "coeffs").strip().lower()
    if scenario not in SCENARIOS:
        raise r.error("run", "scenario", f"unknown scenario {scenario!r}; expected one of {', '.join(SCENARIOS)}")
    out = Path(r.get("run", "output_dir", str, "out"))
    if base_dir is not None and not out.is_absolute():
        out = base_dir / out

    gas = _build(r, "gas", lambda: GasParameters(
        delta=r.get("gas", "delta", _parse_float, 0.4),
        b=r.get("gas", "b", _parse_float, 0.0),
        allow_out_of_range=r.get("gas", "allow_out_of_range", _parse_bool, False),
    ))
    kernel = _build(r, "kernel", lambda: SineKernel(r.floats("kernel", "coefficients", (1.0,))))

    times = r.floats("solver", "snapshot_times", None)
    solver = _build(r, "solver", lambda: SolverConfig(
        N=r.get("solver", "n", _parse_int, 1024),
        cfl=r.get("solver", "cfl", _parse_float, 0.45),
        t_end=r.get("solver", "t_end", _parse_float, max(times) if times else 1.0),
        snapshot_stride=r.get("solver", "snapshot_stride", _parse_int, None),
        snapshot_interval=r.get("solver", "snapshot_interval", _parse_float, None),
        snapshot_times=times,
        mode=r.get("solver", "mode", str, "pair" if scenario == "evolve-pair" else "single").strip().lower(),
        dt_max=r.get("solver", "dt_max", _parse_float, None),
    ))
    if solver.N < 4 * kernel.M:
        raise r.error("solver", "n", f"N={solver.N} too coarse for a kernel with M={kernel.M}; need N >= {4 * kernel.M}")

    initial = None
    harmonics = r.get("initial", "harmonics", parse_harmonics, None)
    scale = r.get("initial", "amplitude_scale", _parse_float, 1.0)
    if harmonics is not None:
        initial = InitialCondition.from_tuples(harmonics, scale)
    elif scenario in ("evolve", "evolve-pair", "attractor"):
        raise ConfigError(f"scenario {scenario!r} needs [initial] harmonics", field="initial.harmonics")

    diagnostics = _build(r, "diagnostics", lambda: DiagnosticsConfig(
        c_shock=r.get("diagnostics", "c_shock", _parse_float, 0.5),
        c_corner=r.get("diagnostics", "c_corner", _parse_float, 1.0),
    ))
    k_max = r.get("dispersion", "k_max", _parse_int, 8)
    if k_max < 1:
        raise r.error("dispersion", "k_max", "k_max must be >= 1")

    tw_default = TravwaveOptions()
    travwave = TravwaveOptions(
        alphas=r.floats("travwave", "alphas", tw_default.alphas),
        profile_alphas=r.floats("travwave", "profile_alphas", tw_default.profile_alphas),
        b_values=r.floats("travwave", "b_values", None),
    )
    for key, values in (("alphas", travwave.alphas), ("profile_alphas", travwave.profile_alphas)):
        if any(abs(a) > 1.0 for a in values):
            raise r.error("travwave", key, "alpha values must satisfy |alpha| <= 1")
    for b in travwave.b_values or ():
        if not 0.0 <= b < 1.0:
            raise r.error("travwave", "b_values", f"b={b} outside [0, 1)")

    rec_default = RecurrenceConfig()
    attractor = AttractorOptions(
        window_start=r.get("attractor", "window_start", _parse_float, None),
        window_end=r.get("attractor", "window_end", _parse_float, None),
        recurrence=RecurrenceConfig(
            threshold=r.get("attractor", "threshold", _parse_float, rec_default.threshold),
            min_shape_variation=r.get("attractor", "min_shape_variation", _parse_float, rec_default.min_shape_variation),
        ),
        alpha_grid_size=r.get("attractor", "alpha_grid_size", _parse_int, 41),
    )
    if attractor.alpha_grid_size < 2:
        raise r.error("attractor", "alpha_grid_size", "need at least 2 grid points")

    sw_default = SweepOptions()
    sweep = SweepOptions(
        b_values=r.floats("sweep", "b_values", sw_default.b_values),
        evolve=r.get("sweep", "evolve", _parse_bool, sw_default.evolve),
        stages_t_end=r.get("sweep", "stages_t_end", _parse_float, sw_default.stages_t_end),
        attractor_t_end=r.get("sweep", "attractor_t_end", _parse_float, sw_default.attractor_t_end),
        attractor_interval=r.get("sweep", "attractor_interval", _parse_float, sw_default.attractor_interval),
    )
    for b in sweep.b_values:
        if not 0.0 <= b < 1.0:
            raise r.error("sweep", "b_values", f"b={b} outside [0, 1)")

    return RunConfig(
        scenario=scenario,
        gas=gas,
        kernel=kernel,
        solver=solver,
        initial_condition=initial,
        output_dir=out,
        diagnostics=diagnostics,
        dispersion_k_max=k_max,
        travwave=travwave,
        attractor=attractor,
        sweep=sweep,
    )


def _section_line(text: str, section: str) -> int | None:
    for no, line in enumerate(text.splitlines(), start=1):
        if line.strip().lower() == f"[{section.lower()}]":
            return no
    return None


def _build(r: _Reader, section: str, make):
    """Construct a domain object, turning domain errors into config errors."""
    try:
        return make()
    except ParameterDomainError as exc:
        key = exc.field.lower()
        raise r.error(section, key, str(exc)) from None
    except ValueError as exc:
        raise ConfigError(str(exc), field=section) from None


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text)
