"""Command-line front end: ``vdw-resonance <scenario> [--config FILE] [--out DIR]``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .coefficients import GasParameters, characteristic_speeds, compute_coefficients
from .config import (
    STAGES_INITIAL,
    STAGES_TIMES,
    ATTRACTOR_INITIAL,
    SCENARIOS,
    InitialCondition,
    RunConfig,
    load_config,
    parse_config,
)
from .diagnostics import FamilyMatcher, attractor_report
from .errors import ConfigError, GridTooCoarseError, NoRecurrenceError, ParameterDomainError, ResonanceError
from .kernel import dispersion_omega
from .solver import EvolutionRecord, SolverConfig, evolve, evolve_pair
from .travwave import amplitude_of_alpha, gamma_of_alpha, make_traveling_wave, sample_traveling_wave, speed_of_alpha

log = logging.getLogger("vdw_resonance")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2

DIAGNOSTIC_COLUMNS = (
    "t", "energy", "mean", "tv", "max_gradient", "shock_flag", "corner_flag", "dist_to_family", "best_alpha",
)


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence], config: RunConfig, note: str = "") -> Path:
    """CSV with a ``# config:`` comment line, then a header row, then data."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write("# config: " + json.dumps(config.to_dict(), sort_keys=True, default=str) + "\n")
        if note:
            fh.write(f"# {note}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _b_tag(b: float) -> str:
    return f"b{b:.4f}".rstrip("0").rstrip(".")


def _with_b(config: RunConfig, b: float) -> RunConfig:
    gas = GasParameters(config.gas.delta, b, config.gas.allow_out_of_range)
    return replace(config, gas=gas)


def run_coeffs(config: RunConfig, out: Path) -> list[Path]:
    c = compute_coefficients(config.gas)
    speeds = characteristic_speeds(c)
    row = (config.gas.delta, config.gas.b, c.c0, c.G, c.Lambda, c.Gamma, c.coupling_ratio, *speeds)
    cols = ("delta", "b", "c0", "G", "Lambda", "Gamma", "Gamma_over_Lambda", "speed_left", "speed_entropy", "speed_right")
    for name, value in zip(cols, row):
        print(f"{name:>18} = {value:.12g}")
    return [write_csv(out / "coeffs.csv", cols, [row], config)]


def run_dispersion(config: RunConfig, out: Path) -> list[Path]:
    c = compute_coefficients(config.gas)
    ks = [k for k in range(-config.dispersion_k_max, config.dispersion_k_max + 1) if k != 0]
    rows = [(k, dispersion_omega(config.kernel, k, c.Gamma)) for k in ks]
    return [write_csv(out / "dispersion.csv", ("k", "omega"), rows, config)]


def _family_rows(config: RunConfig, b: float):
    c = compute_coefficients(GasParameters(config.gas.delta, b, config.gas.allow_out_of_range))
    for a in config.travwave.alphas:
        yield (a, gamma_of_alpha(a), speed_of_alpha(a, c.Gamma), amplitude_of_alpha(a, c))


def run_travwave(config: RunConfig, out: Path, b_values=None) -> list[Path]:
    written = []
    b_values = b_values or config.travwave.b_values or (config.gas.b,)
    for b in b_values:
        cfg_b = _with_b(config, b)
        c = compute_coefficients(cfg_b.gas)
        written.append(write_csv(out / f"family_{_b_tag(b)}.csv", ("alpha", "gamma", "s", "A"), _family_rows(config, b), cfg_b))
        N = config.solver.N
        for a in config.travwave.profile_alphas:
            w = make_traveling_wave(a, c)
            f = sample_traveling_wave(w, c, N)
            written.append(
                write_csv(
                    out / f"profile_{_b_tag(b)}_alpha{a:g}.csv",
                    ("x", "sigma"),
                    zip(f.x, f.values),
                    cfg_b,
                    note=f"alpha={a!r} gamma={w.gamma!r} s={w.s!r} A={w.A!r}",
                )
            )
    return written


def _diagnostic_rows(record: EvolutionRecord, matcher: FamilyMatcher | None):
    for d, f in zip(record.diagnostics, record.fields):
        if matcher is not None:
            alpha, _, dist = matcher.coarse(f.values)
        else:
            alpha, dist = math.nan, math.nan
        yield (d.t, d.energy, d.mean, d.tv, d.max_gradient, d.shock_flag, d.corner_flag, dist, alpha)


def _write_snapshots(out: Path, config: RunConfig, times, columns, field_rows) -> list[Path]:
    written = []
    index = []
    for i, (t, rows) in enumerate(zip(times, field_rows)):
        name = f"snapshot_{i:05d}.csv"
        written.append(write_csv(out / "snapshots" / name, columns, rows, config, note=f"t={t!r}"))
        index.append((i, t, name))
    written.append(write_csv(out / "snapshots.csv", ("index", "t", "file"), index, config))
    return written


def _matcher(config: RunConfig, coeffs) -> FamilyMatcher:
    return FamilyMatcher(coeffs, config.solver.N, np.linspace(0.0, 1.0, config.attractor.alpha_grid_size))


def run_evolve(config: RunConfig, out: Path) -> tuple[list[Path], EvolutionRecord]:
    c = compute_coefficients(config.gas)
    if config.initial_condition is None:
        raise ConfigError("evolve needs [initial] harmonics", field="initial.harmonics")
    initial = config.initial_condition.sample(config.solver.N)
    solver = replace(config.solver, mode="single")
    record = evolve(solver, initial, config.kernel, c, config.diagnostics)
    log.info("evolve: %d steps, %d snapshots", record.steps, len(record))
    written = _write_snapshots(out, config, record.times, ("x", "sigma"), ((zip(f.x, f.values)) for f in record.fields))
    written.append(write_csv(out / "diagnostics.csv", DIAGNOSTIC_COLUMNS, _diagnostic_rows(record, _matcher(config, c)), config))
    return written, record


def run_evolve_pair(config: RunConfig, out: Path) -> list[Path]:
    """Mirror-symmetric pair run: ``a3 = sigma0``, ``a1(theta) = sigma0(-theta)``."""
    c = compute_coefficients(config.gas)
    if config.initial_condition is None:
        raise ConfigError("evolve-pair needs [initial] harmonics", field="initial.harmonics")
    a3 = config.initial_condition.sample(config.solver.N)
    solver = replace(config.solver, mode="pair")
    record = evolve_pair(solver, (a3.reflected(), a3), config.kernel, c, config.diagnostics)
    written = _write_snapshots(
        out, config, record.times, ("x", "a1", "a3"),
        (zip(f1.x, f1.values, f3.values) for f1, f3 in zip(record.a1, record.a3)),
    )
    rows = []
    for t, d1, d3, f1, f3 in zip(record.times, record.diagnostics_a1, record.diagnostics_a3, record.a1, record.a3):
        asym = float(np.max(np.abs(f1.values - f3.reflected().values)))
        rows.append((t, d1.energy, d3.energy, d1.mean, d3.mean, d1.shock_flag, d3.shock_flag, d1.corner_flag, d3.corner_flag, asym))
    cols = ("t", "energy_a1", "energy_a3", "mean_a1", "mean_a3", "shock_a1", "shock_a3", "corner_a1", "corner_a3", "mirror_error")
    written.append(write_csv(out / "diagnostics.csv", cols, rows, config))
    return written


def run_attractor(config: RunConfig, out: Path) -> list[Path]:
    written, record = run_evolve(config, out)
    c = compute_coefficients(config.gas)
    t_end = record.times[-1]
    lo = config.attractor.window_start if config.attractor.window_start is not None else 0.5 * t_end
    hi = config.attractor.window_end if config.attractor.window_end is not None else t_end
    report = attractor_report(
        record, c, (lo, hi), alpha_grid=np.linspace(0.0, 1.0, config.attractor.alpha_grid_size),
        recurrence=config.attractor.recurrence,
    )
    corners = record.corner_flags()
    first_corner = record.times[int(np.argmax(corners))] if corners.any() else None
    shocks = record.shock_flags()
    last_shock = record.times[int(np.nonzero(shocks)[0][-1])] if shocks.any() else None
    text = [
        f"window: {lo:g} .. {hi:g}",
        report.summary(),
        f"first corner flag: {'never' if first_corner is None else f'{first_corner:.6g}'}",
        f"last shock flag: {'never' if last_shock is None else f'{last_shock:.6g}'}",
    ]
    path = out / "attractor_report.txt"
    path.write_text("\n".join(text) + "\n", encoding="utf-8")
    print("\n".join(text))
    written.append(path)
    return written


def run_sweep(config: RunConfig, out: Path) -> list[Path]:
    """Per-b family tables and profiles, plus optional evolution snapshot sets."""
    written = []
    for b in config.sweep.b_values:
        sub = out / _b_tag(b)
        cfg_b = _with_b(config, b)
        written += run_travwave(cfg_b, sub, b_values=(b,))
        if not config.sweep.evolve:
            continue
        t_stages = config.sweep.stages_t_end
        stages = replace(
            cfg_b,
            initial_condition=InitialCondition.from_tuples(STAGES_INITIAL),
            solver=SolverConfig(
                N=config.solver.N, cfl=config.solver.cfl, t_end=t_stages,
                snapshot_times=tuple(t for t in STAGES_TIMES if t <= t_stages),
            ),
        )
        written += run_evolve(stages, sub / "stages")[0]
        attractor = replace(
            cfg_b,
            initial_condition=config.initial_condition or InitialCondition.from_tuples(ATTRACTOR_INITIAL),
            solver=SolverConfig(
                N=config.solver.N, cfl=config.solver.cfl, t_end=config.sweep.attractor_t_end,
                snapshot_interval=config.sweep.attractor_interval,
            ),
        )
        written += run_attractor(attractor, sub / "attractor")
    return written


RUNNERS = {
    "coeffs": run_coeffs,
    "dispersion": run_dispersion,
    "travwave": run_travwave,
    "evolve": lambda cfg, out: run_evolve(cfg, out)[0],
    "evolve-pair": run_evolve_pair,
    "attractor": run_attractor,
    "sweep": run_sweep,
}


def run_scenario(config: RunConfig, out: Path | None = None) -> int:
    """Run ``config.scenario``; returns the process exit status."""
    out = Path(out) if out is not None else config.output_dir
    try:
        written = RUNNERS[config.scenario](config, out)
    except (ConfigError, ParameterDomainError, GridTooCoarseError) as exc:
        log.error("invalid input: %s", exc)
        return EXIT_VALIDATION
    except (ResonanceError, FloatingPointError, ArithmeticError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    log.info("wrote %d files under %s", len(written), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vdw-resonance", description=__doc__)
    p.add_argument("scenario", nargs="?", choices=SCENARIOS, help="overrides [run] scenario")
    p.add_argument("--config", type=Path, help="INI run configuration")
    p.add_argument("--out", type=Path, help="output directory (overrides [run] output_dir)")
    p.add_argument("--seed-check", action="store_true", help="run the deterministic acceptance fixtures and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.seed_check:
        from .checks import run_seed_checks

        return run_seed_checks()
    try:
        config = load_config(args.config) if args.config else parse_config("")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.scenario:
        config = replace(config, scenario=args.scenario)
        if args.scenario in ("evolve", "evolve-pair", "attractor") and config.initial_condition is None:
            print(f"error: scenario {args.scenario!r} needs [initial] harmonics in the config", file=sys.stderr)
            return EXIT_VALIDATION
    status = run_scenario(config, args.out)
    if status != EXIT_OK:
        print(f"error: scenario {config.scenario!r} failed (exit {status}); rerun with -v for details", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
