"""Fast deterministic self-checks behind ``vdw-resonance --seed-check``.

Each check compares against a frozen reference value and prints one line.
The whole set runs in a few seconds.
"""

from __future__ import annotations

import math

import numpy as np

from .coefficients import GasParameters, compute_coefficients
from .field import PeriodicField
from .kernel import SINGLE_MODE, SineKernel, convolve, convolve_trapezoid
from .solver import SolverConfig, evolve
from .travwave import make_traveling_wave, sample_traveling_wave, speed_of_alpha

# reference values from independent 30-digit quadrature / closed forms
LAMBDA_REF = 1.4198591479439079
GAMMA_REF = 0.41412558481697312
S1_REF = -1.4060828562014556


def _checks():
    c = compute_coefficients(GasParameters(0.4, 0.0))
    yield "coefficients at delta=0.4", abs(c.Lambda - LAMBDA_REF) + abs(c.Gamma - GAMMA_REF), 1e-12

    x = PeriodicField.from_function(lambda x: np.exp(np.sin(x)), 64)
    kern = SineKernel((1.0, -0.5, 0.25))
    err = float(np.max(np.abs(convolve(kern, x).values - convolve_trapezoid(kern, x).values)))
    yield "FFT convolution vs trapezoid", err, 1e-12

    yield "speed at alpha=1", abs(speed_of_alpha(1.0, c.Gamma) - S1_REF), 1e-11

    tw = make_traveling_wave(0.6, c)
    u0 = sample_traveling_wave(tw, c, 256)
    rec = evolve(SolverConfig(N=256, t_end=1.0), u0, SINGLE_MODE, c)
    exact = sample_traveling_wave(tw, c, 256, t=1.0)
    err = float(np.sqrt(np.sum((rec.final().values - exact.values) ** 2) * u0.dx))
    yield "traveling wave alpha=0.6 to t=1, N=256", err, 1e-4


def run_seed_checks() -> int:
    failed = 0
    for name, err, tol in _checks():
        ok = err <= tol
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: error {err:.3e} (tol {tol:.0e})")
    return 0 if failed == 0 else 2
