"""Two two-level emitters sharing one leaky resonator: closed form vs. direct integration.

With one excitation initially in emitter 2, the emitted probability is known
in closed form on resonance. It makes a cheap, independent check of the
complex-frequency machinery used for the full source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DegenerateSystem, IntegratorFailure, NegativeParameter

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TwoEmitterConfig:
    """Parameters in MHz. ``detuning1``/``detuning2`` shift each emitter from ``omega``."""

    omega: float = 0.0
    g1: float = 0.0
    g2: float = 10.0
    kappa: float = 2.0
    detuning1: float = 0.0
    detuning2: float = 0.0

    def __post_init__(self):
        for name in ("g1", "g2", "kappa"):
            if getattr(self, name) < 0:
                raise NegativeParameter(f"{name} must be >= 0")

    @property
    def resonant(self) -> bool:
        return self.detuning1 == 0 and self.detuning2 == 0

    def trapped_limit(self) -> float:
        """Long-time emitted probability g2²/(g1²+g2²)."""
        total = self.g1 ** 2 + self.g2 ** 2
        if total == 0:
            raise DegenerateSystem("both emitters are decoupled")
        return self.g2 ** 2 / total


def analytic_waveguide_population(cfg: TwoEmitterConfig, t):
    """Closed-form emitted probability at time(s) ``t`` (µs); resonant case only."""
    if not cfg.resonant:
        raise ValueError("the closed form holds only for zero detunings")
    prefactor = cfg.trapped_limit()
    g1, g2, k = TWO_PI * cfg.g1, TWO_PI * cfg.g2, TWO_PI * cfg.kappa
    t = np.asarray(t, dtype=float)
    disc = g1 * g1 + g2 * g2 - (k / 4.0) ** 2
    # s = sin(Ωt)/Ω and c = cos(Ωt), continued to imaginary Ω when overdamped
    if disc > 0:
        w = math.sqrt(disc)
        s, c = np.sin(w * t) / w, np.cos(w * t)
    elif disc < 0:
        w = math.sqrt(-disc)
        s, c = np.sinh(w * t) / w, np.cosh(w * t)
    else:
        s, c = t, np.ones_like(t)
    f = 1.0 + k * k * s * s / 8.0 + k * s * c / 2.0
    out = prefactor * (1.0 - f * np.exp(-k * t / 2.0))
    return out if out.ndim else float(out)


def _generator(cfg: TwoEmitterConfig) -> np.ndarray:
    """Frame-shifted 3×3 matrix for (resonator, emitter 1, emitter 2)."""
    g1, g2, k = TWO_PI * cfg.g1, TWO_PI * cfg.g2, TWO_PI * cfg.kappa
    d1, d2 = TWO_PI * cfg.detuning1, TWO_PI * cfg.detuning2
    # the common frequency only contributes a global phase and is dropped
    return np.array([
        [-0.5j * k, g1, g2],
        [g1, d1, 0.0],
        [g2, 0.0, d2],
    ], dtype=complex)


def ode_waveguide_population(cfg: TwoEmitterConfig, t, *, rtol: float = 1e-12,
                             atol: float = 1e-14):
    """Emitted probability by integrating the amplitudes and κ|c|² together."""
    h = _generator(cfg)
    k = TWO_PI * cfg.kappa
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(times < 0):
        raise ValueError("times must be non-negative")
    order = np.argsort(times)
    t_end = float(times[order[-1]]) if times.size else 0.0

    def rhs(_, y):
        amp = y[:3] + 1j * y[3:6]
        d = -1j * (h @ amp)
        return np.concatenate([d.real, d.imag, [k * abs(amp[0]) ** 2]])

    y0 = np.zeros(7)
    y0[2] = 1.0
    if t_end == 0.0:
        out = np.zeros_like(times)
    else:
        sol = solve_ivp(rhs, (0.0, t_end), y0, method="DOP853", t_eval=times[order],
                        rtol=rtol, atol=atol)
        if not sol.success:
            raise IntegratorFailure(sol.message)
        out = np.empty_like(times)
        out[order] = sol.y[6]
    return out if np.ndim(t) else float(out[0])


def jc_dressed_energies(n: int, omega: float, detuning: float, g: float):
    """Dressed doublet of the n-excitation Jaynes-Cummings manifold.

    Returns (E_minus, E_plus, mixing_angle) with the angle in [0, π/2].
    Units follow the inputs.
    """
    if n < 1:
        raise ValueError("excitation number must be >= 1")
    split = math.sqrt(4.0 * n * g * g + detuning * detuning)
    e_minus = n * omega + 0.5 * (detuning - split)
    e_plus = n * omega + 0.5 * (detuning + split)
    angle = math.atan2(math.sqrt(max(split - detuning, 0.0)),
                       math.sqrt(max(split + detuning, 0.0)))
    return e_minus, e_plus, angle
