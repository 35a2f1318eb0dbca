"""Physical parameters and the effective-Hamiltonian constants derived from them.

Inputs are given as ordinary frequencies in MHz (i.e. angular frequency / 2π).
Everything downstream works in angular units, rad/µs, with time in µs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

from .errors import (
    DispersiveGuardViolated,
    NegativeParameter,
    ResonanceMismatch,
    ZeroAnharmonicityWithCoupling,
)

TWO_PI = 2.0 * math.pi

#: Largest admissible |λ| before the dispersive expansion is considered unreliable.
DISPERSIVE_LIMIT = 0.15

#: Absolute tolerance (MHz) used when checking the resonance conditions.
RESONANCE_TOL_MHZ = 1e-9


@dataclass(frozen=True)
class SystemConfig:
    """Raw circuit parameters in MHz.

    Resonators A and B sit at ``omega_a`` and ``omega_b``. Transmon 1 has its
    g-e transition resonant with A and its e-f transition resonant with B;
    transmon 2 has its g-e transition resonant with B.
    """

    omega_a: float
    omega_b: float
    omega1_ge: float
    omega1_ef: float
    omega2_ge: float
    omega2_ef: float
    g_1a: float
    g_1b: float
    g_2b: float
    kappa_a: float
    kappa_b: float

    @classmethod
    def resonant(
        cls,
        *,
        g_1a: float = 5.0,
        g_1b: float = 25.0,
        g_2b: float = 10.0,
        kappa_a: float = 25.0,
        kappa_b: float = 25.0,
        anharmonicity: float = 400.0,
        omega_b: float = 0.0,
    ) -> "SystemConfig":
        """Build a config satisfying all resonance conditions.

        Resonator B is placed at ``omega_b`` and A one anharmonicity above it.
        Transmon 2 is given the same anharmonicity as transmon 1.
        """
        omega_a = omega_b + anharmonicity
        return cls(
            omega_a=omega_a,
            omega_b=omega_b,
            omega1_ge=omega_a,
            omega1_ef=omega_b,
            omega2_ge=omega_b,
            omega2_ef=omega_b - anharmonicity,
            g_1a=g_1a,
            g_1b=g_1b,
            g_2b=g_2b,
            kappa_a=kappa_a,
            kappa_b=kappa_b,
        )

    def replace(self, **changes) -> "SystemConfig":
        data = asdict(self)
        data.update(changes)
        return SystemConfig(**data)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ValidatedConfig:
    """A checked :class:`SystemConfig` converted to rad/µs."""

    omega_a: float
    omega_b: float
    omega1_ge: float
    omega1_ef: float
    omega2_ge: float
    omega2_ef: float
    g_1a: float
    g_1b: float
    g_2b: float
    kappa_a: float
    kappa_b: float
    source: SystemConfig


def validate_config(cfg: SystemConfig, *, allow_detuning: bool = False) -> ValidatedConfig:
    for f in fields(cfg):
        if not math.isfinite(getattr(cfg, f.name)):
            raise NegativeParameter(f"{f.name} must be finite")
    for name in ("g_1a", "g_1b", "g_2b", "kappa_a", "kappa_b"):
        value = getattr(cfg, name)
        if value < 0:
            raise NegativeParameter(f"{name} must be >= 0, got {value}")

    if not allow_detuning:
        checks = (
            ("omega1_ge", "omega_a"),
            ("omega1_ef", "omega_b"),
            ("omega2_ge", "omega_b"),
        )
        for lhs, rhs in checks:
            a, b = getattr(cfg, lhs), getattr(cfg, rhs)
            if abs(a - b) > RESONANCE_TOL_MHZ * max(1.0, abs(a), abs(b)):
                raise ResonanceMismatch(
                    f"{lhs}={a} MHz differs from {rhs}={b} MHz; "
                    "pass allow_detuning=True to accept detuned transitions"
                )

    if cfg.g_1b > 0 and cfg.omega1_ge == cfg.omega1_ef:
        raise ZeroAnharmonicityWithCoupling(
            "transmon 1 needs a nonzero anharmonicity when g_1b > 0"
        )

    converted = {f.name: TWO_PI * getattr(cfg, f.name) for f in fields(cfg)}
    return ValidatedConfig(**converted, source=cfg)


@dataclass(frozen=True)
class EffectiveParams:
    """Effective constants in rad/µs (``lambda_*`` are dimensionless).

    ``f_a`` and ``f_b`` are the flat waveguide coupling amplitudes, in units of
    sqrt(rad/µs), so that ``kappa = 2π f²``.
    """

    omega_a: float
    omega_b: float
    omega1_ge: float
    omega1_ef: float
    omega2_ge: float
    omega2_ef: float
    g_1a: float
    g_1b: float
    g_2b: float
    kappa_a: float
    kappa_b: float
    eta_1a: float
    eta_1b: float
    eta_2b: float
    lambda_1a: float
    lambda_1b: float
    lambda_2b: float
    chi_1a: float
    chi_1b: float
    chi_2b: float
    upsilon: float
    omega1_ge_bar: float
    omega1_gf_bar: float
    omega2_gf_bar: float
    f_a: float
    f_b: float

    @property
    def omega_a_tilde(self) -> complex:
        return complex(self.omega_a, -0.5 * self.kappa_a)

    @property
    def omega_b_tilde(self) -> complex:
        return complex(self.omega_b, -0.5 * self.kappa_b)

    _DIMENSIONLESS = ("lambda_1a", "lambda_1b", "lambda_2b")

    def to_mhz(self) -> dict:
        """Same values with frequencies divided by 2π and f's by sqrt(2π)."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in self._DIMENSIONLESS:
                out[f.name] = value
            elif f.name in ("f_a", "f_b"):
                out[f.name] = value / math.sqrt(TWO_PI)
            else:
                out[f.name] = value / TWO_PI
        return out

    def as_dict(self) -> dict:
        return asdict(self)


def _small_parameter(eta: float, detuning: float, label: str) -> float:
    if eta == 0.0:
        return 0.0
    if detuning == 0.0:
        raise DispersiveGuardViolated(f"{label}: coupling is resonant with nothing to detune it")
    lam = eta / detuning
    if abs(lam) >= DISPERSIVE_LIMIT:
        raise DispersiveGuardViolated(
            f"|{label}| = {abs(lam):.4g} is not below {DISPERSIVE_LIMIT}"
        )
    return lam


def derive_effective_params(cfg: ValidatedConfig) -> EffectiveParams:
    sqrt2 = math.sqrt(2.0)
    eta_1a = sqrt2 * cfg.g_1a
    eta_1b = cfg.g_1b / sqrt2
    eta_2b = sqrt2 * cfg.g_2b

    lambda_1a = _small_parameter(eta_1a, cfg.omega1_ef - cfg.omega_a, "lambda_1a")
    lambda_1b = _small_parameter(eta_1b, cfg.omega1_ge - cfg.omega_b, "lambda_1b")
    lambda_2b = _small_parameter(eta_2b, cfg.omega2_ef - cfg.omega_b, "lambda_2b")

    chi_1a = lambda_1a * eta_1a
    chi_1b = lambda_1b * eta_1b
    chi_2b = lambda_2b * eta_2b
    upsilon = 0.5 * (lambda_1a * eta_1b - lambda_1b * eta_1a)

    omega1_ge_bar = cfg.omega1_ge + chi_1b
    omega1_gf_bar = cfg.omega1_ge + cfg.omega1_ef + chi_1a
    omega2_gf_bar = cfg.omega2_ge + cfg.omega2_ef + chi_2b

    return EffectiveParams(
        omega_a=cfg.omega_a,
        omega_b=cfg.omega_b,
        omega1_ge=cfg.omega1_ge,
        omega1_ef=cfg.omega1_ef,
        omega2_ge=cfg.omega2_ge,
        omega2_ef=cfg.omega2_ef,
        g_1a=cfg.g_1a,
        g_1b=cfg.g_1b,
        g_2b=cfg.g_2b,
        kappa_a=cfg.kappa_a,
        kappa_b=cfg.kappa_b,
        eta_1a=eta_1a,
        eta_1b=eta_1b,
        eta_2b=eta_2b,
        lambda_1a=lambda_1a,
        lambda_1b=lambda_1b,
        lambda_2b=lambda_2b,
        chi_1a=chi_1a,
        chi_1b=chi_1b,
        chi_2b=chi_2b,
        upsilon=upsilon,
        omega1_ge_bar=omega1_ge_bar,
        omega1_gf_bar=omega1_gf_bar,
        omega2_gf_bar=omega2_gf_bar,
        f_a=math.sqrt(cfg.kappa_a / TWO_PI),
        f_b=math.sqrt(cfg.kappa_b / TWO_PI),
    )


def effective_params(cfg: SystemConfig, *, allow_detuning: bool = False) -> EffectiveParams:
    """Validate ``cfg`` and derive its effective constants in one call."""
    return derive_effective_params(validate_config(cfg, allow_detuning=allow_detuning))
