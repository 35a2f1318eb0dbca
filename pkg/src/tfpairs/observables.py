"""Populations, pair probability, joint spectrum and time-domain densities."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .dynamics import AmplitudeField, FrequencyGrid
from .errors import EmptyDensity, EmptySpectrum

# Below this pair probability a time-domain transform is meaningless.
MIN_PAIR_PROBABILITY = 1e-6


@dataclass(frozen=True)
class ObservableRecord:
    t: float
    P_e1: float
    P_f1: float
    P_e2: float
    P_a: float
    P_b: float
    P_alpha: float
    P_beta: float
    p_ab: float
    norm: float

    COLUMNS = ("t", "P_e1", "P_f1", "P_e2", "P_a", "P_b",
               "P_alpha", "P_beta", "p_ab", "norm")

    def as_row(self) -> tuple:
        return tuple(getattr(self, c) for c in self.COLUMNS)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class JointSpectrum:
    """|Φ|² sampled on the evolution grid (axes are detunings in rad/µs)."""

    density: np.ndarray
    grid: FrequencyGrid

    @property
    def offsets(self) -> np.ndarray:
        return self.grid.offsets


@dataclass(frozen=True, eq=False)
class TimeDomainDensity:
    """A(τ, τ') = |φ(τ, τ')|², rows indexed by τ (photon α), columns by τ'."""

    density: np.ndarray
    tau: np.ndarray
    tau_prime: np.ndarray

    @property
    def mass(self) -> float:
        return _trapezoid_2d(self.density, self.tau, self.tau_prime)


def _integrate(values: np.ndarray, grid: FrequencyGrid) -> float:
    return float(np.dot(grid.weights, values))


def _trapezoid_2d(density: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    return float(np.trapezoid(np.trapezoid(density, y, axis=1), x))


def joint_spectrum(field: AmplitudeField) -> JointSpectrum:
    return JointSpectrum(np.abs(field.phi) ** 2, field.grid)


def pair_probability(spectrum: JointSpectrum | AmplitudeField) -> float:
    if isinstance(spectrum, AmplitudeField):
        spectrum = joint_spectrum(spectrum)
    w = spectrum.grid.weights
    return float(w @ spectrum.density @ w)


def _one_photon_terms(field: AmplitudeField) -> dict:
    g = field.grid
    return {
        "xi_alpha": _integrate(np.abs(field.xi_alpha) ** 2, g),
        "xi_beta": _integrate(np.abs(field.xi_beta) ** 2, g),
        "theta_alpha": _integrate(np.abs(field.theta_alpha) ** 2, g),
        "theta_beta": _integrate(np.abs(field.theta_beta) ** 2, g),
    }


def norm(field: AmplitudeField) -> float:
    """Total probability over all ten amplitude families."""
    one = _one_photon_terms(field)
    return pair_probability(field) + sum(one.values()) + float(np.sum(np.abs(field.scalars) ** 2))


def populations(field: AmplitudeField) -> ObservableRecord:
    one = _one_photon_terms(field)
    r, q, ya, yb, x = (abs(v) ** 2 for v in field.scalars)
    p_ab = pair_probability(field)
    return ObservableRecord(
        t=field.t,
        P_e1=x + yb + one["theta_beta"],
        P_f1=q,
        P_e2=x + ya + one["theta_alpha"],
        P_a=r + ya + one["xi_beta"],
        P_b=r + yb + one["xi_alpha"],
        P_alpha=p_ab + one["xi_alpha"] + one["theta_alpha"],
        P_beta=p_ab + one["xi_beta"] + one["theta_beta"],
        p_ab=p_ab,
        norm=p_ab + sum(one.values()) + r + q + ya + yb + x,
    )


def branch_sums(rec: ObservableRecord) -> dict:
    """Per-emitter excitation bookkeeping; diagnostic only, not conserved in general."""
    return {
        "transmon1_branch": rec.P_e1 + rec.P_f1 + rec.P_a + rec.P_alpha,
        "transmon2_branch": rec.P_e2 + rec.P_b + rec.P_beta,
    }


def time_domain(field: AmplitudeField, window: tuple[float, float] | None = None,
                points: int | None = None) -> TimeDomainDensity:
    """Joint temporal density of the two emitted photons.

    The amplitude is the double Fourier transform of Φ with kernel e^{+iνs},
    where s is the age of each photon at time ``field.t``. Results are
    reported against the emission instant τ = t - s, so τ' > τ means the β
    photon left after the α photon. ``window`` defaults to [0, t] and
    ``points`` to the grid size.
    """
    g = field.grid
    w = g.weights
    p_ab = float(w @ (np.abs(field.phi) ** 2) @ w)
    if p_ab < MIN_PAIR_PROBABILITY:
        raise EmptySpectrum(f"pair probability {p_ab:.3g} is too small for a time-domain map")
    lo, hi = window if window is not None else (0.0, field.t)
    if not hi > lo:
        raise ValueError(f"empty time window [{lo}, {hi}]")
    n = points if points is not None else g.points
    tau = np.linspace(lo, hi, n)
    kernel = np.exp(1j * np.outer(field.t - tau, g.offsets)) * w
    amp = kernel @ field.phi @ kernel.T / (2.0 * math.pi)
    return TimeDomainDensity(np.abs(amp) ** 2, tau, tau.copy())


def _delay_mesh(a: TimeDomainDensity) -> np.ndarray:
    return a.tau_prime[None, :] - a.tau[:, None]


def _check_mass(a: TimeDomainDensity) -> float:
    mass = a.mass
    if not mass > 0:
        raise EmptyDensity("time-domain density has no mass")
    return mass


def emission_delay(a: TimeDomainDensity) -> float:
    """Mass-weighted mean of τ' - τ over the sampled window."""
    mass = _check_mass(a)
    return _trapezoid_2d(a.density * _delay_mesh(a), a.tau, a.tau_prime) / mass


def ridge_delay(a: TimeDomainDensity) -> float:
    """Most probable τ' - τ.

    The density is summed along each diagonal of the (uniform, square) τ grid
    and the peak is refined with a three-point parabola.
    """
    _check_mass(a)
    n = a.tau.size
    if a.tau_prime.size != n or not np.allclose(a.tau, a.tau_prime):
        raise ValueError("ridge_delay needs identical τ and τ' axes")
    step = a.tau[1] - a.tau[0]
    lags = np.arange(-(n - 1), n)
    profile = np.array([np.trace(a.density, offset=k) for k in lags])
    k = int(np.argmax(profile))
    shift = 0.0
    if 0 < k < profile.size - 1:
        y0, y1, y2 = profile[k - 1], profile[k], profile[k + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom != 0.0:
            shift = 0.5 * (y0 - y2) / denom
    return float((lags[k] + shift) * step)


def ordering_masses(a: TimeDomainDensity) -> tuple[float, float]:
    """Probability that β is emitted after α, and before it."""
    d = _delay_mesh(a)
    later = _trapezoid_2d(np.where(d > 0, a.density, 0.0), a.tau, a.tau_prime)
    earlier = _trapezoid_2d(np.where(d < 0, a.density, 0.0), a.tau, a.tau_prime)
    return later, earlier


def sum_frequency_variance(spectrum: JointSpectrum | AmplitudeField) -> float:
    """Variance of the total detuning ν + ν' - ω_a - ω_b under |Φ|²."""
    if isinstance(spectrum, AmplitudeField):
        spectrum = joint_spectrum(spectrum)
    g = spectrum.grid
    w2 = np.outer(g.weights, g.weights) * spectrum.density
    total = w2.sum()
    if not total > 0:
        raise EmptySpectrum("joint spectrum is identically zero")
    s = g.offsets[:, None] + g.offsets[None, :]
    mean = (w2 * s).sum() / total
    return float((w2 * (s - mean) ** 2).sum() / total)


def sum_frequency_quartiles(spectrum: JointSpectrum | AmplitudeField) -> tuple[float, float]:
    """First and third quartiles of ν + ν' - ω_a - ω_b under |Φ|².

    Unlike the variance, these are insensitive to the slowly decaying spectral
    wings and hence to the grid half-width.
    """
    if isinstance(spectrum, AmplitudeField):
        spectrum = joint_spectrum(spectrum)
    g = spectrum.grid
    m = g.points
    w2 = np.outer(g.weights, g.weights) * spectrum.density
    # on a shared uniform axis, index i + j labels the anti-diagonal ν + ν'
    lines = np.add.outer(np.arange(m), np.arange(m)).ravel()
    marginal = np.bincount(lines, weights=w2.ravel(), minlength=2 * m - 1)
    total = marginal.sum()
    if not total > 0:
        raise EmptySpectrum("joint spectrum is identically zero")
    s = (np.arange(2 * m - 1) - (m - 1)) * g.spacing
    # mid-bin cumulative weights keep the quantiles symmetric under reflection
    cdf = (np.cumsum(marginal) - 0.5 * marginal) / total
    q1, q3 = np.interp([0.25, 0.75], cdf, s)
    return float(q1), float(q3)


def rank_one_residual(phi: np.ndarray) -> float:
    """Largest deviation from the best rank-1 fit, relative to the peak of |Φ|."""
    peak = float(np.max(np.abs(phi)))
    if peak == 0.0:
        return 0.0
    u, s, vh = np.linalg.svd(phi)
    fit = s[0] * np.outer(u[:, 0], vh[0])
    return float(np.max(np.abs(phi - fit))) / peak
