"""Schmidt decomposition of the emitted two-photon amplitude."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .dynamics import (
    R,
    AmplitudeField,
    FrequencyGrid,
    build_omega,
    evolve_field,
    evolve_phi,
    evolve_slices,
    grid_covering,
    initial_state,
    propagate,
)
from .errors import (
    DomainExceedsGrid,
    EmptySpectrum,
    NoConvergence,
    NotHermitian,
    NotPSD,
    UnnormalizedInput,
)
from .observables import pair_probability
from .params import EffectiveParams

log = logging.getLogger(__name__)

COMPLETION_THRESHOLD = 0.999
DEFAULT_POINTS = 100
DEFAULT_THETA = 0.99

# Negative eigenvalues down to this size are treated as round-off and clipped.
CLIP_TOL = 1e-10
BISECTION_STEPS = 20
# Sub-grid density used to integrate |Φ|² during the domain search.
_SEARCH_POINTS = 401
# Full 2-D evaluations attempted before giving up on a truncation-limited grid.
_MAX_FULL_ATTEMPTS = 8


@dataclass(frozen=True, eq=False)
class SchmidtDomain:
    """Square frequency window [-Δω, Δω]² around the resonator pair."""

    half_width: float
    points: int
    theta: float
    captured: float
    fraction: float
    phi: np.ndarray = field(repr=False)
    method: str = "exact"

    @property
    def offsets(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points - 1)


@dataclass(frozen=True, eq=False)
class SchmidtResult:
    coefficients: np.ndarray
    entropy: float
    normalization: float
    modes: np.ndarray = field(repr=False)
    partner_modes: np.ndarray | None = field(default=None, repr=False)
    eigenvalues: np.ndarray | None = field(default=None, repr=False)
    spacing: float = 1.0
    domain: SchmidtDomain | None = field(default=None, repr=False)
    t_final: float | None = None


# ---------------------------------------------------------------- completion

def final_state(ep: EffectiveParams, grid: FrequencyGrid | None = None,
                t_step: float = 0.05, *, t_max: float = 20.0,
                threshold: float = COMPLETION_THRESHOLD,
                max_points: int = 1601) -> AmplitudeField:
    """Field at the first multiple of ``t_step`` where p_ab exceeds ``threshold``.

    Each step first checks the localized amplitudes (one matrix), then the
    one-photon integrals along the center row and column, and only then pays
    for the full 2-D field. The 2-D grid is refined (same window) until its
    alias time covers t.
    """
    if t_step <= 0:
        raise ValueError("t_step must be positive")
    if grid is None:
        grid = FrequencyGrid.for_params(ep)
    mu0 = initial_state()
    center = build_omega(ep, grid.nu[grid.center_index], grid.nu_prime[grid.center_index])
    leftover = 1.0 - threshold
    full_attempts = 0
    best = 0.0
    n_steps = int(math.floor(t_max / t_step + 1e-9))
    for k in range(1, n_steps + 1):
        t = k * t_step
        scalars = propagate(center, mu0, t)[R:]
        if float(np.sum(np.abs(scalars) ** 2)) >= leftover:
            continue
        fine = grid_covering(grid, t, max_points)
        if 1.0 - evolve_slices(ep, fine, t).unemitted_probability() <= threshold:
            continue
        fld = evolve_field(ep, fine, t)
        p_ab = pair_probability(fld)
        best = max(best, p_ab)
        log.debug("t=%.4g us, M=%d: p_ab=%.6f", t, fine.points, p_ab)
        if p_ab > threshold:
            return fld
        full_attempts += 1
        if full_attempts >= _MAX_FULL_ATTEMPTS:
            raise NoConvergence(
                f"p_ab stuck at {best:.6f} < {threshold} by t={t:.4g} us; "
                "the frequency window truncates the spectrum (widen it)"
            )
    raise NoConvergence(
        f"p_ab did not exceed {threshold} within t_max={t_max} us (best {best:.6f})"
    )


# ------------------------------------------------------------------- domain

def _captured_fraction_fn(fld: AmplitudeField):
    g = fld.grid
    x = g.offsets
    density = np.abs(fld.phi) ** 2
    interp = RegularGridInterpolator((x, x), density, method="linear")
    total = pair_probability(fld)
    if total <= 0:
        raise EmptySpectrum("joint spectrum is identically zero")

    def fraction(half_width: float) -> float:
        # sample at least as densely as the evolution grid
        n = max(_SEARCH_POINTS, 2 * int(math.ceil(half_width / g.spacing)) + 1)
        s = np.linspace(-half_width, half_width, n)
        vals = interp((s[:, None], s[None, :]))
        return float(np.trapezoid(np.trapezoid(vals, s, axis=1), s)) / total

    return fraction


def select_domain(fld: AmplitudeField, theta: float = DEFAULT_THETA,
                  points: int = DEFAULT_POINTS, *, method: str = "exact") -> SchmidtDomain:
    """Smallest square window capturing at least ``theta`` of p_ab.

    ``method="exact"`` re-evaluates Φ on the N×N window from the dynamics
    (needs ``fld.params``); ``"bilinear"`` interpolates the stored field.
    """
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    if points < 2:
        raise ValueError("need at least 2 points per axis")
    if method not in ("exact", "bilinear"):
        raise ValueError(f"unknown resampling method {method!r}")
    g = fld.grid
    fraction = _captured_fraction_fn(fld)

    hi = 2.0 * g.spacing
    while fraction(hi) < theta:
        if hi >= g.half_width:
            raise DomainExceedsGrid(
                f"capturing {theta} of the spectrum needs more than the grid half-width "
                f"{g.half_width:.4g} rad/us"
            )
        hi = min(2.0 * hi, g.half_width)
    # a window reaching into the last grid cell cannot vouch for what lies beyond it
    if hi == g.half_width and fraction(hi - g.spacing) < theta:
        raise DomainExceedsGrid(
            f"capturing {theta} of the spectrum needs the whole grid "
            f"(half-width {g.half_width:.4g} rad/us); widen it"
        )
    lo = 0.5 * hi if hi > 2.0 * g.spacing else 0.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if fraction(mid) >= theta:
            hi = mid
        else:
            lo = mid
    half_width = hi

    s = np.linspace(-half_width, half_width, points)
    if method == "exact":
        ep = fld.params
        if ep is None:
            raise ValueError("exact resampling needs a field that carries its parameters")
        phi = evolve_phi(ep, g.center_a + s[:, None], g.center_b + s[None, :], fld.t)
    else:
        x = g.offsets
        re = RegularGridInterpolator((x, x), fld.phi.real, method="linear")
        im = RegularGridInterpolator((x, x), fld.phi.imag, method="linear")
        pts = (s[:, None], s[None, :])
        phi = re(pts) + 1j * im(pts)

    d = s[1] - s[0]
    captured = float(np.sum(np.abs(phi) ** 2)) * d * d
    return SchmidtDomain(
        half_width=half_width,
        points=points,
        theta=theta,
        captured=captured,
        fraction=fraction(half_width),
        phi=phi,
        method=method,
    )


# ------------------------------------------------------------ decomposition

def build_kernels(phi: np.ndarray, spacing: float) -> tuple[np.ndarray, np.ndarray]:
    """Reduced kernels for the α and β photons as N×N matrices.

    Both carry a factor spacing² (one for the ϖ integral, one Nyström weight),
    so the trace equals the probability inside the window.
    """
    w = spacing * spacing
    k_phi = (phi.conj() @ phi.T) * w
    k_theta = (phi.conj().T @ phi) * w
    return k_phi, k_theta


def _eigh_checked(kernel: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    kernel = np.asarray(kernel)
    scale = max(1.0, float(np.max(np.abs(kernel), initial=0.0)))
    asym = float(np.max(np.abs(kernel - kernel.conj().T), initial=0.0))
    if asym > CLIP_TOL * scale:
        raise NotHermitian(f"kernel deviates from Hermitian by {asym:.3g}")
    vals, vecs = np.linalg.eigh(0.5 * (kernel + kernel.conj().T))
    if vals.size and vals[0] < -CLIP_TOL * scale:
        raise NotPSD(f"kernel has eigenvalue {vals[0]:.3g}")
    order = np.argsort(vals)[::-1]
    return np.clip(vals[order], 0.0, None), vecs[:, order]


def _fix_phase(vecs: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vecs), axis=0)
    pivot = vecs[idx, np.arange(vecs.shape[1])]
    phase = np.where(np.abs(pivot) > 0, pivot / np.where(pivot == 0, 1, np.abs(pivot)), 1.0)
    return vecs / phase


def entanglement_entropy(coefficients) -> float:
    """Von Neumann entropy in bits."""
    lam = np.asarray(coefficients, dtype=float)
    if np.any(lam < -CLIP_TOL):
        raise UnnormalizedInput("Schmidt coefficients must be non-negative")
    total = float(lam.sum())
    if abs(total - 1.0) > 1e-8:
        raise UnnormalizedInput(f"Schmidt coefficients sum to {total!r}, not 1")
    lam = lam[lam > 0]
    return max(0.0, float(-np.sum(lam * np.log2(lam))))


def schmidt_decompose(kernel: np.ndarray, spacing: float = 1.0) -> SchmidtResult:
    """Normalized spectrum and modes of one reduced kernel.

    Modes are returned as columns sampled on the window, scaled so that
    sum(|mode|²) * spacing = 1, with the largest entry real and positive.
    """
    vals, vecs = _eigh_checked(kernel)
    total = float(vals.sum())
    if total <= 0:
        raise EmptySpectrum("kernel has zero trace")
    coeffs = vals / total
    modes = _fix_phase(vecs.conj()) / math.sqrt(spacing)
    return SchmidtResult(
        coefficients=coeffs,
        entropy=entanglement_entropy(coeffs),
        normalization=total,
        modes=modes,
        eigenvalues=vals,
        spacing=spacing,
    )


def decompose_amplitude(phi: np.ndarray, spacing: float) -> SchmidtResult:
    """Schmidt decomposition of a sampled amplitude, with partner modes.

    The β-photon modes are the kernel eigenvectors for K^θ, each rotated by
    the phase that maximizes its overlap with the projection of Φ onto the
    matching α mode.
    """
    k_phi, k_theta = build_kernels(phi, spacing)
    res = schmidt_decompose(k_phi, spacing)
    _, theta_vecs = _eigh_checked(k_theta)
    partners = theta_vecs.conj() / math.sqrt(spacing)
    # projection ∫ conj(φ_j(ν)) Φ(ν, ν') dν is proportional to ϑ_j(ν')
    proj = res.modes.conj().T @ phi * spacing
    overlap = np.sum(partners.T.conj() * proj, axis=1)
    phase = np.where(np.abs(overlap) > 0, overlap / np.where(overlap == 0, 1, np.abs(overlap)), 1.0)
    partners = partners * phase[None, :]
    return SchmidtResult(
        coefficients=res.coefficients,
        entropy=res.entropy,
        normalization=res.normalization,
        modes=res.modes,
        partner_modes=partners,
        eigenvalues=res.eigenvalues,
        spacing=spacing,
    )


def reconstruct(result: SchmidtResult, n_modes: int | None = None) -> np.ndarray:
    """Σ_j sqrt(λ_j) φ_j ⊗ ϑ_j, i.e. the window amplitude divided by sqrt(I)."""
    if result.partner_modes is None:
        raise ValueError("reconstruction needs partner modes")
    n = result.coefficients.size if n_modes is None else n_modes
    amp = np.sqrt(result.coefficients[:n])
    return (result.modes[:, :n] * amp) @ result.partner_modes[:, :n].T


def analyze(ep: EffectiveParams, grid: FrequencyGrid | None = None, *,
            theta: float = DEFAULT_THETA, points: int = DEFAULT_POINTS,
            t_step: float = 0.05, t_max: float = 20.0,
            method: str = "exact") -> SchmidtResult:
    """Completion search, window selection and decomposition in one call."""
    fld = final_state(ep, grid, t_step, t_max=t_max)
    dom = select_domain(fld, theta, points, method=method)
    res = decompose_amplitude(dom.phi, dom.spacing)
    return SchmidtResult(
        coefficients=res.coefficients,
        entropy=res.entropy,
        normalization=res.normalization,
        modes=res.modes,
        partner_modes=res.partner_modes,
        eigenvalues=res.eigenvalues,
        spacing=res.spacing,
        domain=dom,
        t_final=fld.t,
    )
