"""Two-excitation dynamics on a discretized pair of waveguide continua.

For every frequency pair (ν, ν') the ten amplitudes

    [Φ, Ξα, Ξβ, Θα, Θβ, R, Q, Ya, Yb, X]

obey i dμ/dt = Ω(ν, ν') μ, with μ(0) = e_X (both transmons excited).
Φ is the two-photon amplitude, Ξ/Θ carry one photon in a waveguide while
the second excitation sits in a resonator/transmon, and the last five are
fully localized states.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .errors import InvalidGrid, NonFiniteResult, SliceInconsistency
from .params import EffectiveParams

log = logging.getLogger(__name__)

N_STATES = 10
PHI, XI_A, XI_B, THETA_A, THETA_B, R, Q, Y_A, Y_B, X = range(N_STATES)
STATE_LABELS = ("Phi", "Xi_alpha", "Xi_beta", "Theta_alpha", "Theta_beta",
                "R", "Q", "Y_a", "Y_b", "X")
SCALAR_LABELS = STATE_LABELS[R:]

# Matrices exponentiated per call to scipy; bounds peak memory to a few hundred MB.
_CHUNK = 8192

# Relative tolerance for the slice and scalar independence checks.
SLICE_TOL = 1e-8
# Amplitudes below this are treated as zero when forming relative errors.
_AMPLITUDE_FLOOR = 1e-10


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform symmetric grid of detunings shared by both waveguide axes.

    ``nu = center_a + offsets`` and ``nu_prime = center_b + offsets``; all in
    rad/µs.
    """

    half_width: float
    points: int
    center_a: float
    center_b: float

    def __post_init__(self):
        if self.points < 3 or self.points % 2 == 0:
            raise InvalidGrid(f"grid needs an odd number >= 3 of points, got {self.points}")
        if not (self.half_width > 0 and math.isfinite(self.half_width)):
            raise InvalidGrid(f"half-width must be positive, got {self.half_width}")

    @classmethod
    def for_params(cls, ep: EffectiveParams, points: int = 201,
                   width_factor: float = 8.0) -> "FrequencyGrid":
        """Grid centered on the resonators with W = width_factor * scale.

        The scale is the largest leakage rate unless strong coupling splits
        the lines further out: the dressed doublets sit near ±sqrt(2)·g_1a
        and ±g_2b, so twice those are included.
        """
        if width_factor < 4:
            raise InvalidGrid("width_factor must be at least 4 linewidths")
        kappa = max(ep.kappa_a, ep.kappa_b)
        if kappa == 0.0:
            # lossless systems emit nothing; any finite window will do
            return cls(width_factor * max(ep.g_1a, ep.g_1b, ep.g_2b, 1.0), points,
                       ep.omega_a, ep.omega_b)
        scale = max(kappa, 2.0 * math.sqrt(2.0) * ep.g_1a, 2.0 * ep.g_2b)
        return cls(width_factor * scale, points, ep.omega_a, ep.omega_b)

    def check_width(self, ep: EffectiveParams) -> None:
        need = 4.0 * max(ep.kappa_a, ep.kappa_b)
        if self.half_width < need:
            raise InvalidGrid(
                f"half-width {self.half_width:.4g} rad/us is below 4*max(kappa) = {need:.4g}"
            )

    @property
    def offsets(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points)

    @property
    def nu(self) -> np.ndarray:
        return self.center_a + self.offsets

    @property
    def nu_prime(self) -> np.ndarray:
        return self.center_b + self.offsets

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points - 1)

    @property
    def center_index(self) -> int:
        return self.points // 2

    @property
    def alias_time(self) -> float:
        """Longest time for which the sampled spectrum resolves the emission."""
        return 2.0 * math.pi / self.spacing

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid quadrature weights."""
        w = np.full(self.points, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    def refined(self) -> "FrequencyGrid":
        """Same window with half the spacing."""
        return replace(self, points=2 * self.points - 1)

    def with_half_width(self, half_width: float) -> "FrequencyGrid":
        return replace(self, half_width=half_width)

    def metadata(self) -> dict:
        return {
            "points": self.points,
            "half_width_rad_per_us": self.half_width,
            "spacing_rad_per_us": self.spacing,
            "center_a_rad_per_us": self.center_a,
            "center_b_rad_per_us": self.center_b,
            "alias_time_us": self.alias_time,
        }


def build_omega(ep: EffectiveParams, nu, nu_prime) -> np.ndarray:
    """Evolution matrix for each (ν, ν') pair.

    ``nu`` and ``nu_prime`` broadcast against each other; the result has shape
    ``broadcast_shape + (10, 10)``.
    """
    nu = np.asarray(nu, dtype=float)
    nu_prime = np.asarray(nu_prime, dtype=float)
    shape = np.broadcast_shapes(nu.shape, nu_prime.shape)
    om = np.zeros(shape + (N_STATES, N_STATES), dtype=complex)

    wa = ep.omega_a_tilde
    wb = ep.omega_b_tilde
    w1ge = ep.omega1_ge_bar
    w2ge = ep.omega2_ge
    chi = ep.chi_1b
    g1a, g1b, g2b, ups = ep.g_1a, ep.g_1b, ep.g_2b, ep.upsilon
    fa, fb = ep.f_a, ep.f_b

    om[..., PHI, PHI] = nu + nu_prime
    om[..., PHI, XI_A] = fb
    om[..., PHI, XI_B] = fa

    om[..., XI_A, XI_A] = nu + wb - chi
    om[..., XI_A, THETA_A] = g2b
    om[..., XI_A, R] = fa

    om[..., XI_B, XI_B] = nu_prime + wa
    om[..., XI_B, THETA_B] = g1a
    om[..., XI_B, R] = fb

    om[..., THETA_A, XI_A] = g2b
    om[..., THETA_A, THETA_A] = nu + w2ge
    om[..., THETA_A, Y_A] = fa

    om[..., THETA_B, XI_B] = g1a
    om[..., THETA_B, THETA_B] = nu_prime + w1ge
    om[..., THETA_B, Y_B] = fb

    om[..., R, R] = wa + wb - chi
    om[..., R, Q] = ups
    om[..., R, Y_A] = g2b
    om[..., R, Y_B] = g1a

    om[..., Q, R] = ups
    om[..., Q, Q] = ep.omega1_gf_bar
    om[..., Q, Y_B] = g1b

    om[..., Y_A, R] = g2b
    om[..., Y_A, Y_A] = wa + w2ge
    om[..., Y_A, X] = g1a

    om[..., Y_B, R] = g1a
    om[..., Y_B, Q] = g1b
    om[..., Y_B, Y_B] = wb + w1ge + chi
    om[..., Y_B, X] = g2b

    om[..., X, Y_A] = g1a
    om[..., X, Y_B] = g2b
    om[..., X, X] = w1ge + w2ge
    return om


def initial_state() -> np.ndarray:
    mu = np.zeros(N_STATES, dtype=complex)
    mu[X] = 1.0
    return mu


def propagate(omega: np.ndarray, mu0: np.ndarray, t: float) -> np.ndarray:
    """Return exp(-iΩt) μ0 for one matrix or a stack of matrices.

    The mean real diagonal is factored out as a phase before exponentiating,
    which keeps the Padé argument small when absolute frequencies are large.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    omega = np.asarray(omega, dtype=complex)
    mu0 = np.asarray(mu0, dtype=complex)
    if t == 0:
        return np.broadcast_to(mu0, omega.shape[:-1]).copy()
    shift = np.trace(omega, axis1=-2, axis2=-1).real / omega.shape[-1]
    eye = np.eye(omega.shape[-1])
    gen = -1j * t * (omega - shift[..., None, None] * eye)
    # overflow is reported below as NonFiniteResult rather than as a warning
    with np.errstate(over="ignore", invalid="ignore"):
        u = scipy.linalg.expm(gen)
        mu = np.einsum("...ij,...j->...i", u, mu0) * np.exp(-1j * shift * t)[..., None]
    if not np.all(np.isfinite(mu)):
        raise NonFiniteResult(f"propagation to t={t} produced non-finite amplitudes")
    return mu


def _propagate_initial(omega: np.ndarray, t: float) -> np.ndarray:
    """Propagate e_X through a flat stack of matrices in bounded chunks."""
    out = np.empty(omega.shape[:-1], dtype=complex)
    mu0 = initial_state()
    for start in range(0, omega.shape[0], _CHUNK):
        stop = start + _CHUNK
        out[start:stop] = propagate(omega[start:stop], mu0, t)
    return out


@dataclass(frozen=True, eq=False)
class AmplitudeField:
    """All amplitudes at time ``t`` on ``grid``.

    ``phi[i, j]`` is Φ(ν_i, ν'_j). Ξα/Θα live on ν, Ξβ/Θβ on ν'. ``scalars``
    holds [R, Q, Ya, Yb, X].
    """

    t: float
    grid: FrequencyGrid
    phi: np.ndarray
    xi_alpha: np.ndarray
    xi_beta: np.ndarray
    theta_alpha: np.ndarray
    theta_beta: np.ndarray
    scalars: np.ndarray
    params: EffectiveParams | None = field(default=None, repr=False)

    def scalar(self, label: str) -> complex:
        return complex(self.scalars[SCALAR_LABELS.index(label)])


@dataclass(frozen=True, eq=False)
class SliceState:
    """Everything except Φ, obtained from the center row and column only."""

    t: float
    grid: FrequencyGrid
    xi_alpha: np.ndarray
    xi_beta: np.ndarray
    theta_alpha: np.ndarray
    theta_beta: np.ndarray
    scalars: np.ndarray
    phi_row: np.ndarray
    phi_col: np.ndarray

    def unemitted_probability(self) -> float:
        """Probability not yet in the two-photon sector."""
        w = self.grid.weights
        one_photon = sum(
            float(np.dot(w, np.abs(v) ** 2))
            for v in (self.xi_alpha, self.xi_beta, self.theta_alpha, self.theta_beta)
        )
        return one_photon + float(np.sum(np.abs(self.scalars) ** 2))


def _relative_spread(values: np.ndarray, reference: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(reference), initial=0.0)), _AMPLITUDE_FLOOR)
    return float(np.max(np.abs(values - reference), initial=0.0)) / scale


def grid_covering(grid: FrequencyGrid, t: float, max_points: int = 1601) -> FrequencyGrid:
    """Halve the spacing of ``grid`` until its alias time reaches ``t``.

    Stops early rather than exceed ``max_points`` per axis.
    """
    while grid.alias_time < t and 2 * grid.points - 1 <= max_points:
        grid = grid.refined()
    return grid


def _warn_alias(grid: FrequencyGrid, t: float) -> None:
    if t > grid.alias_time:
        log.warning(
            "t=%.4g us exceeds the grid alias time %.4g us; spectra will carry "
            "wrap-around artifacts (refine the grid)", t, grid.alias_time
        )


def evolve_field(ep: EffectiveParams, grid: FrequencyGrid, t: float,
                 *, check: bool = True) -> AmplitudeField:
    """Propagate every grid pair from e_X to time ``t``."""
    _warn_alias(grid, t)
    m = grid.points
    c = grid.center_index
    omega = build_omega(ep, grid.nu[:, None], grid.nu_prime[None, :])
    mu = _propagate_initial(omega.reshape(-1, N_STATES, N_STATES), t)
    mu = mu.reshape(m, m, N_STATES)

    xi_a = mu[:, c, XI_A]
    xi_b = mu[c, :, XI_B]
    th_a = mu[:, c, THETA_A]
    th_b = mu[c, :, THETA_B]
    scalars = mu[c, c, R:].copy()

    if check:
        checks = (
            ("Xi_alpha", mu[:, :, XI_A], xi_a[:, None]),
            ("Theta_alpha", mu[:, :, THETA_A], th_a[:, None]),
            ("Xi_beta", mu[:, :, XI_B], xi_b[None, :]),
            ("Theta_beta", mu[:, :, THETA_B], th_b[None, :]),
            ("scalars", mu[:, :, R:], scalars[None, None, :]),
        )
        for label, values, ref in checks:
            spread = _relative_spread(values, ref)
            if spread > SLICE_TOL:
                raise SliceInconsistency(
                    f"{label} varies across the grid by {spread:.3g} (relative)"
                )

    return AmplitudeField(
        t=float(t),
        grid=grid,
        phi=np.ascontiguousarray(mu[:, :, PHI]),
        xi_alpha=xi_a.copy(),
        xi_beta=xi_b.copy(),
        theta_alpha=th_a.copy(),
        theta_beta=th_b.copy(),
        scalars=scalars,
        params=ep,
    )


def evolve_slices(ep: EffectiveParams, grid: FrequencyGrid, t: float) -> SliceState:
    """Cheap evolution along the center row and column (2M-1 pairs)."""
    c = grid.center_index
    nu = grid.nu
    nu_p = grid.nu_prime
    col = build_omega(ep, nu, nu_p[c])
    row = build_omega(ep, nu[c], nu_p)
    mu_col = _propagate_initial(col, t)
    mu_row = _propagate_initial(row, t)
    return SliceState(
        t=float(t),
        grid=grid,
        xi_alpha=mu_col[:, XI_A],
        xi_beta=mu_row[:, XI_B],
        theta_alpha=mu_col[:, THETA_A],
        theta_beta=mu_row[:, THETA_B],
        scalars=mu_col[c, R:].copy(),
        phi_row=mu_row[:, PHI],
        phi_col=mu_col[:, PHI],
    )


def evolve_phi(ep: EffectiveParams, nu, nu_prime, t: float) -> np.ndarray:
    """Φ(ν, ν', t) at arbitrary broadcastable frequencies."""
    omega = build_omega(ep, nu, nu_prime)
    shape = omega.shape[:-2]
    mu = _propagate_initial(omega.reshape(-1, N_STATES, N_STATES), t)
    return mu[:, PHI].reshape(shape)
