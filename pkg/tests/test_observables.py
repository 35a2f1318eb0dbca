import numpy as np
import pytest

from conftest import source_params
from tfpairs.dynamics import AmplitudeField, FrequencyGrid, evolve_field
from tfpairs.errors import EmptyDensity, EmptySpectrum
from tfpairs.observables import (
    JointSpectrum,
    TimeDomainDensity,
    branch_sums,
    emission_delay,
    joint_spectrum,
    norm,
    ordering_masses,
    pair_probability,
    populations,
    rank_one_residual,
    ridge_delay,
    sum_frequency_quartiles,
    sum_frequency_variance,
    time_domain,
)


@pytest.fixture(scope="module")
def ep():
    return source_params()


@pytest.fixture(scope="module")
def field_half(ep):
    return evolve_field(ep, FrequencyGrid.for_params(ep), 0.5)


def _synthetic_field(phi, grid, t=1.0):
    m = grid.points
    z = np.zeros(m, complex)
    return AmplitudeField(t, grid, phi, z, z, z, z, np.zeros(5, complex))


def test_initial_populations(ep):
    f = evolve_field(ep, FrequencyGrid.for_params(ep, points=21), 0.0)
    rec = populations(f)
    assert norm(f) == 1.0
    assert rec.P_e1 == rec.P_e2 == 1.0
    assert rec.P_f1 == rec.P_a == rec.P_b == rec.P_alpha == rec.P_beta == rec.p_ab == 0.0


def test_norm_at_half_microsecond(field_half):
    assert norm(field_half) == pytest.approx(1.0, abs=1e-3)


def test_populations_are_consistent(field_half):
    rec = populations(field_half)
    assert rec.norm == pytest.approx(norm(field_half))
    assert rec.p_ab == pytest.approx(pair_probability(joint_spectrum(field_half)))
    assert rec.p_ab <= min(rec.P_alpha, rec.P_beta) + 1e-12
    for v in rec.as_row()[1:]:
        assert -1e-12 <= v <= 1 + 1e-3
    assert set(branch_sums(rec)) == {"transmon1_branch", "transmon2_branch"}


def test_narrower_window_loses_more(ep):
    deficits = []
    for factor in (4, 8, 16):
        # spacing held fixed so only the window changes
        g = FrequencyGrid(factor * ep.kappa_a, 25 * factor + 1, ep.omega_a, ep.omega_b)
        deficits.append(1.0 - norm(evolve_field(ep, g, 0.3)))
    assert deficits[0] > deficits[1] > deficits[2] > 0


def test_zero_spectrum(ep):
    g = FrequencyGrid.for_params(ep, points=11)
    assert pair_probability(JointSpectrum(np.zeros((11, 11)), g)) == 0.0


def test_complement_identity(ep):
    f = evolve_field(ep, FrequencyGrid.for_params(ep), 0.3)
    rec = populations(f)
    rest = rec.norm - rec.p_ab
    assert rec.p_ab == pytest.approx(1.0 - rest, abs=1e-3)


def test_monotone_emission(ep):
    g = FrequencyGrid.for_params(ep, points=101)
    recs = [populations(evolve_field(ep, g, t)) for t in (0.02, 0.05, 0.1, 0.15, 0.2, 0.25)]
    for name in ("P_alpha", "P_beta", "p_ab"):
        vals = [getattr(r, name) for r in recs]
        assert np.all(np.diff(vals) > 0)


def test_ladder_coupling_delays_beta_emission():
    g1b0 = source_params(g_1b=0.0)
    g1b25 = source_params(g_1b=25.0)
    t = 0.05
    a = populations(evolve_field(g1b0, FrequencyGrid.for_params(g1b0, points=101), t))
    b = populations(evolve_field(g1b25, FrequencyGrid.for_params(g1b25, points=101), t))
    assert b.P_beta < 0.5 * a.P_beta
    assert b.P_alpha > b.P_beta


def test_scale_invariance():
    base = source_params()
    s = 2.0
    scaled = source_params(g_1a=5 * s, g_2b=10 * s, kappa_a=25 * s, kappa_b=25 * s,
                           g_1b=25 * s, anharmonicity=400 * s)
    ga = FrequencyGrid.for_params(base, points=101)
    gb = FrequencyGrid.for_params(scaled, points=101)
    ra = populations(evolve_field(base, ga, 0.2))
    rb = populations(evolve_field(scaled, gb, 0.2 / s))
    assert np.allclose(ra.as_row()[1:], rb.as_row()[1:], atol=1e-9)


def test_anticorrelation_metric():
    fields = {}
    for g1b in (0.0, 25.0):
        ep = source_params(g_1b=g1b)
        fields[g1b] = evolve_field(ep, FrequencyGrid.for_params(ep), 0.5)
    widths = {}
    for g1b, f in fields.items():
        q1, q3 = sum_frequency_quartiles(f)
        widths[g1b] = q3 - q1
    assert widths[25.0] < 0.5 * widths[0.0]
    # the variance is dominated by the wings and barely moves
    v0, v25 = (sum_frequency_variance(fields[g]) for g in (0.0, 25.0))
    assert v25 == pytest.approx(v0, rel=0.01)


def test_quartiles_of_symmetric_line():
    g = FrequencyGrid(50.0, 101, 0.0, 0.0)
    x = g.offsets
    # density concentrated on ν + ν' = 0 with a Gaussian profile across it
    s = x[:, None] + x[None, :]
    f = _synthetic_field(np.exp(-(s / 8.0) ** 2 - (x[:, None] / 20.0) ** 2), g)
    q1, q3 = sum_frequency_quartiles(f)
    assert q1 == pytest.approx(-q3, abs=1e-9)
    assert 0 < q3 < 8.0


def test_time_domain_of_separable_gaussian():
    g = FrequencyGrid(200.0, 401, 0.0, 0.0)
    x = g.offsets
    # packets emitted at τ = 0.5 and 0.6 with widths well inside [0, 1]
    u = np.exp(-((x - 3.0) / 30.0) ** 2) * np.exp(-0.5j * x)
    v = np.exp(-((x + 5.0) / 40.0) ** 2) * np.exp(-0.4j * x)
    f = _synthetic_field(np.outer(u, v), g, t=1.0)
    a = time_domain(f, window=(0.0, 1.0), points=301)
    w = g.weights
    kernel = np.exp(1j * np.outer(f.t - a.tau, x)) * w
    expect = np.abs(np.outer(kernel @ u, kernel @ v) / (2 * np.pi)) ** 2
    assert np.allclose(a.density, expect, rtol=1e-10, atol=1e-14)
    assert a.mass == pytest.approx(pair_probability(f), rel=1e-3)
    assert ridge_delay(a) == pytest.approx(0.1, abs=2e-3)


def test_time_domain_mass_matches_pair_probability(field_half):
    a = time_domain(field_half)
    assert a.density.shape == (201, 201)
    assert a.tau[0] == 0.0 and a.tau[-1] == pytest.approx(0.5)
    assert a.mass == pytest.approx(pair_probability(field_half), abs=1e-3)


def test_time_domain_needs_pairs(ep):
    f = evolve_field(ep, FrequencyGrid.for_params(ep, points=21), 0.0)
    with pytest.raises(EmptySpectrum):
        time_domain(f, window=(0.0, 1.0))


def test_independent_chains_factorize():
    ep = source_params(g_1b=0.0)
    f = evolve_field(ep, FrequencyGrid.for_params(ep), 0.5)
    a = time_domain(f)
    assert rank_one_residual(np.sqrt(a.density)) < 1e-6


def test_delay_of_symmetric_density():
    tau = np.linspace(0, 1, 101)
    d = np.exp(-((tau[:, None] - 0.4) ** 2 + (tau[None, :] - 0.4) ** 2) / 0.01)
    a = TimeDomainDensity(d, tau, tau.copy())
    assert emission_delay(a) == pytest.approx(0.0, abs=1e-12)
    assert ridge_delay(a) == pytest.approx(0.0, abs=1e-12)
    later, earlier = ordering_masses(a)
    assert later == pytest.approx(earlier)


def test_delay_of_shifted_line():
    tau = np.linspace(0, 1, 201)
    shift = 0.05
    d = np.exp(-((tau[None, :] - tau[:, None] - shift) / 0.003) ** 2)
    a = TimeDomainDensity(d, tau, tau.copy())
    assert emission_delay(a) == pytest.approx(shift, abs=1e-3)
    assert ridge_delay(a) == pytest.approx(shift, abs=1e-6)


def test_empty_density():
    tau = np.linspace(0, 1, 11)
    with pytest.raises(EmptyDensity):
        emission_delay(TimeDomainDensity(np.zeros((11, 11)), tau, tau))


def test_rank_one_residual():
    x = np.linspace(-1, 1, 30)
    assert rank_one_residual(np.outer(np.exp(-x ** 2), np.cos(x))) < 1e-12
    assert rank_one_residual(np.eye(30)) == pytest.approx(1.0)
    assert rank_one_residual(np.zeros((3, 3))) == 0.0
