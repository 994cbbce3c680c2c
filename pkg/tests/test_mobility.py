import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import quad

from uavcov.analytic import StaticScenario, coverage_static_nearest
from uavcov.geometry import ClusterGeometry, NetworkConfig
from uavcov.mobility import (
    MobilityModel,
    Waypoint,
    _altitude_nodes,
    coverage_mobile_comp,
    coverage_mobile_nearest,
    handover_prob_comp,
    handover_prob_nearest_ub,
    handover_rate_comp,
    handover_rate_nearest,
    mean_altitude,
    mean_cos2_elevation,
    mean_cos_elevation,
    mean_transition_length,
    omega_factor,
    pdf_transition_length,
    sample_trajectory,
    steady_state_altitude_pdf,
    transition_length_cdf,
)

MU = 300e-6
VBAR = 30.0 / 3.6


def model(hbar=15.0, h1=None, vbar=VBAR, beta=0.0, mu=MU):
    lo = 105.0 if h1 is None else h1
    return MobilityModel(mu=mu, h1=lo, h2=lo + hbar, vbar=vbar, beta=beta)


# ---------------------------------------------------------------------------
# transition moments against brute-force double integration
# ---------------------------------------------------------------------------

def _double_oracle(fn, mu, hbar):
    """E[fn(rho, p)] with rho Rayleigh-type and p triangular on [0, hbar]."""
    def inner(p):
        val, _ = quad(lambda rho: fn(rho, p) * 2.0 * math.pi * mu * rho
                      * math.exp(-math.pi * mu * rho ** 2), 0.0, np.inf,
                      limit=200)
        return val
    if hbar == 0.0:
        return inner(0.0)
    val, _ = quad(lambda p: inner(p) * 2.0 * (hbar - p) / hbar ** 2,
                  0.0, hbar, limit=200)
    return val


def test_mean_horizontal_fraction_reference():
    assert mean_cos_elevation(model(15.0)) == \
        pytest.approx(0.95188499541, rel=1e-9)


def test_mean_horizontal_fraction_against_double_quadrature():
    for hbar in (5.0, 15.0, 40.0):
        m = model(hbar)
        oracle = _double_oracle(
            lambda rho, p: rho / math.hypot(rho, p), MU, hbar)
        assert mean_cos_elevation(m) == pytest.approx(oracle, rel=1e-8)


def test_mean_square_fraction_against_double_quadrature():
    m = model(15.0)
    oracle = _double_oracle(
        lambda rho, p: rho ** 2 / (rho ** 2 + p ** 2), MU, 15.0)
    assert mean_cos2_elevation(m) == pytest.approx(oracle, rel=1e-8)
    assert mean_cos2_elevation(m) == pytest.approx(0.915700899869, rel=1e-9)


def test_mean_transition_length_against_double_quadrature():
    m = model(15.0)
    oracle = _double_oracle(lambda rho, p: math.hypot(rho, p), MU, 15.0)
    assert mean_transition_length(m) == pytest.approx(oracle, rel=1e-8)
    assert mean_transition_length(m) == pytest.approx(29.7118054252, rel=1e-9)


def test_degenerate_band_moments():
    m = model(0.0)
    assert mean_cos_elevation(m) == 1.0
    assert mean_cos2_elevation(m) == 1.0
    assert mean_transition_length(m) == \
        pytest.approx(1.0 / (2.0 * math.sqrt(MU)), rel=1e-12)


def test_stretch_factor_against_high_precision():
    import mpmath as mp
    mp.mp.dps = 50

    def oracle(mu, hbar):
        x = mp.sqrt(mp.pi * mu) * hbar
        daw = mp.sqrt(mp.pi) / 2 * mp.exp(-x ** 2) * mp.erfi(x)
        return float((mp.exp(x ** 2) * (2 * x * daw - 1) + 1) / x ** 2)

    for mu, hbar in [(300e-6, 15.0), (300e-6, 50.0), (100e-6, 30.0),
                     (300e-6, 400.0), (300e-6, 5000.0)]:
        assert omega_factor(mu, hbar) == pytest.approx(oracle(mu, hbar),
                                                       rel=1e-10)
    assert omega_factor(MU, 0.0) == 1.0
    assert omega_factor(MU, 15.0) == pytest.approx(1.03690055266, rel=1e-9)


# ---------------------------------------------------------------------------
# transition length distribution
# ---------------------------------------------------------------------------

def test_length_cdf_shape():
    m = model(15.0)
    assert transition_length_cdf(0.0, m) == 0.0
    u = np.linspace(0.0, 300.0, 400)
    c = transition_length_cdf(u, m)
    assert np.all(np.diff(c) >= -1e-12)
    assert transition_length_cdf(2000.0, m) == pytest.approx(1.0, abs=1e-10)


def test_length_pdf_integrates_to_one():
    m = model(15.0)
    a, _ = quad(lambda u: float(pdf_transition_length(u, m)), 0.0, 15.0,
                limit=200)
    b, _ = quad(lambda u: float(pdf_transition_length(u, m)), 15.0, np.inf,
                limit=200)
    assert a + b == pytest.approx(1.0, abs=1e-8)


def test_length_pdf_is_cdf_derivative():
    m = model(15.0)
    for u in (3.0, 10.0, 14.0, 16.0, 40.0, 120.0):
        eps = 1e-5 * max(u, 1.0)
        fd = (transition_length_cdf(u + eps, m)
              - transition_length_cdf(u - eps, m)) / (2.0 * eps)
        assert float(pdf_transition_length(u, m)) == pytest.approx(fd, rel=1e-5)


def test_rayleigh_form_mass_equals_stretch_factor():
    # the documented caveat: the approximate density integrates to Omega
    m = model(15.0)
    val, _ = quad(lambda u: float(pdf_transition_length(u, m,
                                                        form="rayleigh")),
                  0.0, np.inf, limit=200)
    assert val == pytest.approx(omega_factor(MU, 15.0), rel=1e-8)


def test_length_pdf_rejects_unknown_form():
    with pytest.raises(ValueError):
        pdf_transition_length(1.0, model(), form="gaussian")


# ---------------------------------------------------------------------------
# long-run altitude law
# ---------------------------------------------------------------------------

def test_altitude_pdf_endpoints_peak_and_mass():
    m = model(30.0, h1=105.0)
    assert steady_state_altitude_pdf(105.0, m) == 0.0
    assert steady_state_altitude_pdf(135.0, m) == 0.0
    assert steady_state_altitude_pdf(120.0, m) == \
        pytest.approx(1.5 / 30.0, rel=1e-12)
    mass, _ = quad(lambda z: float(steady_state_altitude_pdf(z, m)),
                   105.0, 135.0)
    assert mass == pytest.approx(1.0, abs=1e-10)
    mean, _ = quad(lambda z: z * float(steady_state_altitude_pdf(z, m)),
                   105.0, 135.0)
    assert mean == pytest.approx(120.0, rel=1e-10)
    assert mean_altitude(m) == pytest.approx(120.0, rel=1e-12)


def test_altitude_pdf_degenerate_band():
    m = model(0.0, h1=120.0)
    with pytest.raises(ValueError):
        steady_state_altitude_pdf(120.0, m)
    assert mean_altitude(m) == 120.0


def test_altitude_nodes_integrate_polynomials_exactly():
    m = model(30.0, h1=105.0)
    zs, wz = _altitude_nodes(m, 8)
    assert float(np.sum(wz)) == pytest.approx(1.0, rel=1e-12)
    assert float(np.sum(wz * zs)) == pytest.approx(120.0, rel=1e-12)
    quartic, _ = quad(lambda z: z ** 4
                      * float(steady_state_altitude_pdf(z, m)), 105.0, 135.0)
    assert float(np.sum(wz * zs ** 4)) == pytest.approx(quartic, rel=1e-10)


# ---------------------------------------------------------------------------
# handover laws
# ---------------------------------------------------------------------------

def test_nearest_rate_closed_form_value():
    m = model(0.0, h1=120.0)
    expect = 4.0 * VBAR * math.sqrt(20e-6) / math.pi
    assert handover_rate_nearest(20e-6, m) == pytest.approx(expect, rel=1e-12)


def test_nearest_rate_sqrt_density_scaling():
    m = model(25.0)
    h1x = handover_rate_nearest(10e-6, m)
    h4x = handover_rate_nearest(40e-6, m)
    assert abs(h4x / h1x - 2.0) < 1e-12


def test_nearest_prob_limits():
    m = model(15.0, vbar=0.0)
    assert handover_prob_nearest_ub(100.0, 20e-6, m) == 0.0
    m2 = model(15.0)
    p = np.asarray(handover_prob_nearest_ub(
        np.array([10.0, 100.0, 300.0, 800.0]), 20e-6, m2))
    assert np.all((p >= 0.0) & (p <= 1.0))
    assert np.all(np.diff(p) > 0.0)


def test_cluster_rate_formula():
    m = model(15.0)
    cl = ClusterGeometry(190.0)
    expect = 2.0 * VBAR * mean_cos_elevation(m) / (math.pi * 190.0)
    assert handover_rate_comp(m, cl) == pytest.approx(expect, rel=1e-12)
    assert handover_rate_comp(m, cl) == pytest.approx(0.0265784565394,
                                                      rel=1e-9)


def test_cluster_prob_reference_and_monotone():
    m = model(30.0, h1=105.0)
    expect = {100.0: 0.0368519512746, 190.0: 0.0193957638288,
              400.0: 0.00921298781866}
    vals = []
    for r_h, ref in expect.items():
        got = handover_prob_comp(m, ClusterGeometry(r_h))
        assert got == pytest.approx(ref, rel=1e-8)
        vals.append(got)
    assert vals[0] > vals[1] > vals[2]


def test_cluster_prob_degenerate_band_closed_form():
    m = model(0.0, h1=120.0)
    cl = ClusterGeometry(190.0)
    reach = VBAR * 1.0
    assert handover_prob_comp(m, cl) == pytest.approx(reach / 380.0, rel=1e-12)
    fast = replace(m, vbar=2000.0)
    assert handover_prob_comp(fast, cl) == pytest.approx(1.0, rel=1e-12)


# ---------------------------------------------------------------------------
# trajectory sampling
# ---------------------------------------------------------------------------

def test_trajectory_basic_shape():
    m = model(30.0, h1=105.0)
    traj = sample_trajectory(m, Waypoint(0.0, 0.0, 110.0, 0), 2000,
                             np.random.default_rng(1))
    assert traj.n_epochs == 2000
    assert traj.x.shape == (2001,)
    assert np.all((traj.z[1:] >= 105.0) & (traj.z[1:] <= 135.0))
    hops = traj.horizontal_lengths
    # Rayleigh-type hops: mean 1/(2 sqrt(mu))
    assert hops.mean() == pytest.approx(1.0 / (2.0 * math.sqrt(MU)), rel=0.05)
    assert np.all(traj.lengths_3d >= hops - 1e-12)
    assert np.allclose(traj.dwell_times, traj.lengths_3d / m.vbar)
    ang = traj.elevation_angles
    assert np.all((ang >= 0.0) & (ang <= math.pi / 2.0 + 1e-12))


def test_trajectory_fixed_band_stays_flat():
    m = model(0.0, h1=120.0)
    traj = sample_trajectory(m, Waypoint(0.0, 0.0, 120.0, 0), 50,
                             np.random.default_rng(2))
    assert np.all(traj.z == 120.0)
    assert np.allclose(traj.lengths_3d, traj.horizontal_lengths)


# ---------------------------------------------------------------------------
# mobile coverage evaluators
# ---------------------------------------------------------------------------

CFG = NetworkConfig()
CLUSTERS = ClusterGeometry(190.0)


def test_mobile_nearest_reduces_to_altitude_average_without_penalty():
    scen = StaticScenario(CFG, CLUSTERS, 120.0, -5.0)
    m = model(30.0, h1=105.0, beta=0.0)
    zs, wz = _altitude_nodes(m, 12)
    oracle = sum(w * coverage_static_nearest(replace(scen, h_d=float(z)))
                 for z, w in zip(zs, wz))
    assert coverage_mobile_nearest(scen, m) == pytest.approx(oracle, rel=1e-9)


def test_mobile_nearest_zero_speed_pays_no_penalty():
    scen = StaticScenario(CFG, CLUSTERS, 120.0, -5.0)
    still = model(30.0, h1=105.0, beta=0.5, vbar=0.0)
    free = model(30.0, h1=105.0, beta=0.0, vbar=0.0)
    assert coverage_mobile_nearest(scen, still) == \
        pytest.approx(coverage_mobile_nearest(scen, free), rel=1e-12)


def test_mobile_nearest_penalty_direction():
    scen = StaticScenario(CFG, CLUSTERS, 120.0, -5.0)
    assert coverage_mobile_nearest(scen, model(30.0, h1=105.0, beta=0.5)) < \
        coverage_mobile_nearest(scen, model(30.0, h1=105.0, beta=0.0))


def test_mobile_requires_band_above_bs():
    scen = StaticScenario(CFG, CLUSTERS, 120.0, -5.0)
    low = MobilityModel(mu=MU, h1=10.0, h2=40.0, vbar=VBAR)
    with pytest.raises(ValueError):
        coverage_mobile_nearest(scen, low)
    with pytest.raises(ValueError):
        coverage_mobile_comp(scen, low)


def test_mobile_cluster_beta_ordering():
    scen = StaticScenario(CFG, CLUSTERS, 120.0, -5.0)
    hard = coverage_mobile_comp(scen, model(30.0, h1=105.0, beta=1.0),
                                mc_inner_samples=3000, rng=4, n_z_nodes=4)
    free = coverage_mobile_comp(scen, model(30.0, h1=105.0, beta=0.0),
                                mc_inner_samples=3000, rng=4, n_z_nodes=4)
    assert 0.0 <= hard <= free <= 1.0
