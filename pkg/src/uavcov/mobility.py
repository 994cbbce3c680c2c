"""3D random-waypoint mobility and everything that hangs off it: the
transition-length law, handover rates and probabilities under nearest and
cluster association, the long-run altitude distribution, and the
handover-penalized coverage of mobile terminals.

The waypoint model draws horizontal hop lengths Rayleigh (CDF
1 - exp(-pi mu rho^2)), azimuths uniform, and waypoint altitudes uniform on
[h1, h2]; travel is at constant speed vbar along the 3D segment.

Conditional moments of the climb angle given a vertical displacement p have
closed forms (modified Bessel for E[cos phi | p], an exponential integral for
E[cos^2 phi | p], an upper incomplete gamma for E[U | p]); marginals follow
by one Gauss-Legendre pass against the triangular density of p. Those
building blocks are all this module's analytics need, which keeps every
formula overflow-safe for arbitrarily large mu * hbar^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, special

from .analytic import (StaticScenario, _as_generator, _nearest_conditional,
                       _radial_gl_nodes, coverage_static_comp_ub)
from .geometry import ClusterGeometry

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class MobilityModel:
    """Random-waypoint parameters of one mobile terminal.

    mu: mobility parameter (per m^2); larger mu means shorter hops
    h1, h2: altitude band (m), waypoints uniform in between
    vbar: constant travel speed (m/s)
    beta: coverage penalty applied when a handover falls in the decision
          horizon (0 = free handovers, 1 = handover kills the connection)
    unit_time: handover decision horizon (s)
    """

    mu: float
    h1: float
    h2: float
    vbar: float
    beta: float = 0.0
    unit_time: float = 1.0

    def __post_init__(self):
        if self.mu <= 0.0:
            raise ValueError(f"mu={self.mu} must be > 0")
        if self.h1 < 0.0 or self.h2 < self.h1:
            raise ValueError(f"need 0 <= h1 <= h2, got h1={self.h1}, h2={self.h2}")
        if self.vbar < 0.0:
            raise ValueError(f"vbar={self.vbar} must be >= 0")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta={self.beta} outside [0, 1]")
        if self.unit_time <= 0.0:
            raise ValueError(f"unit_time={self.unit_time} must be > 0")

    @property
    def hbar(self) -> float:
        return self.h2 - self.h1


@dataclass(frozen=True)
class Waypoint:
    x: float
    y: float
    z: float
    epoch: int


@dataclass(frozen=True)
class Trajectory:
    """A realised waypoint sequence, stored as coordinate arrays (epoch n is
    index n). Derived per-transition quantities are properties."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    vbar: float

    @property
    def n_epochs(self) -> int:
        return self.x.size - 1

    @property
    def waypoints(self) -> list[Waypoint]:
        return [Waypoint(float(xi), float(yi), float(zi), int(i))
                for i, (xi, yi, zi) in enumerate(zip(self.x, self.y, self.z))]

    @property
    def horizontal_lengths(self) -> np.ndarray:
        return np.hypot(np.diff(self.x), np.diff(self.y))

    @property
    def lengths_3d(self) -> np.ndarray:
        return np.sqrt(self.horizontal_lengths ** 2 + np.diff(self.z) ** 2)

    @property
    def elevation_angles(self) -> np.ndarray:
        """Acute climb angle of each transition relative to the horizontal."""
        return np.arctan2(np.abs(np.diff(self.z)), self.horizontal_lengths)

    @property
    def dwell_times(self) -> np.ndarray:
        if self.vbar == 0.0:
            return np.full(self.n_epochs, np.inf)
        return self.lengths_3d / self.vbar


def sample_trajectory(model: MobilityModel, start: Waypoint, n_epochs: int,
                      rng) -> Trajectory:
    """Draw n_epochs waypoint transitions from the given start."""
    if n_epochs < 1:
        raise ValueError("n_epochs must be >= 1")
    gen = _as_generator(rng)
    rho = np.sqrt(-np.log(gen.random(n_epochs)) / (math.pi * model.mu))
    ang = gen.uniform(0.0, 2.0 * math.pi, n_epochs)
    x = start.x + np.concatenate(([0.0], np.cumsum(rho * np.cos(ang))))
    y = start.y + np.concatenate(([0.0], np.cumsum(rho * np.sin(ang))))
    if model.hbar == 0.0:
        z = np.full(n_epochs + 1, model.h1)
    else:
        z = np.concatenate(([start.z], gen.uniform(model.h1, model.h2, n_epochs)))
    return Trajectory(x=x, y=y, z=z, vbar=model.vbar)


# ---------------------------------------------------------------------------
# scaled special functions (overflow-safe building blocks)
# ---------------------------------------------------------------------------

def _e1_scaled(w: np.ndarray) -> np.ndarray:
    """exp(w) * E1(w); asymptotic series beyond w = 50."""
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    small = w < 50.0
    out[small] = np.exp(w[small]) * special.exp1(w[small])
    ws = w[~small]
    s = np.ones_like(ws)
    term = np.ones_like(ws)
    for k in range(1, 9):
        term *= -k / ws
        s += term
    out[~small] = s / ws
    return out


def _gammainc32_scaled(w: np.ndarray) -> np.ndarray:
    """exp(w) * Gamma(3/2, w); asymptotic series beyond w = 600."""
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    small = w < 600.0
    out[small] = (np.exp(w[small]) * special.gammaincc(1.5, w[small])
                  * special.gamma(1.5))
    ws = w[~small]
    s = np.ones_like(ws)
    term = np.ones_like(ws)
    for ratio in (0.5, -0.5, -1.5):
        term *= ratio / ws
        s += term
    out[~small] = np.sqrt(ws) * s
    return out


def _cond_cos(mu: float, p) -> np.ndarray:
    """E[cos phi | vertical displacement p] via scaled Bessel K functions."""
    t = np.pi * mu * np.asarray(p, dtype=float) ** 2 / 2.0
    t = np.maximum(t, 1e-300)
    return t * (special.k1e(t) - special.k0e(t))


def _cond_cos2(mu: float, p) -> np.ndarray:
    """E[cos^2 phi | p] via the scaled exponential integral."""
    w = np.pi * mu * np.asarray(p, dtype=float) ** 2
    w = np.maximum(w, 1e-300)
    return 1.0 - w * _e1_scaled(w)


def _cond_length(mu: float, p) -> np.ndarray:
    """E[3D transition length | p] via the scaled upper incomplete gamma."""
    w = np.pi * mu * np.asarray(p, dtype=float) ** 2
    return _gammainc32_scaled(w) / np.sqrt(np.pi * mu)


def _tri_avg(fn, mu: float, hbar: float, n: int = 96) -> float:
    """Average fn(mu, p) over the triangular density 2(hbar-p)/hbar^2 of the
    absolute vertical displacement p on [0, hbar]."""
    xg, wg = leggauss(n)
    p = 0.5 * hbar * (xg + 1.0)
    w = 2.0 * (hbar - p) / hbar ** 2 * 0.5 * hbar * wg
    return float(np.sum(w * fn(mu, p)))


def mean_cos_elevation(model: MobilityModel) -> float:
    """E[cos phi] over transitions: horizontal speed fraction."""
    if model.hbar == 0.0:
        return 1.0
    return _tri_avg(_cond_cos, model.mu, model.hbar)


def mean_cos2_elevation(model: MobilityModel) -> float:
    if model.hbar == 0.0:
        return 1.0
    return _tri_avg(_cond_cos2, model.mu, model.hbar)


def mean_transition_length(model: MobilityModel) -> float:
    """E[U]: exact mean 3D transition length."""
    if model.hbar == 0.0:
        return 1.0 / (2.0 * math.sqrt(model.mu))
    return _tri_avg(_cond_length, model.mu, model.hbar)


def omega_factor(mu: float, hbar: float) -> float:
    """Vertical-motion stretch factor of the transition-length scale.

    Equals 1 at hbar = 0 and grows with mu * hbar^2; evaluated through the
    Dawson function so the nominally exponential terms cannot overflow until
    the result itself leaves double range.
    """
    if hbar == 0.0:
        return 1.0
    x = math.sqrt(math.pi * mu) * hbar
    x2 = x * x
    d = special.dawsn(x)
    if x2 <= 30.0:
        return (math.exp(x2) * (2.0 * x * d - 1.0) + 1.0) / x2
    # 2 x D(x) - 1 > 0 here; assemble in logs and add the 1/x^2 remainder
    log_main = x2 + math.log(2.0 * x * d - 1.0) - math.log(x2)
    if log_main > 700.0:
        return math.inf
    return math.exp(log_main) + 1.0 / x2


def transition_length_cdf(u, model: MobilityModel):
    """Exact CDF of the 3D transition length U = sqrt(rho^2 + p^2)."""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    mu, hbar = model.mu, model.hbar
    if hbar == 0.0:
        out = -np.expm1(-math.pi * mu * u_arr ** 2)
    else:
        a = math.sqrt(math.pi * mu)
        m = np.minimum(u_arr, hbar)
        e_mu = np.exp(math.pi * mu * (m ** 2 - u_arr ** 2))
        base = (2.0 * hbar * m - m ** 2) / hbar ** 2
        t1 = (2.0 / (hbar * a)) * special.dawsn(a * m) * e_mu
        t2 = (e_mu - np.exp(-math.pi * mu * u_arr ** 2)) / (hbar ** 2 * math.pi * mu)
        out = base - t1 + t2
    out = np.clip(np.where(u_arr <= 0.0, 0.0, out), 0.0, 1.0)
    return float(out[0]) if np.isscalar(u) else out


def pdf_transition_length(u, model: MobilityModel, form: str = "exact"):
    """Density of the 3D transition length.

    form "exact" is the true density of sqrt(rho^2 + p^2) (piecewise closed
    form through the Dawson function; integrates to 1). form "rayleigh"
    returns the Rayleigh-shaped approximation
    omega_factor * 2 pi mu u exp(-pi mu u^2), whose integral is the omega
    factor rather than 1; it is kept for comparison because the rate
    analytics are built on its scale.
    """
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    mu, hbar = model.mu, model.hbar
    pi_mu = math.pi * mu
    if form == "rayleigh":
        out = omega_factor(mu, hbar) * 2.0 * pi_mu * u_arr * np.exp(-pi_mu * u_arr ** 2)
    elif form != "exact":
        raise ValueError(f"unknown form {form!r}")
    elif hbar == 0.0:
        out = 2.0 * pi_mu * u_arr * np.exp(-pi_mu * u_arr ** 2)
    else:
        a = math.sqrt(pi_mu)
        low = u_arr <= hbar
        out = np.empty_like(u_arr)
        ul = u_arr[low]
        out[low] = (-2.0 * ul / hbar ** 2
                    + (4.0 * a * ul / hbar) * special.dawsn(a * ul)
                    + 2.0 * ul * np.exp(-pi_mu * ul ** 2) / hbar ** 2)
        uh = u_arr[~low]
        decay = np.exp(pi_mu * (hbar ** 2 - uh ** 2))
        out[~low] = ((4.0 * pi_mu * uh / (hbar * a)) * special.dawsn(a * hbar) * decay
                     - (2.0 * uh / hbar ** 2) * (decay - np.exp(-pi_mu * uh ** 2)))
    out = np.where(u_arr < 0.0, 0.0, np.maximum(out, 0.0))
    return float(out[0]) if np.isscalar(u) else out


# ---------------------------------------------------------------------------
# handover rates and probabilities
# ---------------------------------------------------------------------------

def handover_rate_nearest(lambda_b: float, model: MobilityModel) -> float:
    """Long-run rate of nearest-BS identity changes (Voronoi boundary
    crossings), per second: 4 vbar sqrt(lambda_b) / (pi * omega)."""
    if lambda_b <= 0.0:
        raise ValueError("lambda_b must be > 0")
    return 4.0 * model.vbar * math.sqrt(lambda_b) / (
        math.pi * omega_factor(model.mu, model.hbar))


def handover_prob_nearest_ub(r0, lambda_b: float, model: MobilityModel):
    """Upper bound on the probability that a terminal at serving distance r0
    changes its nearest BS within one decision horizon.

    The displaced-disk void probability with the displacement's horizontal
    component averaged over the climb-angle law:
    1 - exp(-pi lam (2 r0 d E[cos phi] + d^2 E[cos^2 phi])), d = vbar * unit_time.
    """
    if lambda_b < 0.0:
        raise ValueError("lambda_b must be >= 0")
    r0_arr = np.atleast_1d(np.asarray(r0, dtype=float))
    if np.any(r0_arr < 0.0):
        raise ValueError("r0 must be >= 0")
    d = model.vbar * model.unit_time
    c1 = mean_cos_elevation(model)
    c2 = mean_cos2_elevation(model)
    out = -np.expm1(-math.pi * lambda_b * (2.0 * r0_arr * d * c1 + d * d * c2))
    return float(out[0]) if np.isscalar(r0) else out


def handover_rate_comp(model: MobilityModel, clusters: ClusterGeometry) -> float:
    """Rate of hexagonal cluster-boundary crossings, per second:
    (2 / (pi r_h)) * vbar * E[cos phi]."""
    return 2.0 / (math.pi * clusters.r_h) * model.vbar * mean_cos_elevation(model)


def handover_prob_comp(model: MobilityModel, clusters: ClusterGeometry) -> float:
    """Probability that the terminal leaves its hexagonal cluster within one
    decision horizon, for a uniformly distributed distance-to-boundary.

    Integrates P(horizontal advance > o) over o uniform on [0, 2 r_h]; the
    inner probability marginalises the climb angle in closed form, leaving a
    smooth 1D integrand (erf plus exponential terms).
    """
    reach = model.vbar * model.unit_time
    two_rh = 2.0 * clusters.r_h
    if reach == 0.0:
        return 0.0
    if model.hbar == 0.0:
        return min(reach, two_rh) / two_rh
    mu, hbar = model.mu, model.hbar
    tau = model.unit_time

    def integrand(o):
        s = o / tau  # required horizontal speed
        denom = max(model.vbar ** 2 - s * s, 1e-300)
        q = mu * s * s / denom
        if q < 1e-14:  # o -> 0 limit: crossing is certain
            return 1.0
        rq = math.sqrt(q)
        t1 = math.erf(SQRT_PI * hbar * rq) / (hbar * rq)
        t2 = math.expm1(-math.pi * hbar ** 2 * q) / (math.pi * hbar ** 2 * q)
        return t1 + t2

    upper = min(reach, two_rh)
    # the o -> vbar*tau end is a smooth-but-steep limit; give quad a split there
    pts = [upper * 0.999] if upper >= reach * 0.9999 else None
    val, _ = integrate.quad(integrand, 0.0, upper, limit=200, points=pts)
    return float(min(max(val / two_rh, 0.0), 1.0))


# ---------------------------------------------------------------------------
# steady-state altitude
# ---------------------------------------------------------------------------

def steady_state_altitude_pdf(z, model: MobilityModel):
    """Long-run altitude density 6 (z-h1)(h2-z) / hbar^3.

    Residence favours mid-band altitudes because more transitions span
    them; each transition contributes uniformly over its altitude range
    with weight proportional to that range (a constant-vertical-rate
    traversal). hbar = 0 has no density (point mass at h1) and is
    rejected."""
    if model.hbar == 0.0:
        raise ValueError("degenerate altitude band: steady state is a point "
                         "mass at h1, no density exists")
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    h1, h2, hb = model.h1, model.h2, model.hbar
    out = 6.0 * (z_arr - h1) * (h2 - z_arr) / hb ** 3
    out = np.where((z_arr < h1) | (z_arr > h2), 0.0, out)
    return float(out[0]) if np.isscalar(z) else out


def mean_altitude(model: MobilityModel) -> float:
    """Mean long-run altitude; algebraically (h1+h2)/2."""
    if model.hbar == 0.0:
        return model.h1
    h1, h2, hb = model.h1, model.h2, model.hbar
    return (h2 ** 4 - h1 ** 4 + 2.0 * h1 ** 3 * h2 - 2.0 * h1 * h2 ** 3) / (2.0 * hb ** 3)


def _altitude_nodes(model: MobilityModel, n_nodes: int):
    """GL nodes and weights against the steady-state altitude density; the
    density is quadratic, so modest orders integrate it exactly."""
    if model.hbar == 0.0:
        return np.array([model.h1]), np.array([1.0])
    xg, wg = leggauss(n_nodes)
    z = model.h1 + 0.5 * model.hbar * (xg + 1.0)
    w = 0.5 * model.hbar * wg * steady_state_altitude_pdf(z, model)
    return z, w


# ---------------------------------------------------------------------------
# handover-penalized coverage of mobile terminals
# ---------------------------------------------------------------------------

def _require_airborne(scenario: StaticScenario, model: MobilityModel):
    if model.h1 <= scenario.config.h_bs:
        raise ValueError(
            f"altitude band must sit above the BS height: h1={model.h1}, "
            f"h_bs={scenario.config.h_bs}"
        )


def coverage_mobile_nearest(scenario: StaticScenario, model: MobilityModel, *,
                            interference: str = "cluster",
                            n_r0_nodes: int = 96, n_z_nodes: int = 12) -> float:
    """Coverage of a mobile nearest-associated terminal with handover cost.

    Averages the static conditional coverage over serving distance and the
    long-run altitude, and discounts the covered-and-handover slice by beta.
    The no-handover probability per serving distance comes from
    handover_prob_nearest_ub; coverage and handover are treated as
    conditionally independent given (r0, altitude).
    """
    _require_airborne(scenario, model)
    cfg = scenario.config
    beta = model.beta
    d = model.vbar * model.unit_time
    c1 = mean_cos_elevation(model)
    c2 = mean_cos2_elevation(model)
    r0s, wr = _radial_gl_nodes(cfg.lambda_b, n_r0_nodes)
    zs, wz = _altitude_nodes(model, n_z_nodes)
    no_ho_radial = np.exp(-2.0 * math.pi * cfg.lambda_b * r0s * d * c1)
    prefactor = math.exp(-math.pi * cfg.lambda_b * d * d * c2)
    total = 0.0
    for z, wzk in zip(zs, wz):
        cov = _nearest_conditional(
            cfg, scenario.clusters, scenario.theta_lin, z - cfg.h_bs, r0s,
            interference, "mixed", "los", cfg.g_s, cfg.m_l,
        )
        static_part = float(np.sum(wr * cov))
        ho_part = float(np.sum(wr * cov * no_ho_radial))
        total += wzk * ((1.0 - beta) * static_part + beta * prefactor * ho_part)
    return float(min(max(total, 0.0), 1.0))


def coverage_mobile_comp(scenario: StaticScenario, model: MobilityModel,
                         mc_inner_samples: int = 10000, rng=None, *,
                         shape_mode: str = "matched", n_z_nodes: int = 8) -> float:
    """Coverage of a mobile cluster-served terminal with handover cost.

    The altitude-averaged static cluster bound (terminal pinned to the
    cluster center) scaled by 1 - beta * P(cluster handover in one horizon).
    """
    _require_airborne(scenario, model)
    gen = _as_generator(rng)
    p_ho = handover_prob_comp(model, scenario.clusters)
    zs, wz = _altitude_nodes(model, n_z_nodes)
    children = gen.spawn(len(zs))
    cov = 0.0
    for z, wzk, child in zip(zs, wz, children):
        static = coverage_static_comp_ub(
            replace(scenario, h_d=float(z)), mc_inner_samples, child,
            shape_mode=shape_mode,
        )
        cov += wzk * static
    return float(min(max((1.0 - model.beta * p_ho) * cov, 0.0), 1.0))
