"""Spatial layer: PPP base-station fields, hexagonal cluster grid, and the
circular-cluster approximation with its in-cluster BPP serving sets.

Distances are metres throughout; densities are per square metre. The config
text format of the command line speaks per-km^2 and converts before anything
in this module is reached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SQRT3 = math.sqrt(3.0)

# Equivalent circular radius of a hexagon of inradius r_h: matching areas
# (pi r_c^2 = 2 sqrt(3) r_h^2) gives r_c = sqrt(2 sqrt(3) / pi) * r_h.
EQUIV_RADIUS_FACTOR = math.sqrt(2.0 * SQRT3 / math.pi)


@dataclass(frozen=True)
class Environment:
    """Built-up environment statistics driving the blockage model.

    a: fraction of land occupied by buildings (0..1)
    eta: building density, per km^2 (kept in km^2 because the blockage
         formula consumes it that way)
    c: Rayleigh scale of the building height distribution, metres
    """

    a: float = 0.3
    eta: float = 300.0
    c: float = 20.0

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ValueError(f"built-up fraction a={self.a} outside [0, 1]")
        if self.eta <= 0.0:
            raise ValueError(f"building density eta={self.eta} must be > 0")
        if self.c <= 0.0:
            raise ValueError(f"height scale c={self.c} must be > 0")


@dataclass(frozen=True)
class NetworkConfig:
    """Network-wide constants: densities, powers, antenna gains, path loss.

    All values are linear (not dB) and SI: lambda_b per m^2, p_t in W,
    heights in m. Defaults reproduce the baseline urban scenario used by
    the bundled presets.
    """

    lambda_b: float = 20e-6
    p_t: float = 1.0
    h_bs: float = 30.0
    g_s: float = 10.0 ** (-0.301)
    g_m: float = 10.0
    alpha_l: float = 2.09
    alpha_n: float = 3.75
    a_l: float = 10.0 ** (-4.11)
    a_n: float = 10.0 ** (-3.29)
    m_l: int = 3
    m_n: int = 1
    env: Environment = field(default_factory=Environment)

    def __post_init__(self):
        if self.lambda_b <= 0.0:
            raise ValueError(f"lambda_b={self.lambda_b} must be > 0")
        if self.alpha_l >= self.alpha_n:
            raise ValueError(
                f"alpha_l={self.alpha_l} must be < alpha_n={self.alpha_n}"
            )
        if not (self.m_l >= self.m_n >= 1):
            raise ValueError(
                f"need m_l >= m_n >= 1, got m_l={self.m_l}, m_n={self.m_n}"
            )
        if int(self.m_l) != self.m_l or int(self.m_n) != self.m_n:
            raise ValueError("Nakagami shapes m_l, m_n must be integers")
        for name in ("p_t", "g_s", "g_m", "a_l", "a_n"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class ClusterGeometry:
    """Hexagonal cluster grid with inradius r_h (half the distance between
    neighbouring cluster centers). The analysis replaces each hexagon by the
    area-equivalent disk of radius r_c."""

    r_h: float

    def __post_init__(self):
        if self.r_h <= 0.0:
            raise ValueError(f"r_h={self.r_h} must be > 0")

    @property
    def r_c(self) -> float:
        return EQUIV_RADIUS_FACTOR * self.r_h

    @property
    def cell_area(self) -> float:
        return 2.0 * SQRT3 * self.r_h ** 2

    @property
    def circumradius(self) -> float:
        """Corner distance of the hexagon (flat-top orientation)."""
        return 2.0 * self.r_h / SQRT3


@dataclass(frozen=True)
class Window:
    """Origin-centred disk (r_min = 0) or annulus sampling region."""

    r_min: float
    r_max: float

    def __post_init__(self):
        if self.r_min < 0.0 or self.r_max <= self.r_min:
            raise ValueError(
                f"window [{self.r_min}, {self.r_max}] has non-positive area"
            )

    @property
    def area(self) -> float:
        return math.pi * (self.r_max ** 2 - self.r_min ** 2)


@dataclass(frozen=True)
class PointField:
    """One realization of the BS process restricted to a window."""

    points: np.ndarray  # shape (n, 2)
    window: Window

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def radii(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])


def sample_ppp(config, window: Window, rng: np.random.Generator) -> PointField:
    """Sample a homogeneous PPP of intensity config.lambda_b in the window.

    `config` may be a NetworkConfig or a bare density in per-m^2 (handy in
    tests). Count is Poisson(lambda * area); given the count, points are
    i.i.d. uniform on the annulus.
    """
    lam = config.lambda_b if hasattr(config, "lambda_b") else float(config)
    if window.area <= 0.0:
        raise ValueError("window has non-positive area")
    n = rng.poisson(lam * window.area)
    # uniform in an annulus: F(r) ~ r^2 between the bounds
    u = rng.random(n)
    r = np.sqrt(window.r_min ** 2 + u * (window.r_max ** 2 - window.r_min ** 2))
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    pts = np.column_stack((r * np.cos(phi), r * np.sin(phi)))
    return PointField(points=pts, window=window)


def sample_bpp_serving_set(kappa: int, r_c: float, rng: np.random.Generator) -> np.ndarray:
    """Horizontal distances of kappa BSs placed uniformly in the disk of
    radius r_c: each distance has density f(r) = 2 r / r_c^2 on [0, r_c].

    kappa = 0 is rejected; the caller accounts for empty-cluster outage
    separately (the conditional serving set is only defined for kappa >= 1).
    """
    if kappa < 1:
        raise ValueError(f"kappa={kappa} must be >= 1")
    if r_c <= 0.0:
        raise ValueError(f"r_c={r_c} must be > 0")
    return r_c * np.sqrt(rng.random(kappa))


def expected_serving_count(lambda_b: float, r_c: float) -> float:
    """Mean number of BSs inside the collaboration disk, Lambda = lambda_b pi r_c^2."""
    return lambda_b * math.pi * r_c ** 2


def serving_count_pmf(lambda_b: float, r_c: float, kappa) -> float | np.ndarray:
    """P(exactly kappa BSs in the collaboration disk): Poisson pmf with mean
    Lambda = lambda_b * pi * r_c^2. Accepts scalar or array kappa."""
    lam = expected_serving_count(lambda_b, r_c)
    k = np.asarray(kappa)
    from scipy import special

    logp = k * math.log(lam) - lam - special.gammaln(k + 1.0)
    out = np.exp(logp)
    return float(out) if np.isscalar(kappa) else out


def hex_cluster_index(point, r_h: float):
    """Map planar points to the axial (q, r) index of the hexagon containing
    them, flat-top orientation, cell centers 2*r_h apart.

    Uses cube-coordinate rounding, which assigns every point (edges included)
    to exactly one cell with a fixed deterministic tie rule. Accepts a single
    (x, y) pair or arrays of x and y stacked as shape (n, 2).
    """
    if r_h <= 0.0:
        raise ValueError(f"r_h={r_h} must be > 0")
    p = np.asarray(point, dtype=float)
    single = p.ndim == 1
    p = np.atleast_2d(p)
    side = 2.0 * r_h / SQRT3
    q = (2.0 / 3.0) * p[:, 0] / side
    r = (-p[:, 0] / 3.0 + SQRT3 / 3.0 * p[:, 1]) / side
    s = -q - r
    rq, rr, rs = np.round(q), np.round(r), np.round(s)
    dq, dr, ds = np.abs(rq - q), np.abs(rr - r), np.abs(rs - s)
    fix_q = (dq > dr) & (dq > ds)
    fix_r = (~fix_q) & (dr > ds)
    rq[fix_q] = -rr[fix_q] - rs[fix_q]
    rr[fix_r] = -rq[fix_r] - rs[fix_r]
    qi = rq.astype(np.int64)
    ri = rr.astype(np.int64)
    if single:
        return int(qi[0]), int(ri[0])
    return qi, ri
