"""Propagation layer: blockage-driven LoS probability, distance path gain,
and Nakagami small-scale fading sampled as unit-mean Gamma channel power.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Environment, NetworkConfig


@dataclass(frozen=True)
class LinkGeometry:
    """A single air-to-ground link: horizontal distance r and height
    difference h between the airborne terminal and the BS antenna.
    Either field may be an array for vectorised evaluation."""

    r: float | np.ndarray
    h: float | np.ndarray

    def __post_init__(self):
        if np.any(np.asarray(self.r) < 0.0):
            raise ValueError("horizontal distance r must be >= 0")

    @property
    def distance_3d(self):
        return np.sqrt(np.asarray(self.r) ** 2 + np.asarray(self.h) ** 2)


@dataclass(frozen=True)
class FadingSpec:
    """Nakagami-m envelope, represented by its Gamma(m, 1/m) power law."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"Nakagami shape m={self.m} must be an integer >= 1")


def blockage_step(env: Environment) -> float:
    """Horizontal distance per potentially blocking building:
    1000 / sqrt(a * eta) metres (eta is given per km^2)."""
    return 1000.0 / np.sqrt(env.a * env.eta)


def los_probability(link: LinkGeometry, h_bs: float, env: Environment):
    """Probability that the link is line-of-sight.

    A link of horizontal length r crosses m + 1 = floor(r / step) building
    sites; the n-th site must stay below the ray height
        h_n = h_bs + h * (n + 1/2) / (m + 1),
    each independently Rayleigh(c) distributed, so

        P_l = prod_n (1 - exp(-h_n^2 / (2 c^2))).

    Returns 1 for r < step (empty product). Vectorised over link.r.
    """
    r = np.atleast_1d(np.asarray(link.r, dtype=float))
    h = float(np.asarray(link.h))
    if h <= 0.0:
        raise ValueError("los_probability requires a positive height difference")
    step = blockage_step(env)
    counts = np.floor(r / step).astype(int)
    out = np.ones_like(r)
    two_c2 = 2.0 * env.c ** 2
    for j in np.unique(counts):
        if j < 1:
            continue
        heights = h_bs + h * (np.arange(j) + 0.5) / j
        val = np.prod(-np.expm1(-heights ** 2 / two_c2))
        out[counts == j] = val
    return float(out[0]) if np.isscalar(link.r) else out


class LosTable:
    """Precomputed LoS probabilities per blockage step for one fixed height
    difference. Lookup cost is a single integer index, which is what the
    interference quadrature and the MC samplers need.

    The table is built out to where P_l falls below `floor` (default 1e-18);
    beyond that the stored tail value is returned, which is zero for every
    practical purpose.
    """

    def __init__(self, h: float, h_bs: float, env: Environment, floor: float = 1e-18):
        if h <= 0.0:
            raise ValueError("height difference must be positive")
        self.h = float(h)
        self.h_bs = float(h_bs)
        self.env = env
        self.step = blockage_step(env)
        two_c2 = 2.0 * env.c ** 2
        vals = [1.0]
        j = 1
        while vals[-1] > floor:
            heights = h_bs + h * (np.arange(j) + 0.5) / j
            vals.append(float(np.prod(-np.expm1(-heights ** 2 / two_c2))))
            j += 1
            if j > 500000:  # safety stop, never reached for sane geometry
                break
        self.values = np.asarray(vals)

    def __call__(self, r):
        idx = np.minimum(
            (np.asarray(r, dtype=float) / self.step).astype(int),
            len(self.values) - 1,
        )
        return self.values[idx]


def path_gain(link: LinkGeometry, kind: str, antenna_gain: float, config: NetworkConfig):
    """Distance-dependent power gain zeta_v = A_v * G * (r^2 + h^2)^(-alpha_v/2).

    kind is "los" or "nlos" and selects (A_l, alpha_l) or (A_n, alpha_n).
    """
    d2 = np.asarray(link.r, dtype=float) ** 2 + np.asarray(link.h, dtype=float) ** 2
    if np.any(d2 <= 0.0):
        raise ValueError("zero 3D link distance")
    if kind == "los":
        a_v, alpha_v = config.a_l, config.alpha_l
    elif kind == "nlos":
        a_v, alpha_v = config.a_n, config.alpha_n
    else:
        raise ValueError(f"kind must be 'los' or 'nlos', got {kind!r}")
    return a_v * antenna_gain * d2 ** (-alpha_v / 2.0)


def sample_power_fading(spec: FadingSpec, rng: np.random.Generator, size=None):
    """Channel power chi ~ Gamma(m, 1/m): unit mean, variance 1/m.
    m = 1 recovers the exponential power of Rayleigh fading."""
    return rng.gamma(spec.m, 1.0 / spec.m, size)
