"""One-round state transitions: voter and candidate updates, mechanism presets.

Every step is a pure function of (state, params, rng); distinct runs own
distinct rng streams and can execute concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .geometry import PolicyBox, _as_points


class ConfigurationError(ValueError):
    pass


class RateShape(str, Enum):
    RAMP = "ramp"            # monotone linear ramp, saturating at lo + width
    BACKLASH = "backlash"    # rises to a mid-distance peak, then attenuates to 0


@dataclass(frozen=True)
class RateFunction:
    """Distance-dependent rate in [lo, hi], used for both attraction (g) and
    supporter chase (h). The ramp shape is exactly Lipschitz with constant
    (hi - lo) / width; the backlash shape is non-monotone and reports an
    empirical finite-difference constant instead."""

    lo: float
    hi: float
    width: float
    shape: RateShape = RateShape.RAMP

    def __post_init__(self):
        if not 0.0 < self.lo <= self.hi < 1.0:
            raise ConfigurationError("rates must satisfy 0 < lo <= hi < 1")
        if self.width <= 0:
            raise ConfigurationError("ramp width must be positive")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        u = r / self.width
        if self.shape is RateShape.RAMP:
            return self.lo + (self.hi - self.lo) * np.minimum(u, 1.0)
        # backlash: rate rises to hi at the peak (r = width), then attenuates
        # to zero by 1.5 * width; far voters are effectively unmoved
        rise = self.lo + (self.hi - self.lo) * u
        fall = self.hi * np.clip(3.0 - 2.0 * u, 0.0, 1.0)
        return np.where(u <= 1.0, rise, fall)

    @property
    def monotone(self) -> bool:
        return self.shape is RateShape.RAMP

    def lipschitz(self, domain: float | None = None) -> float:
        if self.shape is RateShape.RAMP:
            return (self.hi - self.lo) / self.width
        # empirical max slope over a 1e-3 grid
        hi = domain if domain is not None else 2.5 * self.width
        grid = np.arange(0.0, hi + 1e-3, 1e-3)
        vals = self(grid)
        return float(np.max(np.abs(np.diff(vals)) / 1e-3))


@dataclass(frozen=True)
class DynamicsParams:
    g: RateFunction                 # voter attraction
    h: RateFunction                 # candidate supporter chase
    mu: float = 0.0                 # centroid pull toward the electorate mean
    nu: float = 0.0                 # rival repulsion rate
    rho: float = 0.2                # repulsion magnitude cap
    repulsion_radius: float = 0.25
    sigma_eps: float = 0.01         # voter noise scale (E||eps||^2 <= sigma^2)
    sigma_delta: float = 0.01       # candidate noise scale

    def __post_init__(self):
        if self.mu < 0 or self.nu < 0 or self.rho <= 0 or self.repulsion_radius <= 0:
            raise ConfigurationError("mu, nu >= 0 and rho, repulsion_radius > 0")
        if self.sigma_eps < 0 or self.sigma_delta < 0:
            raise ConfigurationError("noise scales must be nonnegative")


class VoterMechanism(str, Enum):
    CONSENSUS_PULL = "consensus_pull"
    BACKLASH = "backlash"
    SORTING_PRESSURE = "sorting_pressure"


class CandidateMechanism(str, Enum):
    STATIC = "static"
    BROAD_COALITION_CHASE = "broad_coalition_chase"
    BASE_REINFORCEMENT = "base_reinforcement"


def preset_params(
    voter: VoterMechanism | str,
    candidate: CandidateMechanism | str,
    box: PolicyBox | None = None,
) -> DynamicsParams:
    """Concrete parameter table for the 3x3 mechanism grid."""
    voter = VoterMechanism(voter)
    candidate = CandidateMechanism(candidate)
    box = box or PolicyBox.unit(2)
    w = 0.75 * box.diameter
    if voter is VoterMechanism.CONSENSUS_PULL:
        g = RateFunction(0.10, 0.25, w)
    elif voter is VoterMechanism.BACKLASH:
        g = RateFunction(0.04, 0.22, 0.2 * box.diameter, RateShape.BACKLASH)
    else:  # sorting pressure keeps eta_min small
        g = RateFunction(0.02, 0.30, w)
    if candidate is CandidateMechanism.STATIC:
        h = RateFunction(1e-6, 1e-6, w)
        mu, nu = 0.0, 0.0
    elif candidate is CandidateMechanism.BROAD_COALITION_CHASE:
        # slow chase: fast rates collapse every slate onto the electorate
        # mean within a few rounds, erasing the hard/soft assignment contrast
        h = RateFunction(0.03, 0.10, w)
        mu, nu = 0.01, 0.0
    else:  # base reinforcement
        h = RateFunction(0.15, 0.35, w)
        mu, nu = 0.0, 0.05
    return DynamicsParams(g=g, h=h, mu=mu, nu=nu)


def apply_overrides(params: DynamicsParams, overrides: dict) -> DynamicsParams:
    """Config-file overrides; rate bounds address the g/h functions directly."""
    ov = dict(overrides)
    g, h = params.g, params.h
    g_kw = {}
    for key, attr in (("eta_min", "lo"), ("eta_max", "hi"), ("g_width", "width")):
        if key in ov:
            g_kw[attr] = ov.pop(key)
    if g_kw:
        g = replace(g, **g_kw)
    h_kw = {}
    for key, attr in (("lambda_min", "lo"), ("lambda_max", "hi"), ("h_width", "width")):
        if key in ov:
            h_kw[attr] = ov.pop(key)
    if h_kw:
        h = replace(h, **h_kw)
    return replace(params, g=g, h=h, **ov)


def _truncated_noise(rng, shape, scale: float, dim: int) -> np.ndarray:
    """Isotropic Gaussian with E||noise||^2 <= scale^2, clipped at 4 sd."""
    sd = scale / np.sqrt(dim)
    draws = rng.standard_normal(shape)
    return sd * np.clip(draws, -4.0, 4.0)


def voter_step(
    positions,
    winner,
    params: DynamicsParams,
    rng: np.random.Generator,
    box: PolicyBox,
) -> np.ndarray:
    x = _as_points(positions)
    w = np.atleast_1d(np.asarray(winner, dtype=float))
    eta = params.g(np.linalg.norm(x - w, axis=1))[:, None]
    nxt = (1.0 - eta) * x + eta * w
    if params.sigma_eps > 0:
        nxt = nxt + _truncated_noise(rng, x.shape, params.sigma_eps, x.shape[1])
    return box.clamp(nxt)


def repulsion_vector(candidates, j: int, params: DynamicsParams) -> np.ndarray:
    """Push away from the nearest rival inside the repulsion radius; capped at
    rho. Coincident candidates repel along the first axis (fixed direction)."""
    c = _as_points(candidates)
    k, d = c.shape
    if k == 1:
        return np.zeros(d)
    dists = np.linalg.norm(c - c[j], axis=1)
    dists[j] = np.inf
    near = int(np.argmin(dists))
    gap = float(dists[near])
    if gap >= params.repulsion_radius:
        return np.zeros(d)
    magnitude = params.rho * (1.0 - gap / params.repulsion_radius)
    if gap < 1e-12:
        direction = np.zeros(d)
        direction[0] = 1.0
        return params.rho * direction
    return magnitude * (c[j] - c[near]) / gap


def candidate_step(
    candidates,
    centroids,
    voter_mean,
    params: DynamicsParams,
    rng: np.random.Generator,
    box: PolicyBox,
) -> np.ndarray:
    c = _as_points(candidates)
    s = _as_points(centroids)
    if c.shape != s.shape:
        raise ConfigurationError("candidates and centroids must align")
    xbar = np.atleast_1d(np.asarray(voter_mean, dtype=float))
    lam = params.h(np.linalg.norm(c - s, axis=1))[:, None]
    nxt = c + lam * (s - c) + params.mu * (xbar - c)
    if params.nu > 0:
        rep = np.stack([repulsion_vector(c, j, params) for j in range(c.shape[0])])
        nxt = nxt + params.nu * rep
    if params.sigma_delta > 0:
        nxt = nxt + _truncated_noise(rng, c.shape, params.sigma_delta, c.shape[1])
    return box.clamp(nxt)
