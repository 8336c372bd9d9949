"""Voter population and candidate slate generation with reproducible seeding."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .geometry import GeometryError, PolicyBox


class ConfigurationError(ValueError):
    """Invalid profile, balance, or slate parameters."""


class ProfileTag(str, Enum):
    BRIDGE_CONFLICT = "bridge_conflict"
    ASYMMETRIC_RESENTMENT = "asymmetric_resentment"
    DIFFUSE = "diffuse"


class BalanceTag(str, Enum):
    ORIGINAL = "original"
    R70_30 = "70_30"
    R50_50 = "50_50"


class SlateTag(str, Enum):
    CENTRIST_LADDER = "centrist_ladder"
    POLARIZED_ELITES = "polarized_elites"


@dataclass(frozen=True)
class ElectorateProfile:
    """Two-camp Gaussian mixture; defaults are package choices, not published.

    The bridge fraction redraws a share of each camp near the midpoint, used
    only by the bridge-conflict profile.
    """

    tag: ProfileTag
    mean_maj: tuple = (0.25, 0.5)
    mean_min: tuple = (0.75, 0.5)
    std_maj: float = 0.08
    std_min: float = 0.08
    bridge_fraction: float = 0.0
    bridge_mean: tuple = (0.5, 0.5)
    bridge_std: float = 0.10

    def __post_init__(self):
        if self.std_maj <= 0 or self.std_min <= 0 or self.bridge_std <= 0:
            raise ConfigurationError("covariance scales must be positive")
        if not 0.0 <= self.bridge_fraction < 1.0:
            raise ConfigurationError("bridge fraction must lie in [0, 1)")

    @classmethod
    def from_tag(cls, tag, **overrides) -> "ElectorateProfile":
        tag = ProfileTag(tag)
        if tag is ProfileTag.BRIDGE_CONFLICT:
            # tight majority bloc facing a more dispersed minority camp, with
            # a small bridge population between them
            base = cls(tag, (0.25, 0.5), (0.75, 0.5), 0.06, 0.12,
                       bridge_fraction=0.10)
        elif tag is ProfileTag.ASYMMETRIC_RESENTMENT:
            base = cls(tag, (0.2, 0.3), (0.7, 0.7), 0.06, 0.12)
        else:
            base = cls(tag, (0.35, 0.5), (0.65, 0.5), 0.20, 0.20)
        return replace(base, **overrides) if overrides else base


@dataclass(frozen=True)
class CampBalance:
    tag: BalanceTag
    majority_fraction: float

    def __post_init__(self):
        if not 0.5 <= self.majority_fraction < 1.0:
            raise ConfigurationError("majority fraction must lie in [0.5, 1)")

    @classmethod
    def from_tag(cls, tag) -> "CampBalance":
        tag = BalanceTag(tag)
        fraction = {
            BalanceTag.ORIGINAL: 0.6,
            BalanceTag.R70_30: 0.7,
            BalanceTag.R50_50: 0.5,
        }[tag]
        return cls(tag, fraction)


@dataclass(frozen=True)
class SlateSpec:
    tag: SlateTag
    k: int = 5
    jitter_std: float = 0.05
    jitter_cap: float = 0.12

    def __post_init__(self):
        if self.k < 2:
            raise ConfigurationError("slate needs at least two candidates")


MAJORITY = 0
MINORITY = 1


@dataclass(frozen=True)
class Electorate:
    positions: np.ndarray          # (n, d)
    camp: np.ndarray               # (n,) in {MAJORITY, MINORITY}
    mean_maj0: np.ndarray
    mean_min0: np.ndarray

    @property
    def n(self) -> int:
        return self.positions.shape[0]


def _sample_truncated(
    rng: np.random.Generator, mean, std, count, box: PolicyBox, max_attempts=1000
) -> np.ndarray:
    """Gaussian draws rejected until inside the box, then clamped as last resort."""
    mean = np.asarray(mean, dtype=float)
    out = rng.normal(mean, std, size=(count, box.dim))
    for _ in range(max_attempts):
        bad = ~np.all((out >= box.lo) & (out <= box.hi), axis=1)
        if not bad.any():
            return out
        out[bad] = rng.normal(mean, std, size=(int(bad.sum()), box.dim))
    return box.clamp(out)


def generate_electorate(
    profile: ElectorateProfile,
    balance: CampBalance,
    n: int,
    seed: int,
    box: PolicyBox | None = None,
) -> Electorate:
    """Sample n voters from the two-camp mixture; deterministic given seed."""
    if n < 2:
        raise ConfigurationError("electorate needs n >= 2 voters")
    box = box or PolicyBox.unit(2)
    rng = np.random.default_rng(seed)
    n_maj = int(round(balance.majority_fraction * n))
    n_min = n - n_maj
    if n_maj == 0 or n_min == 0:
        raise ConfigurationError("camp balance leaves one camp empty")

    blocks = []
    for mean, std, count in (
        (profile.mean_maj, profile.std_maj, n_maj),
        (profile.mean_min, profile.std_min, n_min),
    ):
        pts = _sample_truncated(rng, mean, std, count, box)
        n_bridge = int(round(profile.bridge_fraction * count))
        if n_bridge > 0:
            pts[:n_bridge] = _sample_truncated(
                rng, profile.bridge_mean, profile.bridge_std, n_bridge, box
            )
        blocks.append(pts)

    positions = np.vstack(blocks)
    camp = np.concatenate(
        [np.full(n_maj, MAJORITY, dtype=int), np.full(n_min, MINORITY, dtype=int)]
    )
    return Electorate(
        positions=positions,
        camp=camp,
        mean_maj0=positions[camp == MAJORITY].mean(axis=0),
        mean_min0=positions[camp == MINORITY].mean(axis=0),
    )


def generate_slate(
    spec: SlateSpec,
    seed: int,
    box: PolicyBox | None = None,
    camp_means: tuple | None = None,
) -> np.ndarray:
    """Candidate positions for the given archetype; deterministic given seed."""
    box = box or PolicyBox.unit(2)
    rng = np.random.default_rng(seed)
    if spec.tag is SlateTag.CENTRIST_LADDER:
        # evenly spaced along the main diagonal, symmetric about the box center
        offsets = np.linspace(-0.3, 0.3, spec.k)
        pts = box.center[None, :] + offsets[:, None] * (box.hi - box.lo)[None, :]
        return box.clamp(pts)
    if camp_means is None:
        camp_means = ((0.25, 0.5), (0.75, 0.5))
    anchors = np.asarray(camp_means, dtype=float)
    pts = np.empty((spec.k, box.dim))
    for j in range(spec.k):
        offset = rng.normal(0.0, spec.jitter_std, size=box.dim)
        norm = float(np.linalg.norm(offset))
        if norm > spec.jitter_cap:
            offset *= spec.jitter_cap / norm
        pts[j] = anchors[j % 2] + offset
    return box.clamp(pts)


def _camp_displacements(elec: Electorate, current_positions) -> tuple[float, float]:
    pos = np.asarray(current_positions, dtype=float)
    if pos.shape != elec.positions.shape:
        raise GeometryError("current positions must align with the electorate")
    maj = pos[elec.camp == MAJORITY]
    mino = pos[elec.camp == MINORITY]
    if maj.shape[0] == 0 or mino.shape[0] == 0:
        raise GeometryError("asymmetry statistic needs both camps nonempty")
    d_maj = float(np.linalg.norm(maj.mean(axis=0) - elec.mean_maj0))
    d_min = float(np.linalg.norm(mino.mean(axis=0) - elec.mean_min0))
    return d_maj, d_min


def camp_asymmetry(elec: Electorate, current_positions, eps: float = 1e-9) -> float:
    """Normalized displacement asymmetry in [0, 1]; 0 = symmetric movement."""
    d_maj, d_min = _camp_displacements(elec, current_positions)
    return abs(d_min - d_maj) / (d_min + d_maj + eps)


def signed_camp_asymmetry(
    elec: Electorate, current_positions, eps: float = 1e-9
) -> float:
    """Signed variant in [-1, 1]: positive when the minority camp moved more."""
    d_maj, d_min = _camp_displacements(elec, current_positions)
    return (d_min - d_maj) / (d_min + d_maj + eps)
