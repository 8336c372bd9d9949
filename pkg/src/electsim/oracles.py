"""Benchmark winner oracles: per-step centrality vs per-step depolarization,
and their paired comparison protocol."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import DynamicsParams, RateFunction, candidate_step, voter_step
from .electorate import (
    CampBalance,
    ElectorateProfile,
    SlateSpec,
    SlateTag,
    generate_electorate,
    generate_slate,
    signed_camp_asymmetry,
)
from .geometry import PolicyBox, _as_points, chebyshev_center, pairwise_variance, winner_radius
from .rules import hard_assignment, supporter_centroids


@dataclass(frozen=True)
class OracleSpec:
    grid_resolution: float = 0.02
    refine_iters: int = 20

    def __post_init__(self):
        if self.grid_resolution <= 0:
            raise ValueError("grid resolution must be positive")


def centrality_oracle(voters, box: PolicyBox) -> np.ndarray:
    """argmin over the box of the winner radius: the Chebyshev center."""
    return chebyshev_center(voters, box).center


def next_round_disagreement(voters, w, g: RateFunction) -> float:
    """Voter variance after the deterministic (noise-free) update toward w."""
    x = _as_points(voters)
    w = np.atleast_1d(np.asarray(w, dtype=float))
    eta = g(np.linalg.norm(x - w, axis=1))[:, None]
    return pairwise_variance((1.0 - eta) * x + eta * w)


def _grid_axes(box: PolicyBox, resolution: float) -> list[np.ndarray]:
    return [
        np.arange(box.lo[axis], box.hi[axis] + resolution / 2, resolution)
        for axis in range(box.dim)
    ]


def depolarization_oracle(
    voters, g: RateFunction, box: PolicyBox, spec: OracleSpec | None = None
) -> np.ndarray:
    """argmin over the box of deterministic next-round disagreement.

    Uniform grid scan (row-major tie-break: first strict improvement wins)
    followed by coordinate-descent refinement with a shrinking step.
    """
    spec = spec or OracleSpec()
    x = _as_points(voters)
    axes = _grid_axes(box, spec.grid_resolution)
    grids = np.meshgrid(*axes, indexing="ij")
    probes = np.stack([grd.ravel() for grd in grids], axis=1)  # row-major
    # vectorized objective over all probes
    d = np.linalg.norm(x[None, :, :] - probes[:, None, :], axis=2)
    eta = g(d)[:, :, None]
    imgs = (1.0 - eta) * x[None, :, :] + eta * probes[:, None, :]
    means = imgs.mean(axis=1, keepdims=True)
    objs = np.mean(np.sum((imgs - means) ** 2, axis=2), axis=1)
    best_idx = int(np.argmin(objs))  # argmin returns the first minimum
    w = probes[best_idx].copy()
    best = float(objs[best_idx])

    step = spec.grid_resolution
    for _ in range(spec.refine_iters):
        improved = False
        for axis in range(box.dim):
            for sign in (1.0, -1.0):
                trial = w.copy()
                trial[axis] += sign * step
                trial = box.clamp(trial)
                val = next_round_disagreement(x, trial, g)
                if val < best - 1e-15:
                    w, best = trial, val
                    improved = True
        if not improved:
            step /= 2.0
    return w


ORACLE_TAGS = ("centrality", "depolarization")


def run_oracle_comparison(
    replicates: int,
    n: int,
    rounds: int,
    params: DynamicsParams,
    profile: ElectorateProfile,
    balance: CampBalance,
    slate: SlateSpec | None = None,
    box: PolicyBox | None = None,
    base_seed: int = 0,
    spec: OracleSpec | None = None,
) -> list[dict]:
    """Paired oracle trajectories; per-round medians and interquartile ranges
    of R, D, and the signed camp asymmetry, one output row per (oracle, t)."""
    box = box or PolicyBox.unit(2)
    slate = slate or SlateSpec(SlateTag.POLARIZED_ELITES)
    spec = spec or OracleSpec()
    series = {
        (tag, t): {"R": [], "D": [], "A": []}
        for tag in ORACLE_TAGS
        for t in range(rounds)
    }
    for rep in range(replicates):
        ss = np.random.SeedSequence(base_seed + rep)
        s_elec, s_slate, s_voter, s_cand = ss.spawn(4)
        elec = generate_electorate(profile, balance, n, seed=s_elec, box=box)
        candidates0 = generate_slate(
            slate, seed=s_slate, box=box,
            camp_means=(profile.mean_maj, profile.mean_min),
        )
        for tag in ORACLE_TAGS:
            # identical child seeds per oracle: paired noise and initial state
            rng_voter = np.random.default_rng(s_voter)
            rng_cand = np.random.default_rng(s_cand)
            positions = elec.positions.copy()
            candidates = candidates0.copy()
            for t in range(rounds):
                if tag == "centrality":
                    w = centrality_oracle(positions, box)
                else:
                    w = depolarization_oracle(positions, params.g, box, spec)
                cell = series[(tag, t)]
                cell["R"].append(winner_radius(positions, w))
                cell["D"].append(pairwise_variance(positions))
                cell["A"].append(signed_camp_asymmetry(elec, positions))
                weights = hard_assignment(positions, candidates)
                centroids = supporter_centroids(weights, positions, candidates)
                new_positions = voter_step(positions, w, params, rng_voter, box)
                candidates = candidate_step(
                    candidates, centroids, positions.mean(axis=0),
                    params, rng_cand, box,
                )
                positions = new_positions
    rows = []
    for tag in ORACLE_TAGS:
        for t in range(rounds):
            cell = series[(tag, t)]
            row = {"oracle": tag, "t": t}
            for name, values in cell.items():
                arr = np.asarray(values)
                row[f"{name}_median"] = float(np.median(arr))
                row[f"{name}_q25"] = float(np.percentile(arr, 25))
                row[f"{name}_q75"] = float(np.percentile(arr, 75))
            rows.append(row)
    return rows
