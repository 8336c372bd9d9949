"""Electoral rules: five slate rules plus the fractional convex-combination
benchmark, assignment-weight matrices, and supporter centroids.

All ties (vote ties, elimination ties, beatpath ties) resolve to the lowest
candidate index so replays are seed-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .geometry import PolicyBox, _as_points


class RuleTag(str, Enum):
    PLURALITY = "plurality"
    IRV = "irv"
    APPROVAL = "approval"
    SCORE = "score"
    CONDORCET_SCHULZE = "condorcet"
    FRACTIONAL = "fractional"


@dataclass(frozen=True)
class RuleSpec:
    tag: RuleTag
    approval_threshold: float = 0.35
    score_max: float = 10.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.tag is RuleTag.FRACTIONAL and self.sigma <= 0:
            raise ValueError("fractional rule needs sigma > 0")
        if self.tag is RuleTag.APPROVAL and self.approval_threshold <= 0:
            raise ValueError("approval rule needs a positive threshold")

    @property
    def cell_name(self) -> str:
        if self.tag is RuleTag.FRACTIONAL:
            return f"fractional_{self.sigma:g}"
        return self.tag.value

    @classmethod
    def from_cell(cls, name: str, **params) -> "RuleSpec":
        if name.startswith("fractional"):
            spec = cls(RuleTag.FRACTIONAL, **params)
            if "_" in name:
                spec = replace(spec, sigma=float(name.split("_", 1)[1]))
            return spec
        return cls(RuleTag(name), **params)


@dataclass(frozen=True)
class ElectionOutcome:
    winner: np.ndarray
    winner_index: int | None
    tallies: np.ndarray
    weights: np.ndarray  # (n, K) assignment used for supporter centroids


def _dists(voters, candidates) -> np.ndarray:
    v = _as_points(voters)
    c = _as_points(candidates)
    return np.linalg.norm(v[:, None, :] - c[None, :, :], axis=2)


def _rank_positions(dists: np.ndarray) -> np.ndarray:
    """rank[i, j] = position of candidate j on voter i's ballot (0 = top).

    Stable sort breaks distance ties toward the lower candidate index.
    """
    order = np.argsort(dists, axis=1, kind="stable")
    ranks = np.empty_like(order)
    n, k = order.shape
    ranks[np.arange(n)[:, None], order] = np.arange(k)[None, :]
    return ranks


def hard_assignment(voters, candidates) -> np.ndarray:
    """One-hot Voronoi weights; equidistant voters go to the lower index."""
    d = _dists(voters, candidates)
    nearest = np.argmin(d, axis=1)
    w = np.zeros_like(d)
    w[np.arange(d.shape[0]), nearest] = 1.0
    return w


def fractional_weights(voters, candidates, sigma: float) -> np.ndarray:
    """Softmax weights exp(-d^2/sigma^2), row-normalized (max-subtracted)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    d = _dists(voters, candidates)
    logits = -(d ** 2) / (sigma ** 2)
    logits -= logits.max(axis=1, keepdims=True)
    w = np.exp(logits)
    return w / w.sum(axis=1, keepdims=True)


def assignment_weights(rule: RuleSpec, voters, candidates) -> np.ndarray:
    if rule.tag is RuleTag.FRACTIONAL:
        return fractional_weights(voters, candidates, rule.sigma)
    return hard_assignment(voters, candidates)


def supporter_centroids(weights, voters, candidates) -> np.ndarray:
    """Weighted supporter centroid per candidate; empty support falls back to
    the candidate's own position."""
    w = np.asarray(weights, dtype=float)
    v = _as_points(voters)
    c = _as_points(candidates)
    totals = w.sum(axis=0)
    cents = c.copy()
    ok = totals > 1e-12
    cents[ok] = (w[:, ok].T @ v) / totals[ok, None]
    return cents


def _slate_outcome(candidates, winner_index, tallies, weights) -> ElectionOutcome:
    c = _as_points(candidates)
    return ElectionOutcome(
        winner=c[winner_index].copy(),
        winner_index=int(winner_index),
        tallies=np.asarray(tallies, dtype=float),
        weights=weights,
    )


def plurality_winner(voters, candidates) -> ElectionOutcome:
    w = hard_assignment(voters, candidates)
    tallies = w.sum(axis=0)
    return _slate_outcome(candidates, int(np.argmax(tallies)), tallies, w)


def irv_winner(voters, candidates) -> ElectionOutcome:
    d = _dists(voters, candidates)
    ranks = _rank_positions(d)
    k = d.shape[1]
    n = d.shape[0]
    active = list(range(k))
    first_counts = np.zeros(k)
    while True:
        masked = np.where(np.isin(np.arange(k), active)[None, :], ranks, np.inf)
        tops = np.argmin(masked, axis=1)
        first_counts = np.bincount(tops, minlength=k).astype(float)
        if len(active) == 1:
            winner = active[0]
            break
        leader = min(active, key=lambda j: (-first_counts[j], j))
        if first_counts[leader] * 2 > n:
            winner = leader
            break
        # eliminate fewest first-place votes; ties drop the lowest index
        loser = min(active, key=lambda j: (first_counts[j], j))
        active.remove(loser)
    return _slate_outcome(
        candidates, winner, first_counts, hard_assignment(voters, candidates)
    )


def approval_winner(voters, candidates, threshold: float) -> ElectionOutcome:
    if threshold <= 0:
        raise ValueError("approval threshold must be positive")
    d = _dists(voters, candidates)
    approvals = (d <= threshold).astype(float)
    empty = approvals.sum(axis=1) == 0
    if empty.any():
        # voters approving nobody approve their nearest candidate
        nearest = np.argmin(d[empty], axis=1)
        approvals[np.flatnonzero(empty), nearest] = 1.0
    tallies = approvals.sum(axis=0)
    return _slate_outcome(
        candidates, int(np.argmax(tallies)), tallies,
        hard_assignment(voters, candidates),
    )


def score_winner(voters, candidates, box: PolicyBox,
                 score_max: float = 10.0) -> ElectionOutcome:
    d = _dists(voters, candidates)
    scores = score_max * np.clip(1.0 - d / box.diameter, 0.0, None)
    tallies = scores.sum(axis=0)
    return _slate_outcome(
        candidates, int(np.argmax(tallies)), tallies,
        hard_assignment(voters, candidates),
    )


def pairwise_preferences(voters, candidates) -> np.ndarray:
    """pref[a, b] = number of ballots ranking a above b."""
    ranks = _rank_positions(_dists(voters, candidates))
    above = ranks[:, :, None] < ranks[:, None, :]
    return above.sum(axis=0).astype(float)


def schulze_strengths(pref: np.ndarray) -> np.ndarray:
    """Widest-path (beatpath) strengths under winning-votes weighting."""
    k = pref.shape[0]
    p = np.where(pref > pref.T, pref, 0.0)
    np.fill_diagonal(p, 0.0)
    for m in range(k):
        for a in range(k):
            if a == m:
                continue
            p[a] = np.maximum(p[a], np.minimum(p[a, m], p[m]))
            p[a, a] = 0.0
    return p


def condorcet_schulze_winner(voters, candidates) -> ElectionOutcome:
    pref = pairwise_preferences(voters, candidates)
    k = pref.shape[0]
    wins = (pref > pref.T).sum(axis=1).astype(float)
    weights = hard_assignment(voters, candidates)
    if k == 1:
        return _slate_outcome(candidates, 0, wins, weights)
    condorcet = np.flatnonzero(wins == k - 1)
    if condorcet.size:
        return _slate_outcome(candidates, int(condorcet[0]), wins, weights)
    strengths = schulze_strengths(pref)
    dominant = np.all(strengths >= strengths.T, axis=1)
    winner = int(np.argmax(dominant))  # at least one always exists
    return _slate_outcome(candidates, winner, wins, weights)


def fractional_winner(voters, candidates, sigma: float) -> ElectionOutcome:
    w = fractional_weights(voters, candidates, sigma)
    beta = w.mean(axis=0)
    c = _as_points(candidates)
    return ElectionOutcome(
        winner=beta @ c, winner_index=None, tallies=beta, weights=w
    )


def elect(rule: RuleSpec, voters, candidates, box: PolicyBox) -> ElectionOutcome:
    if rule.tag is RuleTag.PLURALITY:
        return plurality_winner(voters, candidates)
    if rule.tag is RuleTag.IRV:
        return irv_winner(voters, candidates)
    if rule.tag is RuleTag.APPROVAL:
        return approval_winner(voters, candidates, rule.approval_threshold)
    if rule.tag is RuleTag.SCORE:
        return score_winner(voters, candidates, box, rule.score_max)
    if rule.tag is RuleTag.CONDORCET_SCHULZE:
        return condorcet_schulze_winner(voters, candidates)
    return fractional_winner(voters, candidates, rule.sigma)
