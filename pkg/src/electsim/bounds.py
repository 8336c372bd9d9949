"""Contraction-factor algebra and empirical verification of the one-step
bounds against recorded trajectories.

Deterministic checks require zero-noise trajectories; the noisy regime is
checked distributionally through the stationary noise floor instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import GeometryError, _as_points

SLACK = 1e-12


class BoundsError(ValueError):
    """Raised when a check's preconditions are violated (noise, hard rules)."""


def voter_factor(eta_min: float, l_eta: float, r: float) -> float:
    """One-step voter contraction factor 1 - eta_min + L_eta * R."""
    return 1.0 - eta_min + l_eta * r


def candidate_factor(
    lambda_min: float, l_h: float, s: float, lambda_max: float, l_s: float
) -> float:
    """Candidate-side factor 1 - lambda_min + L_h * S + lambda_max * L_s."""
    return 1.0 - lambda_min + l_h * s + lambda_max * l_s


def estimate_Ls(candidates, centroids) -> float:
    """Empirical supporter-spread ratio: max ||s_j - s_l|| / ||c_j - c_l||
    over candidate pairs separated by more than 1e-9."""
    c = _as_points(candidates)
    s = _as_points(centroids)
    if c.shape[0] < 2:
        raise GeometryError("supporter-spread estimate needs K >= 2")
    best = 0.0
    for j in range(c.shape[0]):
        for l in range(j + 1, c.shape[0]):
            gap = float(np.linalg.norm(c[j] - c[l]))
            if gap > 1e-9:
                best = max(best, float(np.linalg.norm(s[j] - s[l])) / gap)
    return best


@dataclass
class ContractionReport:
    rows: list[dict] = field(default_factory=list)

    @property
    def all_satisfied(self) -> bool:
        return all(row["satisfied"] for row in self.rows)

    @property
    def max_violation(self) -> float:
        slacks = [row["slack"] for row in self.rows]
        worst = min(slacks) if slacks else 0.0
        return max(0.0, -worst)

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "summary": {
                "all_satisfied": self.all_satisfied,
                "max_violation": self.max_violation,
            },
        }


def check_voter_bound(trajectory, params) -> ContractionReport:
    """Assert D_{t+1} <= q_t^2 D_t + slack along a zero-noise trajectory.

    q_t uses the realized winner radius and the g function's Lipschitz
    constant (closed-form for ramps, empirical for the backlash shape).
    """
    if params.sigma_eps != 0:
        raise BoundsError(
            "voter bound check requires sigma_eps = 0; the noisy regime is "
            "checked via the stationary noise floor, not pathwise"
        )
    l_eta = params.g.lipschitz()
    report = ContractionReport()
    for t in range(len(trajectory) - 1):
        rec, nxt = trajectory[t], trajectory[t + 1]
        q = voter_factor(params.g.lo, l_eta, rec.R)
        rhs = q * q * rec.D + SLACK
        report.rows.append({
            "t": t,
            "value": rec.D,
            "factor": q,
            "bound_rhs": rhs,
            "realized_next": nxt.D,
            "satisfied": nxt.D <= rhs,
            "slack": rhs - nxt.D,
        })
    return report


def check_candidate_bound(
    trajectory, params, rule, with_repulsion: bool = False
) -> ContractionReport:
    """Assert the candidate dispersion bound along a zero-noise trajectory.

    Restricted to the smooth-assignment (fractional) rule: hard Voronoi
    assignment admits no finite supporter-spread constant, so the bound does
    not apply there.
    """
    from .rules import RuleTag

    if rule.tag is not RuleTag.FRACTIONAL:
        raise BoundsError(
            f"candidate bound applies only to smooth-assignment rules; "
            f"'{rule.cell_name}' uses hard Voronoi assignment whose supporter "
            f"centroids jump discontinuously"
        )
    if params.sigma_delta != 0:
        raise BoundsError("candidate bound check requires sigma_delta = 0")
    if params.mu != 0:
        raise BoundsError("candidate bound check requires mu = 0")
    if params.nu > 0 and not with_repulsion:
        raise BoundsError("trajectory has nu > 0; use the repulsion form")
    l_h = params.h.lipschitz()
    extra = 8.0 * params.nu ** 2 * params.rho ** 2
    report = ContractionReport()
    for t in range(len(trajectory) - 1):
        rec, nxt = trajectory[t], trajectory[t + 1]
        l_s = estimate_Ls(rec.candidates, rec.centroids)
        p = candidate_factor(params.h.lo, l_h, rec.S, params.h.hi, l_s)
        if with_repulsion:
            rhs = 2.0 * p * p * rec.P + extra + SLACK
        else:
            rhs = p * p * rec.P + SLACK
        report.rows.append({
            "t": t,
            "value": rec.P,
            "factor": p,
            "bound_rhs": rhs,
            "realized_next": nxt.P,
            "satisfied": nxt.P <= rhs,
            "slack": rhs - nxt.P,
        })
    return report


@dataclass(frozen=True)
class EnvelopeParams:
    a: float       # squared contraction factor, must lie in (0, 1)
    d0: float
    sigma2: float

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise BoundsError("envelope requires 0 < a < 1")


def envelope(e: EnvelopeParams, t: int) -> float:
    """Iterated drift bound a^t D0 + sigma2 (1 - a^t) / (1 - a)."""
    at = e.a ** t
    return at * e.d0 + e.sigma2 * (1.0 - at) / (1.0 - e.a)


def noise_floor(sigma2: float, q_star: float, repulsion: bool = False) -> float:
    """Stationary bound sigma2/(1-q*^2), or sigma2/(1-2p*^2) with repulsion."""
    if repulsion:
        if not q_star < 1.0 / np.sqrt(2.0):
            raise BoundsError(
                "repulsion noise floor needs contraction factor < 1/sqrt(2)"
            )
        return sigma2 / (1.0 - 2.0 * q_star ** 2)
    if not q_star < 1.0:
        raise BoundsError("noise floor needs contraction factor < 1")
    return sigma2 / (1.0 - q_star ** 2)
