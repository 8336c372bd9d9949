"""Experiment orchestration: single runs, the factorial grid, metric
recording, persistence, and summary tables.

Per-round order of operations is fixed: assignment weights and supporter
centroids are computed from the pre-update state, the winner is elected and
metrics recorded, then voters move, then candidates. Both updates read the
pre-update state (synchronous update).
"""

from __future__ import annotations

import csv
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import (
    CandidateMechanism,
    DynamicsParams,
    VoterMechanism,
    apply_overrides,
    candidate_step,
    preset_params,
    voter_step,
)
from .electorate import (
    BalanceTag,
    CampBalance,
    ConfigurationError,
    Electorate,
    ElectorateProfile,
    ProfileTag,
    SlateSpec,
    SlateTag,
    camp_asymmetry,
    generate_electorate,
    generate_slate,
    signed_camp_asymmetry,
)
from .geometry import (
    PolicyBox,
    coordinatewise_median,
    pairwise_variance,
    supporter_radius,
    winner_radius,
)
from .rules import RuleSpec, assignment_weights, elect, supporter_centroids
from .bounds import voter_factor

DEFAULT_RULE_CELLS = (
    "plurality",
    "irv",
    "approval",
    "score",
    "condorcet",
    "fractional_0.3",
    "fractional_1",
)

TABLE_SYSTEMS = ("plurality", "score", "condorcet", "fractional_0.3", "fractional_1")


@dataclass(frozen=True)
class RunConfig:
    profile: str = ProfileTag.BRIDGE_CONFLICT.value
    balance: str = BalanceTag.ORIGINAL.value
    slate: str = SlateTag.CENTRIST_LADDER.value
    voter_mechanism: str = VoterMechanism.CONSENSUS_PULL.value
    candidate_mechanism: str = CandidateMechanism.STATIC.value
    rule: str = "plurality"
    n: int = 900
    k: int = 5
    rounds: int = 20
    seed: int = 0
    dynamics_overrides: dict = field(default_factory=dict)
    rule_params: dict = field(default_factory=dict)
    profile_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise ConfigurationError("n must be >= 2")
        if self.rounds < 0:
            raise ConfigurationError("rounds must be >= 0")
        # fail fast on bad enum values, before any simulation work
        ProfileTag(self.profile)
        BalanceTag(self.balance)
        SlateTag(self.slate)
        VoterMechanism(self.voter_mechanism)
        CandidateMechanism(self.candidate_mechanism)
        RuleSpec.from_cell(self.rule)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    def rule_spec(self) -> RuleSpec:
        return RuleSpec.from_cell(self.rule, **self.rule_params)

    def dynamics(self, box: PolicyBox) -> DynamicsParams:
        params = preset_params(self.voter_mechanism, self.candidate_mechanism, box)
        if self.dynamics_overrides:
            params = apply_overrides(params, self.dynamics_overrides)
        return params


@dataclass(frozen=True)
class RoundRecord:
    t: int
    winner: np.ndarray
    winner_index: int | None
    R: float
    S: float
    D: float
    P: float
    A: float
    A_signed: float
    dist_winner_to_mean: float
    dist_winner_to_median: float
    q: float
    candidates: np.ndarray
    centroids: np.ndarray

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "winner": [float(v) for v in self.winner],
            "winner_index": self.winner_index,
            "R": self.R,
            "S": self.S,
            "D": self.D,
            "P": self.P,
            "A": self.A,
            "A_signed": self.A_signed,
            "dist_winner_to_mean": self.dist_winner_to_mean,
            "dist_winner_to_median": self.dist_winner_to_median,
            "q": self.q,
            "candidates": [[float(v) for v in c] for c in self.candidates],
            "centroids": [[float(v) for v in c] for c in self.centroids],
        }


def _record_round(
    t: int,
    elec: Electorate,
    positions: np.ndarray,
    candidates: np.ndarray,
    outcome,
    centroids: np.ndarray,
    params: DynamicsParams,
) -> RoundRecord:
    mean = positions.mean(axis=0)
    median = coordinatewise_median(positions)
    r_t = winner_radius(positions, outcome.winner)
    return RoundRecord(
        t=t,
        winner=outcome.winner,
        winner_index=outcome.winner_index,
        R=r_t,
        S=supporter_radius(candidates, centroids),
        D=pairwise_variance(positions),
        P=pairwise_variance(candidates),
        A=camp_asymmetry(elec, positions),
        A_signed=signed_camp_asymmetry(elec, positions),
        dist_winner_to_mean=float(np.linalg.norm(outcome.winner - mean)),
        dist_winner_to_median=float(np.linalg.norm(outcome.winner - median)),
        q=voter_factor(params.g.lo, params.g.lipschitz(), r_t),
        candidates=candidates.copy(),
        centroids=centroids.copy(),
    )


def run_simulation(cfg: RunConfig, box: PolicyBox | None = None) -> list[RoundRecord]:
    """Simulate one cell; rounds+1 records (t=0 included), deterministic."""
    box = box or PolicyBox.unit(2)
    profile = ElectorateProfile.from_tag(cfg.profile, **cfg.profile_overrides)
    balance = CampBalance.from_tag(cfg.balance)
    rule = cfg.rule_spec()
    params = cfg.dynamics(box)

    ss = np.random.SeedSequence(cfg.seed)
    s_elec, s_slate, s_voter, s_cand = ss.spawn(4)
    elec = generate_electorate(
        profile, balance, cfg.n, seed=s_elec, box=box
    )
    candidates = generate_slate(
        SlateSpec(SlateTag(cfg.slate), k=cfg.k),
        seed=s_slate,
        box=box,
        camp_means=(profile.mean_maj, profile.mean_min),
    )
    rng_voter = np.random.default_rng(s_voter)
    rng_cand = np.random.default_rng(s_cand)

    positions = elec.positions.copy()
    records: list[RoundRecord] = []
    for t in range(cfg.rounds + 1):
        weights = assignment_weights(rule, positions, candidates)
        centroids = supporter_centroids(weights, positions, candidates)
        outcome = elect(rule, positions, candidates, box)
        records.append(
            _record_round(t, elec, positions, candidates, outcome, centroids, params)
        )
        if t == cfg.rounds:
            break
        new_positions = voter_step(positions, outcome.winner, params, rng_voter, box)
        candidates = candidate_step(
            candidates, centroids, positions.mean(axis=0), params, rng_cand, box
        )
        positions = new_positions
    return records


# ---------------------------------------------------------------------------
# Grid
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    profiles: tuple = tuple(p.value for p in ProfileTag)
    balances: tuple = tuple(b.value for b in BalanceTag)
    slates: tuple = tuple(s.value for s in SlateTag)
    voter_mechanisms: tuple = tuple(v.value for v in VoterMechanism)
    candidate_mechanisms: tuple = tuple(c.value for c in CandidateMechanism)
    rules: tuple = DEFAULT_RULE_CELLS
    n: int = 900
    rounds: int = 20
    base_seed: int = 0
    replicates: int = 1
    dynamics_overrides: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "GridSpec":
        data = dict(data)
        for key in ("profiles", "balances", "slates", "voter_mechanisms",
                    "candidate_mechanisms", "rules"):
            if key in data:
                data[key] = tuple(data[key])
        return cls(**data)

    def mu_zero(self) -> "GridSpec":
        """Supplementary grid isolating the candidate-bound conditions."""
        overrides = dict(self.dynamics_overrides)
        overrides["mu"] = 0.0
        return GridSpec(
            profiles=self.profiles,
            balances=self.balances,
            slates=self.slates,
            voter_mechanisms=self.voter_mechanisms,
            candidate_mechanisms=self.candidate_mechanisms,
            rules=self.rules,
            n=self.n,
            rounds=self.rounds,
            base_seed=self.base_seed,
            replicates=self.replicates,
            dynamics_overrides=overrides,
        )

    @property
    def cell_count(self) -> int:
        return (
            len(self.profiles)
            * len(self.balances)
            * len(self.slates)
            * len(self.voter_mechanisms)
            * len(self.candidate_mechanisms)
            * len(self.rules)
        )

    def cells(self):
        """Deterministic (index, RunConfig) enumeration of the grid."""
        idx = 0
        axes = itertools.product(
            self.profiles,
            self.balances,
            self.slates,
            self.voter_mechanisms,
            self.candidate_mechanisms,
            self.rules,
        )
        for profile, balance, slate, vmech, cmech, rule in axes:
            for rep in range(self.replicates):
                yield idx, RunConfig(
                    profile=profile,
                    balance=balance,
                    slate=slate,
                    voter_mechanism=vmech,
                    candidate_mechanism=cmech,
                    rule=rule,
                    n=self.n,
                    rounds=self.rounds,
                    seed=self.base_seed + idx,
                    dynamics_overrides=dict(self.dynamics_overrides),
                )
                idx += 1


SUMMARY_COLUMNS = [
    "cell_index", "profile", "balance", "slate", "voter_mechanism",
    "candidate_mechanism", "rule", "n", "rounds", "seed",
    "R0", "R_end", "S0", "S_end", "D0", "D_end", "P0", "P_end",
    "delta_D", "delta_P", "wc0", "wc_end", "delta_winner_center",
    "wm0", "wm_end", "delta_winner_median", "A_end", "error",
]


def summary_row(cell_index: int, cfg: RunConfig, records: list[RoundRecord]) -> dict:
    first, last = records[0], records[-1]
    return {
        "cell_index": cell_index,
        "profile": cfg.profile,
        "balance": cfg.balance,
        "slate": cfg.slate,
        "voter_mechanism": cfg.voter_mechanism,
        "candidate_mechanism": cfg.candidate_mechanism,
        "rule": cfg.rule,
        "n": cfg.n,
        "rounds": cfg.rounds,
        "seed": cfg.seed,
        "R0": first.R,
        "R_end": last.R,
        "S0": first.S,
        "S_end": last.S,
        "D0": first.D,
        "D_end": last.D,
        "P0": first.P,
        "P_end": last.P,
        "delta_D": last.D - first.D,
        "delta_P": last.P - first.P,
        "wc0": first.dist_winner_to_mean,
        "wc_end": last.dist_winner_to_mean,
        "delta_winner_center": last.dist_winner_to_mean - first.dist_winner_to_mean,
        "wm0": first.dist_winner_to_median,
        "wm_end": last.dist_winner_to_median,
        "delta_winner_median": last.dist_winner_to_median - first.dist_winner_to_median,
        "A_end": last.A,
        "error": "",
    }


def _run_cell(args):
    cell_index, cfg = args
    try:
        records = run_simulation(cfg)
        return cell_index, summary_row(cell_index, cfg, records), records
    except Exception as exc:  # recorded per-cell, the grid never aborts
        row = {col: "" for col in SUMMARY_COLUMNS}
        row.update(cell_index=cell_index, rule=cfg.rule, seed=cfg.seed,
                   error=f"{type(exc).__name__}: {exc}")
        return cell_index, row, None


def write_records_jsonl(records: list[RoundRecord], path: Path):
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict()) + "\n")


def read_records_jsonl(path: Path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


def write_summary_csv(rows: list[dict], path: Path):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(row.get(k, "")) for k in SUMMARY_COLUMNS})


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return value


def run_grid(
    grid: GridSpec,
    workers: int = 1,
    out_dir: Path | None = None,
    write_trajectories: bool = True,
) -> list[dict]:
    """Execute every grid cell; output order is deterministic regardless of
    worker count (merge keyed by cell index)."""
    cells = list(grid.cells())
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, cells, chunksize=16))
    else:
        results = [_run_cell(cell) for cell in cells]
    results.sort(key=lambda item: item[0])
    rows = [row for _, row, _ in results]
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_summary_csv(rows, out_dir / "summary.csv")
        if write_trajectories:
            runs_dir = out_dir / "runs"
            runs_dir.mkdir(exist_ok=True)
            for idx, _, records in results:
                if records is not None:
                    write_records_jsonl(records, runs_dir / f"run_{idx:05d}.jsonl")
    return rows


# ---------------------------------------------------------------------------
# Summaries (figure-facing tables)
# ---------------------------------------------------------------------------

SUMMARIZE_MODES = ("delta", "mechanism_heatmap", "balance_heatmap", "tradeoff")


class SummaryError(ValueError):
    pass


def _quartiles(values: list[float]) -> tuple[float, float, float]:
    arr = np.asarray(values, dtype=float)
    return (
        float(np.median(arr)),
        float(np.percentile(arr, 25)),
        float(np.percentile(arr, 75)),
    )


def summarize_delta(rows: list[dict], runs_dir: Path) -> list[dict]:
    """Per-round (median, IQR) differences from the Plurality baseline, paired
    on every non-rule factor. Metrics follow the four trajectory panels."""
    baseline = {}
    for row in rows:
        key = (row["profile"], row["balance"], row["slate"],
               row["voter_mechanism"], row["candidate_mechanism"])
        if row["rule"] == "plurality":
            baseline[key] = row
    if not baseline:
        raise SummaryError("delta mode requires Plurality baseline runs")
    metrics = {
        "D": "D",
        "P": "P",
        "winner_to_center": "dist_winner_to_mean",
        "winner_to_median": "dist_winner_to_median",
    }
    deltas: dict[tuple, list[float]] = {}
    for row in rows:
        key = (row["profile"], row["balance"], row["slate"],
               row["voter_mechanism"], row["candidate_mechanism"])
        if key not in baseline or row["error"]:
            continue
        base_recs = read_records_jsonl(
            runs_dir / f"run_{int(baseline[key]['cell_index']):05d}.jsonl"
        )
        recs = read_records_jsonl(
            runs_dir / f"run_{int(row['cell_index']):05d}.jsonl"
        )
        for t, (rec, base) in enumerate(zip(recs, base_recs)):
            for name, fld in metrics.items():
                deltas.setdefault((row["rule"], t, name), []).append(
                    rec[fld] - base[fld]
                )
    out = []
    for (rule, t, metric), values in sorted(deltas.items()):
        med, q25, q75 = _quartiles(values)
        out.append({"system": rule, "t": t, "metric": metric,
                    "median": med, "q25": q25, "q75": q75})
    return out


def summarize_mechanism_heatmap(rows: list[dict]) -> list[dict]:
    """Mean start-to-end voter-variance change per system x mechanism pair."""
    acc: dict[tuple, list[float]] = {}
    for row in rows:
        if row["error"]:
            continue
        key = (row["rule"], f"{row['voter_mechanism']}+{row['candidate_mechanism']}")
        acc.setdefault(key, []).append(float(row["delta_D"]))
    return [
        {"system": rule, "mechanism": mech,
         "mean_delta_D": float(np.mean(vals)), "count": len(vals)}
        for (rule, mech), vals in sorted(acc.items())
    ]


def summarize_balance_heatmap(rows: list[dict]) -> list[dict]:
    acc: dict[tuple, list[float]] = {}
    for row in rows:
        if row["error"]:
            continue
        acc.setdefault((row["rule"], row["balance"]), []).append(
            float(row["delta_D"])
        )
    return [
        {"system": rule, "balance": balance,
         "mean_delta_D": float(np.mean(vals)), "count": len(vals)}
        for (rule, balance), vals in sorted(acc.items())
    ]


def summarize_tradeoff(rows: list[dict]) -> list[dict]:
    acc: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        if row["error"]:
            continue
        acc.setdefault(row["rule"], []).append(
            (float(row["delta_D"]), float(row["delta_winner_center"]))
        )
    return [
        {"system": rule,
         "mean_delta_D": float(np.mean([d for d, _ in vals])),
         "mean_delta_winner_center": float(np.mean([w for _, w in vals])),
         "count": len(vals)}
        for rule, vals in sorted(acc.items())
    ]


def summarize(
    rows: list[dict], mode: str, runs_dir: Path | None = None
) -> list[dict]:
    if mode == "delta":
        if runs_dir is None:
            raise SummaryError("delta mode needs the per-run trajectory directory")
        return summarize_delta(rows, Path(runs_dir))
    if mode == "mechanism_heatmap":
        return summarize_mechanism_heatmap(rows)
    if mode == "balance_heatmap":
        return summarize_balance_heatmap(rows)
    if mode == "tradeoff":
        return summarize_tradeoff(rows)
    raise SummaryError(f"unknown summarize mode: {mode}")


def write_table_csv(rows: list[dict], path: Path):
    if not rows:
        raise SummaryError("nothing to write")
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})


def read_summary_csv(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
