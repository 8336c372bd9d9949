"""Command-line interface: run, grid, oracle, bounds-check, summarize.

Exit code is 0 only when every requested cell completed and every requested
bound check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import check_candidate_bound, check_voter_bound
from .dynamics import DynamicsParams
from .electorate import CampBalance, ElectorateProfile
from .geometry import PolicyBox
from .oracles import OracleSpec, run_oracle_comparison
from .runner import (
    GridSpec,
    RunConfig,
    read_summary_csv,
    run_grid,
    run_simulation,
    summary_row,
    write_records_jsonl,
    write_summary_csv,
    write_table_csv,
    summarize,
    SUMMARIZE_MODES,
)


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def cmd_run(args) -> int:
    data = _load_json(args.config) if args.config else {}
    if args.seed is not None:
        data["seed"] = args.seed
    cfg = RunConfig.from_dict(data)
    records = run_simulation(cfg)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_records_jsonl(records, out_dir / "run.jsonl")
    write_summary_csv([summary_row(0, cfg, records)], out_dir / "summary.csv")
    print(f"wrote {len(records)} round records to {out_dir}")
    return 0


def cmd_grid(args) -> int:
    data = _load_json(args.grid) if args.grid else {}
    if args.seed is not None:
        data["base_seed"] = args.seed
    grid = GridSpec.from_dict(data)
    if args.mu_zero:
        grid = grid.mu_zero()
    rows = run_grid(
        grid,
        workers=args.workers,
        out_dir=Path(args.out_dir),
        write_trajectories=not args.no_trajectories,
    )
    failures = [row for row in rows if row["error"]]
    print(f"{len(rows)} cells, {len(failures)} failed; output in {args.out_dir}")
    return 1 if failures else 0


def cmd_oracle(args) -> int:
    cfg = RunConfig(
        profile="bridge_conflict",
        balance="70_30",
        slate="polarized_elites",
        voter_mechanism="sorting_pressure",
        candidate_mechanism="base_reinforcement",
        dynamics_overrides={"mu": 0.0},
        n=args.n,
        rounds=args.rounds,
        seed=args.seed or 0,
    )
    box = PolicyBox.unit(2)
    rows = run_oracle_comparison(
        replicates=args.replicates,
        n=cfg.n,
        rounds=cfg.rounds,
        params=cfg.dynamics(box),
        profile=ElectorateProfile.from_tag(cfg.profile),
        balance=CampBalance.from_tag(cfg.balance),
        box=box,
        base_seed=cfg.seed,
        spec=OracleSpec(grid_resolution=args.grid_resolution),
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_table_csv(rows, out_dir / "oracle_comparison.csv")
    print(f"wrote {len(rows)} oracle rows to {out_dir}")
    return 0


def cmd_bounds_check(args) -> int:
    data = _load_json(args.config) if args.config else {}
    data.setdefault("dynamics_overrides", {})
    data["dynamics_overrides"].setdefault("sigma_eps", 0.0)
    data["dynamics_overrides"].setdefault("sigma_delta", 0.0)
    if args.seed is not None:
        data["seed"] = args.seed
    cfg = RunConfig.from_dict(data)
    records = run_simulation(cfg)
    params = cfg.dynamics(PolicyBox.unit(2))
    if args.side == "voter":
        report = check_voter_bound(records, params)
    else:
        report = check_candidate_bound(
            records, params, cfg.rule_spec(), with_repulsion=params.nu > 0
        )
    out = Path(args.out) if args.out else None
    payload = json.dumps(report.to_dict(), indent=2)
    if out:
        out.write_text(payload)
    else:
        print(payload)
    print(
        f"{args.side} bound: "
        f"{'satisfied' if report.all_satisfied else 'VIOLATED'} "
        f"(max violation {report.max_violation:.3e})"
    )
    return 0 if report.all_satisfied else 1


def cmd_summarize(args) -> int:
    rows = read_summary_csv(Path(args.results))
    table = summarize(rows, args.mode, runs_dir=args.runs_dir)
    write_table_csv(table, Path(args.out))
    print(f"wrote {len(table)} rows to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="electsim",
        description="Repeated-election polarization simulations and checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one configuration")
    p_run.add_argument("--config", help="JSON run configuration file")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--out-dir", default="out")
    p_run.set_defaults(func=cmd_run)

    p_grid = sub.add_parser("grid", help="run a factorial grid")
    p_grid.add_argument("--grid", help="JSON grid specification file")
    p_grid.add_argument("--workers", type=int, default=1)
    p_grid.add_argument("--seed", type=int)
    p_grid.add_argument("--out-dir", default="out")
    p_grid.add_argument("--mu-zero", action="store_true",
                        help="supplementary grid with centroid pull disabled")
    p_grid.add_argument("--no-trajectories", action="store_true")
    p_grid.set_defaults(func=cmd_grid)

    p_oracle = sub.add_parser("oracle", help="paired oracle comparison study")
    p_oracle.add_argument("--replicates", type=int, default=24)
    p_oracle.add_argument("--n", type=int, default=1400)
    p_oracle.add_argument("--rounds", type=int, default=16)
    p_oracle.add_argument("--grid-resolution", type=float, default=0.02)
    p_oracle.add_argument("--seed", type=int)
    p_oracle.add_argument("--out-dir", default="out")
    p_oracle.set_defaults(func=cmd_oracle)

    p_bounds = sub.add_parser("bounds-check", help="verify contraction bounds")
    p_bounds.add_argument("--config", help="JSON run configuration file")
    p_bounds.add_argument("--side", choices=["voter", "candidate"],
                          default="voter")
    p_bounds.add_argument("--seed", type=int)
    p_bounds.add_argument("--out", help="write the JSON report here")
    p_bounds.set_defaults(func=cmd_bounds_check)

    p_sum = sub.add_parser("summarize", help="aggregate grid results")
    p_sum.add_argument("--results", required=True, help="summary.csv from grid")
    p_sum.add_argument("--runs-dir", help="per-run JSONL directory (delta mode)")
    p_sum.add_argument("--mode", choices=SUMMARIZE_MODES, required=True)
    p_sum.add_argument("--out", required=True)
    p_sum.set_defaults(func=cmd_summarize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
