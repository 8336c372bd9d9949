"""Benchmark winner oracles and the paired comparison protocol."""

from __future__ import annotations

import numpy as np
import pytest

from electsim.dynamics import RateFunction, preset_params
from electsim.electorate import CampBalance, ElectorateProfile
from electsim.geometry import PolicyBox, chebyshev_center, winner_radius
from electsim.oracles import (
    ORACLE_TAGS,
    OracleSpec,
    centrality_oracle,
    depolarization_oracle,
    next_round_disagreement,
    run_oracle_comparison,
)

BOX1 = PolicyBox.unit(1)
BOX2 = PolicyBox.unit(2)


def test_centrality_oracle_is_chebyshev_center():
    rng = np.random.default_rng(0)
    pts = rng.random((30, 2))
    w = centrality_oracle(pts, BOX2)
    assert np.allclose(w, chebyshev_center(pts, BOX2).center)


def test_centrality_oracle_1d_worked_example():
    w = centrality_oracle([0.0, 0.8, 0.9, 1.0], BOX1)
    assert w[0] == pytest.approx(0.5, abs=1e-9)


def test_centrality_oracle_single_voter():
    w = centrality_oracle(np.array([[0.3, 0.7]]), BOX2)
    assert np.allclose(w, [0.3, 0.7])


def test_centrality_oracle_beats_random_probes():
    rng = np.random.default_rng(1)
    pts = rng.random((25, 2))
    w = centrality_oracle(pts, BOX2)
    r = winner_radius(pts, w)
    for probe in rng.random((1000, 2)):
        assert r <= winner_radius(pts, probe) + 1e-6


def test_next_round_disagreement_matches_manual_update():
    rng = np.random.default_rng(2)
    x = rng.random((15, 2))
    g = RateFunction(0.1, 0.3, 0.5)
    w = np.array([0.4, 0.6])
    eta = g(np.linalg.norm(x - w, axis=1))[:, None]
    moved = (1 - eta) * x + eta * w
    mean = moved.mean(axis=0)
    expected = float(np.mean(np.sum((moved - mean) ** 2, axis=1)))
    assert next_round_disagreement(x, w, g) == pytest.approx(expected, abs=1e-14)


def test_depolarization_oracle_uniform_rate_flat_objective():
    # with a constant rate next-round disagreement is (1 - eta)^2 D for every
    # w, so the objective surface is flat up to float rounding
    rng = np.random.default_rng(3)
    pts = rng.random((10, 2))
    g = RateFunction(0.2, 0.2, 1.0)
    w = depolarization_oracle(pts, g, BOX2)
    val = next_round_disagreement(pts, w, g)
    for probe in rng.random((50, 2)):
        assert next_round_disagreement(pts, probe, g) == pytest.approx(
            val, abs=1e-14
        )
    assert BOX2.contains(w[None, :])


def test_depolarization_oracle_single_voter_flat_objective():
    # a lone voter has zero disagreement wherever the winner sits; ties break
    # to the first grid point in row-major order, the box's low corner
    g = RateFunction(0.1, 0.3, 0.5)
    w = depolarization_oracle(np.array([[0.6, 0.6]]), g, BOX2)
    assert np.allclose(w, BOX2.lo)


def test_depolarization_oracle_beats_exhaustive_grid():
    # the oracle's value can only improve on the best coarse grid probe
    rng = np.random.default_rng(4)
    g = RateFunction(0.02, 0.30, 0.75 * BOX2.diameter)
    spec = OracleSpec(grid_resolution=0.05, refine_iters=10)
    for _ in range(5):
        pts = rng.random((20, 2))
        w = depolarization_oracle(pts, g, BOX2, spec)
        best = next_round_disagreement(pts, w, g)
        axis = np.arange(0.0, 1.0001, 0.05)
        for xx in axis:
            for yy in axis:
                assert best <= next_round_disagreement(pts, [xx, yy], g) + 1e-12
        assert BOX2.contains(w[None, :])


def test_depolarization_oracle_two_voters_monotone_rate():
    # two voters symmetric about the center under a monotone ramp: pulling
    # both toward a far common point beats the midpoint, and an independent
    # fine-grid exhaustive search agrees with the oracle
    pts = np.array([[0.3, 0.3], [0.7, 0.7]])
    g = RateFunction(0.02, 0.30, 0.75 * BOX2.diameter)
    w = depolarization_oracle(pts, g, BOX2)
    val_w = next_round_disagreement(pts, w, g)
    axis = np.arange(0.0, 1.0001, 0.01)
    fine_best = min(
        next_round_disagreement(pts, [xx, yy], g) for xx in axis for yy in axis
    )
    assert val_w <= fine_best + 1e-12
    assert val_w < next_round_disagreement(pts, [0.5, 0.5], g)
    # the argmin is a far corner along the voters' own diagonal
    assert np.allclose(w, [1.0, 1.0]) or np.allclose(w, [0.0, 0.0])


def test_oracle_spec_validation():
    with pytest.raises(ValueError):
        OracleSpec(grid_resolution=0.0)


def _comparison(replicates=2, rounds=3, base_seed=0):
    params = preset_params("sorting_pressure", "base_reinforcement", BOX2)
    profile = ElectorateProfile.from_tag("bridge_conflict")
    balance = CampBalance.from_tag("70_30")
    return run_oracle_comparison(
        replicates, 40, rounds, params, profile, balance, base_seed=base_seed
    )


def test_comparison_row_layout():
    rows = _comparison(replicates=2, rounds=3)
    assert len(rows) == len(ORACLE_TAGS) * 3
    keys = {
        "oracle", "t",
        "R_median", "R_q25", "R_q75",
        "D_median", "D_q25", "D_q75",
        "A_median", "A_q25", "A_q75",
    }
    for row in rows:
        assert keys <= set(row)
        assert row["R_q25"] <= row["R_median"] <= row["R_q75"]


def test_comparison_paired_initial_state():
    rows = _comparison(replicates=3, rounds=2)
    by = {(r["oracle"], r["t"]): r for r in rows}
    # both oracles see the same electorate at t = 0
    for stat in ("D_median", "D_q25", "D_q75", "A_median"):
        assert by[("centrality", 0)][stat] == pytest.approx(
            by[("depolarization", 0)][stat], abs=1e-12
        )
    # round-0 centrality radius is the minimax radius of the shared start
    assert by[("centrality", 0)]["R_median"] <= by[
        ("depolarization", 0)
    ]["R_median"] + 1e-12


def test_comparison_round0_radius_is_chebyshev_radius():
    params = preset_params("sorting_pressure", "static", BOX2)
    profile = ElectorateProfile.from_tag("bridge_conflict")
    balance = CampBalance.from_tag("70_30")
    rows = run_oracle_comparison(
        1, 60, 1, params, profile, balance, base_seed=5
    )
    from electsim.electorate import generate_electorate

    ss = np.random.SeedSequence(5)
    s_elec = ss.spawn(4)[0]
    elec = generate_electorate(profile, balance, 60, seed=s_elec, box=BOX2)
    expected = chebyshev_center(elec.positions, BOX2).radius
    cent0 = [r for r in rows if r["oracle"] == "centrality" and r["t"] == 0][0]
    assert cent0["R_median"] == pytest.approx(expected, abs=1e-12)


def test_comparison_determinism():
    a = _comparison(replicates=2, rounds=2, base_seed=9)
    b = _comparison(replicates=2, rounds=2, base_seed=9)
    assert a == b
