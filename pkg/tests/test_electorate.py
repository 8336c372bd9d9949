"""Electorate sampling, slate archetypes, and camp asymmetry statistics."""

from __future__ import annotations

import numpy as np
import pytest

from electsim.electorate import (
    MAJORITY,
    MINORITY,
    BalanceTag,
    CampBalance,
    ConfigurationError,
    ElectorateProfile,
    ProfileTag,
    SlateSpec,
    SlateTag,
    camp_asymmetry,
    generate_electorate,
    generate_slate,
    signed_camp_asymmetry,
)
from electsim.geometry import PolicyBox

BOX = PolicyBox.unit(2)


def _elec(profile="bridge_conflict", balance="50_50", n=900, seed=0):
    return generate_electorate(
        ElectorateProfile.from_tag(profile),
        CampBalance.from_tag(balance),
        n,
        seed,
        BOX,
    )


def test_camp_sizes_50_50():
    elec = _elec(balance="50_50", n=900)
    assert int((elec.camp == MAJORITY).sum()) == 450
    assert int((elec.camp == MINORITY).sum()) == 450


def test_camp_sizes_70_30():
    elec = _elec(balance="70_30", n=900)
    assert int((elec.camp == MAJORITY).sum()) == 630
    assert int((elec.camp == MINORITY).sum()) == 270


def test_positions_inside_box_all_profiles():
    for profile in ProfileTag:
        for balance in BalanceTag:
            elec = _elec(profile.value, balance.value, n=300, seed=5)
            assert BOX.contains(elec.positions)


def test_electorate_determinism():
    a = _elec(seed=42)
    b = _elec(seed=42)
    assert np.array_equal(a.positions, b.positions)
    assert np.array_equal(a.camp, b.camp)
    c = _elec(seed=43)
    assert not np.array_equal(a.positions, c.positions)
    # camp sizes do not depend on the seed
    assert np.array_equal(a.camp, c.camp)


def test_camp_means_recorded_at_generation():
    elec = _elec(seed=7)
    assert np.allclose(
        elec.mean_maj0, elec.positions[elec.camp == MAJORITY].mean(axis=0)
    )
    assert np.allclose(
        elec.mean_min0, elec.positions[elec.camp == MINORITY].mean(axis=0)
    )


def test_invalid_configurations_raise():
    with pytest.raises(ConfigurationError):
        ElectorateProfile.from_tag("bridge_conflict", std_maj=0.0)
    with pytest.raises(ConfigurationError):
        ElectorateProfile.from_tag("bridge_conflict", bridge_fraction=1.0)
    with pytest.raises(ConfigurationError):
        CampBalance(BalanceTag.ORIGINAL, 0.3)
    with pytest.raises(ConfigurationError):
        SlateSpec(SlateTag.CENTRIST_LADDER, k=1)
    with pytest.raises(ConfigurationError):
        _elec(n=1)


def test_centrist_ladder_collinear_through_center():
    slate = generate_slate(SlateSpec(SlateTag.CENTRIST_LADDER, k=5), seed=0, box=BOX)
    assert slate.shape == (5, 2)
    assert np.allclose(slate[2], BOX.center)
    # all points on the main diagonal, evenly spaced
    diffs = np.diff(slate, axis=0)
    assert np.allclose(diffs, diffs[0], atol=1e-12)
    assert np.allclose(slate[:, 0], slate[:, 1])


def test_centrist_ladder_ignores_seed():
    a = generate_slate(SlateSpec(SlateTag.CENTRIST_LADDER, k=5), seed=0, box=BOX)
    b = generate_slate(SlateSpec(SlateTag.CENTRIST_LADDER, k=5), seed=99, box=BOX)
    assert np.array_equal(a, b)


def test_polarized_elites_near_camp_anchors():
    means = ((0.25, 0.5), (0.75, 0.5))
    slate = generate_slate(
        SlateSpec(SlateTag.POLARIZED_ELITES, k=4), seed=3, box=BOX, camp_means=means
    )
    assert slate.shape == (4, 2)
    for anchor in means:
        near = np.linalg.norm(slate - np.asarray(anchor), axis=1) < 0.15
        assert int(near.sum()) >= 2
    assert BOX.contains(slate)


def test_polarized_elites_determinism():
    spec = SlateSpec(SlateTag.POLARIZED_ELITES, k=4)
    a = generate_slate(spec, seed=11, box=BOX)
    b = generate_slate(spec, seed=11, box=BOX)
    assert np.array_equal(a, b)
    c = generate_slate(spec, seed=12, box=BOX)
    assert not np.array_equal(a, c)


def test_camp_asymmetry_zero_without_movement():
    elec = _elec(seed=1)
    assert camp_asymmetry(elec, elec.positions) == pytest.approx(0.0, abs=1e-12)
    assert signed_camp_asymmetry(elec, elec.positions) == pytest.approx(
        0.0, abs=1e-12
    )


def test_camp_asymmetry_one_sided_movement():
    elec = _elec(seed=2)
    moved = elec.positions.copy()
    moved[elec.camp == MINORITY] += np.array([0.05, 0.0])
    assert camp_asymmetry(elec, moved, eps=0.0) == pytest.approx(1.0, abs=1e-6)
    assert signed_camp_asymmetry(elec, moved, eps=0.0) == pytest.approx(
        1.0, abs=1e-6
    )


def test_camp_asymmetry_hand_value():
    # majority mean shifted 0.1, minority mean shifted 0.3:
    # |0.3 - 0.1| / (0.3 + 0.1) = 0.5
    elec = _elec(seed=3)
    moved = elec.positions.copy()
    moved[elec.camp == MAJORITY] += np.array([0.1, 0.0])
    moved[elec.camp == MINORITY] += np.array([0.3, 0.0])
    assert camp_asymmetry(elec, moved, eps=0.0) == pytest.approx(0.5, abs=1e-9)
    assert signed_camp_asymmetry(elec, moved, eps=0.0) == pytest.approx(
        0.5, abs=1e-9
    )


def test_signed_asymmetry_negative_when_majority_moves_more():
    elec = _elec(seed=4)
    moved = elec.positions.copy()
    moved[elec.camp == MAJORITY] += np.array([0.0, 0.2])
    assert signed_camp_asymmetry(elec, moved, eps=0.0) == pytest.approx(
        -1.0, abs=1e-6
    )


def test_asymmetry_range_on_random_perturbations():
    elec = _elec(seed=5, n=200)
    rng = np.random.default_rng(6)
    for _ in range(20):
        moved = elec.positions + rng.normal(0.0, 0.05, elec.positions.shape)
        a = camp_asymmetry(elec, moved)
        s = signed_camp_asymmetry(elec, moved)
        assert 0.0 <= a <= 1.0
        assert -1.0 <= s <= 1.0
        assert a == pytest.approx(abs(s), abs=1e-12)


def test_asymmetry_shape_mismatch_rejected():
    elec = _elec(seed=8, n=100)
    with pytest.raises(Exception):
        camp_asymmetry(elec, elec.positions[:-1])
