"""Smoke tests for the python bindings."""

import json
import math

import pytest

import vcage


def test_geometry_examples():
    unit = vcage.Footprint(0.5, 0.5, 0.1)
    a = vcage.Pose(0.0, 0.0, 0.0)
    b = vcage.Pose(0.5, 0.0, 0.0)
    assert vcage.penetration_depth(a, unit, b, unit) == pytest.approx(0.5)
    assert vcage.penetration_depth(a, unit, a, unit) == pytest.approx(1.0)
    far = vcage.Pose(2.0, 0.0, 0.0)
    assert vcage.penetration_depth(a, unit, far, unit) == 0.0

    ws = vcage.WorkspaceBounds()
    small = vcage.Footprint(0.05, 0.05, 0.1)
    assert vcage.in_workspace(vcage.Pose(0.0, 0.0, 0.3), small, ws)
    assert not vcage.in_workspace(vcage.Pose(5.0, 0.0, 0.0), small, ws)

    assert vcage.normalize_angle(3 * math.pi) == pytest.approx(-math.pi)


def test_catalog_is_valid_json():
    catalog = json.loads(vcage.default_catalog_json())
    assert len(catalog["classes"]) >= 10
    names = {c["name"] for c in catalog["classes"]}
    assert {"mouse", "mouse_pad", "stapler", "bowl"} <= names


def test_episode_determinism():
    config = {"master_seed": 7, "instructions": ["place_mouse_pad"]}
    a = vcage.episode(config, 0)
    b = vcage.episode(config, 0)
    assert a == b
    assert a["status"] == "accepted"
    assert a["accepted"] is True


def test_generate_and_stats(tmp_path):
    out = tmp_path / "smoke.jsonl"
    config = {
        "master_seed": 3,
        "mode": "vcage",
        "instructions": ["power_on_desk"],
        "failure": {"toggle_miss_prob": 0.3},
        "scene": {"distractors_min": 0, "distractors_max": 1},
    }
    stats = vcage.generate(config | {"episode_target": 20}, str(out))
    assert stats["accepted_count"] == 20
    assert stats["purity"] == 1.0  # oracle critic admits no failures
    assert (
        stats["accepted_count"]
        + stats["rejected_count"]
        + stats["degenerate_count"]
        + stats["unverifiable_count"]
        == stats["episodes_run"]
    )

    recomputed = vcage.stats(str(out))
    assert recomputed["accepted_count"] == 20
    assert recomputed["purity"] == 1.0

    # determinism down to file bytes
    out2 = tmp_path / "smoke2.jsonl"
    vcage.generate(config | {"episode_target": 20}, str(out2))
    assert vcage.sha256_hex(out.read_bytes().decode()) == vcage.sha256_hex(
        out2.read_bytes().decode()
    )


def test_compare_modes():
    config = {
        "master_seed": 11,
        "instructions": ["place_dual_shoes"],
        "failure": {"slip_prob": 0.3},
        "episode_target": 200,
        "scene": {"distractors_min": 0, "distractors_max": 1},
    }
    cmp = vcage.compare(config)
    assert cmp["vcage"]["purity"] == 1.0
    assert set(cmp["vcage_accepted_ids"]) <= set(cmp["vanilla_accepted_ids"])


def test_gate_boundary():
    config = {
        "master_seed": 5,
        "failure": {"press_miss_prob": 1.0},
        "scene": {"distractors_min": 0, "distractors_max": 0},
    }
    report = vcage.gate_report(config, "press_stapler", 10)
    assert report["status"] == "Reject"
    assert report["successes"] == 0


def test_errors_are_typed():
    with pytest.raises(vcage.VcageError):
        vcage.episode({"instructions": ["no such task"]}, 0)
