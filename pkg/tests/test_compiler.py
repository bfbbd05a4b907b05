import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from labanimate.compiler import (
    ClampError,
    CompileError,
    JointTrajectory,
    Keyframe,
    ProfileError,
    RobotProfile,
    TimingParams,
    VelocityViolationError,
    arm_frame,
    compile_score,
    forearm_direction,
    load_profile,
    pose_to_angles,
    validate_trajectory,
)
from labanimate.score import LabanScore

from conftest import CB, REST_ROW, SPATIAL, S, random_score, row

FULL = load_profile("full")
REDUCED = load_profile("reduced")


def slow_profile(vmax=1.0):
    """Wide-limit profile with a single velocity limit on every joint."""
    joints, chains = [], {}
    for side in ("left", "right"):
        names = [f"{side}_{j}" for j in ("shoulder_pitch", "shoulder_roll", "elbow_yaw", "elbow_pitch")]
        joints += [{"name": n, "min": -3.2, "max": 3.2, "max_velocity": vmax} for n in names]
        chains[f"{side}_arm"] = dict(zip(("shoulder_pitch", "shoulder_roll", "elbow_yaw", "elbow_pitch"), names))
    joints += [{"name": n, "min": -3.2, "max": 3.2, "max_velocity": vmax} for n in ("neck_pitch", "neck_yaw")]
    chains["head"] = {"neck_pitch": "neck_pitch", "neck_yaw": "neck_yaw"}
    return RobotProfile.from_json(
        {"name": "slow", "joints": joints, "chains": chains, "rest": {j["name"]: 0.0 for j in joints}}
    )


def test_rest_row_gives_rest_pose():
    for prof in (FULL, REDUCED):
        angles = pose_to_angles(REST_ROW, prof)
        assert angles == dict(prof.rest)


def test_right_upper_forward():
    r = row("place-low", "place-low", "forward-middle", "forward-middle", "place-high")
    a = pose_to_angles(r, FULL)
    assert a["right_shoulder_pitch"] == pytest.approx(math.pi / 2, abs=1e-12)
    assert a["right_shoulder_roll"] == pytest.approx(0, abs=1e-12)
    assert a["right_elbow_pitch"] == pytest.approx(0, abs=1e-12)


def test_collinear_elbow_on_wide_profile():
    prof = slow_profile()
    for sym in SPATIAL:
        a = pose_to_angles((sym, sym, sym, sym, S("place-high")), prof)
        assert a["left_elbow_pitch"] == pytest.approx(0, abs=1e-7)
        assert a["right_elbow_pitch"] == pytest.approx(0, abs=1e-7)


@pytest.mark.parametrize("side, ucol, lcol", [("left", 1, 0), ("right", 3, 2)])
def test_decomposition_reproduces_directions(side, ucol, lcol):
    # oracle: forward kinematics of the returned angles must land on the notated vectors
    prof = slow_profile()
    rng = np.random.default_rng(0)
    for _ in range(300):
        r = list(REST_ROW)
        r[ucol], r[lcol] = SPATIAL[rng.integers(26)], SPATIAL[rng.integers(26)]
        a = pose_to_angles(tuple(r), prof)
        p, ro = a[f"{side}_shoulder_pitch"], a[f"{side}_shoulder_roll"]
        upper, _, _ = arm_frame(p, ro, side)
        np.testing.assert_allclose(upper, CB.vector(r[ucol]), atol=1e-9)
        fore = forearm_direction(p, ro, a[f"{side}_elbow_pitch"], a[f"{side}_elbow_yaw"], side)
        np.testing.assert_allclose(fore, CB.vector(r[lcol]), atol=1e-9)


def test_arm_frame_is_orthonormal():
    for p in np.linspace(-2, 3, 7):
        for ro in np.linspace(-1.5, 1.5, 7):
            for side in ("left", "right"):
                m = np.vstack(arm_frame(p, ro, side))
                np.testing.assert_allclose(m @ m.T, np.eye(3), atol=1e-12)


def test_reduced_projection_is_nearest_reachable():
    # no elbow twist: the forearm stays in the upper/bend plane; check against a dense sweep
    rng = np.random.default_rng(1)
    limits = REDUCED.joint("left_elbow_pitch")
    for _ in range(100):
        u, lo = SPATIAL[rng.integers(26)], SPATIAL[rng.integers(26)]
        r = (lo, u) + REST_ROW[2:]
        a = pose_to_angles(r, REDUCED)
        p, ro = a["left_shoulder_pitch"], a["left_shoulder_roll"]
        got = forearm_direction(p, ro, a["left_elbow_pitch"], 0.0, "left")
        target = CB.vector(lo)
        upper, bend, _ = arm_frame(p, ro, "left")
        sweep = np.linspace(limits.min_angle, limits.max_angle, 4001)
        best = np.max(np.cos(sweep) * np.dot(upper, target) + np.sin(sweep) * np.dot(bend, target))
        assert float(np.dot(got, target)) >= best - 1e-6


def test_reduced_head_drops_azimuth():
    r = REST_ROW[:4] + (S("left-high"),)
    assert pose_to_angles(r, REDUCED)["neck_pitch"] == 0
    r = REST_ROW[:4] + (S("forward-high"),)
    # pi/4 requested, clamped to the neck limit
    assert pose_to_angles(r, REDUCED)["neck_pitch"] == REDUCED.joint("neck_pitch").max_angle
    a = pose_to_angles(REST_ROW[:4] + (S("left-forward-high"),), FULL)
    assert a["neck_yaw"] == pytest.approx(math.pi / 4)
    assert a["neck_pitch"] == pytest.approx(math.pi / 4)


def test_clamps_are_recorded():
    sc = LabanScore.uniform([row("place-low", "place-high", "place-low", "place-high", "place-high")])
    traj = compile_score(sc, REDUCED)
    assert traj.clamps
    assert validate_trajectory(traj, REDUCED).ok
    with pytest.raises(ClampError):
        compile_score(sc, REDUCED, TimingParams(strict=True))


def test_one_row_rest_score():
    traj = compile_score(LabanScore.uniform([REST_ROW]), FULL)
    assert len(traj.keyframes) == 2
    assert traj.keyframes[0].angles == traj.keyframes[1].angles == dict(FULL.rest)
    assert traj.times.tolist() == [0.0, 0.5]


def swing_score():
    fwd = row("place-low", "place-low", "forward-middle", "forward-middle", "place-high")
    return LabanScore((REST_ROW, fwd), (1.0, 1.0))


def test_velocity_stretch_matches_analytic_duration():
    prof = slow_profile(1.0)
    traj = compile_score(swing_score(), prof, TimingParams(0.5))
    dt = traj.keyframes[2].t - traj.keyframes[1].t
    assert abs(dt - (math.pi / 2) / 1.0) < 1e-6
    assert traj.keyframes[1].t == 0.5
    assert [s.interval for s in traj.stretches] == [2]
    assert validate_trajectory(traj, prof).ok


def test_strict_velocity_violation():
    with pytest.raises(VelocityViolationError) as info:
        compile_score(swing_score(), slow_profile(1.0), TimingParams(0.5, strict=True))
    assert info.value.joint == "right_shoulder_pitch"
    assert info.value.interval == 2


def test_empty_and_bad_timing():
    with pytest.raises(CompileError):
        compile_score(None, FULL)
    with pytest.raises(ValueError):
        TimingParams(0)


def test_validate_catches_hand_built_faults():
    ok = compile_score(swing_score(), FULL)
    assert validate_trajectory(ok, FULL).ok
    frames = list(ok.keyframes)
    bad_angles = dict(frames[1].angles, right_shoulder_pitch=10.0)
    bad = JointTrajectory(FULL.name, FULL.joint_names, (frames[0], Keyframe(frames[1].t, bad_angles), frames[2]))
    kinds = {v.kind for v in validate_trajectory(bad, FULL).violations}
    assert "limit" in kinds
    regress = JointTrajectory(FULL.name, FULL.joint_names, (frames[0], frames[2], Keyframe(frames[2].t - 0.1, frames[1].angles)))
    assert "ordering" in {v.kind for v in validate_trajectory(regress, FULL).violations}
    fast = JointTrajectory(FULL.name, FULL.joint_names, (frames[0], Keyframe(1e-3, frames[2].angles)))
    assert "velocity" in {v.kind for v in validate_trajectory(fast, FULL).violations}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["full", "reduced"]), st.sampled_from([0.1, 0.5, 1.0]))
def test_compile_properties(seed, name, spb):
    prof = FULL if name == "full" else REDUCED
    sc = random_score(np.random.default_rng(seed), 6, True)
    traj = compile_score(sc, prof, TimingParams(spb))
    assert validate_trajectory(traj, prof).ok
    assert traj.keyframes[0].t == 0.0
    assert np.all(np.diff(traj.times) > 0)
    assert traj.duration >= sum(sc.durations) * spb * (1 - 1e-12)


def test_rest_fixed_point():
    sc = LabanScore((REST_ROW,) * 4, (1.0, 0.5, 2.0, 1.0))
    for prof in (FULL, REDUCED):
        m = compile_score(sc, prof).angle_matrix()
        assert np.all(m == m[0])


def test_trajectory_json_round_trip():
    traj = compile_score(swing_score(), REDUCED)
    back = JointTrajectory.from_json(json.loads(traj.dumps()))
    assert back == traj
    assert traj.sample(0.0) == dict(REDUCED.rest)


def test_profiles():
    assert len(FULL.joint_names) == 14 and len(REDUCED.joint_names) == 9
    with pytest.raises(ProfileError):
        load_profile("nonexistent")
    data = json.loads(json.dumps(FULL_JSON := {"name": "x", "joints": [{"name": "a", "min": 1, "max": 0, "max_velocity": 1}], "chains": {}}))
    with pytest.raises(ProfileError):
        RobotProfile.from_json(data)
    assert FULL_JSON["name"] == "x"
