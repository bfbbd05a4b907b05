"""Compile a Labanotation score into a timed joint trajectory for one robot.

Arm model (per side, s = +1 left, -1 right), body frame +X fwd, +Y left, +Z up:

    upper = (cos(roll) sin(pitch), s sin(roll), -cos(roll) cos(pitch))
    bend  = (cos(pitch), 0, sin(pitch))            # elbow flexion direction at yaw 0
    side  = s * (bend x upper)
    lower = cos(e) upper + sin(e) (cos(y) bend + sin(y) side)

with shoulder pitch/roll, elbow pitch e and elbow yaw y. Arms hanging down
are the zero pose. Head: yaw about Z then pitch toward the facing direction,
so the upright head is the zero pose.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .codebook import Codebook, default_codebook, bundled_path
from .score import LabanScore

STRICT_CLAMP_TOLERANCE = 0.15
_LIMIT_EPS = 1e-9
_VEL_RTOL = 1e-9

SIDES = {"left": 1.0, "right": -1.0}
ARM_COLUMNS = {"left": (1, 0), "right": (3, 2)}  # (upper, lower) score columns
HEAD_COLUMN = 4


class ProfileError(ValueError):
    pass


class CompileError(RuntimeError):
    pass


class VelocityViolationError(CompileError):
    def __init__(self, joint: str, interval: int, required: float, available: float):
        super().__init__(
            f"joint {joint!r} exceeds its velocity limit in interval {interval} "
            f"(needs {required:.6g} s, has {available:.6g} s)"
        )
        self.joint = joint
        self.interval = interval


class ClampError(CompileError):
    pass


@dataclass(frozen=True)
class Joint:
    name: str
    min_angle: float
    max_angle: float
    max_velocity: float

    def clamp(self, x: float) -> float:
        return min(max(x, self.min_angle), self.max_angle)


@dataclass(frozen=True)
class ArmChain:
    shoulder_pitch: str
    shoulder_roll: str
    elbow_pitch: str | None = None
    elbow_yaw: str | None = None


@dataclass(frozen=True)
class HeadChain:
    neck_pitch: str
    neck_yaw: str | None = None


@dataclass(frozen=True)
class RobotProfile:
    name: str
    joints: tuple[Joint, ...]
    arms: Mapping[str, ArmChain]
    head: HeadChain
    rest: Mapping[str, float]
    description: str = ""

    def __post_init__(self):
        names = [j.name for j in self.joints]
        if len(set(names)) != len(names):
            raise ProfileError(f"{self.name}: duplicate joint names")
        for j in self.joints:
            if not j.min_angle < j.max_angle:
                raise ProfileError(f"{self.name}: joint {j.name} has min >= max")
            if not j.max_velocity > 0:
                raise ProfileError(f"{self.name}: joint {j.name} needs a positive max velocity")
        if set(self.arms) != set(SIDES):
            raise ProfileError(f"{self.name}: need exactly a left and a right arm chain")
        refs = [self.head.neck_pitch, self.head.neck_yaw]
        for chain in self.arms.values():
            refs += [chain.shoulder_pitch, chain.shoulder_roll, chain.elbow_pitch, chain.elbow_yaw]
        for r in refs:
            if r is not None and r not in names:
                raise ProfileError(f"{self.name}: chain references undeclared joint {r!r}")
        for j in self.joints:
            if j.name not in self.rest:
                raise ProfileError(f"{self.name}: rest pose lacks joint {j.name}")
            if not j.min_angle <= self.rest[j.name] <= j.max_angle:
                raise ProfileError(f"{self.name}: rest angle of {j.name} is outside its limits")

    @property
    def joint_names(self) -> tuple[str, ...]:
        return tuple(j.name for j in self.joints)

    def joint(self, name: str) -> Joint:
        for j in self.joints:
            if j.name == name:
                return j
        raise KeyError(name)

    @classmethod
    def from_json(cls, data: dict) -> "RobotProfile":
        try:
            joints = tuple(
                Joint(j["name"], float(j["min"]), float(j["max"]), float(j["max_velocity"]))
                for j in data["joints"]
            )
            arms = {side: ArmChain(**data["chains"][f"{side}_arm"]) for side in SIDES}
            head = HeadChain(**data["chains"]["head"])
            rest = {k: float(v) for k, v in data.get("rest", {}).items()}
        except (KeyError, TypeError) as exc:
            raise ProfileError(f"malformed profile: {exc}") from exc
        return cls(data["name"], joints, arms, head, rest, data.get("description", ""))

    @classmethod
    def load(cls, path: str | Path) -> "RobotProfile":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


SHIPPED_PROFILES = ("full", "reduced")


def load_profile(name_or_path: str | Path) -> RobotProfile:
    """Load a shipped profile by name or any profile JSON by path."""
    if str(name_or_path) in SHIPPED_PROFILES:
        return RobotProfile.load(bundled_path("profiles", f"{name_or_path}.json"))
    path = Path(name_or_path)
    if not path.exists():
        raise ProfileError(f"unknown profile {str(name_or_path)!r}")
    return RobotProfile.load(path)


@dataclass(frozen=True)
class TimingParams:
    seconds_per_beat: float = 0.5
    strict: bool = False

    def __post_init__(self):
        if not self.seconds_per_beat > 0:
            raise ValueError("seconds_per_beat must be positive")


@dataclass(frozen=True)
class ClampEvent:
    row: int
    joint: str
    requested: float
    applied: float


@dataclass(frozen=True)
class StretchEvent:
    interval: int
    joint: str
    nominal: float
    stretched: float


@dataclass(frozen=True)
class Keyframe:
    t: float
    angles: Mapping[str, float]


@dataclass(frozen=True)
class JointTrajectory:
    profile: str
    joint_names: tuple[str, ...]
    keyframes: tuple[Keyframe, ...]
    clamps: tuple[ClampEvent, ...] = field(default=(), compare=False)
    stretches: tuple[StretchEvent, ...] = field(default=(), compare=False)
    projections: tuple[tuple[int, str, float], ...] = field(default=(), compare=False)

    @property
    def times(self) -> np.ndarray:
        return np.array([k.t for k in self.keyframes])

    def angle_matrix(self) -> np.ndarray:
        return np.array([[k.angles[j] for j in self.joint_names] for k in self.keyframes])

    @property
    def duration(self) -> float:
        return self.keyframes[-1].t

    def sample(self, t: float) -> dict[str, float]:
        """Linear interpolation between keyframes."""
        times = self.times
        m = self.angle_matrix()
        return {j: float(np.interp(t, times, m[:, i])) for i, j in enumerate(self.joint_names)}

    def to_json(self) -> dict:
        return {
            "profile": self.profile,
            "keyframes": [
                {"t": k.t, "angles": {j: k.angles[j] for j in self.joint_names}} for k in self.keyframes
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "JointTrajectory":
        frames = tuple(Keyframe(float(k["t"]), dict(k["angles"])) for k in data["keyframes"])
        names = tuple(frames[0].angles) if frames else ()
        return cls(data["profile"], names, frames)


# -- pose decomposition ------------------------------------------------------


def upper_arm_angles(u: np.ndarray, side: str) -> tuple[float, float]:
    """(shoulder pitch, shoulder roll) placing the upper arm along ``u``."""
    s = SIDES[side]
    roll = math.asin(max(-1.0, min(1.0, s * u[1])))
    pitch = math.atan2(u[0], -u[2]) if math.hypot(u[0], u[2]) > 1e-12 else 0.0
    return pitch, roll


def arm_frame(pitch: float, roll: float, side: str):
    s = SIDES[side]
    cr, sr, cp, sp = math.cos(roll), math.sin(roll), math.cos(pitch), math.sin(pitch)
    upper = np.array([cr * sp, s * sr, -cr * cp])
    bend = np.array([cp, 0.0, sp])
    lateral = s * np.cross(bend, upper)
    return upper, bend, lateral


def forearm_direction(pitch, roll, elbow_pitch, elbow_yaw, side) -> np.ndarray:
    upper, bend, lateral = arm_frame(pitch, roll, side)
    return math.cos(elbow_pitch) * upper + math.sin(elbow_pitch) * (
        math.cos(elbow_yaw) * bend + math.sin(elbow_yaw) * lateral
    )


def head_angles(h: np.ndarray, has_yaw: bool) -> tuple[float, float]:
    """(neck pitch, neck yaw); without a yaw joint only the sagittal tilt is kept."""
    if not has_yaw:
        if math.hypot(h[0], h[2]) < 1e-12:
            return 0.0, 0.0
        return math.atan2(h[0], h[2]), 0.0
    if abs(h[0]) < 1e-12:
        yaw = 0.0 if abs(h[1]) < 1e-12 else math.copysign(math.pi / 2, h[1])
    else:
        yaw = math.atan(h[1] / h[0])
    facing = h[0] * math.cos(yaw) + h[1] * math.sin(yaw)
    return math.atan2(facing, h[2]), yaw


@dataclass
class _PoseDiagnostics:
    clamps: list = field(default_factory=list)
    projections: list = field(default_factory=list)


def pose_to_angles(
    row: Sequence,
    profile: RobotProfile,
    codebook: Codebook | None = None,
    row_index: int = 0,
    diagnostics: _PoseDiagnostics | None = None,
) -> dict[str, float]:
    """Joint angles for one fully resolved score row, clamped to the profile's limits."""
    codebook = codebook or default_codebook()
    diag = diagnostics if diagnostics is not None else _PoseDiagnostics()
    raw: dict[str, float] = {}

    for side, chain in profile.arms.items():
        ucol, lcol = ARM_COLUMNS[side]
        u = codebook.vector(row[ucol])
        target = codebook.vector(row[lcol])
        pitch, roll = upper_arm_angles(u, side)
        # clamp the shoulder first so the elbow is solved against the reachable upper arm
        for name, want in ((chain.shoulder_pitch, pitch), (chain.shoulder_roll, roll)):
            got = profile.joint(name).clamp(want)
            if got != want:
                diag.clamps.append(ClampEvent(row_index, name, want, got))
            raw[name] = got
        pitch, roll = raw[chain.shoulder_pitch], raw[chain.shoulder_roll]
        if chain.elbow_pitch is None:
            continue
        upper, bend, lateral = arm_frame(pitch, roll, side)
        along = float(np.dot(target, upper))
        if chain.elbow_yaw is not None:
            across = float(np.linalg.norm(target - along * upper))
            elbow = math.atan2(across, along)
            if across < 1e-9:
                yaw = 0.0
            else:
                yaw = math.atan2(float(np.dot(target, lateral)), float(np.dot(target, bend)))
            raw[chain.elbow_yaw] = yaw
        else:
            # no forearm twist: bend stays in the upper/bend plane, take the nearest reachable direction
            b = float(np.dot(target, bend))
            elbow = math.atan2(b, along) if math.hypot(b, along) > 1e-12 else 0.0
            lim = profile.joint(chain.elbow_pitch)
            if not lim.min_angle <= elbow <= lim.max_angle:
                # the reach is a circle: pick the limit that is nearer around it
                end = min((lim.min_angle, lim.max_angle), key=lambda e: 1 - math.cos(e - elbow))
                want = end + math.remainder(elbow - end, 2 * math.pi)
                diag.clamps.append(ClampEvent(row_index, chain.elbow_pitch, want, end))
                elbow = end
            reach = math.cos(elbow) * upper + math.sin(elbow) * bend
            miss = math.atan2(float(np.linalg.norm(np.cross(reach, target))), float(np.dot(reach, target)))
            if miss > 1e-9:
                diag.projections.append((row_index, chain.elbow_pitch, miss))
        raw[chain.elbow_pitch] = elbow

    h = codebook.vector(row[HEAD_COLUMN])
    pitch, yaw = head_angles(h, profile.head.neck_yaw is not None)
    raw[profile.head.neck_pitch] = pitch
    if profile.head.neck_yaw is not None:
        raw[profile.head.neck_yaw] = yaw

    angles = {}
    for j in profile.joints:
        want = raw.get(j.name, profile.rest[j.name])
        got = j.clamp(want)
        if got != want:
            diag.clamps.append(ClampEvent(row_index, j.name, want, got))
        angles[j.name] = got
    return angles


def rest_symbols():
    from .codebook import Azimuth, Direction, Level

    low = Direction(Azimuth.PLACE, Level.LOW)
    return (low, low, low, low, Direction(Azimuth.PLACE, Level.HIGH))


def compile_score(
    score: LabanScore,
    profile: RobotProfile,
    timing: TimingParams = TimingParams(),
    codebook: Codebook | None = None,
) -> JointTrajectory:
    """Rest pose at t=0, then one keyframe per row at its cumulative duration.

    Intervals too short for some joint's velocity limit are stretched to the
    minimal compliant length, or rejected in strict mode.
    """
    codebook = codebook or default_codebook()
    if score is None or score.n_rows == 0:
        raise CompileError("cannot compile an empty score")
    res = score.resolved()
    diag = _PoseDiagnostics()
    poses = [dict(profile.rest)]
    for i, row in enumerate(res.rows):
        poses.append(pose_to_angles(row, profile, codebook, i + 1, diag))

    if timing.strict:
        for c in diag.clamps:
            if abs(c.requested - c.applied) > STRICT_CLAMP_TOLERANCE:
                raise ClampError(
                    f"row {c.row}: joint {c.joint!r} clamped by {abs(c.requested - c.applied):.3f} rad"
                )

    t = 0.0
    frames = [Keyframe(0.0, poses[0])]
    stretches = []
    for k, dur in enumerate(res.durations, start=1):
        nominal = dur * timing.seconds_per_beat
        needed, worst = 0.0, None
        for j in profile.joints:
            req = abs(poses[k][j.name] - poses[k - 1][j.name]) / j.max_velocity
            if req > needed:
                needed, worst = req, j.name
        dt = nominal
        if needed > nominal * (1 + _VEL_RTOL):
            if timing.strict:
                raise VelocityViolationError(worst, k, needed, nominal)
            dt = needed
            stretches.append(StretchEvent(k, worst, nominal, needed))
        t += dt
        frames.append(Keyframe(t, poses[k]))
    return JointTrajectory(
        profile.name,
        profile.joint_names,
        tuple(frames),
        tuple(diag.clamps),
        tuple(stretches),
        tuple(diag.projections),
    )


@dataclass(frozen=True)
class Violation:
    kind: str  # "limit" | "ordering" | "velocity" | "missing"
    keyframe: int
    joint: str | None
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_trajectory(traj: JointTrajectory, profile: RobotProfile) -> ValidationReport:
    out: list[Violation] = []
    frames = traj.keyframes
    if not frames:
        return ValidationReport((Violation("ordering", 0, None, "no keyframes"),))
    if frames[0].t != 0.0:
        out.append(Violation("ordering", 0, None, f"first keyframe at t={frames[0].t}, expected 0"))
    for i, kf in enumerate(frames):
        for j in profile.joints:
            if j.name not in kf.angles:
                out.append(Violation("missing", i, j.name, "joint not assigned"))
                continue
            a = kf.angles[j.name]
            if not (j.min_angle - _LIMIT_EPS <= a <= j.max_angle + _LIMIT_EPS):
                out.append(Violation("limit", i, j.name, f"{a:.6g} outside [{j.min_angle}, {j.max_angle}]"))
    for i in range(1, len(frames)):
        dt = frames[i].t - frames[i - 1].t
        if not dt > 0:
            out.append(Violation("ordering", i, None, f"time does not increase ({frames[i - 1].t} -> {frames[i].t})"))
            continue
        for j in profile.joints:
            if j.name not in frames[i].angles or j.name not in frames[i - 1].angles:
                continue
            v = abs(frames[i].angles[j.name] - frames[i - 1].angles[j.name]) / dt
            if v > j.max_velocity * (1 + _VEL_RTOL):
                out.append(Violation("velocity", i, j.name, f"{v:.6g} rad/s > {j.max_velocity}"))
    return ValidationReport(tuple(out))
