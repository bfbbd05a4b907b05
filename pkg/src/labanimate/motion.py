"""Recorded skeleton motion -> Labanotation score.

Pipeline: per-frame segment directions in the torso frame, aggregate angular
speed, key frames at speed minima, then quantization of the key poses.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .codebook import HOLD, Codebook, default_codebook
from .score import LabanScore

REQUIRED_JOINTS = (
    "spine_base",
    "neck",
    "head",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
)

# (proximal, distal) joint per score column, in column order
SEGMENTS = (
    ("left_elbow", "left_wrist"),
    ("left_shoulder", "left_elbow"),
    ("right_elbow", "right_wrist"),
    ("right_shoulder", "right_elbow"),
    ("neck", "head"),
)

PLATEAU_ATOL = 1e-9


class DegeneratePoseError(ValueError):
    pass


class InvalidClipError(ValueError):
    pass


@dataclass(frozen=True)
class SkeletonFrame:
    timestamp: float
    joints: Mapping[str, np.ndarray]

    def __post_init__(self):
        missing = [j for j in REQUIRED_JOINTS if j not in self.joints]
        if missing:
            raise InvalidClipError(f"frame at t={self.timestamp}: missing joints {missing}")
        joints = {k: np.asarray(v, dtype=float) for k, v in self.joints.items()}
        object.__setattr__(self, "joints", joints)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.joints[name]


@dataclass(frozen=True)
class MotionClip:
    frames: tuple[SkeletonFrame, ...]
    frame_rate_hint: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        ts = [f.timestamp for f in self.frames]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidClipError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def timestamps(self) -> np.ndarray:
        return np.array([f.timestamp for f in self.frames])


@dataclass(frozen=True)
class KeyframeParams:
    smoothing_window: int = 5
    minima_speed_threshold: float = 0.35
    min_keyframe_gap: float = 0.2

    def __post_init__(self):
        if self.smoothing_window < 1 or self.smoothing_window % 2 == 0:
            raise ValueError("smoothing_window must be an odd integer >= 1")
        if self.minima_speed_threshold < 0:
            raise ValueError("minima_speed_threshold must be >= 0")
        if self.min_keyframe_gap < 0:
            raise ValueError("min_keyframe_gap must be >= 0")


def _unit(v: np.ndarray, what: str) -> np.ndarray:
    n = np.linalg.norm(v)
    if n < 1e-9:
        raise DegeneratePoseError(f"{what} has zero length")
    return v / n


def body_frame(frame: SkeletonFrame) -> np.ndarray:
    """Rotation matrix taking world vectors into the torso frame (rows are X, Y, Z)."""
    z = _unit(frame["neck"] - frame["spine_base"], "spine (spine_base -> neck)")
    across = frame["left_shoulder"] - frame["right_shoulder"]
    y = across - np.dot(across, z) * z
    y = _unit(y, "shoulder line")
    x = np.cross(y, z)
    return np.vstack([x, y, z])


def segment_directions(frame: SkeletonFrame) -> np.ndarray:
    """5 x 3 unit vectors in the torso frame, in score column order."""
    rot = body_frame(frame)
    dirs = np.empty((len(SEGMENTS), 3))
    for k, (a, b) in enumerate(SEGMENTS):
        dirs[k] = rot @ _unit(frame[b] - frame[a], f"segment {a}->{b}")
    return dirs


def _angles_between(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    cross = np.linalg.norm(np.cross(a, b), axis=-1)
    dot = np.sum(a * b, axis=-1)
    return np.arctan2(cross, dot)


def moving_average(x: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average; the window shrinks symmetrically at the ends."""
    if window == 1:
        return x.copy()
    half = window // 2
    out = np.empty_like(x)
    n = len(x)
    for i in range(n):
        h = min(half, i, n - 1 - i)
        out[i] = x[i - h : i + h + 1].mean()
    return out


def angular_speed_series(clip: MotionClip, params: KeyframeParams = KeyframeParams()) -> np.ndarray:
    """Summed angular speed (rad/s) of the five segments, smoothed."""
    if len(clip) < 2:
        raise InvalidClipError("need at least 2 frames")
    dirs = np.stack([segment_directions(f) for f in clip.frames])
    dt = np.diff(clip.timestamps)
    step = _angles_between(dirs[1:], dirs[:-1]).sum(axis=1) / dt
    raw = np.concatenate([[step[0]], step])
    return moving_average(raw, params.smoothing_window)


def detect_keyframes(
    series: Sequence[float],
    params: KeyframeParams = KeyframeParams(),
    timestamps: Sequence[float] | None = None,
) -> list[int]:
    """Frame indices of key poses: endpoints plus interior speed minima under threshold.

    Plateau minima contribute their center. Minima closer together than
    ``min_keyframe_gap`` (seconds; frame units when no timestamps are given)
    keep the slower one, the earlier on ties; endpoints always win.
    """
    s = np.asarray(series, dtype=float)
    n = len(s)
    if n < 2:
        raise InvalidClipError("series needs at least 2 samples")
    t = np.arange(n, dtype=float) if timestamps is None else np.asarray(timestamps, dtype=float)

    candidates = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and abs(s[j + 1] - s[i]) <= PLATEAU_ATOL:
            j += 1
        # only interior runs can be minima; endpoint runs are covered by the endpoint rule
        if i > 0 and j < n - 1 and s[i - 1] > s[i] and s[j + 1] > s[i] and s[i] <= params.minima_speed_threshold:
            candidates.append((i + j) // 2)
        i = j + 1

    chosen = [0, n - 1]
    for c in sorted(candidates, key=lambda k: (s[k], k)):
        if all(abs(t[c] - t[k]) >= params.min_keyframe_gap for k in chosen):
            chosen.append(c)
    return sorted(set(chosen))


def clip_to_score(
    clip: MotionClip,
    params: KeyframeParams = KeyframeParams(),
    codebook: Codebook | None = None,
) -> LabanScore:
    """One row per key frame; row duration is seconds to the next key frame."""
    codebook = codebook or default_codebook()
    if len(clip) < 2:
        raise InvalidClipError("need at least 2 frames to convert")
    series = angular_speed_series(clip, params)
    ts = clip.timestamps
    keys = detect_keyframes(series, params, ts)
    rows = []
    for k in keys:
        dirs = segment_directions(clip.frames[k])
        rows.append(tuple(codebook.quantize(d) for d in dirs))
    durations = [float(ts[b] - ts[a]) for a, b in zip(keys, keys[1:])]
    last = params.min_keyframe_gap if params.min_keyframe_gap > 0 else float(np.min(np.diff(ts)))
    durations.append(last)
    return LabanScore(tuple(rows), tuple(durations)).with_holds()


# -- clip files --------------------------------------------------------------


def clip_from_json(data: dict) -> MotionClip:
    try:
        frames = [SkeletonFrame(float(f["t"]), {k: v for k, v in f["joints"].items()}) for f in data["frames"]]
    except (KeyError, TypeError) as exc:
        raise InvalidClipError(f"malformed clip: {exc}") from exc
    return MotionClip(tuple(frames), data.get("frame_rate"))


def clip_to_json(clip: MotionClip) -> dict:
    return {
        "frame_rate": clip.frame_rate_hint,
        "frames": [
            {"t": f.timestamp, "joints": {k: [float(x) for x in v] for k, v in f.joints.items()}}
            for f in clip.frames
        ],
    }


def read_clip_csv(path: str | Path) -> MotionClip:
    """CSV variant: a ``t`` column plus ``<joint>.x``, ``<joint>.y``, ``<joint>.z`` columns."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        frames = []
        for rec in reader:
            joints: dict[str, list[float]] = {}
            for col, val in rec.items():
                if col == "t":
                    continue
                name, _, axis = col.rpartition(".")
                if axis not in ("x", "y", "z"):
                    raise InvalidClipError(f"unexpected column {col!r}")
                joints.setdefault(name, [math.nan] * 3)["xyz".index(axis)] = float(val)
            frames.append(SkeletonFrame(float(rec["t"]), joints))
    return MotionClip(tuple(frames))


def load_clip(path: str | Path) -> MotionClip:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_clip_csv(path)
    with open(path, encoding="utf-8") as fh:
        return clip_from_json(json.load(fh))
