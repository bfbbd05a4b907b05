import math

import numpy as np
import pytest
from hypothesis import strategies as st

from labanimate.codebook import HOLD, default_codebook, parse_symbol
from labanimate.io import load_library
from labanimate.motion import MotionClip, SkeletonFrame
from labanimate.score import LabanScore

CB = default_codebook()
SPATIAL = CB.symbols


def S(name):
    return parse_symbol(name)


def row(*names):
    return tuple(S(n) for n in names)


REST_ROW = row("place-low", "place-low", "place-low", "place-low", "place-high")


@pytest.fixture(scope="session")
def seed_library():
    return load_library()


def random_score(rng, n_rows, with_holds=False):
    rows = []
    for i in range(n_rows):
        r = []
        for _ in range(5):
            if with_holds and i > 0 and rng.random() < 0.3:
                r.append(HOLD)
            else:
                r.append(SPATIAL[rng.integers(len(SPATIAL))])
        rows.append(tuple(r))
    durs = tuple(float(rng.choice([0.25, 0.5, 1.0, 1.5, 2.0])) for _ in range(n_rows))
    return LabanScore(tuple(rows), durs)


@st.composite
def scores(draw, min_rows=1, max_rows=8, holds=True, durations=None):
    n = draw(st.integers(min_rows, max_rows))
    rows = []
    for i in range(n):
        cell = st.sampled_from(SPATIAL + ((HOLD,) if holds and i > 0 else ()))
        rows.append(tuple(draw(cell) for _ in range(5)))
    dur = durations if durations is not None else st.sampled_from([0.125, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0])
    return LabanScore(tuple(rows), tuple(draw(dur) for _ in range(n)))


# -- synthetic skeletons -----------------------------------------------------

UPPER_LEN, LOWER_LEN, HEAD_LEN = 0.30, 0.25, 0.20


def pose_joints(dirs, rotation=np.eye(3), offset=np.zeros(3)):
    """Joint positions for body-frame segment directions (column order).

    Torso: spine_base at origin, neck 0.5 m above, shoulders 0.2 m to each side.
    """
    ll, lu, rl, ru, hd = (np.asarray(d, float) / np.linalg.norm(d) for d in dirs)
    neck = np.array([0.0, 0.0, 0.5])
    lsh = neck + [0.0, 0.2, 0.0]
    rsh = neck + [0.0, -0.2, 0.0]
    lel = lsh + UPPER_LEN * lu
    rel = rsh + UPPER_LEN * ru
    body = {
        "spine_base": np.zeros(3),
        "neck": neck,
        "head": neck + HEAD_LEN * hd,
        "left_shoulder": lsh,
        "right_shoulder": rsh,
        "left_elbow": lel,
        "right_elbow": rel,
        "left_wrist": lel + LOWER_LEN * ll,
        "right_wrist": rel + LOWER_LEN * rl,
    }
    return {k: rotation @ v + offset for k, v in body.items()}


def slerp(a, b, u):
    a = np.asarray(a, float) / np.linalg.norm(a)
    b = np.asarray(b, float) / np.linalg.norm(b)
    omega = math.atan2(np.linalg.norm(np.cross(a, b)), np.dot(a, b))
    if omega < 1e-12:
        return a.copy()
    return (math.sin((1 - u) * omega) * a + math.sin(u * omega) * b) / math.sin(omega)


def held_poses_clip(poses, hold=0.5, transition=0.5, rate=30.0, rotation=np.eye(3), time_scale=1.0):
    """Hold each pose for ``hold`` s, moving between them at constant angular speed.

    Returns (clip, centers) where centers are the frame-index midpoints of the holds.
    """
    dt = 1.0 / rate
    frames = []
    centers = []
    n_hold = int(round(hold * rate))
    n_trans = int(round(transition * rate))
    idx = 0
    for p, pose in enumerate(poses):
        start = idx
        for _ in range(n_hold):
            frames.append(pose_joints(pose, rotation))
            idx += 1
        centers.append((start + idx - 1) / 2)
        if p + 1 < len(poses):
            nxt = poses[p + 1]
            for k in range(1, n_trans):
                u = k / n_trans
                frames.append(pose_joints([slerp(a, b, u) for a, b in zip(pose, nxt)], rotation))
                idx += 1
    clip = MotionClip(
        tuple(SkeletonFrame(i * dt * time_scale, j) for i, j in enumerate(frames)),
        rate / time_scale,
    )
    return clip, centers


def random_rotation(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


# -- engine fixtures ------------------------------------------------------------


class FixedDraws:
    """Rng stand-in replaying fixed uniform draws; integers() always picks index 0."""

    def __init__(self, *draws):
        self.draws = list(draws)

    def uniform(self, low, high):
        return self.draws.pop(0)

    def integers(self, high):
        return 0


def candidate_setup():
    """Library where the sentence "w" scores 1.0, 0.96 and 0.5 on three general pairs."""
    import math

    from labanimate.library import Category, GestureConceptPair, GestureLibrary
    from labanimate.semantics import EmbeddingTable

    cb, cc = 0.684, 0.5  # ramp(0.684) = 0.96 and ramp(0.5) = 0.5 with tau 0.3/0.7
    table = EmbeddingTable(
        {"w": [1.0, 0.0], "b": [cb, math.sqrt(1 - cb * cb)], "c": [cc, math.sqrt(1 - cc * cc)]}
    )
    s = LabanScore.uniform([REST_ROW])
    pairs = (
        GestureConceptPair("alpha", Category.GENERAL, ("w",), s),
        GestureConceptPair("bravo", Category.GENERAL, ("b",), s),
        GestureConceptPair("charlie", Category.GENERAL, ("c",), s),
        GestureConceptPair("beat", Category.BEAT, (), s),
    )
    return GestureLibrary(pairs, CB), table
