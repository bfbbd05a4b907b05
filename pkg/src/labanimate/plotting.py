"""Report figures written next to the CLI's text output."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .compiler import JointTrajectory  # noqa: E402

FIG_WIDTH = 8.0


def _figure(height: float = 4.5):
    fig, ax = plt.subplots(figsize=(FIG_WIDTH, height), constrained_layout=True)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_trajectory(traj: JointTrajectory, path: str | Path, title: str | None = None) -> Path:
    """Joint angles against time, one line per joint that moves."""
    fig, ax = _figure()
    t = traj.times
    m = traj.angle_matrix()
    for i, name in enumerate(traj.joint_names):
        if np.ptp(m[:, i]) == 0:
            continue
        ax.plot(t, m[:, i], marker="o", ms=3, label=name)
    for s in traj.stretches:
        ax.axvspan(t[s.interval - 1], t[s.interval], color="0.85", zorder=0)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("angle [rad]")
    ax.set_title(title or f"trajectory on {traj.profile}")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=7, ncol=2, loc="best")
    return _save(fig, path)


def plot_speed_series(
    timestamps: Sequence[float],
    series: Sequence[float],
    keyframes: Sequence[int],
    threshold: float,
    path: str | Path,
) -> Path:
    fig, ax = _figure(3.5)
    t = np.asarray(timestamps)
    s = np.asarray(series)
    ax.plot(t, s, lw=1.2, color="k")
    ax.axhline(threshold, ls="--", color="tab:red", lw=0.8, label="minimum threshold")
    ax.plot(t[list(keyframes)], s[list(keyframes)], "o", color="tab:blue", label="key frames")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("summed angular speed [rad/s]")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_distance_matrix(matrix, assignments: Sequence[int], path: str | Path) -> Path:
    """Score distance matrix with rows/columns grouped by cluster."""
    order = np.argsort(np.asarray(assignments), kind="stable")
    m = np.asarray(matrix)[np.ix_(order, order)]
    fig, ax = plt.subplots(figsize=(6, 5), constrained_layout=True)
    im = ax.imshow(m, cmap="viridis")
    fig.colorbar(im, ax=ax, label="score distance [rad]")
    ax.set_xlabel("score (grouped by cluster)")
    ax.set_ylabel("score (grouped by cluster)")
    return _save(fig, path)
