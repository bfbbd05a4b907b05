"""The T x 5 Labanotation score and the distance between two scores."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .codebook import HOLD, Codebook, Direction, Symbol, default_codebook

DEFAULT_COMMON_ROWS = 20


class BodyColumn(str, Enum):
    LEFT_LOWER_ARM = "left-lower-arm"
    LEFT_UPPER_ARM = "left-upper-arm"
    RIGHT_LOWER_ARM = "right-lower-arm"
    RIGHT_UPPER_ARM = "right-upper-arm"
    HEAD = "head"


COLUMNS: tuple[BodyColumn, ...] = tuple(BodyColumn)
N_COLUMNS = len(COLUMNS)

Row = tuple[Symbol, Symbol, Symbol, Symbol, Symbol]


class ScoreError(ValueError):
    pass


@dataclass(frozen=True)
class LabanScore:
    """Key-pose rows (first row = first pose) with a duration in beats per row."""

    rows: tuple[Row, ...]
    durations: tuple[float, ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        durations = tuple(float(d) for d in self.durations)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "durations", durations)
        if not rows:
            raise ScoreError("a score needs at least one row")
        if len(durations) != len(rows):
            raise ScoreError("one duration per row is required")
        for i, row in enumerate(rows):
            if len(row) != N_COLUMNS:
                raise ScoreError(f"row {i + 1} has {len(row)} entries, expected {N_COLUMNS}")
            for cell in row:
                if cell is not HOLD and not isinstance(cell, Direction):
                    raise ScoreError(f"row {i + 1}: {cell!r} is not a symbol")
        for i, d in enumerate(durations):
            if not (d > 0 and math.isfinite(d)):
                raise ScoreError(f"row {i + 1}: duration must be positive, got {d}")
        if any(cell is HOLD for cell in rows[0]):
            raise ScoreError("HOLD cannot appear in the first row")

    @classmethod
    def uniform(cls, rows: Sequence[Sequence[Symbol]], duration: float = 1.0) -> "LabanScore":
        return cls(tuple(tuple(r) for r in rows), (duration,) * len(rows))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def total_duration(self) -> float:
        return math.fsum(self.durations)

    def column(self, col: BodyColumn | int) -> tuple[Symbol, ...]:
        j = COLUMNS.index(col) if isinstance(col, BodyColumn) else col
        return tuple(r[j] for r in self.rows)

    def resolved(self) -> "LabanScore":
        """Replace every HOLD by the nearest preceding concrete symbol of its column."""
        if not self.has_holds:
            return self
        out = [self.rows[0]]
        for row in self.rows[1:]:
            prev = out[-1]
            out.append(tuple(p if c is HOLD else c for c, p in zip(row, prev)))
        return LabanScore(tuple(out), self.durations)

    @property
    def has_holds(self) -> bool:
        return any(c is HOLD for r in self.rows for c in r)

    def with_holds(self) -> "LabanScore":
        """Inverse of :meth:`resolved`: repeated symbols after row 1 become HOLD."""
        res = self.resolved()
        out = [res.rows[0]]
        for prev, row in zip(res.rows, res.rows[1:]):
            out.append(tuple(HOLD if c == p else c for c, p in zip(row, prev)))
        return LabanScore(tuple(out), self.durations)

    def index_matrix(self, codebook: Codebook | None = None) -> np.ndarray:
        """T x 5 integer matrix of codebook indices (HOLDs resolved)."""
        codebook = codebook or default_codebook()
        res = self.resolved()
        return np.array([[codebook.index(c) for c in row] for row in res.rows], dtype=np.intp)


def resample_score(score: LabanScore, n_rows: int) -> LabanScore:
    """Sample ``n_rows`` equally spaced instants of the duration-weighted timeline.

    Row k (0-based) takes the source row active at normalized time k/(n_rows-1);
    a time that falls exactly on a row boundary belongs to the earlier row.
    Output rows have uniform durations and resolved HOLDs.
    """
    if n_rows < 1:
        raise ValueError("n_rows must be >= 1")
    uniform = len(set(score.durations)) == 1
    res = score.resolved()
    if n_rows == score.n_rows and uniform:
        return res
    total = res.total_duration
    ends = np.cumsum(res.durations) / total
    ends[-1] = 1.0
    picked = []
    for k in range(n_rows):
        u = 0.0 if n_rows == 1 else k / (n_rows - 1)
        # first row whose end is at or after u; tolerance absorbs cumsum rounding
        i = int(np.searchsorted(ends, u - 1e-12, side="left"))
        picked.append(res.rows[min(i, res.n_rows - 1)])
    duration = res.durations[0] if uniform else total / n_rows
    return LabanScore(tuple(picked), (duration,) * n_rows)


def align_scores(a: LabanScore, b: LabanScore, common_rows: int = DEFAULT_COMMON_ROWS):
    if a.n_rows == b.n_rows:
        return a, b
    return resample_score(a, common_rows), resample_score(b, common_rows)


def score_distance(
    a: LabanScore,
    b: LabanScore,
    codebook: Codebook | None = None,
    common_rows: int = DEFAULT_COMMON_ROWS,
) -> float:
    """Sum of cell-wise geodesic distances; unequal row counts are resampled first."""
    codebook = codebook or default_codebook()
    a, b = align_scores(a, b, common_rows)
    ia = a.index_matrix(codebook)
    ib = b.index_matrix(codebook)
    return math.fsum(codebook.angle_table[ia, ib].ravel().tolist())
