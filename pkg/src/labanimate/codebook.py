"""Direction symbols and the codebook that maps them onto the unit sphere.

Body frame convention used everywhere: +X forward, +Y left, +Z up (right-handed,
torso-attached). Angles are radians.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Union

import numpy as np


class Azimuth(str, Enum):
    PLACE = "place"
    FORWARD = "forward"
    RIGHT_FORWARD = "right-forward"
    RIGHT = "right"
    RIGHT_BACKWARD = "right-backward"
    BACKWARD = "backward"
    LEFT_BACKWARD = "left-backward"
    LEFT = "left"
    LEFT_FORWARD = "left-forward"


class Level(str, Enum):
    HIGH = "high"
    MIDDLE = "middle"
    LOW = "low"


@dataclass(frozen=True, order=True)
class Direction:
    azimuth: Azimuth
    level: Level

    @property
    def name(self) -> str:
        return f"{self.azimuth.value}-{self.level.value}"

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Direction({self.name!r})"


class _Hold:
    """Singleton token: keep the previous direction of this column."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    name = "hold"

    def __str__(self) -> str:
        return "hold"

    def __repr__(self) -> str:
        return "HOLD"

    def __reduce__(self):
        return (_Hold, ())


HOLD = _Hold()

Symbol = Union[Direction, _Hold]


class CodebookError(ValueError):
    pass


class SymbolLookupError(KeyError):
    """A symbol is not part of the codebook in use."""


def parse_symbol(text: str) -> Symbol:
    """Parse a lowercase hyphenated name such as ``right-forward-high`` or ``hold``."""
    text = text.strip().lower()
    if text == "hold":
        return HOLD
    az, sep, lvl = text.rpartition("-")
    if not sep:
        raise ValueError(f"not a direction symbol: {text!r}")
    try:
        return Direction(Azimuth(az), Level(lvl))
    except ValueError:
        raise ValueError(f"not a direction symbol: {text!r}") from None


_AZIMUTH_DEG = {
    Azimuth.FORWARD: 0.0,
    Azimuth.LEFT_FORWARD: 45.0,
    Azimuth.LEFT: 90.0,
    Azimuth.LEFT_BACKWARD: 135.0,
    Azimuth.BACKWARD: 180.0,
    Azimuth.RIGHT_BACKWARD: -135.0,
    Azimuth.RIGHT: -90.0,
    Azimuth.RIGHT_FORWARD: -45.0,
}
_LEVEL_DEG = {Level.HIGH: 45.0, Level.MIDDLE: 0.0, Level.LOW: -45.0}


def canonical_vector(direction: Direction) -> np.ndarray:
    """Unit vector of a direction under the default 8 azimuth x 3 level layout."""
    if direction.azimuth is Azimuth.PLACE:
        if direction.level is Level.HIGH:
            return np.array([0.0, 0.0, 1.0])
        if direction.level is Level.LOW:
            return np.array([0.0, 0.0, -1.0])
        raise CodebookError("place-middle has no spatial direction")
    az = math.radians(_AZIMUTH_DEG[direction.azimuth])
    el = math.radians(_LEVEL_DEG[direction.level])
    v = np.array([math.cos(el) * math.cos(az), math.cos(el) * math.sin(az), math.sin(el)])
    # snap the cos/sin(90 deg) residue so axis-aligned entries are exact
    v[np.abs(v) < 1e-15] = 0.0
    return v / np.linalg.norm(v)


class Codebook:
    """Ordered, named set of (direction, unit vector) entries.

    Order matters: quantization ties go to the earliest entry.
    """

    def __init__(self, name: str, entries: Iterable[tuple[Direction, Iterable[float]]]):
        self.name = name
        symbols: list[Direction] = []
        vectors = []
        for sym, vec in entries:
            if not isinstance(sym, Direction):
                raise CodebookError(f"codebook entries must be directions, got {sym!r}")
            v = np.asarray(vec, dtype=float)
            if v.shape != (3,):
                raise CodebookError(f"{sym.name}: vector must have 3 components")
            n = np.linalg.norm(v)
            if abs(n - 1.0) > 1e-9:
                raise CodebookError(f"{sym.name}: vector is not unit length (|v|={n})")
            symbols.append(sym)
            vectors.append(v)
        if len(set(symbols)) != len(symbols):
            raise CodebookError("duplicate symbols in codebook")
        if len(symbols) < 2:
            raise CodebookError("a codebook needs at least 2 entries")
        self.symbols: tuple[Direction, ...] = tuple(symbols)
        self.vectors = np.array(vectors)
        self.vectors.setflags(write=False)
        self._index = {s: i for i, s in enumerate(self.symbols)}

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, sym) -> bool:
        return sym in self._index

    def __repr__(self) -> str:
        return f"Codebook({self.name!r}, {len(self)} entries)"

    def index(self, sym: Symbol) -> int:
        try:
            return self._index[sym]
        except (KeyError, TypeError):
            raise SymbolLookupError(f"{sym} is not in codebook {self.name!r}") from None

    def vector(self, sym: Symbol) -> np.ndarray:
        return self.vectors[self.index(sym)]

    @cached_property
    def angle_table(self) -> np.ndarray:
        """Pairwise geodesic distances between entries; exact zeros on the diagonal."""
        table = np.empty((len(self), len(self)))
        for i, u in enumerate(self.vectors):
            for j, v in enumerate(self.vectors):
                table[i, j] = 0.0 if i == j else _angle(u, v)
        # collinear triples (60 + 60 = 120 deg) can break the triangle inequality
        # by an ulp; a shortest-path closure fixes that without moving any real value
        while True:
            closed = np.min(table[:, :, None] + table[None, :, :], axis=1)
            closed = np.minimum(table, closed)
            if np.array_equal(closed, table):
                break
            table = closed
        table.setflags(write=False)
        return table

    @cached_property
    def min_separation(self) -> float:
        """Smallest angle between two distinct entries."""
        t = self.angle_table + np.diag(np.full(len(self), np.inf))
        return float(t.min())

    def quantize(self, v) -> Direction:
        return quantize_direction(v, self)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "entries": [
                {"azimuth": s.azimuth.value, "level": s.level.value, "vector": [float(x) for x in v]}
                for s, v in zip(self.symbols, self.vectors)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Codebook":
        try:
            entries = [
                (Direction(Azimuth(e["azimuth"]), Level(e["level"])), e["vector"])
                for e in data["entries"]
            ]
            return cls(data["name"], entries)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CodebookError):
                raise
            raise CodebookError(f"malformed codebook: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "Codebook":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _angle(u: np.ndarray, v: np.ndarray) -> float:
    # atan2 form stays accurate near 0 and pi where arccos loses digits
    return math.atan2(float(np.linalg.norm(np.cross(u, v))), float(np.dot(u, v)))


def default_codebook() -> Codebook:
    """26 spatial directions: 8 azimuths x 3 levels, plus place-high and place-low.

    Together with HOLD and the reserved place-middle slot the symbol alphabet
    has 28 entries.
    """
    return _DEFAULT


def _build_default() -> Codebook:
    entries = []
    for az in Azimuth:
        for lvl in Level:
            if az is Azimuth.PLACE and lvl is Level.MIDDLE:
                continue
            d = Direction(az, lvl)
            entries.append((d, canonical_vector(d)))
    return Codebook("default-26", entries)


_DEFAULT = _build_default()


def spatial_symbols(codebook: Codebook | None = None) -> tuple[Direction, ...]:
    return (codebook or _DEFAULT).symbols


def load_codebook(path: str | Path | None = None) -> Codebook:
    if path is None:
        return default_codebook()
    return Codebook.load(path)


def quantize_direction(v, codebook: Codebook | None = None) -> Direction:
    """Nearest codebook direction by angle; first entry wins ties."""
    codebook = codebook or _DEFAULT
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n < 1e-12:
        raise ValueError("cannot quantize a zero-length vector")
    dots = codebook.vectors @ (v / n)
    # max cosine == min angle; argmax returns the first maximum
    return codebook.symbols[int(np.argmax(dots))]


def geodesic_distance(a: Symbol, b: Symbol, codebook: Codebook | None = None) -> float:
    codebook = codebook or _DEFAULT
    if a is HOLD or b is HOLD:
        raise ValueError("resolve HOLD cells before measuring distance")
    return float(codebook.angle_table[codebook.index(a), codebook.index(b)])


def write_default_codebook(path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_DEFAULT.to_json(), fh, indent=2)
        fh.write("\n")


def bundled_path(*parts: str) -> Path:
    res = resources.files("labanimate").joinpath("data")
    for part in parts:
        res = res.joinpath(part)
    return Path(str(res))
