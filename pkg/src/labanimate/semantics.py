"""Sentence tokenization and word-vector match strength between a sentence and a pair."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Sentence:
    raw: str
    tokens: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)


def normalize_word(text: str) -> str:
    """Lowercase, drop everything but letters/digits/apostrophes, collapse spaces."""
    text = text.lower().replace("’", "'")
    kept = "".join(ch for ch in text if ch.isalnum() or ch == "'" or ch.isspace())
    return " ".join(kept.split())


def tokenize(text: str) -> Sentence:
    return Sentence(text, tuple(normalize_word(text).split()))


class EmbeddingFormatError(ValueError):
    pass


class EmbeddingTable:
    """Immutable word -> unit vector mapping."""

    def __init__(self, vectors: Mapping[str, Sequence[float]]):
        self._vectors: dict[str, np.ndarray] = {}
        dim = None
        for word, vec in vectors.items():
            v = np.asarray(vec, dtype=float)
            if dim is None:
                dim = v.shape
            elif v.shape != dim:
                raise EmbeddingFormatError(f"{word!r}: dimension {v.shape} differs from {dim}")
            n = np.linalg.norm(v)
            if not np.isfinite(n) or n == 0:
                log.warning("skipping zero or non-finite vector for %r", word)
                continue
            u = v / n
            u.setflags(write=False)
            self._vectors[word] = u
        self.dim = int(dim[0]) if dim else 0

    def __contains__(self, word: str) -> bool:
        return word in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def get(self, word: str) -> np.ndarray | None:
        v = self._vectors.get(word)
        if v is None and " " in word:
            v = self._vectors.get(word.replace(" ", "_"))
        return v

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingTable":
        """Read the plain ``word v1 ... vd`` format, with an optional ``count dim`` header."""
        vectors: dict[str, list[float]] = {}
        with open(path, encoding="utf-8", errors="replace") as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.rstrip("\n").split()
                if not parts:
                    continue
                if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                    continue
                try:
                    vectors[parts[0]] = [float(x) for x in parts[1:]]
                except ValueError:
                    raise EmbeddingFormatError(f"{path}:{lineno}: non-numeric component") from None
                if not vectors[parts[0]]:
                    raise EmbeddingFormatError(f"{path}:{lineno}: word without vector")
        return cls(vectors)


@dataclass(frozen=True)
class RampParams:
    tau0: float = 0.3
    tau1: float = 0.7

    def __post_init__(self):
        if not (0 <= self.tau0 < self.tau1 <= 1):
            raise ValueError(f"need 0 <= tau0 < tau1 <= 1, got {self.tau0}, {self.tau1}")


def word_similarity(a: str, b: str, table: EmbeddingTable | None = None) -> float:
    """Cosine similarity; out-of-vocabulary words only match themselves."""
    if a == b:
        return 1.0
    if table is None:
        return 0.0
    u, v = table.get(a), table.get(b)
    if u is None or v is None:
        return 0.0
    return float(np.clip(np.dot(u, v), -1.0, 1.0))


@lru_cache(maxsize=4096)
def _normalized_group(group: tuple[str, ...]) -> tuple[tuple[str, ...], frozenset[str]]:
    words = tuple(normalize_word(g) for g in group)
    return words, frozenset(words)


def word_to_group(word: str, group: Sequence[str], table: EmbeddingTable | None = None) -> float:
    """Best similarity between ``word`` and any word of the group."""
    if not group:
        raise ValueError("word group must be non-empty")
    words, members = _normalized_group(tuple(group))
    if word in members:
        return 1.0
    if table is None or word not in table:
        return 0.0
    return max(word_similarity(word, g, table) for g in words)


def ramp(e: float, params: RampParams = RampParams()) -> float:
    if e < params.tau0:
        return 0.0
    if e > params.tau1:
        return 1.0
    return (e - params.tau0) / (params.tau1 - params.tau0)


def match_strength(
    sentence: Sentence | Iterable[str],
    pair,
    table: EmbeddingTable | None = None,
    params: RampParams = RampParams(),
) -> float:
    """Sum over tokens of ramp(best similarity to the pair's words).

    ``pair`` is a gesture-concept pair or just its word list.
    """
    words = getattr(pair, "words", pair)
    tokens = sentence.tokens if isinstance(sentence, Sentence) else tuple(sentence)
    if not tokens:
        return 0.0
    if not words:
        raise ValueError("word group must be non-empty")
    _, members = _normalized_group(tuple(words))
    total = 0.0
    for t in tokens:
        # exact members short-circuit to ramp(1) == 1 for every valid ramp
        total += 1.0 if t in members else ramp(word_to_group(t, words, table), params)
    return total
