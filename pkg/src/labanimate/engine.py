"""Pick exactly one gesture-concept pair for an utterance.

Order of the cascade: deictic word (random gate), leading wh-word (random
gate), word-vector match against the general pairs, and finally the beat
gesture as the default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from .library import Category, GestureConceptPair, GestureLibrary
from .score import LabanScore
from .semantics import EmbeddingTable, RampParams, match_strength, tokenize


class Rng(Protocol):
    def uniform(self, low: float, high: float) -> float: ...

    def integers(self, high: int) -> int: ...


class ConfigurationError(RuntimeError):
    pass


@dataclass(frozen=True)
class EngineConfig:
    deictic_words: tuple[str, ...] = ("this", "that", "here", "there")
    question_words: tuple[str, ...] = ("who", "what", "when", "where", "how")
    ignored_question_words: tuple[str, ...] = ("do", "does")
    random_threshold: float = 5.0
    match_threshold: float = 0.5
    candidate_ratio: float = 0.95
    ramp: RampParams = field(default_factory=RampParams)
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.random_threshold <= 10:
            raise ValueError("random_threshold must lie in [0, 10]")
        if not 0 < self.candidate_ratio <= 1:
            raise ValueError("candidate_ratio must lie in (0, 1]")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")


@dataclass(frozen=True)
class Trace:
    tokens: tuple[str, ...] = ()
    matched_word: str | None = None
    draws: tuple[tuple[str, float], ...] = ()
    strengths: tuple[tuple[str, float], ...] = ()
    candidates: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "tokens": list(self.tokens),
            "matched_word": self.matched_word,
            "draws": [{"step": s, "value": v} for s, v in self.draws],
            "strengths": {c: v for c, v in self.strengths},
            "candidates": list(self.candidates),
        }


@dataclass(frozen=True)
class SelectionResult:
    pair: GestureConceptPair
    branch: str
    trace: Trace

    @property
    def concept(self) -> str:
        return self.pair.concept


def _draw(rng: Rng) -> float:
    return float(rng.uniform(0.0, 10.0))


def select_gesture(
    text: str,
    library: GestureLibrary,
    table: EmbeddingTable | None,
    config: EngineConfig,
    rng: Rng,
) -> SelectionResult:
    beats = library.by_category(Category.BEAT)
    if len(beats) != 1:
        raise ConfigurationError("library must contain exactly one beat pair")
    sentence = tokenize(text)
    tokens = sentence.tokens
    draws: list[tuple[str, float]] = []

    deictic = next((t for t in tokens if t in config.deictic_words), None)
    if deictic is not None:
        r = _draw(rng)
        draws.append(("deictic", r))
        if r > config.random_threshold:
            pair = next((p for p in library.by_category(Category.DEICTIC) if p.concept == deictic), None)
            if pair is None:
                raise ConfigurationError(f"no deictic pair for {deictic!r}")
            return SelectionResult(pair, "deictic", Trace(tokens, deictic, tuple(draws)))

    first = tokens[0] if tokens else None
    if first in config.question_words and first not in config.ignored_question_words:
        r = _draw(rng)
        draws.append(("question", r))
        if r > config.random_threshold:
            questions = library.by_category(Category.QUESTION)
            if not questions:
                raise ConfigurationError("library has no question pair")
            return SelectionResult(questions[0], "question", Trace(tokens, first, tuple(draws)))

    general = library.by_category(Category.GENERAL)
    strengths = tuple((p.concept, match_strength(sentence, p, table, config.ramp)) for p in general)
    best = max((s for _, s in strengths), default=0.0)
    if best > config.match_threshold:
        cutoff = config.candidate_ratio * best
        candidates = [p for p, (_, s) in zip(general, strengths) if s >= cutoff]
        pick = candidates[int(rng.integers(len(candidates)))]
        trace = Trace(tokens, None, tuple(draws), strengths, tuple(p.concept for p in candidates))
        return SelectionResult(pick, "semantic", trace)

    return SelectionResult(beats[0], "beat", Trace(tokens, None, tuple(draws), strengths))


def pick_variant(pair: GestureConceptPair, rng: Rng) -> LabanScore:
    """Uniform choice among the base score and its variants."""
    if not pair.variants:
        return pair.score
    k = int(rng.integers(len(pair.variants) + 1))
    return pair.score if k == 0 else pair.variants[k - 1]
