"""Concept-indexed gesture library: pairs, validation, clustering, variants."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from .codebook import HOLD, Codebook, default_codebook
from .score import LabanScore, score_distance

DEICTIC_WORDS = ("this", "that", "here", "there")


class Category(str, Enum):
    GENERAL = "general"
    DEICTIC = "deictic"
    QUESTION = "question"
    BEAT = "beat"


class LibraryError(ValueError):
    pass


class DuplicateConceptError(LibraryError):
    pass


class MissingBeatError(LibraryError):
    pass


@dataclass(frozen=True)
class GestureConceptPair:
    concept: str
    category: Category
    words: tuple[str, ...]
    score: LabanScore
    variants: tuple[LabanScore, ...] = ()
    metadata: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "category", Category(self.category))
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "variants", tuple(self.variants))
        object.__setattr__(self, "metadata", tuple(self.metadata))
        if not self.concept:
            raise LibraryError("concept name must be non-empty")
        if self.category is Category.GENERAL and not self.words:
            raise LibraryError(f"general pair {self.concept!r} needs representative words")

    def with_variants(self, variants: Iterable[LabanScore]) -> "GestureConceptPair":
        return replace(self, variants=self.variants + tuple(variants))


@dataclass(frozen=True)
class GestureLibrary:
    pairs: tuple[GestureConceptPair, ...]
    codebook: Codebook = field(default_factory=default_codebook, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        seen = set()
        for p in self.pairs:
            if p.concept in seen:
                raise DuplicateConceptError(f"duplicate concept {p.concept!r}")
            seen.add(p.concept)
        beats = self.by_category(Category.BEAT)
        if not beats:
            raise MissingBeatError("library has no beat pair (needed as the default gesture)")
        if len(beats) > 1:
            raise LibraryError("library must contain exactly one beat pair")
        deictic = {p.concept for p in self.by_category(Category.DEICTIC)}
        if deictic and not set(DEICTIC_WORDS) <= deictic:
            missing = sorted(set(DEICTIC_WORDS) - deictic)
            raise LibraryError(f"deictic pairs must cover this/that/here/there; missing {missing}")
        for p in self.pairs:
            for s in (p.score, *p.variants):
                for row in s.rows:
                    for cell in row:
                        if cell is not HOLD:
                            self.codebook.index(cell)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def by_category(self, category: Category | str) -> list[GestureConceptPair]:
        category = Category(category)
        return [p for p in self.pairs if p.category is category]

    def get(self, concept: str) -> GestureConceptPair:
        for p in self.pairs:
            if p.concept == concept:
                return p
        raise KeyError(concept)

    @property
    def beat(self) -> GestureConceptPair:
        return self.by_category(Category.BEAT)[0]

    def counts(self) -> dict[str, int]:
        return {c.value: len(self.by_category(c)) for c in Category}

    def replace_pair(self, pair: GestureConceptPair) -> "GestureLibrary":
        pairs = tuple(pair if p.concept == pair.concept else p for p in self.pairs)
        return GestureLibrary(pairs, self.codebook)


def distance_matrix(scores: Sequence[LabanScore], codebook: Codebook | None = None) -> np.ndarray:
    n = len(scores)
    if n == 0:
        raise ValueError("need at least one score")
    m = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            m[i, j] = m[j, i] = score_distance(scores[i], scores[j], codebook)
    return m


@dataclass(frozen=True)
class ClusterResult:
    assignments: tuple[int, ...]
    medoids: dict[int, int]

    @property
    def n_clusters(self) -> int:
        return len(self.medoids)

    def members(self, cluster: int) -> list[int]:
        return [i for i, c in enumerate(self.assignments) if c == cluster]

    def partition(self) -> set[frozenset[int]]:
        return {frozenset(self.members(c)) for c in self.medoids}


def cluster_scores(matrix, k: int) -> ClusterResult:
    """Average-linkage agglomerative clustering cut at exactly ``k`` clusters.

    Merge ties go to the lexicographically smallest (i, j) cluster pair, where a
    cluster is identified by its smallest member index. Cluster ids in the
    result are numbered by that smallest member.
    """
    d = np.array(matrix, dtype=float)
    n = d.shape[0]
    if d.shape != (n, n):
        raise ValueError("distance matrix must be square")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")

    work = d.copy()
    work[np.tril_indices(n)] = np.inf
    sizes = np.ones(n)
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    active = np.ones(n, dtype=bool)

    for _ in range(n - k):
        flat = int(np.argmin(work))
        i, j = divmod(flat, n)
        # Lance-Williams update for average linkage, merging j into i (i < j)
        others = np.flatnonzero(active)
        others = others[(others != i) & (others != j)]
        dij = lambda a, b: work[min(a, b), max(a, b)]  # noqa: E731
        for o in others:
            new = (sizes[i] * dij(i, o) + sizes[j] * dij(j, o)) / (sizes[i] + sizes[j])
            work[min(i, o), max(i, o)] = new
        work[j, :] = np.inf
        work[:, j] = np.inf
        active[j] = False
        sizes[i] += sizes[j]
        members[i].extend(members.pop(j))

    roots = sorted(members)
    assignments = [0] * n
    medoids = {}
    for cid, root in enumerate(roots):
        group = sorted(members[root])
        for m in group:
            assignments[m] = cid
        sums = [d[m, group].sum() for m in group]
        medoids[cid] = group[int(np.argmin(sums))]
    return ClusterResult(tuple(assignments), medoids)


def add_variation(
    pair: GestureConceptPair | LabanScore,
    magnitude: float,
    rng: np.random.Generator,
    codebook: Codebook | None = None,
) -> LabanScore:
    """Rotate each concrete cell by a random angle <= ``magnitude`` and re-quantize.

    HOLD cells and the row count are left untouched.
    """
    if magnitude < 0:
        raise ValueError("magnitude must be >= 0")
    codebook = codebook or default_codebook()
    score = pair.score if isinstance(pair, GestureConceptPair) else pair
    if magnitude == 0:
        return score
    rows = []
    for row in score.rows:
        new_row = []
        for cell in row:
            if cell is HOLD:
                new_row.append(HOLD)
                continue
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            angle = rng.uniform(0.0, magnitude)
            v = Rotation.from_rotvec(axis * angle).apply(codebook.vector(cell))
            new_row.append(codebook.quantize(v))
        rows.append(tuple(new_row))
    return LabanScore(tuple(rows), score.durations)


def vary_pair(
    pair: GestureConceptPair,
    n_variants: int,
    magnitude: float,
    rng: np.random.Generator,
    codebook: Codebook | None = None,
) -> GestureConceptPair:
    """Return ``pair`` with ``n_variants`` new variants appended."""
    return pair.with_variants(add_variation(pair, magnitude, rng, codebook) for _ in range(n_variants))
