"""Line-oriented score format and JSON gesture-library files.

Score grammar::

    laban v1
    meta name=thanks
    meta source=authored
    row 1 | place-low place-low forward-middle forward-middle place-high
    row 0.5 | hold hold hold right-middle hold

Rows run top-to-bottom in file order (first line is the first key pose).
Blank lines and ``#`` comment lines are ignored by the parser and dropped by
the serializer.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .codebook import HOLD, Codebook, default_codebook, parse_symbol
from .library import Category, GestureConceptPair, GestureLibrary
from .score import COLUMNS, N_COLUMNS, LabanScore

HEADER = "laban v1"
LIBRARY_VERSION = 1
_KNOWN_META = ("name", "source", "bpm")


class LabanParseError(ValueError):
    """Base class; every parse error knows where it happened (1-based)."""

    kind = "syntax"

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ScoreSyntaxError(LabanParseError):
    kind = "syntax"


class UnknownSymbolError(LabanParseError):
    kind = "unknown-symbol"


class ColumnCountError(LabanParseError):
    kind = "column-count"


class DurationError(LabanParseError):
    kind = "duration"


@dataclass(frozen=True)
class ScoreDocument:
    score: LabanScore
    name: str | None = None
    source: str | None = None
    bpm: float | None = None
    extra: tuple[tuple[str, str], ...] = field(default=())

    @property
    def metadata(self) -> dict[str, str]:
        meta = {}
        if self.name is not None:
            meta["name"] = self.name
        if self.source is not None:
            meta["source"] = self.source
        if self.bpm is not None:
            meta["bpm"] = format_number(self.bpm)
        meta.update(sorted(self.extra))
        return meta


def format_number(x: float) -> str:
    """Shortest decimal form that round-trips: 1.0 -> '1', 0.25 -> '0.25'."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def parse_score(text: str, codebook: Codebook | None = None) -> ScoreDocument:
    """Parse a score document. Raises a :class:`LabanParseError` subclass on bad input."""
    codebook = codebook or default_codebook()
    lines = text.splitlines()
    header_seen = False
    meta: dict[str, str] = {}
    rows = []
    durations = []
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip()) + 1
        if not header_seen:
            if stripped != HEADER:
                raise ScoreSyntaxError(f"expected header {HEADER!r}", lineno, indent)
            header_seen = True
            continue
        keyword, _, rest = stripped.partition(" ")
        if keyword == "meta":
            if rows:
                raise ScoreSyntaxError("meta lines must precede rows", lineno, indent)
            key, eq, value = rest.partition("=")
            key = key.strip()
            if not eq or not key or not key.replace("_", "").replace("-", "").isalnum():
                raise ScoreSyntaxError("expected meta key=value", lineno, indent + 5)
            if key in meta:
                raise ScoreSyntaxError(f"duplicate meta key {key!r}", lineno, indent + 5)
            meta[key] = value.strip()
        elif keyword == "row":
            row, dur, cols = _parse_row(raw, lineno, codebook)
            if not rows and HOLD in row:
                col = cols[row.index(HOLD)]
                raise ScoreSyntaxError("hold cannot appear in the first row", lineno, col)
            rows.append(row)
            durations.append(dur)
        else:
            raise ScoreSyntaxError(f"unexpected {keyword!r}", lineno, indent)
    if not header_seen:
        raise ScoreSyntaxError(f"missing header {HEADER!r}", max(len(lines), 1), 1)
    if not rows:
        raise ScoreSyntaxError("score has no rows", max(len(lines), 1), 1)

    bpm = None
    if "bpm" in meta:
        try:
            bpm = float(meta["bpm"])
        except ValueError:
            bpm = -1.0
        if not (bpm > 0 and math.isfinite(bpm)):
            raise ScoreSyntaxError("bpm must be a positive number", _meta_line(lines, "bpm"), 1)
    extra = tuple(sorted((k, v) for k, v in meta.items() if k not in _KNOWN_META))
    return ScoreDocument(
        LabanScore(tuple(rows), tuple(durations)),
        name=meta.get("name"),
        source=meta.get("source"),
        bpm=bpm,
        extra=extra,
    )


def _meta_line(lines: list[str], key: str) -> int:
    for i, line in enumerate(lines, start=1):
        if line.strip().startswith(f"meta {key}"):
            return i
    return 1


def _parse_row(raw: str, lineno: int, codebook: Codebook):
    body = raw.lstrip()
    offset = len(raw) - len(body)
    head, bar, cells = body.partition("|")
    if not bar:
        raise ScoreSyntaxError("expected '|' between duration and symbols", lineno, offset + len(body) + 1)
    parts = head.split()
    if len(parts) != 2:
        raise ScoreSyntaxError("expected 'row <duration> |'", lineno, offset + 1)
    dur_col = offset + head.index(parts[1]) + 1
    try:
        dur = float(parts[1])
    except ValueError:
        raise ScoreSyntaxError(f"bad duration {parts[1]!r}", lineno, dur_col) from None
    if not (dur > 0 and math.isfinite(dur)):
        raise DurationError(f"duration must be positive, got {parts[1]}", lineno, dur_col)

    cells_start = offset + len(head) + 1
    tokens = []
    pos = 0
    for tok in cells.split():
        pos = cells.index(tok, pos)
        tokens.append((tok, cells_start + pos + 1))
        pos += len(tok)
    if len(tokens) != N_COLUMNS:
        if len(tokens) > N_COLUMNS:
            col = tokens[N_COLUMNS][1]
        else:
            col = len(raw.rstrip()) + 1
        raise ColumnCountError(f"expected {N_COLUMNS} symbols, found {len(tokens)}", lineno, col)
    row = []
    for tok, col in tokens:
        try:
            sym = parse_symbol(tok)
        except ValueError:
            raise UnknownSymbolError(f"unknown symbol {tok!r}", lineno, col) from None
        if sym is not HOLD and sym not in codebook:
            raise UnknownSymbolError(f"symbol {tok!r} is not in codebook {codebook.name!r}", lineno, col)
        row.append(sym)
    return tuple(row), dur, [c for _, c in tokens]


def serialize_score(doc: ScoreDocument | LabanScore) -> str:
    if isinstance(doc, LabanScore):
        doc = ScoreDocument(doc)
    out = [HEADER]
    for key, value in doc.metadata.items():
        if "\n" in value:
            raise ValueError(f"meta value for {key!r} contains a newline")
        out.append(f"meta {key}={value.strip()}")
    for row, dur in zip(doc.score.rows, doc.score.durations):
        out.append(f"row {format_number(dur)} | " + " ".join(c.name for c in row))
    return "\n".join(out) + "\n"


def render_staff(doc: ScoreDocument | LabanScore) -> str:
    """Human-oriented view: last pose on top, time flowing upward like a staff."""
    score = doc.score if isinstance(doc, ScoreDocument) else doc
    names = [c.value for c in COLUMNS]
    cells = [[c.name for c in row] for row in score.rows]
    width = max(len(s) for s in names + [x for r in cells for x in r])
    dwidth = max(len(format_number(d)) for d in score.durations)
    lines = []
    for i in range(score.n_rows - 1, -1, -1):
        dur = format_number(score.durations[i]).rjust(dwidth)
        lines.append(f"{i + 1:>3} {dur} | " + " ".join(c.ljust(width) for c in cells[i]).rstrip())
    lines.append("    " + " " * dwidth + " + " + " ".join(n.ljust(width) for n in names).rstrip())
    return "\n".join(lines) + "\n"


def read_score(path: str | Path, codebook: Codebook | None = None) -> ScoreDocument:
    return parse_score(Path(path).read_text(encoding="utf-8"), codebook)


def write_score(doc: ScoreDocument, path: str | Path) -> None:
    Path(path).write_text(serialize_score(doc), encoding="utf-8")


# -- library files ---------------------------------------------------------


def _score_from_json(value, codebook: Codebook, where: str) -> ScoreDocument:
    if isinstance(value, str):
        return parse_score(value, codebook)
    if isinstance(value, list):
        text = HEADER + "\n" + "".join(
            f"row {r['duration']} | {' '.join(r['symbols'])}\n" for r in value
        )
        return parse_score(text, codebook)
    raise LibraryFormatError(f"{where}: score must be text or a list of rows")


class LibraryFormatError(ValueError):
    pass


def library_from_json(data: dict, codebook: Codebook | None = None) -> GestureLibrary:
    codebook = codebook or default_codebook()
    if not isinstance(data, dict) or "pairs" not in data:
        raise LibraryFormatError("library must be an object with a 'pairs' list")
    if data.get("version", LIBRARY_VERSION) != LIBRARY_VERSION:
        raise LibraryFormatError(f"unsupported library version {data.get('version')!r}")
    pairs = []
    for n, entry in enumerate(data["pairs"]):
        where = f"pair {n} ({entry.get('concept', '?')})"
        try:
            doc = _score_from_json(entry["score"], codebook, where)
            variants = [_score_from_json(v, codebook, where).score for v in entry.get("variants", [])]
            meta = dict(doc.metadata)
            pairs.append(
                GestureConceptPair(
                    concept=entry["concept"],
                    category=Category(entry["category"]),
                    words=tuple(entry.get("words", [])),
                    score=doc.score,
                    variants=tuple(variants),
                    metadata=tuple(meta.items()),
                )
            )
        except KeyError as exc:
            raise LibraryFormatError(f"{where}: missing field {exc}") from None
        except LabanParseError as exc:
            raise LibraryFormatError(f"{where}: {exc}") from exc
    return GestureLibrary(tuple(pairs), codebook)


def library_to_json(lib: GestureLibrary) -> dict:
    pairs = []
    for p in lib.pairs:
        meta = dict(p.metadata)
        doc = ScoreDocument(
            p.score,
            name=meta.pop("name", None),
            source=meta.pop("source", None),
            bpm=float(meta.pop("bpm")) if "bpm" in meta else None,
            extra=tuple(sorted(meta.items())),
        )
        entry = {
            "concept": p.concept,
            "category": p.category.value,
            "words": list(p.words),
            "score": serialize_score(doc),
        }
        if p.variants:
            entry["variants"] = [serialize_score(v) for v in p.variants]
        pairs.append(entry)
    return {"version": LIBRARY_VERSION, "pairs": pairs}


def parse_library(text: str, codebook: Codebook | None = None) -> GestureLibrary:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LibraryFormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return library_from_json(data, codebook)


def write_library(lib: GestureLibrary) -> str:
    return json.dumps(library_to_json(lib), indent=2, ensure_ascii=False) + "\n"


def load_library(path: str | Path | None = None, codebook: Codebook | None = None) -> GestureLibrary:
    """Load a library file; with no path, the bundled seed library."""
    if path is None:
        from .codebook import bundled_path

        path = bundled_path("seed_library.json")
    return parse_library(Path(path).read_text(encoding="utf-8"), codebook)
