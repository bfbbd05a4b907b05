"""labanimate convert|cluster|select|compile|serve

Exit codes: 0 ok, 1 usage, 2 validation, 3 runtime.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .codebook import CodebookError, load_codebook
from .compiler import CompileError, ProfileError, TimingParams, compile_score, load_profile, validate_trajectory
from .config import ConfigError, load_config
from .engine import ConfigurationError, pick_variant, select_gesture
from .io import (
    LabanParseError,
    LibraryFormatError,
    ScoreDocument,
    load_library,
    parse_score,
    read_score,
    render_staff,
    serialize_score,
)
from .library import LibraryError, cluster_scores, distance_matrix
from .motion import (
    DegeneratePoseError,
    InvalidClipError,
    KeyframeParams,
    angular_speed_series,
    clip_to_score,
    detect_keyframes,
    load_clip,
)
from .semantics import EmbeddingFormatError, EmbeddingTable

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2, 3

VALIDATION_ERRORS = (
    LabanParseError,
    LibraryError,
    LibraryFormatError,
    ProfileError,
    CodebookError,
    InvalidClipError,
    DegeneratePoseError,
    CompileError,
    ConfigError,
    ConfigurationError,
    EmbeddingFormatError,
)

log = logging.getLogger("labanimate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_convert(args, cfg) -> int:
    codebook = load_codebook(cfg.codebook)
    params = KeyframeParams(args.window, args.threshold, args.min_gap)
    clip = load_clip(args.clip)
    score = clip_to_score(clip, params, codebook)
    doc = ScoreDocument(score, name=args.name or Path(args.clip).stem, source=f"motion:{Path(args.clip).name}")
    _emit(render_staff(doc) if args.render else serialize_score(doc), args.out)
    if args.plot:
        from .plotting import plot_speed_series

        series = angular_speed_series(clip, params)
        keys = detect_keyframes(series, params, clip.timestamps)
        plot_speed_series(clip.timestamps, series, keys, params.minima_speed_threshold, args.plot)
    return EXIT_OK


def cmd_cluster(args, cfg) -> int:
    codebook = load_codebook(cfg.codebook)
    files = sorted(p for p in Path(args.directory).iterdir() if p.suffix in (".laban", ".txt"))
    if not files:
        raise UsageError(f"no .laban score files in {args.directory}")
    docs = [read_score(p, codebook) for p in files]
    matrix = distance_matrix([d.score for d in docs], codebook)
    if not 1 <= args.k <= len(docs):
        raise UsageError(f"--k must be between 1 and the number of scores ({len(docs)})")
    result = cluster_scores(matrix, args.k)
    skeleton = {"version": 1, "pairs": []}
    print("cluster\tsize\tmedoid\tmembers")
    for cid, medoid in result.medoids.items():
        members = [files[i].name for i in result.members(cid)]
        print(f"{cid}\t{len(members)}\t{files[medoid].name}\t{','.join(members)}")
        skeleton["pairs"].append(
            {
                "concept": "",
                "category": "general",
                "words": [],
                "score": serialize_score(ScoreDocument(docs[medoid].score, source=f"medoid:{files[medoid].name}")),
                "members": members,
            }
        )
    if args.out:
        Path(args.out).write_text(json.dumps(skeleton, indent=2) + "\n", encoding="utf-8")
    if args.plot:
        from .plotting import plot_distance_matrix

        plot_distance_matrix(matrix, result.assignments, args.plot)
    return EXIT_OK


def cmd_select(args, cfg) -> int:
    codebook = load_codebook(cfg.codebook)
    library = load_library(cfg.library, codebook)
    table = EmbeddingTable.load(cfg.embeddings) if cfg.embeddings else None
    seed = cfg.seed if args.seed is None else args.seed
    rng = np.random.default_rng(seed)
    result = select_gesture(args.text, library, table, cfg.engine_config(), rng)
    score = pick_variant(result.pair, rng)
    lines = [f"# concept: {result.concept}", f"# branch: {result.branch}"]
    if args.trace:
        tr = result.trace
        lines.append(f"# seed: {seed}")
        lines.append(f"# tokens: {' '.join(tr.tokens)}")
        if tr.matched_word:
            lines.append(f"# matched: {tr.matched_word}")
        for step, value in tr.draws:
            lines.append(f"# draw {step}: {value:.6f}")
        for concept, s in tr.strengths:
            if s > 0:
                lines.append(f"# strength {concept}: {s:.6f}")
        if tr.candidates:
            lines.append(f"# candidates: {' '.join(tr.candidates)}")
    doc = ScoreDocument(score, name=result.concept)
    body = render_staff(doc) if args.render else serialize_score(doc)
    sys.stdout.write("\n".join(lines) + "\n" + body)
    return EXIT_OK


def cmd_compile(args, cfg) -> int:
    from .service import compile_document

    codebook = load_codebook(cfg.codebook)
    profile = load_profile(args.profile or cfg.profile)
    timing = TimingParams(args.seconds_per_beat or cfg.seconds_per_beat, args.strict)
    text = Path(args.score).read_text(encoding="utf-8")
    _emit(compile_document(text, profile, timing, codebook), args.out)
    if args.plot:
        from .plotting import plot_trajectory

        traj = compile_score(parse_score(text, codebook).score, profile, timing, codebook)
        report = validate_trajectory(traj, profile)
        for v in report.violations:
            log.warning("trajectory check: %s", v)
        plot_trajectory(traj, args.plot, title=f"{Path(args.score).stem} on {profile.name}")
    return EXIT_OK


def cmd_serve(args, cfg) -> int:
    from .service import GestureService, make_server

    service = GestureService(cfg)
    host, port = cfg.host_port
    server = make_server(service, host, port)
    log.info("serving %d pairs on http://%s:%d", len(service.library), *server.server_address[:2])
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--codebook", help="direction codebook JSON (default: 26-direction codebook)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="labanimate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("convert", parents=[common], help="skeleton clip -> score")
    p.add_argument("clip", help="clip file (.json or .csv)")
    p.add_argument("-o", "--out")
    p.add_argument("--name")
    p.add_argument("--window", type=int, default=5, help="smoothing window in frames (odd)")
    p.add_argument("--threshold", type=float, default=0.35, help="key-frame speed threshold, rad/s")
    p.add_argument("--min-gap", type=float, default=0.2, help="minimum key-frame spacing, s")
    p.add_argument("--render", action="store_true", help="print staff-ordered text instead")
    p.add_argument("--plot", help="write the speed curve with key frames to this image")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("cluster", parents=[common], help="cluster a directory of scores")
    p.add_argument("directory")
    p.add_argument("--k", type=int, default=32)
    p.add_argument("--out", help="library skeleton JSON (concepts left blank)")
    p.add_argument("--plot", help="write the grouped distance matrix to this image")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("select", parents=[common], help="pick one gesture for a sentence")
    p.add_argument("--text", required=True)
    p.add_argument("--library")
    p.add_argument("--embeddings")
    p.add_argument("--seed", type=int)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--render", action="store_true")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("compile", parents=[common], help="score -> joint trajectory JSON")
    p.add_argument("--score", required=True)
    p.add_argument("--profile", help="shipped profile name (full, reduced) or profile JSON path")
    p.add_argument("--seconds-per-beat", type=float)
    p.add_argument("--strict", action="store_true")
    p.add_argument("-o", "--out")
    p.add_argument("--plot", help="write joint angles over time to this image")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP gesture service")
    p.add_argument("--listen", help="host:port")
    p.add_argument("--library")
    p.add_argument("--embeddings")
    p.add_argument("--profile")
    p.add_argument("--seed", type=int)
    p.add_argument("--threshold", dest="match_threshold", type=float)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(message)s")
    overrides = {
        k: getattr(args, k, None)
        for k in ("codebook", "library", "embeddings", "listen", "match_threshold")
    }
    if args.command == "serve":
        overrides.update(seed=args.seed, profile=args.profile)
    try:
        cfg = load_config(args.config, **overrides)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"labanimate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VALIDATION_ERRORS as exc:
        print(f"labanimate: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"labanimate: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
