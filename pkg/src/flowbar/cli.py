"""Operator command line: ingest transcripts, serve the API, search the
catalog, analyze interaction logs, and generate synthetic logs.

Exit codes: 0 success, 1 (partial) failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .catalog import EventStore, IngestConfig, VideoMetadata, VideoStore, ingest_video
from .errors import ConfigError, EventValidationError, FlowbarError
from .events import validate_event
from .lexicon import ConceptLexicon, load_lexicon
from .relevance import search as search_catalog
from .remote import RemoteAnnotator
from .sessions import DEFAULT_GAP_MERGE_S, build_sessions
from .simulate import SimulationProfile, doubled_exploration_profile, load_profile, simulate, write_logs
from .stats import DEFAULT_N_REPEATS, analyze

_TRANSCRIPT_SUFFIXES = {".srt": "srt", ".vtt": "vtt", ".txt": "plain"}


def _load_lexicon_arg(path: str | None) -> ConceptLexicon:
    if path is None:
        return ConceptLexicon()
    return load_lexicon(path)


def _sidecar_metadata(path: Path) -> VideoMetadata:
    for candidate in (path.with_suffix(path.suffix + ".json"), path.with_suffix(".json")):
        if candidate.exists():
            raw = json.loads(candidate.read_text(encoding="utf-8"))
            return VideoMetadata(
                video_id=raw.get("video_id", path.stem),
                title=raw.get("title", path.stem),
                description=raw.get("description", ""),
                media_url=raw.get("media_url", ""),
                duration=raw.get("duration"),
                thumbnail_template=raw.get("thumbnail_template"),
            )
    return VideoMetadata(video_id=path.stem, title=path.stem)


def _collect_transcripts(paths: list[str]) -> list[Path]:
    files = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            for suffix in _TRANSCRIPT_SUFFIXES:
                files.extend(sorted(p.glob(f"*{suffix}")))
        else:
            files.append(p)
    return files


def cmd_ingest(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon_arg(args.lexicon)
    store = VideoStore(args.data_dir)
    remote = None
    if args.annotator == "remote":
        endpoint = args.endpoint or os.environ.get("FLOWBAR_ENDPOINT")
        if not endpoint:
            print("error: remote annotator needs --endpoint or FLOWBAR_ENDPOINT", file=sys.stderr)
            return 2
        remote = RemoteAnnotator(endpoint, api_key=args.api_key or os.environ.get("FLOWBAR_API_KEY"))
    config = IngestConfig(
        target_chars=args.target_chars,
        top_k=args.top_k,
        use_pagerank=not args.no_pagerank,
        annotator=args.annotator,
        remote=remote,
        overwrite=args.overwrite,
    )

    files = _collect_transcripts(args.paths)
    if not files:
        print("warning: no transcript files found", file=sys.stderr)
        return 0
    failures = 0
    for path in files:
        fmt = _TRANSCRIPT_SUFFIXES.get(path.suffix.lower())
        if fmt is None:
            print(f"{path}: skipped (unknown suffix)", file=sys.stderr)
            failures += 1
            continue
        try:
            video = ingest_video(_sidecar_metadata(path), path.read_bytes(), fmt, config, lexicon, store=store)
        except (FlowbarError, OSError, ValueError, json.JSONDecodeError) as exc:
            print(f"{path}: error: {exc}", file=sys.stderr)
            failures += 1
            continue
        n_concepts = sum(len(ef.annotations) for ef in video.fragments) + len(video.video_tags)
        print(f"{path}: stored {video.video_id}: {len(video.fragments)} fragments, {n_concepts} concepts")
    return 1 if failures else 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceConfig, build_app

    if not Path(args.data_dir).is_dir():
        print(f"error: data dir {args.data_dir!r} does not exist", file=sys.stderr)
        return 1
    lexicon = _load_lexicon_arg(args.lexicon)
    app = build_app(
        args.data_dir,
        lexicon,
        ServiceConfig(highlighting=not args.no_highlighting, n_levels=args.n_levels, default_mode=args.default_mode),
    )
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    except OSError as exc:
        print(f"error: cannot listen on {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon_arg(args.lexicon)
    store = VideoStore(args.data_dir)
    results = search_catalog(args.query, store.list(), k=args.limit, lexicon=lexicon)
    for i, result in enumerate(results, start=1):
        print(f"{i:>3}  {result.score:6.4f}  {result.video.video_id}  {result.video.title}")
    return 0


def _load_durations(args: argparse.Namespace, log_files: list[Path]) -> dict[str, float]:
    if args.durations:
        return {k: float(v) for k, v in json.loads(Path(args.durations).read_text(encoding="utf-8")).items()}
    if args.data_dir:
        store = VideoStore(args.data_dir)
        return {v.video_id: v.duration for v in store.list()}
    for log in log_files:
        sidecar = log.parent / "durations.json"
        if sidecar.exists():
            return {k: float(v) for k, v in json.loads(sidecar.read_text(encoding="utf-8")).items()}
    return {}


def cmd_analyze(args: argparse.Namespace) -> int:
    log_files = []
    for raw in args.logs:
        p = Path(raw)
        log_files.extend(sorted(p.glob("*.ndjson")) if p.is_dir() else [p])
    events = []
    for path in log_files:
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                events.append(validate_event(json.loads(line)))
            except (json.JSONDecodeError, FlowbarError) as exc:
                print(f"{path}:{lineno}: {exc}", file=sys.stderr)
                return 1
    if not events:
        print("error: no sessions found in the given logs", file=sys.stderr)
        return 1

    try:
        sessions = build_sessions(events, gap_merge=args.gap_merge, durations=_load_durations(args, log_files))
        report = analyze(
            sessions,
            n_repeats=args.n_repeats,
            base_seed=args.seed,
            zero_method=args.zero_method,
            strict_order=args.strict_order,
        )
    except (EventValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    (out / "report.txt").write_text(report.to_text(), encoding="utf-8")
    print(report.to_text(), end="")
    print(f"\nwrote {out / 'report.json'} and {out / 'report.txt'}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        if args.profile:
            profile = load_profile(args.profile)
        elif args.preset == "doubled-exploration":
            profile = doubled_exploration_profile()
        else:
            profile = SimulationProfile()
        logs, durations = simulate(profile, n_participants=args.participants, seed=args.seed)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    written = write_logs(logs, durations, args.out)
    print(f"wrote {len(written) - 1} session logs and durations.json to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowbar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="enrich transcripts into the catalog")
    p.add_argument("paths", nargs="+", help="transcript files (.srt/.vtt/.txt) or directories")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--lexicon", help="lexicon NDJSON file (local annotator)")
    p.add_argument("--annotator", choices=("local", "remote"), default="local")
    p.add_argument("--endpoint", help="remote annotator URL (or FLOWBAR_ENDPOINT)")
    p.add_argument("--api-key", help="remote annotator key (or FLOWBAR_API_KEY)")
    p.add_argument("--target-chars", type=int, default=5000)
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--no-pagerank", action="store_true")
    p.add_argument("--overwrite", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("serve", help="serve the catalog/telemetry HTTP API")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8571)
    p.add_argument("--no-highlighting", action="store_true", help="disable relevance shading")
    p.add_argument("--n-levels", type=int, default=4)
    p.add_argument("--default-mode", choices=("cfb_on", "cfb_off"), default="cfb_on", help="advisory client player mode")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("search", help="query the catalog from the terminal")
    p.add_argument("query")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--limit", type=int, default=10)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("analyze", help="compute interaction metrics and paired statistics")
    p.add_argument("logs", nargs="+", help="NDJSON event logs or directories of them")
    p.add_argument("--out", required=True, help="directory for report.json / report.txt")
    p.add_argument("--durations", help="JSON file mapping video_id to duration seconds")
    p.add_argument("--data-dir", help="catalog to read video durations from")
    p.add_argument("--gap-merge", type=float, default=DEFAULT_GAP_MERGE_S)
    p.add_argument("--n-repeats", type=int, default=DEFAULT_N_REPEATS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--zero-method", choices=("discard", "pratt"), default="discard")
    p.add_argument("--strict-order", action="store_true", help="only pair sessions with equal task order")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="generate synthetic interaction logs")
    p.add_argument("--out", required=True)
    p.add_argument("--profile", help="JSON behavior profile")
    p.add_argument("--preset", choices=("default", "doubled-exploration"), default="default")
    p.add_argument("--participants", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
