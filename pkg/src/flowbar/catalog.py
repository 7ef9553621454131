"""Enriched-video records, their on-disk catalog, and the durable event log.

Persistence is deliberately plain: one JSON document per video under
``data_dir/videos/`` and one NDJSON event log per session under
``data_dir/events/``. Both are human-inspectable and diff-able.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import transcripts
from .annotate import ConceptAnnotation, annotate_fragment, dedupe_video_keywords
from .errors import ConflictError, NotFoundError
from .events import InteractionEvent, validate_event
from .fragments import DEFAULT_TARGET_CHARS, Fragment, fragment as make_fragments
from .lexicon import ConceptLexicon
from .remote import RemoteAnnotator


@dataclass(frozen=True)
class EnrichedFragment:
    fragment: Fragment
    annotations: tuple[ConceptAnnotation, ...]


@dataclass(frozen=True)
class EnrichedVideo:
    video_id: str
    title: str
    description: str
    duration: float
    media_url: str
    thumbnail_urls: tuple[str, ...]  # one per fragment
    fragments: tuple[EnrichedFragment, ...]
    video_tags: tuple[ConceptAnnotation, ...]

    def to_dict(self) -> dict:
        return {
            "video_id": self.video_id,
            "title": self.title,
            "description": self.description,
            "duration": self.duration,
            "media_url": self.media_url,
            "thumbnail_urls": list(self.thumbnail_urls),
            "video_tags": [_annotation_to_dict(a) for a in self.video_tags],
            "fragments": [
                {
                    "index": ef.fragment.index,
                    "char_start": ef.fragment.char_start,
                    "char_end": ef.fragment.char_end,
                    "time_start": ef.fragment.time_start,
                    "time_end": ef.fragment.time_end,
                    "text": ef.fragment.text,
                    "annotations": [_annotation_to_dict(a) for a in ef.annotations],
                }
                for ef in self.fragments
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EnrichedVideo":
        return cls(
            video_id=d["video_id"],
            title=d["title"],
            description=d.get("description", ""),
            duration=float(d["duration"]),
            media_url=d.get("media_url", ""),
            thumbnail_urls=tuple(d.get("thumbnail_urls", ())),
            video_tags=tuple(_annotation_from_dict(a) for a in d.get("video_tags", ())),
            fragments=tuple(
                EnrichedFragment(
                    fragment=Fragment(
                        index=f["index"],
                        char_start=f["char_start"],
                        char_end=f["char_end"],
                        time_start=float(f["time_start"]),
                        time_end=float(f["time_end"]),
                        text=f["text"],
                    ),
                    annotations=tuple(_annotation_from_dict(a) for a in f.get("annotations", ())),
                )
                for f in d["fragments"]
            ),
        )


def _annotation_to_dict(a: ConceptAnnotation) -> dict:
    return {"concept_id": a.concept_id, "title": a.title, "url": a.url, "score": a.score, "rank": a.rank}


def _annotation_from_dict(d: dict) -> ConceptAnnotation:
    return ConceptAnnotation(d["concept_id"], d["title"], d["url"], float(d["score"]), int(d["rank"]))


@dataclass(frozen=True)
class VideoMetadata:
    video_id: str
    title: str
    description: str = ""
    media_url: str = ""
    duration: float | None = None  # required for plain-text transcripts
    thumbnail_template: str | None = None  # e.g. "https://cdn/{video_id}/{index}.jpg"


@dataclass
class IngestConfig:
    target_chars: int = DEFAULT_TARGET_CHARS
    top_k: int = 5
    use_pagerank: bool = True
    ubiquity_threshold: float = 0.8
    annotator: str = "local"  # "local" | "remote"
    remote: RemoteAnnotator | None = None
    overwrite: bool = False


_PARSERS = {
    "srt": lambda data, meta: transcripts.parse_srt(data, video_id=meta.video_id),
    "vtt": lambda data, meta: transcripts.parse_vtt(data, video_id=meta.video_id),
    "plain": lambda data, meta: transcripts.parse_plain(
        data, duration=meta.duration or 0.0, video_id=meta.video_id
    ),
}


def ingest_video(
    metadata: VideoMetadata,
    transcript_bytes: bytes,
    fmt: str,
    config: IngestConfig,
    lexicon: ConceptLexicon,
    store: "VideoStore | None" = None,
) -> EnrichedVideo:
    """Parse, fragment, annotate and (optionally) persist one video."""
    if fmt not in _PARSERS:
        raise ValueError(f"unknown transcript format {fmt!r} (expected srt/vtt/plain)")
    transcript = transcripts.normalize(_PARSERS[fmt](transcript_bytes, metadata))
    frags = make_fragments(transcript, target_chars=config.target_chars)

    if config.annotator == "remote":
        if config.remote is None:
            raise ValueError("remote annotator selected but no client configured")
        per_fragment = [config.remote.annotate(f.text)[: config.top_k] for f in frags]
    else:
        per_fragment = [
            annotate_fragment(f, lexicon, top_k=config.top_k, use_pagerank=config.use_pagerank) for f in frags
        ]
    per_fragment, video_tags = dedupe_video_keywords(per_fragment, config.ubiquity_threshold)

    duration = max(metadata.duration or 0.0, transcript.duration)
    if frags:
        # The UI bar spans the whole playable video, so fragments extend to
        # cover [0, duration] even when speech starts late or ends early.
        frags[0] = replace(frags[0], time_start=0.0)
        frags[-1] = replace(frags[-1], time_end=duration)

    template = metadata.thumbnail_template or "thumbs/{video_id}/frag{index}.jpg"
    video = EnrichedVideo(
        video_id=metadata.video_id,
        title=metadata.title,
        description=metadata.description,
        duration=duration,
        media_url=metadata.media_url,
        thumbnail_urls=tuple(
            template.format(video_id=metadata.video_id, index=f.index) for f in frags
        ),
        fragments=tuple(
            EnrichedFragment(fragment=f, annotations=tuple(anns)) for f, anns in zip(frags, per_fragment)
        ),
        video_tags=tuple(video_tags),
    )
    if store is not None:
        store.store(video, overwrite=config.overwrite)
    return video


class VideoStore:
    """Directory of one JSON document per video with an in-memory snapshot.

    Reads are lock-free over the snapshot dict; writes replace the file then
    the dict entry.
    """

    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir) / "videos"
        self.root.mkdir(parents=True, exist_ok=True)
        self._videos: dict[str, EnrichedVideo] = {}
        self._write_lock = threading.Lock()
        for path in sorted(self.root.glob("*.json")):
            video = EnrichedVideo.from_dict(json.loads(path.read_text(encoding="utf-8")))
            self._videos[video.video_id] = video

    def store(self, video: EnrichedVideo, overwrite: bool = False) -> None:
        with self._write_lock:
            if video.video_id in self._videos and not overwrite:
                raise ConflictError(f"video {video.video_id!r} already exists")
            path = self.root / f"{video.video_id}.json"
            path.write_text(json.dumps(video.to_dict(), indent=1), encoding="utf-8")
            self._videos[video.video_id] = video

    def load(self, video_id: str) -> EnrichedVideo:
        try:
            return self._videos[video_id]
        except KeyError:
            raise NotFoundError(f"unknown video {video_id!r}") from None

    def list(self) -> list[EnrichedVideo]:
        return [self._videos[vid] for vid in sorted(self._videos)]

    def __len__(self) -> int:
        return len(self._videos)


@dataclass(frozen=True)
class AppendAck:
    event_id: str
    duplicate: bool


class EventStore:
    """Append-only NDJSON event logs, one file per session.

    An append is fsynced before it is acknowledged, and acknowledged events
    are therefore guaranteed to survive a process kill. Appends are
    idempotent on event_id. Appends to one session are serialized by a
    per-session lock; different sessions proceed in parallel.
    """

    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir) / "events"
        self.root.mkdir(parents=True, exist_ok=True)
        self._registry_lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        self._seen: dict[str, set[str]] = {}
        for path in sorted(self.root.glob("*.ndjson")):
            session_id = path.stem
            ids = set()
            for line in path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    ids.add(json.loads(line)["event_id"])
            self._seen[session_id] = ids
            self._session_locks[session_id] = threading.Lock()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            if session_id not in self._session_locks:
                self._session_locks[session_id] = threading.Lock()
                self._seen[session_id] = set()
            return self._session_locks[session_id]

    def append(self, event: InteractionEvent) -> AppendAck:
        lock = self._lock_for(event.session_id)
        with lock:
            seen = self._seen[event.session_id]
            if event.event_id in seen:
                return AppendAck(event.event_id, duplicate=True)
            path = self.root / f"{event.session_id}.ndjson"
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event.to_dict()) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            seen.add(event.event_id)
            return AppendAck(event.event_id, duplicate=False)

    def read_session(self, session_id: str) -> list[InteractionEvent]:
        path = self.root / f"{session_id}.ndjson"
        if not path.exists():
            raise NotFoundError(f"unknown session {session_id!r}")
        events = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                events.append(validate_event(json.loads(line)))
        return events

    def list_sessions(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.ndjson"))
