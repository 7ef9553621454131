"""Subtitle/transcript parsing into a normalized time-aligned representation.

Three input shapes are supported: SRT, WebVTT, and plain UTF-8 text with a
caller-supplied duration. All parsers produce a ``Transcript`` whose spans
still need ``normalize()`` before downstream use; the ingest pipeline always
chains the two.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .errors import EmptyTranscriptError, TranscriptParseError

_TAG_RE = re.compile(r"<[^>]*>")
_WS_RE = re.compile(r"\s+")

_SRT_TIME_RE = re.compile(
    r"^\s*(\d+):(\d{1,2}):(\d{1,2})[,.](\d{1,3})\s*-->\s*"
    r"(\d+):(\d{1,2}):(\d{1,2})[,.](\d{1,3})"
)
# VTT allows MM:SS.mmm with the hour field omitted.
_VTT_TIME_RE = re.compile(
    r"^\s*(?:(\d+):)?(\d{1,2}):(\d{1,2})\.(\d{1,3})\s*-->\s*"
    r"(?:(\d+):)?(\d{1,2}):(\d{1,2})\.(\d{1,3})"
)

_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")


@dataclass(frozen=True)
class TimedSpan:
    """One time-aligned unit of text. Times are seconds from video start."""

    start: float
    end: float
    text: str


@dataclass(frozen=True)
class Transcript:
    video_id: str
    duration: float
    spans: tuple[TimedSpan, ...]

    @property
    def full_text(self) -> str:
        """Canonical concatenation used for all character offsets."""
        return "".join(s.text for s in self.spans)


def clean_text(raw: str) -> str:
    """Strip <...> markup and collapse whitespace runs to single spaces."""
    return _WS_RE.sub(" ", _TAG_RE.sub("", raw)).strip()


def _decode(data: bytes) -> str:
    return data.decode("utf-8-sig")


def _srt_seconds(h: str, m: str, s: str, ms: str) -> float:
    return int(h) * 3600 + int(m) * 60 + int(s) + int(ms.ljust(3, "0")) / 1000.0


def parse_srt(data: bytes, video_id: str = "") -> Transcript:
    """Parse SRT bytes. Cue index numbers are discarded, markup is stripped.

    Raises TranscriptParseError (with line number) on a bad timestamp line and
    EmptyTranscriptError when no cue carries any text.
    """
    lines = _decode(data).split("\n")
    spans: list[TimedSpan] = []
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        if line.isdigit() and i + 1 < len(lines) and "-->" in lines[i + 1]:
            i += 1
            line = lines[i].strip()
        if "-->" not in line:
            raise TranscriptParseError(f"expected a timestamp line, got {line!r}", line=i + 1)
        m = _SRT_TIME_RE.match(line)
        if not m:
            raise TranscriptParseError(f"malformed timestamp line {line!r}", line=i + 1)
        start = _srt_seconds(*m.groups()[0:4])
        end = _srt_seconds(*m.groups()[4:8])
        i += 1
        texts = []
        while i < len(lines) and lines[i].strip():
            texts.append(lines[i])
            i += 1
        text = clean_text(" ".join(texts))
        if text:
            spans.append(TimedSpan(start, end, text))
    if not spans:
        raise EmptyTranscriptError("no subtitle cues with text found")
    duration = max(s.end for s in spans)
    return Transcript(video_id=video_id, duration=duration, spans=tuple(spans))


def _vtt_seconds(h: str | None, m: str, s: str, ms: str) -> float:
    return (int(h) if h else 0) * 3600 + int(m) * 60 + int(s) + int(ms.ljust(3, "0")) / 1000.0


def parse_vtt(data: bytes, video_id: str = "") -> Transcript:
    """Parse WebVTT bytes. NOTE/STYLE/REGION blocks are skipped."""
    lines = _decode(data).split("\n")
    i = 0
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines) or not lines[i].strip().startswith("WEBVTT"):
        raise TranscriptParseError("missing WEBVTT header", line=i + 1 if i < len(lines) else 1)
    i += 1

    spans: list[TimedSpan] = []
    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        if line.startswith(("NOTE", "STYLE", "REGION")):
            while i < len(lines) and lines[i].strip():
                i += 1
            continue
        # Optional cue identifier on its own line before the timestamps.
        if "-->" not in line:
            if i + 1 < len(lines) and "-->" in lines[i + 1]:
                i += 1
                line = lines[i].strip()
            else:
                raise TranscriptParseError(f"expected a cue timing line, got {line!r}", line=i + 1)
        m = _VTT_TIME_RE.match(line)
        if not m:
            raise TranscriptParseError(f"malformed cue timing line {line!r}", line=i + 1)
        g = m.groups()
        start = _vtt_seconds(g[0], g[1], g[2], g[3])
        end = _vtt_seconds(g[4], g[5], g[6], g[7])
        i += 1
        texts = []
        while i < len(lines) and lines[i].strip():
            texts.append(lines[i])
            i += 1
        text = clean_text(" ".join(texts))
        if text:
            spans.append(TimedSpan(start, end, text))
    if not spans:
        raise EmptyTranscriptError("no cues with text found")
    duration = max(s.end for s in spans)
    return Transcript(video_id=video_id, duration=duration, spans=tuple(spans))


def parse_plain(data: bytes, duration: float, video_id: str = "") -> Transcript:
    """Parse plain text, allotting time to sentences by character share.

    Sentences are split on terminal punctuation (. ! ?) followed by
    whitespace. Span boundaries are cumulative character fractions of the
    total, so the spans tile [0, duration] exactly.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    text = clean_text(_decode(data))
    if not text:
        raise EmptyTranscriptError("no text in input")
    sentences = [s for s in _SENTENCE_SPLIT_RE.split(text) if s]
    total = sum(len(s) for s in sentences)
    spans = []
    consumed = 0
    t_prev = 0.0
    for sent in sentences:
        consumed += len(sent)
        t_next = duration * consumed / total
        spans.append(TimedSpan(t_prev, t_next, sent))
        t_prev = t_next
    return Transcript(video_id=video_id, duration=duration, spans=tuple(spans))


def normalize(transcript: Transcript) -> Transcript:
    """Sort spans, merge overlaps, drop empty/degenerate spans, clip to duration.

    Overlapping spans are merged into one span covering the union of their
    time ranges with the texts concatenated (space-joined), so no text is
    lost. Idempotent.
    """
    duration = transcript.duration
    cleaned = []
    for s in transcript.spans:
        text = clean_text(s.text)
        start, end = s.start, s.end
        if duration > 0:
            end = min(end, duration)
        if end <= start or not text or start < 0:
            continue
        cleaned.append(TimedSpan(start, end, text))
    cleaned.sort(key=lambda s: (s.start, s.end))

    merged: list[TimedSpan] = []
    for s in cleaned:
        if merged and s.start < merged[-1].end:
            prev = merged[-1]
            merged[-1] = TimedSpan(prev.start, max(prev.end, s.end), prev.text + " " + s.text)
        else:
            merged.append(s)

    if duration <= 0 and merged:
        duration = merged[-1].end
    return replace(transcript, duration=duration, spans=tuple(merged))
