"""Interaction event schema shared by the telemetry service and analytics.

Events arrive as JSON (one object per POST, or NDJSON lines in log files)
and are validated against a per-kind table of required fields before
anything downstream touches them.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass

from .errors import EventSchemaError

KINDS = (
    "task_start",
    "task_end",
    "open_video",
    "close_video",
    "play",
    "pause",
    "seek",
    "hover_start",
    "hover_end",
    "select_segment",
    "remove_segment",
)
CONDITIONS = ("cfb_on", "cfb_off")
SCREENS = ("results", "player")

# Extra fields each kind must carry on top of the common envelope.
REQUIRED_BY_KIND: dict[str, tuple[str, ...]] = {
    "task_start": (),
    "task_end": (),
    "open_video": ("video_id", "video_rank"),
    "close_video": ("video_id",),
    "play": ("video_id", "position"),
    "pause": ("video_id", "position"),
    "seek": ("video_id", "position"),
    "hover_start": ("video_id",),
    "hover_end": ("video_id",),
    "select_segment": ("video_id", "segment"),
    "remove_segment": ("video_id", "segment"),
}

_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._:-]*$")


@dataclass(frozen=True)
class InteractionEvent:
    event_id: str
    session_id: str
    participant_id: str
    task_id: str
    condition: str
    topic: str
    kind: str
    screen: str
    wall_time: int  # milliseconds since epoch
    video_id: str | None = None
    video_rank: int | None = None
    position: float | None = None
    segment: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.segment is not None:
            d["segment"] = list(self.segment)
        return {k: v for k, v in d.items() if v is not None}


def validate_event(raw: dict) -> InteractionEvent:
    """Check one raw event dict and return the typed event.

    Raises EventSchemaError naming the first missing or invalid field.
    """
    if not isinstance(raw, dict):
        raise EventSchemaError("event must be a JSON object", field=None)

    def require_str(field: str) -> str:
        value = raw.get(field)
        if not isinstance(value, str) or not value:
            raise EventSchemaError(f"missing or invalid field {field!r}", field=field)
        return value

    event_id = require_str("event_id")
    session_id = require_str("session_id")
    if not _ID_RE.match(session_id):
        raise EventSchemaError("session_id must be a filename-safe token", field="session_id")
    participant_id = require_str("participant_id")
    task_id = require_str("task_id")
    topic = require_str("topic")
    condition = require_str("condition")
    if condition not in CONDITIONS:
        raise EventSchemaError(f"condition must be one of {CONDITIONS}", field="condition")
    kind = require_str("kind")
    if kind not in KINDS:
        raise EventSchemaError(f"unknown event kind {kind!r}", field="kind")
    screen = require_str("screen")
    if screen not in SCREENS:
        raise EventSchemaError(f"screen must be one of {SCREENS}", field="screen")

    wall_time = raw.get("wall_time")
    if not isinstance(wall_time, (int, float)) or isinstance(wall_time, bool) or wall_time < 0:
        raise EventSchemaError("missing or invalid field 'wall_time'", field="wall_time")

    video_id = raw.get("video_id")
    if video_id is not None and not isinstance(video_id, str):
        raise EventSchemaError("video_id must be a string", field="video_id")

    video_rank = raw.get("video_rank")
    if video_rank is not None:
        if not isinstance(video_rank, int) or isinstance(video_rank, bool) or video_rank < 1:
            raise EventSchemaError("video_rank must be a positive integer", field="video_rank")

    position = raw.get("position")
    if position is not None:
        if not isinstance(position, (int, float)) or isinstance(position, bool) or position < 0:
            raise EventSchemaError("position must be a non-negative number", field="position")
        position = float(position)

    segment = raw.get("segment")
    if segment is not None:
        ok = (
            isinstance(segment, (list, tuple))
            and len(segment) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in segment)
            and segment[1] > segment[0] >= 0
        )
        if not ok:
            raise EventSchemaError("segment must be [start, end] seconds with end > start", field="segment")
        segment = (float(segment[0]), float(segment[1]))

    for field in REQUIRED_BY_KIND[kind]:
        if raw.get(field) is None:
            raise EventSchemaError(f"event kind {kind!r} requires field {field!r}", field=field)

    return InteractionEvent(
        event_id=event_id,
        session_id=session_id,
        participant_id=participant_id,
        task_id=task_id,
        condition=condition,
        topic=topic,
        kind=kind,
        screen=screen,
        wall_time=int(wall_time),
        video_id=video_id,
        video_rank=video_rank,
        position=position,
        segment=segment,
    )
