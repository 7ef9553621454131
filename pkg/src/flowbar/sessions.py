"""Reconstruct per-task sessions from raw interaction event logs.

Validation enforces the pairing rules (one task_start/task_end, hover and
play episodes well formed); reconstruction derives watch intervals,
exploration episodes, screen-presence intervals and selection history, all
as pure functions of the log.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EventValidationError
from .events import InteractionEvent

DEFAULT_GAP_MERGE_S = 1.0

Interval = tuple[float, float]


@dataclass(frozen=True)
class SessionSkeleton:
    session_id: str
    participant_id: str
    task_id: str
    topic: str
    condition: str
    events: tuple[InteractionEvent, ...]  # sorted by wall_time


@dataclass(frozen=True)
class Selection:
    video_id: str
    segment: tuple[float, float]
    t: float  # seconds since task_start
    removed_at: float | None = None


@dataclass(frozen=True)
class Removal:
    video_id: str
    segment: tuple[float, float]
    t: float
    selection_t: float | None  # matching selection time, when one exists


@dataclass
class TaskSession:
    session_id: str
    participant_id: str
    task_id: str
    topic: str
    condition: str
    events: tuple[InteractionEvent, ...]
    task_duration: float  # seconds
    watch_intervals: dict[str, list[Interval]]  # video time, merged, per video
    play_events: list[tuple[str, float]]  # (video_id, t) per play
    exploration: dict[tuple[str, str], list[Interval]]  # (video, screen) -> merged episodes
    player_intervals: list[Interval]  # popup-open presence, wall seconds
    open_events: list[tuple[str, int, float]]  # (video_id, rank, t)
    ranks: dict[str, int]  # results-list rank per video, from any event carrying one
    selections: list[Selection]
    removals: list[Removal]
    seek_count: int
    durations: dict[str, float] = field(default_factory=dict)  # known video durations
    task_order: str = "first"  # set when grouping a participant's sessions


def merge_intervals(intervals: list[Interval], gap: float = 0.0) -> list[Interval]:
    """Union of intervals, additionally merging gaps strictly below ``gap``."""
    out: list[Interval] = []
    for start, end in sorted(intervals):
        if out and (start <= out[-1][1] or start - out[-1][1] < gap):
            prev = out[-1]
            out[-1] = (prev[0], max(prev[1], end))
        else:
            out.append((start, end))
    return out


def total_length(intervals: list[Interval]) -> float:
    return sum(end - start for start, end in intervals)


def validate_events(events: list[InteractionEvent]) -> SessionSkeleton:
    """Sort and consistency-check one session's events.

    Raises EventValidationError carrying every problem found.
    """
    errors: list[str] = []
    if not events:
        raise EventValidationError(["no events"])

    ordered = sorted(events, key=lambda e: e.wall_time)
    first = ordered[0]
    for attr in ("session_id", "participant_id", "task_id", "topic", "condition"):
        values = {getattr(e, attr) for e in ordered}
        if len(values) > 1:
            errors.append(f"inconsistent {attr} within session: {sorted(values)}")

    starts = [e for e in ordered if e.kind == "task_start"]
    ends = [e for e in ordered if e.kind == "task_end"]
    if len(starts) != 1:
        errors.append(f"expected exactly one task_start, found {len(starts)}")
    if len(ends) != 1:
        errors.append(f"expected exactly one task_end, found {len(ends)}")

    if starts and ends:
        t0, t1 = starts[0].wall_time, ends[0].wall_time
        for e in ordered:
            if e.wall_time < t0:
                errors.append(f"event {e.event_id} precedes task_start")
            if e.wall_time > t1:
                errors.append(f"event {e.event_id} follows task_end")

    open_video: str | None = None
    playing: str | None = None
    hovering: set[tuple[str, str]] = set()
    for e in ordered:
        if e.kind == "open_video":
            open_video = e.video_id
            playing = None
        elif e.kind == "close_video":
            if e.video_id != open_video:
                errors.append(f"close_video {e.event_id} for video {e.video_id!r} which is not open")
            open_video = None
            playing = None
        elif e.kind in ("play", "pause", "seek", "select_segment"):
            if e.video_id != open_video:
                errors.append(f"{e.kind} {e.event_id} for video {e.video_id!r} which is not open")
            if e.kind == "play":
                playing = e.video_id
            elif e.kind == "pause":
                if playing != e.video_id:
                    errors.append(f"pause {e.event_id} without a preceding play")
                playing = None
        elif e.kind == "hover_start":
            key = (e.video_id, e.screen)
            if key in hovering:
                errors.append(f"hover_start {e.event_id} while already hovering {key}")
            if e.screen == "player" and e.video_id != open_video:
                errors.append(f"player-screen hover {e.event_id} on video {e.video_id!r} which is not open")
            hovering.add(key)
        elif e.kind == "hover_end":
            key = (e.video_id, e.screen)
            if key not in hovering:
                errors.append(f"hover_end {e.event_id} without a matching hover_start")
            hovering.discard(key)

    if errors:
        raise EventValidationError(errors)
    return SessionSkeleton(
        session_id=first.session_id,
        participant_id=first.participant_id,
        task_id=first.task_id,
        topic=first.topic,
        condition=first.condition,
        events=tuple(ordered),
    )


def reconstruct(
    skeleton: SessionSkeleton,
    gap_merge: float = DEFAULT_GAP_MERGE_S,
    durations: dict[str, float] | None = None,
) -> TaskSession:
    """Derive all interval/episode state from a validated skeleton.

    Hover episodes on the same (video, screen) separated by less than
    ``gap_merge`` seconds merge into one exploration episode. Watch
    intervals are unioned per video. A seek or replay during playback
    splits the watch interval at the jump.
    """
    durations = durations or {}
    events = skeleton.events
    t0 = events[0].wall_time
    t_end = events[-1].wall_time

    def rel(wall_ms: int) -> float:
        return (wall_ms - t0) / 1000.0

    raw_watch: dict[str, list[Interval]] = {}
    play_events: list[tuple[str, float]] = []
    raw_explore: dict[tuple[str, str], list[Interval]] = {}
    player_intervals: list[Interval] = []
    open_events: list[tuple[str, int, float]] = []
    ranks: dict[str, int] = {}
    selections: list[Selection] = []
    removals: list[Removal] = []
    seek_count = 0

    current_open: str | None = None
    opened_at = 0.0
    # (video_id, start position in video, start wall seconds)
    playing: tuple[str, float, float] | None = None
    hover_open: dict[tuple[str, str], float] = {}

    def clamp(video_id: str, position: float) -> float:
        dur = durations.get(video_id)
        position = max(position, 0.0)
        return min(position, dur) if dur is not None else position

    def close_watch(at_wall: float, end_position: float | None = None) -> None:
        nonlocal playing
        if playing is None:
            return
        video_id, start_pos, start_wall = playing
        end_pos = end_position if end_position is not None else start_pos + (at_wall - start_wall)
        start_pos, end_pos = clamp(video_id, start_pos), clamp(video_id, end_pos)
        if end_pos > start_pos:
            raw_watch.setdefault(video_id, []).append((start_pos, end_pos))
        playing = None

    def close_player(at: float) -> None:
        nonlocal current_open
        if current_open is None:
            return
        player_intervals.append((opened_at, at))
        for key in [k for k in hover_open if k[1] == "player"]:
            start = hover_open.pop(key)
            if at > start:
                raw_explore.setdefault(key, []).append((start, at))
        current_open = None

    for e in events:
        t = rel(e.wall_time)
        if e.video_rank is not None and e.video_id is not None:
            ranks.setdefault(e.video_id, e.video_rank)
        if e.kind == "open_video":
            close_watch(t)
            close_player(t)
            current_open = e.video_id
            opened_at = t
            open_events.append((e.video_id, e.video_rank, t))
        elif e.kind == "close_video":
            close_watch(t)
            close_player(t)
        elif e.kind == "play":
            close_watch(t)
            playing = (e.video_id, e.position, t)
            play_events.append((e.video_id, t))
        elif e.kind == "pause":
            close_watch(t, end_position=e.position)
        elif e.kind == "seek":
            seek_count += 1
            if playing is not None and playing[0] == e.video_id:
                close_watch(t)
                playing = (e.video_id, e.position, t)
        elif e.kind == "hover_start":
            hover_open[(e.video_id, e.screen)] = t
        elif e.kind == "hover_end":
            key = (e.video_id, e.screen)
            start = hover_open.pop(key, None)
            if start is not None and t > start:
                raw_explore.setdefault(key, []).append((start, t))
        elif e.kind == "select_segment":
            selections.append(Selection(e.video_id, e.segment, t))
        elif e.kind == "remove_segment":
            match_t = None
            for i, sel in enumerate(selections):
                if sel.removed_at is None and sel.video_id == e.video_id and sel.segment == e.segment:
                    selections[i] = Selection(sel.video_id, sel.segment, sel.t, removed_at=t)
                    match_t = sel.t
                    break
            removals.append(Removal(e.video_id, e.segment, t, selection_t=match_t))
        elif e.kind == "task_end":
            close_watch(t)
            close_player(t)
            for key, start in list(hover_open.items()):
                if t > start:
                    raw_explore.setdefault(key, []).append((start, t))
            hover_open.clear()

    return TaskSession(
        session_id=skeleton.session_id,
        participant_id=skeleton.participant_id,
        task_id=skeleton.task_id,
        topic=skeleton.topic,
        condition=skeleton.condition,
        events=events,
        task_duration=rel(t_end),
        watch_intervals={v: merge_intervals(iv) for v, iv in raw_watch.items()},
        play_events=play_events,
        exploration={k: merge_intervals(iv, gap=gap_merge) for k, iv in raw_explore.items()},
        player_intervals=merge_intervals(player_intervals),
        open_events=open_events,
        ranks=ranks,
        selections=selections,
        removals=removals,
        seek_count=seek_count,
        durations=dict(durations),
    )


def build_sessions(
    events: list[InteractionEvent],
    gap_merge: float = DEFAULT_GAP_MERGE_S,
    durations: dict[str, float] | None = None,
) -> list[TaskSession]:
    """Group a mixed event stream by session, validate, and reconstruct.

    Task order (first/second) is assigned per participant by comparing the
    task_start times of their sessions.
    """
    by_session: dict[str, list[InteractionEvent]] = {}
    for e in events:
        by_session.setdefault(e.session_id, []).append(e)

    sessions = []
    problems: list[str] = []
    for session_id in sorted(by_session):
        try:
            skeleton = validate_events(by_session[session_id])
        except EventValidationError as exc:
            problems.extend(f"session {session_id}: {msg}" for msg in exc.errors)
            continue
        sessions.append(reconstruct(skeleton, gap_merge=gap_merge, durations=durations))
    if problems:
        raise EventValidationError(problems)

    by_participant: dict[str, list[TaskSession]] = {}
    for s in sessions:
        by_participant.setdefault(s.participant_id, []).append(s)
    for group in by_participant.values():
        group.sort(key=lambda s: s.events[0].wall_time)
        for i, s in enumerate(group):
            s.task_order = "first" if i == 0 else "second"
    return sessions
