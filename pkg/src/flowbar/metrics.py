"""The per-task interaction metric vector.

Twenty-four metrics over four groups (time, activity, navigation,
selection). A metric whose denominator is empty (no videos opened, no
selection made, ...) is recorded as None and later excluded from paired
analysis, never substituted with zero.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .sessions import TaskSession, total_length


@dataclass(frozen=True)
class MetricSpec:
    group: str
    key: str
    label: str


METRIC_SPECS: tuple[MetricSpec, ...] = (
    MetricSpec("time", "task_duration", "Task duration (s)"),
    MetricSpec("time", "time_in_results_screen", "Time in results screen (s)"),
    MetricSpec("time", "total_watch_time", "Watch time, total (s)"),
    MetricSpec("time", "total_exploration_time", "Exploration time, total (s)"),
    MetricSpec("time", "exploration_time_results", "Exploration time in results screen (s)"),
    MetricSpec("time", "exploration_time_player", "Exploration time in player screen (s)"),
    MetricSpec("time", "watch_time_per_opened_video", "Watch time per opened video (s)"),
    MetricSpec("time", "results_exploration_per_explored_video", "Results exploration per explored video (s)"),
    MetricSpec("activity", "unique_videos_played", "Unique videos played"),
    MetricSpec("activity", "play_sessions", "Play sessions"),
    MetricSpec("activity", "play_sessions_per_unique_video", "Play sessions per unique video played"),
    MetricSpec("activity", "removals_within_minute", "Segments removed within 60 s of selection"),
    MetricSpec("activity", "segments_removed", "Segments removed"),
    MetricSpec("activity", "exploration_results_fraction", "Results exploration / task duration"),
    MetricSpec("activity", "exploration_player_fraction", "Player exploration / task duration"),
    MetricSpec("navigation", "seek_count", "Seek count"),
    MetricSpec("navigation", "seeks_per_played_video", "Seeks per played video"),
    MetricSpec("navigation", "deepest_rank_played", "Deepest rank played"),
    MetricSpec("navigation", "deepest_rank_explored", "Deepest rank explored"),
    MetricSpec("navigation", "mean_position_watched", "Mean watched position, fraction of video"),
    MetricSpec("selection", "time_to_first_selection", "Time to first selection (s)"),
    MetricSpec("selection", "videos_played_before_first_selection", "Videos played before first selection"),
    MetricSpec("selection", "videos_explored_before_first_selection", "Videos explored before first selection"),
    MetricSpec("selection", "mean_selected_segment_duration", "Mean duration of kept segments (s)"),
)

REMOVAL_QUICKBACK_WINDOW_S = 60.0


@dataclass(frozen=True)
class TaskMetrics:
    task_duration: float | None
    time_in_results_screen: float | None
    total_watch_time: float | None
    total_exploration_time: float | None
    exploration_time_results: float | None
    exploration_time_player: float | None
    watch_time_per_opened_video: float | None
    results_exploration_per_explored_video: float | None
    unique_videos_played: float | None
    play_sessions: float | None
    play_sessions_per_unique_video: float | None
    removals_within_minute: float | None
    segments_removed: float | None
    exploration_results_fraction: float | None
    exploration_player_fraction: float | None
    seek_count: float | None
    seeks_per_played_video: float | None
    deepest_rank_played: float | None
    deepest_rank_explored: float | None
    mean_position_watched: float | None
    time_to_first_selection: float | None
    videos_played_before_first_selection: float | None
    videos_explored_before_first_selection: float | None
    mean_selected_segment_duration: float | None

    def as_dict(self) -> dict[str, float | None]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _ratio(numerator: float, denominator: float) -> float | None:
    return numerator / denominator if denominator else None


def compute_metrics(session: TaskSession) -> TaskMetrics:
    task_duration = session.task_duration
    player_time = total_length(session.player_intervals)
    time_results = task_duration - player_time

    total_watch = sum(total_length(iv) for iv in session.watch_intervals.values())

    explore_results = sum(total_length(iv) for (v, screen), iv in session.exploration.items() if screen == "results")
    explore_player = sum(total_length(iv) for (v, screen), iv in session.exploration.items() if screen == "player")
    total_explore = explore_results + explore_player

    opened_videos = {v for v, _, _ in session.open_events}
    explored_videos = {v for (v, screen), iv in session.exploration.items() if iv}
    explored_in_results = {v for (v, screen), iv in session.exploration.items() if screen == "results" and iv}
    played_videos = {v for v, _ in session.play_events}
    play_count = len(session.play_events)

    removals_quick = sum(
        1
        for r in session.removals
        if r.selection_t is not None and r.t - r.selection_t <= REMOVAL_QUICKBACK_WINDOW_S
    )

    explored_ranks = [session.ranks[v] for v in explored_videos if v in session.ranks]

    # Duration-weighted mean watched position per video, averaged over videos
    # whose duration we know.
    position_fracs = []
    for video_id, intervals in session.watch_intervals.items():
        duration = session.durations.get(video_id)
        watched = total_length(intervals)
        if duration and watched > 0:
            weighted_mid = sum((s + e) / 2 * (e - s) for s, e in intervals) / watched
            position_fracs.append(weighted_mid / duration)

    first_selection_t = min((sel.t for sel in session.selections), default=None)
    if first_selection_t is not None:
        played_before = {v for v, t in session.play_events if t < first_selection_t}
        explored_before = {
            v
            for (v, screen), intervals in session.exploration.items()
            for start, _ in intervals
            if start < first_selection_t
        }
        played_before_n: float | None = len(played_before)
        explored_before_n: float | None = len(explored_before)
    else:
        played_before_n = None
        explored_before_n = None

    kept_durations = [sel.segment[1] - sel.segment[0] for sel in session.selections if sel.removed_at is None]

    return TaskMetrics(
        task_duration=task_duration,
        time_in_results_screen=time_results,
        total_watch_time=total_watch,
        total_exploration_time=total_explore,
        exploration_time_results=explore_results,
        exploration_time_player=explore_player,
        watch_time_per_opened_video=_ratio(total_watch, len(opened_videos)),
        results_exploration_per_explored_video=_ratio(explore_results, len(explored_in_results)),
        unique_videos_played=len(played_videos),
        play_sessions=play_count,
        play_sessions_per_unique_video=_ratio(play_count, len(played_videos)),
        removals_within_minute=removals_quick,
        segments_removed=len(session.removals),
        exploration_results_fraction=_ratio(explore_results, task_duration),
        exploration_player_fraction=_ratio(explore_player, task_duration),
        seek_count=session.seek_count,
        seeks_per_played_video=_ratio(session.seek_count, len(played_videos)),
        deepest_rank_played=max((r for _, r, _ in session.open_events), default=None),
        deepest_rank_explored=max(explored_ranks, default=None),
        mean_position_watched=(sum(position_fracs) / len(position_fracs)) if position_fracs else None,
        time_to_first_selection=first_selection_t,
        videos_played_before_first_selection=played_before_n,
        videos_explored_before_first_selection=explored_before_n,
        mean_selected_segment_duration=(sum(kept_durations) / len(kept_durations)) if kept_durations else None,
    )
