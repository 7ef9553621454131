import pytest

from flowbar.metrics import METRIC_SPECS, compute_metrics
from flowbar.sessions import reconstruct, validate_events

from conftest import FIXTURE_DURATIONS, LogBuilder, rich_fixture_log

# Hand-traced expectations for the rich fixture log (see conftest for the
# event timeline). Derivation:
#   player popup open over [15,90], [100,180], [185,250] -> 220 s, so the
#     results screen holds the remaining 40 s of the 260 s task;
#   watch v1 [10,30]+[100,110]+[110,125] -> merged 45 s, v2 [0,20]+[205,225]
#     -> 40 s, v3 [50,75]+[150,175] -> 50 s;
#   results hovers: v1 [5,9] (gap 0.5 merged), v2 [10,12], v4 [13,14],
#     v3 [95,98], v1 again [255,257] -> 12 s over 4 distinct videos;
#   player hovers on v1: [20,21] and [23,24.5] (gap 2 s, kept apart) -> 2.5 s;
#   positions: v1 (20*20 + 112.5*25)/45/300, v2 112.5/600, v3 112.5/300.
HAND_TRACED = {
    "task_duration": 260.0,
    "time_in_results_screen": 40.0,
    "total_watch_time": 135.0,
    "total_exploration_time": 14.5,
    "exploration_time_results": 12.0,
    "exploration_time_player": 2.5,
    "watch_time_per_opened_video": 45.0,
    "results_exploration_per_explored_video": 3.0,
    "unique_videos_played": 3,
    "play_sessions": 5,
    "play_sessions_per_unique_video": 5 / 3,
    "removals_within_minute": 1,
    "segments_removed": 2,
    "exploration_results_fraction": 12.0 / 260.0,
    "exploration_player_fraction": 2.5 / 260.0,
    "seek_count": 2,
    "seeks_per_played_video": 2 / 3,
    "deepest_rank_played": 7,
    "deepest_rank_explored": 9,
    "mean_position_watched": ((20.0 * 20 + 112.5 * 25) / 45 / 300 + 112.5 / 600 + 112.5 / 300) / 3,
    "time_to_first_selection": 75.0,
    "videos_played_before_first_selection": 1,
    "videos_explored_before_first_selection": 3,
    "mean_selected_segment_duration": 60.0,
}

COUNT_METRICS = {
    "unique_videos_played",
    "play_sessions",
    "removals_within_minute",
    "segments_removed",
    "seek_count",
    "deepest_rank_played",
    "deepest_rank_explored",
    "videos_played_before_first_selection",
    "videos_explored_before_first_selection",
}


def metrics_of(builder: LogBuilder, durations=None):
    return compute_metrics(reconstruct(validate_events(builder.events), durations=durations))


class TestFixtureOracle:
    def test_all_24_metrics_match_hand_trace(self):
        metrics = metrics_of(rich_fixture_log(), durations=FIXTURE_DURATIONS)
        got = metrics.as_dict()
        assert set(got) == set(HAND_TRACED)
        for key, expected in HAND_TRACED.items():
            if key in COUNT_METRICS:
                assert got[key] == expected, key
            else:
                assert got[key] == pytest.approx(expected, abs=1e-6), key

    def test_registry_covers_exactly_the_fixture_table(self):
        assert [s.key for s in METRIC_SPECS] == list(HAND_TRACED)
        assert len(METRIC_SPECS) == 24
        groups = [s.group for s in METRIC_SPECS]
        assert groups == ["time"] * 8 + ["activity"] * 7 + ["navigation"] * 5 + ["selection"] * 4

    def test_recomputation_is_identical(self):
        first = metrics_of(rich_fixture_log(), durations=FIXTURE_DURATIONS)
        second = metrics_of(rich_fixture_log(), durations=FIXTURE_DURATIONS)
        assert first == second


class TestSingleMetricExamples:
    def test_deepest_rank_is_max(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        for t, (video, rank) in zip((1.0, 3.0, 5.0), [("a", 2), ("b", 7), ("c", 5)]):
            b.add("open_video", t, video=video, rank=rank)
            b.add("close_video", t + 1.0, screen="player", video=video)
        b.add("task_end", 10.0)
        assert metrics_of(b).deepest_rank_played == 7

    def test_mean_position_single_interval(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("open_video", 1.0, video="v", rank=1)
        b.add("play", 2.0, screen="player", video="v", position=20.0)
        b.add("pause", 42.0, screen="player", video="v", position=60.0)
        b.add("close_video", 45.0, screen="player", video="v")
        b.add("task_end", 50.0)
        assert metrics_of(b, durations={"v": 100.0}).mean_position_watched == pytest.approx(0.4)

    def test_removal_window_sixty_seconds(self):
        def run(remove_at):
            b = LogBuilder()
            b.add("task_start", 0.0)
            b.add("open_video", 1.0, video="v", rank=1)
            b.add("select_segment", 100.0, screen="player", video="v", segment=(0.0, 10.0))
            b.add("remove_segment", remove_at, screen="player", video="v", segment=(0.0, 10.0))
            b.add("close_video", remove_at + 1.0, screen="player", video="v")
            b.add("task_end", remove_at + 2.0)
            return metrics_of(b)

        assert run(150.0).removals_within_minute == 1
        assert run(200.0).removals_within_minute == 0


class TestAbsentMetrics:
    def test_no_opens_no_selection(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("task_end", 100.0)
        m = metrics_of(b)
        assert m.watch_time_per_opened_video is None
        assert m.play_sessions_per_unique_video is None
        assert m.seeks_per_played_video is None
        assert m.deepest_rank_played is None
        assert m.deepest_rank_explored is None
        assert m.mean_position_watched is None
        assert m.time_to_first_selection is None
        assert m.videos_played_before_first_selection is None
        assert m.videos_explored_before_first_selection is None
        assert m.mean_selected_segment_duration is None
        # but plain counts and times are real zeros, not absent
        assert m.total_watch_time == 0.0
        assert m.seek_count == 0
        assert m.segments_removed == 0

    def test_unknown_duration_excludes_position_metric(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("open_video", 1.0, video="v", rank=1)
        b.add("play", 2.0, screen="player", video="v", position=0.0)
        b.add("pause", 10.0, screen="player", video="v", position=8.0)
        b.add("close_video", 11.0, screen="player", video="v")
        b.add("task_end", 12.0)
        assert metrics_of(b, durations={}).mean_position_watched is None

    def test_interval_metrics_bounded_by_task_duration(self):
        m = metrics_of(rich_fixture_log(), durations=FIXTURE_DURATIONS)
        assert m.time_in_results_screen <= m.task_duration
        assert m.total_exploration_time <= m.task_duration
