import pytest

from flowbar.errors import EventValidationError
from flowbar.sessions import build_sessions, merge_intervals, reconstruct, validate_events

from conftest import LogBuilder


class TestValidateEvents:
    def test_well_formed_log(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("open_video", 5.0, video="v1", rank=1)
        b.add("play", 6.0, screen="player", video="v1", position=0.0)
        b.add("pause", 16.0, screen="player", video="v1", position=10.0)
        b.add("close_video", 20.0, screen="player", video="v1")
        b.add("task_end", 30.0)
        skeleton = validate_events(b.events)
        assert skeleton.participant_id == "p1"
        assert len(skeleton.events) == 6

    def test_missing_task_end(self):
        b = LogBuilder().add("task_start", 0.0)
        with pytest.raises(EventValidationError, match="task_end"):
            validate_events(b.events)

    def test_hover_end_without_start_names_event(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("hover_end", 5.0, video="v1")
        b.add("task_end", 10.0)
        with pytest.raises(EventValidationError) as exc:
            validate_events(b.events)
        assert any("s1-0002" in e for e in exc.value.errors)

    def test_unsorted_input_gets_sorted(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("task_end", 30.0)
        b.add("open_video", 5.0, video="v1", rank=1)
        b.add("close_video", 10.0, screen="player", video="v1")
        skeleton = validate_events(b.events)
        assert [e.kind for e in skeleton.events] == ["task_start", "open_video", "close_video", "task_end"]

    def test_play_without_open_rejected(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("play", 5.0, screen="player", video="v1", position=0.0)
        b.add("task_end", 10.0)
        with pytest.raises(EventValidationError, match="not open"):
            validate_events(b.events)

    def test_event_outside_task_window_rejected(self):
        b = LogBuilder()
        b.add("hover_start", 0.0, video="v1", rank=1)
        b.add("task_start", 1.0)
        b.add("hover_end", 2.0, video="v1")
        b.add("task_end", 3.0)
        with pytest.raises(EventValidationError, match="precedes task_start"):
            validate_events(b.events)

    def test_mixed_identity_rejected(self):
        import dataclasses

        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("task_end", 10.0)
        events = list(b.events)
        events[1] = dataclasses.replace(events[1], participant_id="p2")
        with pytest.raises(EventValidationError, match="participant_id"):
            validate_events(events)


def session_of(builder: LogBuilder, gap_merge=1.0, durations=None):
    return reconstruct(validate_events(builder.events), gap_merge=gap_merge, durations=durations)


class TestReconstruct:
    def test_hover_gap_below_threshold_merges(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("hover_start", 0.0, video="v1", rank=1)
        b.add("hover_end", 2.0, video="v1")
        b.add("hover_start", 2.5, video="v1", rank=1)
        b.add("hover_end", 4.0, video="v1")
        b.add("task_end", 10.0)
        s = session_of(b, gap_merge=1.0)
        assert s.exploration[("v1", "results")] == [(0.0, 4.0)]

    def test_hover_gap_at_threshold_stays_split(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("hover_start", 0.0, video="v1", rank=1)
        b.add("hover_end", 2.0, video="v1")
        b.add("hover_start", 3.0, video="v1", rank=1)
        b.add("hover_end", 4.0, video="v1")
        b.add("task_end", 10.0)
        s = session_of(b, gap_merge=1.0)
        assert s.exploration[("v1", "results")] == [(0.0, 2.0), (3.0, 4.0)]

    def test_hovers_on_different_videos_never_merge(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("hover_start", 0.0, video="v1", rank=1)
        b.add("hover_end", 2.0, video="v1")
        b.add("hover_start", 2.2, video="v2", rank=2)
        b.add("hover_end", 4.0, video="v2")
        b.add("task_end", 10.0)
        s = session_of(b)
        assert set(s.exploration) == {("v1", "results"), ("v2", "results")}

    def test_overlapping_watch_intervals_merge(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("open_video", 1.0, video="v1", rank=1)
        b.add("play", 2.0, screen="player", video="v1", position=10.0)
        b.add("pause", 22.0, screen="player", video="v1", position=30.0)
        b.add("play", 23.0, screen="player", video="v1", position=20.0)
        b.add("pause", 43.0, screen="player", video="v1", position=40.0)
        b.add("close_video", 45.0, screen="player", video="v1")
        b.add("task_end", 50.0)
        s = session_of(b)
        assert s.watch_intervals["v1"] == [(10.0, 40.0)]

    def test_play_closed_at_close_video(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("open_video", 1.0, video="v1", rank=1)
        b.add("play", 2.0, screen="player", video="v1", position=100.0)
        b.add("close_video", 12.0, screen="player", video="v1")
        b.add("task_end", 20.0)
        s = session_of(b)
        assert s.watch_intervals["v1"] == [(100.0, 110.0)]

    def test_play_closed_at_task_end(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("open_video", 1.0, video="v1", rank=1)
        b.add("play", 2.0, screen="player", video="v1", position=0.0)
        b.add("task_end", 10.0)
        s = session_of(b)
        assert s.watch_intervals["v1"] == [(0.0, 8.0)]
        assert s.player_intervals == [(1.0, 10.0)]

    def test_seek_splits_watch_interval(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("open_video", 1.0, video="v1", rank=1)
        b.add("play", 2.0, screen="player", video="v1", position=0.0)
        b.add("seek", 12.0, screen="player", video="v1", position=200.0)
        b.add("pause", 22.0, screen="player", video="v1", position=210.0)
        b.add("close_video", 25.0, screen="player", video="v1")
        b.add("task_end", 30.0)
        s = session_of(b)
        assert s.watch_intervals["v1"] == [(0.0, 10.0), (200.0, 210.0)]
        assert s.seek_count == 1

    def test_watch_clamped_to_duration(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("open_video", 1.0, video="v1", rank=1)
        b.add("play", 2.0, screen="player", video="v1", position=95.0)
        b.add("task_end", 20.0)
        s = session_of(b, durations={"v1": 100.0})
        assert s.watch_intervals["v1"] == [(95.0, 100.0)]

    def test_hover_open_at_task_end_closed_there(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("hover_start", 2.0, video="v1", rank=1)
        b.add("task_end", 5.0)
        s = session_of(b)
        assert s.exploration[("v1", "results")] == [(2.0, 5.0)]

    def test_removal_matching_tracks_selection_time(self):
        b = LogBuilder()
        b.add("task_start", 0.0)
        b.add("open_video", 1.0, video="v1", rank=1)
        b.add("select_segment", 10.0, screen="player", video="v1", segment=(5.0, 25.0))
        b.add("remove_segment", 40.0, screen="player", video="v1", segment=(5.0, 25.0))
        b.add("close_video", 45.0, screen="player", video="v1")
        b.add("task_end", 50.0)
        s = session_of(b)
        assert s.removals[0].selection_t == 10.0
        assert s.selections[0].removed_at == 40.0


class TestBuildSessions:
    def test_task_order_from_start_times(self):
        first = LogBuilder(session="p1-a", participant="p1", task="a", base_ms=1_000_000_000_000)
        first.add("task_start", 0.0).add("task_end", 10.0)
        second = LogBuilder(session="p1-b", participant="p1", task="b", base_ms=1_000_010_000_000)
        second.add("task_start", 0.0).add("task_end", 10.0)
        sessions = build_sessions(first.events + second.events)
        by_task = {s.task_id: s for s in sessions}
        assert by_task["a"].task_order == "first"
        assert by_task["b"].task_order == "second"

    def test_invalid_session_reported_with_id(self):
        bad = LogBuilder(session="broken").add("task_start", 0.0)
        with pytest.raises(EventValidationError, match="broken"):
            build_sessions(bad.events)


class TestMergeIntervals:
    def test_plain_union(self):
        assert merge_intervals([(10.0, 30.0), (20.0, 40.0)]) == [(10.0, 40.0)]

    def test_touching_merge(self):
        assert merge_intervals([(0.0, 1.0), (1.0, 2.0)]) == [(0.0, 2.0)]

    def test_gap_merge_strictly_below(self):
        assert merge_intervals([(0.0, 1.0), (1.5, 2.0)], gap=1.0) == [(0.0, 2.0)]
        assert merge_intervals([(0.0, 1.0), (2.0, 3.0)], gap=1.0) == [(0.0, 1.0), (2.0, 3.0)]
