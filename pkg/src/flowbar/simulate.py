"""Deterministic synthetic interaction logs for exercising the analytics.

Each simulated participant performs one task per topic, one under each
player condition, with (condition, topic) order counterbalanced by a seeded
Latin square. All draws come from per-session RNGs derived from the seed,
so output is byte-identical across runs. Setting ``jitter`` to 0 makes
every session a clone of the template, which is useful as a null control.
"""

from __future__ import annotations

import dataclasses
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .events import InteractionEvent

_RANK_POOL_SHUFFLES = 3  # decorrelate explored ranks between videos


@dataclass(frozen=True)
class ConditionParams:
    explore_episode_mean_s: float = 3.0
    episodes_per_video_mean: float = 1.5
    videos_explored_mean: float = 6.0
    videos_opened_mean: float = 3.0
    player_episodes_mean: float = 1.0
    plays_per_video_mean: float = 1.5
    watch_segment_mean_s: float = 30.0
    seek_prob: float = 0.4
    selections_mean: float = 4.0
    removal_prob: float = 0.2
    quick_removal_prob: float = 0.5
    think_time_mean_s: float = 3.0


@dataclass(frozen=True)
class SimulationProfile:
    topics: tuple[str, str] = ("climate_change", "machine_learning")
    n_videos: int = 18
    video_duration_mean_s: float = 900.0
    jitter: float = 0.25  # relative spread of all duration/count draws
    base_wall_ms: int = 1_600_000_000_000
    off: ConditionParams = field(default_factory=ConditionParams)
    on: ConditionParams = field(default_factory=ConditionParams)

    @classmethod
    def from_dict(cls, raw: dict) -> "SimulationProfile":
        try:
            off = ConditionParams(**raw.pop("off", {}))
            on = ConditionParams(**raw.pop("on", {}))
            topics = tuple(raw.pop("topics", cls.topics))
            if len(topics) != 2:
                raise ConfigError("profile needs exactly two topics")
            return cls(topics=topics, off=off, on=on, **raw)
        except TypeError as exc:
            raise ConfigError(f"invalid profile: {exc}") from exc


def load_profile(path: str | Path) -> SimulationProfile:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read profile {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("profile must be a JSON object")
    return SimulationProfile.from_dict(raw)


def doubled_exploration_profile() -> SimulationProfile:
    """Treatment condition explores twice as long per episode as control."""
    base = ConditionParams()
    return SimulationProfile(
        off=base,
        on=dataclasses.replace(base, explore_episode_mean_s=base.explore_episode_mean_s * 2),
    )


class _SessionWriter:
    def __init__(self, session_id: str, participant_id: str, task_id: str, topic: str, condition: str, wall_ms: int):
        self.session_id = session_id
        self.participant_id = participant_id
        self.task_id = task_id
        self.topic = topic
        self.condition = condition
        self.wall_ms = wall_ms
        self.counter = 0
        self.events: list[InteractionEvent] = []

    def advance(self, seconds: float) -> None:
        self.wall_ms += max(1, int(round(seconds * 1000)))

    def emit(self, kind: str, screen: str, **extra) -> None:
        self.counter += 1
        self.events.append(
            InteractionEvent(
                event_id=f"{self.session_id}-e{self.counter:04d}",
                session_id=self.session_id,
                participant_id=self.participant_id,
                task_id=self.task_id,
                topic=self.topic,
                condition=self.condition,
                kind=kind,
                screen=screen,
                wall_time=self.wall_ms,
                **extra,
            )
        )


def _draw(rng: random.Random, mean: float, jitter: float, lo: float = 0.2) -> float:
    return max(lo, rng.gauss(mean, mean * jitter)) if jitter > 0 else mean


def _count(rng: random.Random, mean: float, jitter: float, lo: int = 1) -> int:
    return max(lo, int(round(_draw(rng, mean, jitter, lo=lo))))


def video_durations(profile: SimulationProfile, seed: int) -> dict[str, float]:
    rng = random.Random(f"{seed}-videos")
    durations = {}
    for topic in profile.topics:
        for i in range(1, profile.n_videos + 1):
            durations[f"{topic}_v{i:02d}"] = round(
                _draw(rng, profile.video_duration_mean_s, profile.jitter, lo=120.0), 1
            )
    return durations


def _simulate_session(
    writer: _SessionWriter,
    params: ConditionParams,
    profile: SimulationProfile,
    durations: dict[str, float],
    rng: random.Random,
) -> None:
    jitter = profile.jitter
    topic = writer.topic
    videos = [f"{topic}_v{i:02d}" for i in range(1, profile.n_videos + 1)]

    def think() -> None:
        writer.advance(_draw(rng, params.think_time_mean_s, jitter, lo=1.2))

    writer.emit("task_start", screen="results")
    think()

    rank_order = list(range(1, profile.n_videos + 1))
    if jitter > 0:
        for _ in range(_RANK_POOL_SHUFFLES):
            rng.shuffle(rank_order)
    n_explored = min(_count(rng, params.videos_explored_mean, jitter), profile.n_videos)
    explored_ranks = rank_order[:n_explored]

    for rank in explored_ranks:
        video_id = videos[rank - 1]
        for _ in range(_count(rng, params.episodes_per_video_mean, jitter)):
            writer.emit("hover_start", screen="results", video_id=video_id, video_rank=rank)
            writer.advance(_draw(rng, params.explore_episode_mean_s, jitter, lo=0.4))
            writer.emit("hover_end", screen="results", video_id=video_id, video_rank=rank)
            think()

    n_opened = min(_count(rng, params.videos_opened_mean, jitter), n_explored)
    selections_target = _count(rng, params.selections_mean, jitter)
    selections_done = 0

    for rank in explored_ranks[:n_opened]:
        video_id = videos[rank - 1]
        duration = durations[video_id]
        writer.emit("open_video", screen="results", video_id=video_id, video_rank=rank)
        think()

        for _ in range(_count(rng, params.player_episodes_mean, jitter, lo=0)):
            writer.emit("hover_start", screen="player", video_id=video_id, video_rank=rank)
            writer.advance(_draw(rng, params.explore_episode_mean_s, jitter, lo=0.4))
            writer.emit("hover_end", screen="player", video_id=video_id, video_rank=rank)
            think()

        last_watch: tuple[float, float] | None = None
        for _ in range(_count(rng, params.plays_per_video_mean, jitter)):
            start = round(rng.uniform(0, duration * 0.5), 1) if jitter > 0 else round(duration * 0.25, 1)
            watch = min(_draw(rng, params.watch_segment_mean_s, jitter, lo=2.0), duration - start)
            writer.emit("play", screen="player", video_id=video_id, position=start)
            if jitter > 0 and rng.random() < params.seek_prob and watch > 4:
                first_leg = watch / 2
                writer.advance(first_leg)
                target = round(rng.uniform(0, duration - watch / 2), 1)
                writer.emit("seek", screen="player", video_id=video_id, position=target)
                writer.advance(watch / 2)
                end = round(target + watch / 2, 3)
            else:
                writer.advance(watch)
                end = round(start + watch, 3)
            writer.emit("pause", screen="player", video_id=video_id, position=min(end, duration))
            last_watch = (start, min(end, duration))
            think()

        if selections_done < selections_target and last_watch is not None:
            seg_start, seg_end = last_watch
            if seg_end <= seg_start:
                seg_end = min(duration, seg_start + 10.0)
            segment = (round(seg_start, 3), round(seg_end, 3))
            writer.emit("select_segment", screen="player", video_id=video_id, segment=segment)
            selections_done += 1
            think()
            if jitter > 0 and rng.random() < params.removal_prob:
                if rng.random() < params.quick_removal_prob:
                    writer.advance(rng.uniform(3.0, 40.0))
                else:
                    writer.advance(rng.uniform(70.0, 140.0))
                writer.emit("remove_segment", screen="player", video_id=video_id, segment=segment)
                think()

        writer.emit("close_video", screen="player", video_id=video_id)
        think()

    writer.emit("task_end", screen="results")


def simulate(
    profile: SimulationProfile, n_participants: int, seed: int
) -> tuple[dict[str, list[InteractionEvent]], dict[str, float]]:
    """Generate logs for n participants x 2 counterbalanced tasks.

    Returns ({session_id: events}, {video_id: duration}).
    """
    if n_participants < 1:
        raise ConfigError("n_participants must be >= 1")
    durations = video_durations(profile, seed)
    t_a, t_b = profile.topics
    # Rows alternate the condition->topic mapping so that any window of
    # adjacent rows leaves every topic with both conditions (pairable even
    # for tiny cohorts); orders still counterbalance across the square.
    latin_square = (
        (("cfb_on", t_a), ("cfb_off", t_b)),
        (("cfb_on", t_b), ("cfb_off", t_a)),
        (("cfb_off", t_b), ("cfb_on", t_a)),
        (("cfb_off", t_a), ("cfb_on", t_b)),
    )
    order_rng = random.Random(f"{seed}-orders")
    row_offset = order_rng.randrange(4)

    logs: dict[str, list[InteractionEvent]] = {}
    for p in range(n_participants):
        participant_id = f"p{p + 1:03d}"
        plan = latin_square[(p + row_offset) % 4]
        for task_index, (condition, topic) in enumerate(plan):
            task_id = f"task_{topic}"
            session_id = f"{participant_id}-{task_id}"
            base = profile.base_wall_ms + (p * 2 + task_index) * 7_200_000  # two hours apart
            writer = _SessionWriter(session_id, participant_id, task_id, topic, condition, base)
            rng = random.Random(f"{seed}-{participant_id}-{task_index}")
            params = profile.on if condition == "cfb_on" else profile.off
            _simulate_session(writer, params, profile, durations, rng)
            logs[session_id] = writer.events
    return logs, durations


def write_logs(
    logs: dict[str, list[InteractionEvent]], durations: dict[str, float], out_dir: str | Path
) -> list[Path]:
    """One NDJSON file per session plus a durations.json sidecar."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for session_id in sorted(logs):
        path = out / f"{session_id}.ndjson"
        with open(path, "w", encoding="utf-8") as fh:
            for event in logs[session_id]:
                fh.write(json.dumps(event.to_dict()) + "\n")
        written.append(path)
    durations_path = out / "durations.json"
    durations_path.write_text(json.dumps(durations, indent=1, sort_keys=True), encoding="utf-8")
    written.append(durations_path)
    return written
