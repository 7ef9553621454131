import json

import pytest

from flowbar.events import InteractionEvent
from flowbar.lexicon import load_lexicon

BASE_MS = 1_700_000_000_000

LEXICON_RECORDS = [
    {
        "surface": "machine learning",
        "concepts": [{"id": "ml", "title": "Machine learning", "url": "http://wiki/Machine_learning", "prior": 0.9}],
    },
    {"surface": "machine", "concepts": [{"id": "machine", "title": "Machine", "url": "http://wiki/Machine", "prior": 0.6}]},
    {"surface": "learning", "concepts": [{"id": "learning", "title": "Learning", "url": "http://wiki/Learning", "prior": 0.5}]},
    {
        "surface": "neural network",
        "concepts": [
            {"id": "nn", "title": "Neural network", "url": "http://wiki/Neural_network", "prior": 0.7},
            {"id": "ann", "title": "Artificial neural network", "url": "http://wiki/ANN", "prior": 0.2},
        ],
    },
    {
        "surface": "climate change",
        "concepts": [{"id": "cc", "title": "Climate change", "url": "http://wiki/Climate_change", "prior": 1.0}],
    },
    {"surface": "climate", "concepts": [{"id": "climate", "title": "Climate", "url": "http://wiki/Climate", "prior": 0.8}]},
    {
        "surface": "python",
        "concepts": [
            {"id": "python_lang", "title": "Python (language)", "url": "http://wiki/Python_lang", "prior": 0.7},
            {"id": "python_snake", "title": "Python (snake)", "url": "http://wiki/Python_snake", "prior": 0.3},
        ],
    },
    {"links": {"ml": ["nn", "learning"], "nn": ["ml"], "learning": ["ml"], "cc": ["climate"], "climate": ["cc"]}},
    {
        "definitions": {
            "ml": "Machine learning studies algorithms that improve with data.",
            "cc": "Climate change is the long-term shift of global weather patterns.",
            "nn": "",
        }
    },
]


def lexicon_bytes() -> bytes:
    return "\n".join(json.dumps(r) for r in LEXICON_RECORDS).encode()


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(lexicon_bytes())


class LogBuilder:
    """Builds schema-valid event lists with seconds-relative timestamps."""

    def __init__(
        self,
        session="s1",
        participant="p1",
        task="t1",
        topic="climate",
        condition="cfb_on",
        base_ms=BASE_MS,
    ):
        self.session = session
        self.participant = participant
        self.task = task
        self.topic = topic
        self.condition = condition
        self.base_ms = base_ms
        self.n = 0
        self.events: list[InteractionEvent] = []

    def add(self, kind, t, screen="results", video=None, rank=None, position=None, segment=None):
        self.n += 1
        self.events.append(
            InteractionEvent(
                event_id=f"{self.session}-{self.n:04d}",
                session_id=self.session,
                participant_id=self.participant,
                task_id=self.task,
                topic=self.topic,
                condition=self.condition,
                kind=kind,
                screen=screen,
                wall_time=self.base_ms + int(round(t * 1000)),
                video_id=video,
                video_rank=rank,
                position=position,
                segment=tuple(segment) if segment else None,
            )
        )
        return self


def rich_fixture_log(**kwargs) -> LogBuilder:
    """The hand-traced session used by the metrics oracle test.

    Three videos opened at ranks 2/7/5, one extra video explored at rank 9,
    five plays, two seeks, three selections of which two are removed (one
    within 60 s). Every derived quantity is computed by hand in
    tests/test_metrics.py.
    """
    b = LogBuilder(**kwargs)
    b.add("task_start", 0.0)
    b.add("hover_start", 5.0, video="v1", rank=2)
    b.add("hover_end", 7.0, video="v1", rank=2)
    b.add("hover_start", 7.5, video="v1", rank=2)
    b.add("hover_end", 9.0, video="v1", rank=2)
    b.add("hover_start", 10.0, video="v2", rank=7)
    b.add("hover_end", 12.0, video="v2", rank=7)
    b.add("hover_start", 13.0, video="v4", rank=9)
    b.add("hover_end", 14.0, video="v4", rank=9)
    b.add("open_video", 15.0, video="v1", rank=2)
    b.add("hover_start", 20.0, screen="player", video="v1")
    b.add("hover_end", 21.0, screen="player", video="v1")
    b.add("hover_start", 23.0, screen="player", video="v1")
    b.add("hover_end", 24.5, screen="player", video="v1")
    b.add("play", 30.0, screen="player", video="v1", position=10.0)
    b.add("seek", 50.0, screen="player", video="v1", position=100.0)
    b.add("pause", 60.0, screen="player", video="v1", position=110.0)
    b.add("play", 65.0, screen="player", video="v1", position=110.0)
    b.add("select_segment", 75.0, screen="player", video="v1", segment=(100.0, 160.0))
    b.add("pause", 80.0, screen="player", video="v1", position=125.0)
    b.add("close_video", 90.0, screen="player", video="v1")
    b.add("hover_start", 95.0, video="v3", rank=5)
    b.add("hover_end", 98.0, video="v3", rank=5)
    b.add("open_video", 100.0, video="v2", rank=7)
    b.add("play", 105.0, screen="player", video="v2", position=0.0)
    b.add("pause", 125.0, screen="player", video="v2", position=20.0)
    b.add("select_segment", 130.0, screen="player", video="v2", segment=(0.0, 30.0))
    b.add("remove_segment", 140.0, screen="player", video="v2", segment=(0.0, 30.0))
    b.add("select_segment", 150.0, screen="player", video="v2", segment=(200.0, 260.0))
    b.add("play", 160.0, screen="player", video="v2", position=205.0)
    b.add("close_video", 180.0, screen="player", video="v2")
    b.add("open_video", 185.0, video="v3", rank=5)
    b.add("play", 190.0, screen="player", video="v3", position=50.0)
    b.add("seek", 215.0, screen="player", video="v3", position=150.0)
    b.add("pause", 240.0, screen="player", video="v3", position=175.0)
    b.add("remove_segment", 245.0, screen="player", video="v1", segment=(100.0, 160.0))
    b.add("close_video", 250.0, screen="player", video="v3")
    b.add("hover_start", 255.0, video="v1", rank=2)
    b.add("hover_end", 257.0, video="v1", rank=2)
    b.add("task_end", 260.0)
    return b


FIXTURE_DURATIONS = {"v1": 300.0, "v2": 600.0, "v3": 300.0}


def _mini_session(participant, topic, condition, video, base, t_end, hover, t_open, t_play, watch_s, t_select, seg_end, t_close):
    b = LogBuilder(
        session=f"{participant}-{topic}",
        participant=participant,
        task=f"task_{topic}",
        topic=topic,
        condition=condition,
        base_ms=base,
    )
    b.add("task_start", 0.0)
    b.add("hover_start", hover[0], video=video, rank=1)
    b.add("hover_end", hover[1], video=video, rank=1)
    b.add("open_video", t_open, video=video, rank=1)
    b.add("play", t_play, screen="player", video=video, position=0.0)
    b.add("pause", t_play + watch_s, screen="player", video=video, position=float(watch_s))
    b.add("select_segment", t_select, screen="player", video=video, segment=(0.0, float(seg_end)))
    b.add("close_video", t_close, screen="player", video=video)
    b.add("task_end", t_end)
    return b.events


def mini_study_logs():
    """Two participants, two topics, both conditions; pairing is forced
    (one off and one on per topic, different participants), so the analysis
    report is identical for every seed and fully hand-computable. Expected
    values live in tests/fixtures/golden_report.json."""
    hour = 3_600_000
    sessions = [
        _mini_session("p1", "climate", "cfb_off", "v_cl", BASE_MS, 100.0, (5.0, 10.0), 20.0, 25.0, 30, 70.0, 20, 80.0),
        _mini_session("p1", "ml", "cfb_on", "v_ml", BASE_MS + hour, 90.0, (5.0, 8.0), 20.0, 25.0, 28, 60.0, 35, 70.0),
        _mini_session("p2", "climate", "cfb_on", "v_cl", BASE_MS, 80.0, (5.0, 9.0), 15.0, 20.0, 25, 55.0, 30, 60.0),
        _mini_session("p2", "ml", "cfb_off", "v_ml", BASE_MS + hour, 120.0, (10.0, 16.0), 30.0, 35.0, 35, 80.0, 40, 90.0),
    ]
    events = [e for s in sessions for e in s]
    return events, {"v_cl": 100.0, "v_ml": 200.0}
