"""HTTP API consumed by the video-navigation UI.

Endpoints: GET /videos, GET /videos/{id}, GET /search, GET
/definitions/{concept_id}, POST /events, GET /sessions/{id}/events.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .catalog import EventStore, VideoStore
from .errors import EventSchemaError, NotFoundError
from .events import validate_event
from .lexicon import ConceptLexicon, definition_of
from .relevance import DEFAULT_N_LEVELS, highlight_levels, search


@dataclass
class ServiceConfig:
    # Relevance shading can be disabled wholesale (study parity) and is also
    # overridable per request via the ?highlight= query parameter.
    highlighting: bool = True
    n_levels: int = DEFAULT_N_LEVELS
    default_search_limit: int = 50
    # Advisory default player mode for clients; echoed in a response header.
    default_mode: str = "cfb_on"


def create_app(
    videos: VideoStore,
    events: EventStore,
    lexicon: ConceptLexicon,
    config: ServiceConfig | None = None,
) -> FastAPI:
    cfg = config or ServiceConfig()
    app = FastAPI(title="flowbar catalog", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def _mode_header(request: Request, call_next):
        response = await call_next(request)
        response.headers["x-flowbar-default-mode"] = cfg.default_mode
        return response

    @app.exception_handler(NotFoundError)
    async def _not_found(_request, exc):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.get("/videos")
    def list_videos():
        return {"videos": [v.to_dict() for v in videos.list()]}

    @app.get("/videos/{video_id}")
    def get_video(video_id: str):
        return videos.load(video_id).to_dict()

    @app.get("/search")
    def search_videos(q: str = "", limit: int | None = None, highlight: bool | None = None):
        limit = cfg.default_search_limit if limit is None else limit
        shading = cfg.highlighting if highlight is None else highlight
        results = search(q, videos.list(), k=limit, lexicon=lexicon)

        # Levels share one scale across the whole response so shades are
        # comparable between result cards.
        flat = [s for r in results for s in r.fragment_scores]
        levels = highlight_levels(flat, cfg.n_levels) if shading else [0] * len(flat)
        payload = []
        pos = 0
        for r in results:
            n = len(r.fragment_scores)
            payload.append(
                {
                    "video": r.video.to_dict(),
                    "score": r.score,
                    "fragment_scores": list(r.fragment_scores),
                    "highlight_levels": levels[pos : pos + n],
                }
            )
            pos += n
        return {"query": q, "results": payload}

    @app.get("/definitions/{concept_id}")
    def get_definition(concept_id: str):
        return {"concept_id": concept_id, "definition": definition_of(concept_id, lexicon)}

    @app.post("/events")
    async def post_event(request: Request):
        try:
            raw = json.loads(await request.body())
        except json.JSONDecodeError:
            return JSONResponse(status_code=400, content={"detail": "body is not valid JSON"})
        try:
            event = validate_event(raw)
        except EventSchemaError as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc), "field": exc.field})
        ack = events.append(event)
        return {"status": "ok", "event_id": ack.event_id, "duplicate": ack.duplicate}

    @app.get("/sessions/{session_id}/events")
    def get_session_events(session_id: str):
        return {"session_id": session_id, "events": [e.to_dict() for e in events.read_session(session_id)]}

    return app


def build_app(data_dir: str, lexicon: ConceptLexicon, config: ServiceConfig | None = None) -> FastAPI:
    """Convenience factory wiring the stores from a data directory."""
    return create_app(VideoStore(data_dir), EventStore(data_dir), lexicon, config)
