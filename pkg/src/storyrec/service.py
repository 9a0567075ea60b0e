"""HTTP/JSON API over the engine and sessions.

The engine snapshot is shared read-only; each session is guarded by its
own lock so requests for one session serialize while distinct sessions
proceed concurrently.
"""

from __future__ import annotations

import logging
import math
import threading

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .engine import Engine, UnknownMovieError, UnknownUserError
from .semantic import layout_to_dict
from .session import Session, create_session, movie_details, user_history
from .story import PoolExhaustedError

logger = logging.getLogger(__name__)

GROUP_COLORS = {
    "like": "green",
    "dislike": "orange",
    "recommendable": "blue",
    "not_recommendable": "black",
    "neutral": "gray",
}


class SessionCreateRequest(BaseModel):
    user_id: int
    seed: int | None = None


class PreferencesRequest(BaseModel):
    f: float = Field(ge=0.0, le=1.0)
    t: float = Field(ge=0.0, le=1.0)


class FeedbackRequest(BaseModel):
    movie_id: int
    thumb: str


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": {"code": code, "message": message}},
    )


def animation_cues(story_dict: dict, story_id: str) -> list[dict]:
    """Ordered playback markers: interface intro, anchor/narrative intro,
    then the level 1-2-3 reveal for each event in turn."""
    cues: list[dict] = []
    for component in ("history", "colors", "degrees", "zones"):
        cues.append({"set": 1, "kind": "intro", "target": component})
    for side in ("left", "right"):
        cues.append({"set": 2, "kind": "anchor", "target": side})
    for index, _event in enumerate(story_dict["events"]):
        for level in (1, 2, 3):
            cues.append(
                {"set": 3, "kind": "event_level", "event_index": index, "level": level}
            )
    for i, cue in enumerate(cues):
        cue["cue_index"] = i
        cue["story_id"] = story_id
    return cues


def create_app(engine: Engine, strict_users: bool = True) -> FastAPI:
    app = FastAPI(title="storyrec", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    sessions: dict[str, tuple[Session, threading.Lock]] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> tuple[Session, threading.Lock]:
        with registry_lock:
            entry = sessions.get(session_id)
        if entry is None:
            raise LookupError(session_id)
        return entry

    @app.exception_handler(RequestValidationError)
    async def malformed_body(_request: Request, exc: RequestValidationError):
        return _error(400, "malformed_body", str(exc.errors()[:3]))

    @app.exception_handler(LookupError)
    async def unknown_session(_request: Request, exc: LookupError):
        return _error(404, "unknown_session", f"unknown session {exc}")

    @app.exception_handler(UnknownUserError)
    async def unknown_user(_request: Request, exc: UnknownUserError):
        return _error(404, "unknown_user", str(exc))

    @app.exception_handler(UnknownMovieError)
    async def unknown_movie(_request: Request, exc: UnknownMovieError):
        return _error(404, "unknown_movie", str(exc))

    @app.exception_handler(PoolExhaustedError)
    async def pool_exhausted(_request: Request, exc: PoolExhaustedError):
        return _error(409, "pool_exhausted", str(exc))

    @app.exception_handler(ValueError)
    async def bad_value(_request: Request, exc: ValueError):
        return _error(400, "invalid_value", str(exc))

    @app.get("/health")
    def health() -> dict:
        return {
            "status": "ok",
            "users": engine.dataset.n_users,
            "movies": engine.dataset.n_movies,
            "ratings": engine.dataset.n_ratings,
            "k": engine.space.k,
        }

    @app.post("/sessions", status_code=201)
    def open_session(body: SessionCreateRequest) -> dict:
        session = create_session(engine, body.user_id, body.seed, strict=strict_users)
        with registry_lock:
            sessions[session.session_id] = (session, threading.Lock())
        logger.info("opened session %s for user %d", session.session_id, body.user_id)
        return session.summary()

    @app.get("/sessions/{session_id}")
    def session_summary(session_id: str) -> dict:
        session, lock = get_session(session_id)
        with lock:
            return session.summary()

    @app.get("/sessions/{session_id}/story")
    def next_story(session_id: str) -> dict:
        # Non-idempotent by design: each call advances the storytelling loop.
        session, lock = get_session(session_id)
        with lock:
            story = session.next_story()
            story_id = f"{session.session_id}-{session.story_counter - 1}"
            payload = story.to_dict()
        payload["story_id"] = story_id
        payload["cues"] = animation_cues(payload, story_id)
        return payload

    @app.post("/sessions/{session_id}/feedback")
    def feedback(session_id: str, body: FeedbackRequest) -> dict:
        if body.thumb not in ("up", "down"):
            return _error(400, "bad_thumb", f"thumb must be 'up' or 'down', got {body.thumb!r}")
        session, lock = get_session(session_id)
        with lock:
            summary = session.apply_thumb(body.movie_id, body.thumb)
            summary["session"] = session.summary()
        return summary

    @app.post("/sessions/{session_id}/preferences")
    def preferences(session_id: str, body: PreferencesRequest) -> dict:
        session, lock = get_session(session_id)
        with lock:
            return session.set_preferences(body.f, body.t)

    @app.get("/sessions/{session_id}/dimension/{dim}")
    def dimension_view(session_id: str, dim: int) -> dict:
        session, lock = get_session(session_id)
        with lock:
            view = session.view
            if not 0 <= dim < engine.space.k:
                return _error(404, "unknown_dimension", f"dimension {dim} out of range")
            layout = view.layout(dim)
            groups = view.groups
            projections = engine.projections(dim)
            degrees = view.degrees

            group_by_idx: dict[int, str] = {}
            for name, members in (
                ("like", groups.like),
                ("dislike", groups.dislike),
                ("neutral", groups.neutral),
                ("recommendable", groups.recommendable),
                ("not_recommendable", groups.not_recommendable),
            ):
                for i in members:
                    group_by_idx[int(i)] = name

            nodes = []
            for i in range(engine.dataset.n_movies):
                has_degree = not math.isnan(degrees[i])
                nodes.append(
                    {
                        "movie_id": engine.movie_id(i),
                        "projection": round(float(projections[i]), 6),
                        "group": group_by_idx[i],
                        "degree": round(float(degrees[i]), 6) if has_degree else None,
                    }
                )
            return {
                "dimension": dim,
                "zones": layout_to_dict(layout),
                "colors": GROUP_COLORS,
                "groups": {
                    "like": int(groups.like.size),
                    "dislike": int(groups.dislike.size),
                    "neutral": int(groups.neutral.size),
                    "recommendable": int(groups.recommendable.size),
                    "not_recommendable": int(groups.not_recommendable.size),
                },
                "nodes": nodes,
            }

    @app.get("/movies/{movie_id}")
    def movie_view(movie_id: int, user: int | None = Query(default=None)) -> dict:
        return movie_details(engine, movie_id, user)

    @app.get("/users/{user_id}/history")
    def history(user_id: int) -> dict:
        return {"user_id": user_id, "rated": user_history(engine, user_id)}

    return app
