"""Per-user interactive sessions over a shared engine snapshot.

A session owns the mutable steering state (preference sliders, thumbs,
per-movie weights, story history) and derives a fresh read-only view from
the engine whenever feedback changes. The event log captures every
mutation so a session can be replayed bit-for-bit.
"""

from __future__ import annotations

import json
import logging
import time
import uuid
from dataclasses import dataclass, field

import numpy as np

from .engine import Engine, EngineError, UnknownMovieError, UnknownUserError, UserView
from .story import Story, generate_story

logger = logging.getLogger(__name__)

HISTORY_CAP = 100


@dataclass
class HistoryEntry:
    story_index: int
    dimension: int
    movie_ids: list[int]


@dataclass
class Session:
    """Interactive state for one user; single logical writer."""

    engine: Engine
    user_id: int
    seed: int
    session_id: str = field(default_factory=lambda: uuid.uuid4().hex)
    f: float = 0.5
    t: float = 0.5
    thumbs_up: set[int] = field(default_factory=set)  # movie ids
    thumbs_down: set[int] = field(default_factory=set)
    weights: dict[int, float] = field(default_factory=dict)  # movie id -> w_i
    history: list[HistoryEntry] = field(default_factory=list)
    story_counter: int = 0
    rotation: int = 0
    created_at: float = field(default_factory=time.time)
    updated_at: float = field(default_factory=time.time)
    event_log: list[dict] = field(default_factory=list)
    _view: UserView | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self._log("create", {"user_id": self.user_id, "seed": self.seed})

    # -- state access -----------------------------------------------------

    @property
    def view(self) -> UserView:
        """Current read-only model view; rebuilt lazily after feedback."""
        if self._view is None:
            up = frozenset(
                self.engine.movie_idx(mid) for mid in self.thumbs_up
            )
            down = frozenset(
                self.engine.movie_idx(mid) for mid in self.thumbs_down
            )
            weights_by_idx = {
                self.engine.movie_idx(mid): w for mid, w in self.weights.items()
            }
            self._view = self.engine.view(self.user_id, up, down, weights_by_idx)
        return self._view

    def _invalidate(self) -> None:
        self._view = None
        self.updated_at = time.time()

    def _log(self, kind: str, payload: dict) -> None:
        self.event_log.append({"type": kind, "payload": payload, "ts": time.time()})

    # -- steering operations ------------------------------------------------

    def set_preferences(self, f: float, t: float) -> dict:
        """New slider values take effect from the next story onward."""
        if not (0.0 <= f <= 1.0 and 0.0 <= t <= 1.0):
            raise ValueError(f"preferences must be in [0, 1], got f={f}, t={t}")
        changed = (f != self.f) or (t != self.t)
        self.f = f
        self.t = t
        if changed:
            self.rotation = 0
            self.updated_at = time.time()
        self._log("preferences", {"f": f, "t": t})
        return self.summary()

    def apply_thumb(self, movie_id: int, direction: str) -> dict:
        """Record a thumb; repeated clicks keep doubling the movie's weight
        and the latest direction wins."""
        if direction not in ("up", "down"):
            raise ValueError(f"thumb direction must be 'up' or 'down', got {direction!r}")
        self.engine.movie_idx(movie_id)  # raises UnknownMovieError
        self.thumbs_up.discard(movie_id)
        self.thumbs_down.discard(movie_id)
        if direction == "up":
            self.thumbs_up.add(movie_id)
        else:
            self.thumbs_down.add(movie_id)
        self.weights[movie_id] = self.weights.get(movie_id, 1.0) * 2.0
        self.rotation = 0
        self._invalidate()
        self._log("thumb", {"movie_id": movie_id, "direction": direction})
        return {
            "movie_id": movie_id,
            "weight": self.weights[movie_id],
            "group": self.view.groups.group_of(self.engine.movie_idx(movie_id)),
        }

    def next_story(self) -> Story:
        """Generate the next story, advance rotation, and append history."""
        last_dim = self.history[-1].dimension if self.history else None
        rng = np.random.default_rng([self.seed, self.story_counter])
        story = generate_story(
            self.view,
            self.f,
            self.t,
            self.engine.params.story_length,
            rng,
            seed_label=(self.seed, self.story_counter),
            last_dim=last_dim,
            rotation=self.rotation,
        )
        self.story_counter += 1
        self.rotation += 1
        self.history.append(
            HistoryEntry(
                story_index=self.story_counter - 1,
                dimension=story.dimension,
                movie_ids=[e.movie_id for e in story.events],
            )
        )
        if len(self.history) > HISTORY_CAP:
            del self.history[0]
        self.updated_at = time.time()
        self._log("story", {"index": self.story_counter - 1, "story": story.to_dict()})
        return story

    def summary(self) -> dict:
        return {
            "session_id": self.session_id,
            "user_id": self.user_id,
            "f": self.f,
            "t": self.t,
            "seed": self.seed,
            "thumbs_up": sorted(self.thumbs_up),
            "thumbs_down": sorted(self.thumbs_down),
            "weights": {str(mid): w for mid, w in sorted(self.weights.items())},
            "stories_told": self.story_counter,
        }

    def dump_event_log(self) -> str:
        """Line-delimited JSON, one record per mutation."""
        return "\n".join(json.dumps(rec, sort_keys=True) for rec in self.event_log)


def create_session(
    engine: Engine,
    user_id: int,
    seed: int | None = None,
    strict: bool = True,
) -> Session:
    """Open a session. In strict mode the user must exist in the dataset;
    otherwise unknown ids act as zero-history newcomers."""
    if user_id < 1:
        raise UnknownUserError(f"user id must be >= 1, got {user_id}")
    if strict and not engine.has_user(user_id):
        raise UnknownUserError(f"unknown user id {user_id}")
    if seed is None:
        seed = int.from_bytes(uuid.uuid4().bytes[:4], "big")
    return Session(engine=engine, user_id=user_id, seed=seed)


def replay_event_log(engine: Engine, log_text: str, strict: bool = False) -> list[dict]:
    """Re-run a session's event log and return the regenerated stories
    (serialized). Used to verify deterministic replay."""
    session: Session | None = None
    stories: list[dict] = []
    for line in log_text.splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        kind = record["type"]
        payload = record["payload"]
        if kind == "create":
            session = create_session(
                engine, payload["user_id"], payload["seed"], strict=strict
            )
        elif session is None:
            raise EngineError("event log does not start with a create record")
        elif kind == "preferences":
            session.set_preferences(payload["f"], payload["t"])
        elif kind == "thumb":
            session.apply_thumb(payload["movie_id"], payload["direction"])
        elif kind == "story":
            stories.append(session.next_story().to_dict())
        else:
            raise EngineError(f"unknown event type {kind!r}")
    return stories


def movie_details(engine: Engine, movie_id: int, user_id: int | None = None) -> dict:
    """The five hover fields (user rating, average rating, popularity,
    title, genres) plus the poster key."""
    idx = engine.movie_idx(movie_id)
    record = engine.dataset.movies[idx]
    user_rating: int | None = None
    if user_id is not None:
        u = engine.user_idx(user_id)
        if u is not None and engine.mask[u, idx]:
            user_rating = int(engine.raw[u, idx])
    avg = engine.movie_avg_rating[idx]
    return {
        "movie_id": movie_id,
        "title": record.title,
        "genres": sorted(record.genres),
        "user_rating": user_rating,
        "average_rating": round(float(avg), 3) if not np.isnan(avg) else None,
        "popularity": int(engine.popularity[idx]),
        "poster_key": str(movie_id),
    }


def user_history(engine: Engine, user_id: int) -> list[dict]:
    """All movies the user has rated, with ratings and timestamps."""
    if not engine.has_user(user_id):
        raise UnknownUserError(f"unknown user id {user_id}")
    rows = []
    for r in engine.dataset.ratings:
        if r.user_id != user_id:
            continue
        record = engine.dataset.movie(r.movie_id)
        rows.append(
            {
                "movie_id": r.movie_id,
                "title": record.title,
                "rating": r.rating,
                "timestamp": r.timestamp,
                "poster_key": str(r.movie_id),
            }
        )
    rows.sort(key=lambda d: d["movie_id"])
    return rows
