"""Snapshot persistence: one file holding the dataset and latent factors.

The snapshot lets the service and headless commands start without
re-running the SVD. Factor matrices are stored verbatim (round-trip is
bit-exact); the adjusted matrix is recomputed deterministically on load.
"""

from __future__ import annotations

import io
import json
import logging
import zipfile
from pathlib import Path

import numpy as np

from .config import EngineParams
from .dataset import GENRE_LABELS, MovieRecord, RatingDataset, RatingRecord, UserRecord
from .engine import Engine
from .latent import LatentSpace, adjust_ratings

logger = logging.getLogger(__name__)

MAGIC = "storyrec-snapshot"
VERSION = 1


class SnapshotError(Exception):
    """Corrupt snapshot file or version mismatch."""


def save_snapshot(engine: Engine, path: str | Path) -> Path:
    """Write the engine's dataset, parameters, and factors to `path`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ds = engine.dataset
    movies = ds.movies
    users = ds.users

    genre_flags = np.zeros((len(movies), len(GENRE_LABELS)), dtype=np.uint8)
    for row, movie in enumerate(movies):
        for col, label in enumerate(GENRE_LABELS):
            if label in movie.genres:
                genre_flags[row, col] = 1

    arrays = {
        "magic": np.array([MAGIC]),
        "version": np.array([VERSION], dtype=np.int64),
        "params_json": np.array([json.dumps(engine.params.to_dict())]),
        "movie_ids": np.array([m.movie_id for m in movies], dtype=np.int64),
        "movie_titles": np.array([m.title for m in movies]),
        "movie_years": np.array(
            [m.release_year if m.release_year is not None else -1 for m in movies],
            dtype=np.int64,
        ),
        "movie_genres": genre_flags,
        "user_ids": np.array([u.user_id for u in users], dtype=np.int64),
        "user_ages": np.array(
            [u.age if u.age is not None else -1 for u in users], dtype=np.int64
        ),
        "user_genders": np.array([u.gender or "" for u in users]),
        "user_occupations": np.array([u.occupation or "" for u in users]),
        "ratings": np.array(
            [[r.user_id, r.movie_id, r.rating, r.timestamp] for r in ds.ratings],
            dtype=np.int64,
        ),
        "user_features": engine.space.user_features,
        "singular_values": engine.space.singular_values,
        "movie_features": engine.space.movie_features,
        "user_coords": engine.space.user_coords,
        "k": np.array([engine.space.k], dtype=np.int64),
    }
    with path.open("wb") as fh:
        np.savez_compressed(fh, **arrays)
    logger.info("wrote snapshot %s (%d bytes)", path, path.stat().st_size)
    return path


def load_snapshot(
    path: str | Path, params_override: EngineParams | None = None
) -> Engine:
    """Rebuild an engine from a snapshot file.

    `params_override` replaces the stored parameters except for the
    truncation rank, which is pinned by the stored factors.
    """
    path = Path(path)
    if not path.is_file():
        raise SnapshotError(f"missing snapshot file {path}")
    try:
        data = np.load(path, allow_pickle=False)
    except (zipfile.BadZipFile, ValueError, OSError, io.UnsupportedOperation) as exc:
        raise SnapshotError(f"{path} is not a snapshot file: {exc}") from exc

    with data:
        if "magic" not in data or str(data["magic"][0]) != MAGIC:
            raise SnapshotError(f"{path} has no snapshot header")
        version = int(data["version"][0])
        if version != VERSION:
            raise SnapshotError(
                f"snapshot version {version} unsupported (expected {VERSION})"
            )

        params = EngineParams.from_dict(json.loads(str(data["params_json"][0])))
        movies = [
            MovieRecord(
                movie_id=int(mid),
                title=str(title),
                release_year=int(year) if int(year) >= 0 else None,
                genres=frozenset(
                    label
                    for label, flag in zip(GENRE_LABELS, flags)
                    if int(flag) == 1
                )
                or frozenset({"unknown"}),
            )
            for mid, title, year, flags in zip(
                data["movie_ids"],
                data["movie_titles"],
                data["movie_years"],
                data["movie_genres"],
            )
        ]
        users = [
            UserRecord(
                user_id=int(uid),
                age=int(age) if int(age) >= 0 else None,
                gender=str(gender) or None,
                occupation=str(occ) or None,
            )
            for uid, age, gender, occ in zip(
                data["user_ids"],
                data["user_ages"],
                data["user_genders"],
                data["user_occupations"],
            )
        ]
        ratings = [
            RatingRecord(int(u), int(m), int(r), int(ts)) for u, m, r, ts in data["ratings"]
        ]
        dataset = RatingDataset(movies=movies, users=users, ratings=ratings)

        space = LatentSpace(
            k=int(data["k"][0]),
            user_features=np.array(data["user_features"]),
            singular_values=np.array(data["singular_values"]),
            movie_features=np.array(data["movie_features"]),
            user_coords=np.array(data["user_coords"]),
        )

    if params_override is not None:
        params = params_override.with_overrides(k=space.k)
    adjusted = adjust_ratings(dataset)
    engine = Engine(dataset, params, adjusted, space)
    logger.info("loaded snapshot %s", path)
    return engine
