"""MovieLens 100K-format dataset loading, validation, and statistics."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

# The 19 MovieLens 100K genre flags, in u.item column order.
GENRE_LABELS = (
    "unknown",
    "Action",
    "Adventure",
    "Animation",
    "Children's",
    "Comedy",
    "Crime",
    "Documentary",
    "Drama",
    "Fantasy",
    "Film-Noir",
    "Horror",
    "Musical",
    "Mystery",
    "Romance",
    "Sci-Fi",
    "Thriller",
    "War",
    "Western",
)

RATING_VALUES = (1, 2, 3, 4, 5)


class DatasetError(Exception):
    """Raised for missing files, malformed rows, or invariant violations."""


@dataclass(frozen=True)
class MovieRecord:
    movie_id: int
    title: str
    release_year: int | None
    genres: frozenset[str]


@dataclass(frozen=True)
class UserRecord:
    user_id: int
    age: int | None = None
    gender: str | None = None
    occupation: str | None = None


@dataclass(frozen=True)
class RatingRecord:
    user_id: int
    movie_id: int
    rating: int
    timestamp: int


@dataclass
class RatingDataset:
    """Immutable-after-construction container for users, movies, and ratings.

    Users and movies are kept sorted by id; `user_index`/`movie_index` map
    ids to dense row/column positions. Rated-ness is tracked by an explicit
    mask so a legitimate adjusted rating of 0 never reads as "not rated".
    """

    movies: list[MovieRecord]
    users: list[UserRecord]
    ratings: list[RatingRecord]
    user_index: dict[int, int] = field(init=False, repr=False)
    movie_index: dict[int, int] = field(init=False, repr=False)
    _matrix_cache: tuple[np.ndarray, np.ndarray] | None = field(
        init=False, default=None, repr=False
    )

    def __post_init__(self) -> None:
        self.movies = sorted(self.movies, key=lambda m: m.movie_id)
        self.users = sorted(self.users, key=lambda u: u.user_id)
        self.user_index = {u.user_id: i for i, u in enumerate(self.users)}
        self.movie_index = {m.movie_id: i for i, m in enumerate(self.movies)}
        self._validate()

    def _validate(self) -> None:
        if len(self.user_index) != len(self.users):
            raise DatasetError("duplicate user_id in user table")
        if len(self.movie_index) != len(self.movies):
            raise DatasetError("duplicate movie_id in movie table")
        seen: set[tuple[int, int]] = set()
        for r in self.ratings:
            if r.rating not in RATING_VALUES:
                raise DatasetError(
                    f"rating {r.rating} outside {{1..5}} for user {r.user_id}, movie {r.movie_id}"
                )
            if r.user_id not in self.user_index:
                raise DatasetError(f"rating references unknown user {r.user_id}")
            if r.movie_id not in self.movie_index:
                raise DatasetError(f"rating references unknown movie {r.movie_id}")
            key = (r.user_id, r.movie_id)
            if key in seen:
                raise DatasetError(f"duplicate rating for user/movie pair {key}")
            seen.add(key)

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def n_movies(self) -> int:
        return len(self.movies)

    @property
    def n_ratings(self) -> int:
        return len(self.ratings)

    def movie(self, movie_id: int) -> MovieRecord:
        try:
            return self.movies[self.movie_index[movie_id]]
        except KeyError:
            raise DatasetError(f"unknown movie id {movie_id}") from None

    def user(self, user_id: int) -> UserRecord:
        try:
            return self.users[self.user_index[user_id]]
        except KeyError:
            raise DatasetError(f"unknown user id {user_id}") from None

    def rating_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (values, mask): raw ratings with 0 where unrated, and the
        rated-ness mask."""
        if self._matrix_cache is None:
            values = np.zeros((self.n_users, self.n_movies), dtype=np.float64)
            mask = np.zeros((self.n_users, self.n_movies), dtype=bool)
            for r in self.ratings:
                u = self.user_index[r.user_id]
                i = self.movie_index[r.movie_id]
                values[u, i] = float(r.rating)
                mask[u, i] = True
            self._matrix_cache = (values, mask)
        return self._matrix_cache

    def ratings_of_user(self, user_id: int) -> list[RatingRecord]:
        return [r for r in self.ratings if r.user_id == user_id]


@dataclass(frozen=True)
class StatsReport:
    n_users: int
    n_movies: int
    n_ratings: int
    user_counts: dict[int, int]
    user_averages: dict[int, float]
    movie_counts: dict[int, int]
    movie_averages: dict[int, float]
    sparsity: float  # fraction of the user x movie grid with no rating


def _parse_int(token: str, what: str, path: Path, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise DatasetError(f"{path}:{lineno}: malformed {what} {token!r}") from None


def _require_file(data_dir: Path, name: str) -> Path:
    path = data_dir / name
    if not path.is_file():
        raise DatasetError(f"missing file {path}")
    return path


def _load_movies(path: Path) -> list[MovieRecord]:
    movies: list[MovieRecord] = []
    # latin-1: the canonical files carry accented titles in that encoding.
    with path.open(encoding="latin-1") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("|")
            if len(parts) != 5 + len(GENRE_LABELS):
                raise DatasetError(
                    f"{path}:{lineno}: expected {5 + len(GENRE_LABELS)} fields, got {len(parts)}"
                )
            movie_id = _parse_int(parts[0], "movie id", path, lineno)
            if movie_id < 1:
                raise DatasetError(f"{path}:{lineno}: movie id must be >= 1")
            title = parts[1]
            release_year: int | None = None
            if parts[2]:
                # release dates look like "01-Jan-1995"
                tail = parts[2].rsplit("-", 1)[-1]
                if tail.isdigit():
                    release_year = int(tail)
            flags = parts[5:]
            genres = set()
            for label, flag in zip(GENRE_LABELS, flags):
                if flag not in ("0", "1"):
                    raise DatasetError(f"{path}:{lineno}: genre flag {flag!r} not 0/1")
                if flag == "1":
                    genres.add(label)
            if not genres:
                genres = {"unknown"}
            movies.append(MovieRecord(movie_id, title, release_year, frozenset(genres)))
    return movies


def _load_users(path: Path) -> list[UserRecord]:
    users: list[UserRecord] = []
    with path.open(encoding="latin-1") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("|")
            if len(parts) < 4:
                raise DatasetError(f"{path}:{lineno}: expected >= 4 fields, got {len(parts)}")
            user_id = _parse_int(parts[0], "user id", path, lineno)
            if user_id < 1:
                raise DatasetError(f"{path}:{lineno}: user id must be >= 1")
            age = int(parts[1]) if parts[1].isdigit() else None
            gender = parts[2] or None
            occupation = parts[3] or None
            users.append(UserRecord(user_id, age, gender, occupation))
    return users


def _load_ratings(path: Path) -> list[RatingRecord]:
    ratings: list[RatingRecord] = []
    with path.open(encoding="latin-1") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise DatasetError(f"{path}:{lineno}: expected 4 tab-separated fields")
            user_id = _parse_int(parts[0], "user id", path, lineno)
            movie_id = _parse_int(parts[1], "movie id", path, lineno)
            rating = _parse_int(parts[2], "rating", path, lineno)
            timestamp = _parse_int(parts[3], "timestamp", path, lineno)
            if rating not in RATING_VALUES:
                raise DatasetError(f"{path}:{lineno}: rating {rating} outside {{1..5}}")
            ratings.append(RatingRecord(user_id, movie_id, rating, timestamp))
    if not ratings:
        raise DatasetError(f"{path}: no ratings")
    return ratings


def load_movielens(data_dir: str | Path) -> RatingDataset:
    """Load a MovieLens 100K-layout directory (u.data, u.item, u.user)."""
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise DatasetError(f"missing directory {data_dir}")
    ratings_path = _require_file(data_dir, "u.data")
    movies_path = _require_file(data_dir, "u.item")
    users_path = _require_file(data_dir, "u.user")

    movies = _load_movies(movies_path)
    users = _load_users(users_path)
    ratings = _load_ratings(ratings_path)
    ds = RatingDataset(movies=movies, users=users, ratings=ratings)
    logger.info(
        "loaded %d users, %d movies, %d ratings from %s",
        ds.n_users,
        ds.n_movies,
        ds.n_ratings,
        data_dir,
    )
    return ds


def dataset_stats(ds: RatingDataset) -> StatsReport:
    """Per-user and per-movie counts/averages plus global sparsity."""
    user_counts: dict[int, int] = {u.user_id: 0 for u in ds.users}
    user_sums: dict[int, float] = {u.user_id: 0.0 for u in ds.users}
    movie_counts: dict[int, int] = {m.movie_id: 0 for m in ds.movies}
    movie_sums: dict[int, float] = {m.movie_id: 0.0 for m in ds.movies}
    for r in ds.ratings:
        user_counts[r.user_id] += 1
        user_sums[r.user_id] += r.rating
        movie_counts[r.movie_id] += 1
        movie_sums[r.movie_id] += r.rating
    user_averages = {
        uid: (user_sums[uid] / c if c else 0.0) for uid, c in user_counts.items()
    }
    movie_averages = {
        mid: (movie_sums[mid] / c if c else 0.0) for mid, c in movie_counts.items()
    }
    cells = ds.n_users * ds.n_movies
    sparsity = 1.0 - (ds.n_ratings / cells if cells else 0.0)
    return StatsReport(
        n_users=ds.n_users,
        n_movies=ds.n_movies,
        n_ratings=ds.n_ratings,
        user_counts=user_counts,
        user_averages=user_averages,
        movie_counts=movie_counts,
        movie_averages=movie_averages,
        sparsity=sparsity,
    )
