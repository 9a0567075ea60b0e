"""Deterministic synthetic rating data in the MovieLens 100K layout.

Generates users with genre-cluster tastes and movies with latent genre
structure, so collaborative-filtering statistics behave like real rating
data. Used for test fixtures and as a stand-in corpus when the real
dataset is not available locally.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from .dataset import (
    GENRE_LABELS,
    MovieRecord,
    RatingDataset,
    RatingRecord,
    UserRecord,
)

logger = logging.getLogger(__name__)

CLUSTER_GENRES = (
    "Action",
    "Comedy",
    "Drama",
    "Romance",
    "Sci-Fi",
    "Thriller",
    "Horror",
    "Documentary",
)

OCCUPATIONS = (
    "student",
    "engineer",
    "artist",
    "educator",
    "executive",
    "writer",
    "technician",
    "entertainment",
)

BASE_TIMESTAMP = 874_000_000


def generate_dataset(
    n_users: int = 943,
    n_movies: int = 1682,
    n_ratings: int = 100_000,
    seed: int = 7,
    *,
    taste_gain: float = 2.0,
    rating_noise: float = 0.4,
    watch_alignment: float = 0.2,
    noise_spread: float = 0.9,
    eccentric_frac: float = 0.05,
    eccentric_pop: float = 0.8,
) -> RatingDataset:
    """Build a dataset with latent taste structure; fully deterministic.

    `taste_gain` scales how strongly user-movie affinity drives ratings,
    `rating_noise` blurs them, `watch_alignment` biases which movies a user
    rates toward their own taste (0 = popularity only), and `noise_spread`
    varies the noise level per user (0 = identical raters).
    """
    if n_ratings > n_users * n_movies:
        raise ValueError("more ratings requested than user-movie pairs")
    rng = np.random.default_rng(seed)
    n_clusters = len(CLUSTER_GENRES)
    d = n_clusters

    # Near-orthogonal cluster directions in taste space.
    centers = rng.normal(size=(n_clusters, d))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    centers *= 2.0

    # Movies: one main genre cluster, sometimes a secondary one. A small
    # eccentric fraction sits far out along its cluster direction, giving
    # each latent dimension tails beyond the popular bulk.
    main = rng.integers(0, n_clusters, size=n_movies)
    secondary = rng.integers(0, n_clusters, size=n_movies)
    has_secondary = rng.random(n_movies) < 0.35
    movie_vecs = centers[main] + np.where(
        has_secondary[:, None], 0.45 * centers[secondary], 0.0
    )
    movie_vecs += rng.standard_t(df=3, size=(n_movies, d)) * 0.3
    eccentric = rng.random(n_movies) < eccentric_frac
    movie_vecs[eccentric] *= rng.uniform(1.8, 2.8, size=(int(eccentric.sum()), 1))
    movie_bias = rng.normal(scale=0.25, size=n_movies)
    movie_pop = rng.lognormal(mean=0.0, sigma=1.1, size=n_movies)
    movie_pop[eccentric] *= eccentric_pop  # eccentric movies are watched less

    # Users: a few loved clusters, a few disliked ones.
    user_vecs = np.zeros((n_users, d))
    for u in range(n_users):
        loved = rng.choice(n_clusters, size=rng.integers(2, 4), replace=False)
        remaining = [c for c in range(n_clusters) if c not in loved]
        hated = rng.choice(remaining, size=rng.integers(1, 3), replace=False)
        for c in loved:
            user_vecs[u] += rng.uniform(0.7, 1.3) * centers[c] / 2.0
        for c in hated:
            user_vecs[u] -= rng.uniform(0.7, 1.3) * centers[c] / 2.0
    user_vecs += rng.normal(scale=0.15, size=(n_users, d))
    user_bias = rng.normal(scale=0.3, size=n_users)

    affinity = user_vecs @ movie_vecs.T  # (users, movies)
    aff_std = affinity.std() or 1.0
    affinity_z = affinity / aff_std

    # How many movies each user rates: heavy-tailed, everyone rates >= 20
    # (matching the canonical dataset's floor) scaled to the exact total.
    floor = min(20, n_movies)
    raw_counts = np.maximum(floor, rng.lognormal(mean=3.6, sigma=0.7, size=n_users))
    raw_counts = np.minimum(raw_counts, n_movies)
    counts = _scale_counts(raw_counts, n_ratings, floor, n_movies)

    log_pop = np.log(movie_pop)
    user_noise = rating_noise * (1.0 + noise_spread * (rng.random(n_users) * 2.0 - 1.0))
    ratings: list[RatingRecord] = []
    for u in range(n_users):
        # Watch choice mixes popularity with taste alignment.
        logits = 0.9 * log_pop + watch_alignment * affinity_z[u]
        logits -= logits.max()
        probs = np.exp(logits)
        probs /= probs.sum()
        picked = rng.choice(n_movies, size=counts[u], replace=False, p=probs)
        means = 3.05 + taste_gain * affinity_z[u, picked] + user_bias[u] + movie_bias[picked]
        noisy = means + rng.normal(scale=user_noise[u], size=counts[u])
        values = np.clip(np.rint(noisy), 1, 5).astype(int)
        order = np.argsort(picked)
        for j in order:
            ratings.append(
                RatingRecord(
                    user_id=u + 1,
                    movie_id=int(picked[j]) + 1,
                    rating=int(values[j]),
                    timestamp=BASE_TIMESTAMP + int(rng.integers(0, 20_000_000)),
                )
            )

    movies = []
    for i in range(n_movies):
        year = int(rng.integers(1930, 1999))
        genres = {CLUSTER_GENRES[main[i]]}
        if has_secondary[i]:
            genres.add(CLUSTER_GENRES[secondary[i]])
        movies.append(
            MovieRecord(
                movie_id=i + 1,
                title=f"Synthetic Movie {i + 1:04d} ({year})",
                release_year=year,
                genres=frozenset(genres),
            )
        )

    users = [
        UserRecord(
            user_id=u + 1,
            age=int(rng.integers(18, 66)),
            gender="M" if rng.random() < 0.6 else "F",
            occupation=OCCUPATIONS[int(rng.integers(0, len(OCCUPATIONS)))],
        )
        for u in range(n_users)
    ]

    ds = RatingDataset(movies=movies, users=users, ratings=ratings)
    logger.info(
        "generated synthetic dataset: %d users, %d movies, %d ratings (seed %d)",
        ds.n_users,
        ds.n_movies,
        ds.n_ratings,
        seed,
    )
    return ds


def _scale_counts(
    raw: np.ndarray, total: int, floor: int, ceiling: int
) -> np.ndarray:
    """Round per-user counts to ints summing exactly to `total`."""
    n = raw.shape[0]
    if total < n * floor:
        floor = max(1, total // n)
    scaled = raw * (total / raw.sum())
    counts = np.clip(np.floor(scaled).astype(int), floor, ceiling)
    deficit = total - int(counts.sum())
    # Largest-remainder style top-up (or trim), honoring the bounds.
    order = np.argsort(-(scaled - np.floor(scaled)))
    j = 0
    while deficit != 0:
        u = order[j % n]
        if deficit > 0 and counts[u] < ceiling:
            counts[u] += 1
            deficit -= 1
        elif deficit < 0 and counts[u] > floor:
            counts[u] -= 1
            deficit += 1
        j += 1
    return counts


def write_movielens_dir(ds: RatingDataset, out_dir: str | Path) -> Path:
    """Emit u.data / u.item / u.user in the canonical layout."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    with (out_dir / "u.data").open("w") as fh:
        for r in ds.ratings:
            fh.write(f"{r.user_id}\t{r.movie_id}\t{r.rating}\t{r.timestamp}\n")

    with (out_dir / "u.item").open("w", encoding="latin-1") as fh:
        for m in ds.movies:
            release = f"01-Jan-{m.release_year}" if m.release_year else ""
            flags = "|".join("1" if g in m.genres else "0" for g in GENRE_LABELS)
            fh.write(f"{m.movie_id}|{m.title}|{release}||{''}|{flags}\n")

    with (out_dir / "u.user").open("w") as fh:
        for u in ds.users:
            fh.write(
                f"{u.user_id}|{u.age or ''}|{u.gender or ''}|{u.occupation or ''}|00000\n"
            )
    logger.info("wrote MovieLens-layout directory %s", out_dir)
    return out_dir
