"""Latent space construction and per-user neighborhood quantities.

Ratings are first adjusted for global effects (user and movie generosity),
then factorized with a truncated SVD. Users are mapped into the movie-feature
space, where cosine similarity drives the recommendable-movie list and the
per-movie recommendation degrees.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .dataset import RatingDataset

logger = logging.getLogger(__name__)


class FactorizationError(Exception):
    """SVD did not converge or the requested rank is invalid."""


@dataclass(frozen=True)
class AdjustedMatrix:
    """Adjusted ratings with the rated-ness mask and the cached averages.

    values[u, i] = r_ui - (a_u - A) - (a_i - B) where rated, 0 elsewhere.
    """

    values: np.ndarray  # (m, n) float64
    mask: np.ndarray  # (m, n) bool
    user_avg: np.ndarray  # (m,) a_u; A where the user has no ratings
    movie_avg: np.ndarray  # (n,) a_i; B where the movie has no ratings
    global_user_avg: float  # A: mean of per-user averages
    global_movie_avg: float  # B: mean of per-movie averages

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class LatentSpace:
    """Truncated factors plus the user-coordinate matrix C = M x V_k."""

    k: int
    user_features: np.ndarray  # (m, k) U_k
    singular_values: np.ndarray  # (k,), non-increasing
    movie_features: np.ndarray  # (n, k) V_k
    user_coords: np.ndarray  # (m, k) C

    def movie_projection(self, movie_idx: int, dim: int) -> float:
        return float(self.movie_features[movie_idx, dim])

    def projections(self, dim: int) -> np.ndarray:
        """All movie positions along one latent dimension."""
        return self.movie_features[:, dim]


def adjust_ratings(ds: RatingDataset) -> AdjustedMatrix:
    """Apply the global-effects normalization to every rated cell."""
    if ds.n_ratings == 0:
        raise ValueError("dataset has no ratings")
    raw, mask = ds.rating_matrix()
    user_counts = mask.sum(axis=1)
    movie_counts = mask.sum(axis=0)

    with np.errstate(invalid="ignore"):
        user_avg = np.where(user_counts > 0, raw.sum(axis=1) / np.maximum(user_counts, 1), np.nan)
        movie_avg = np.where(movie_counts > 0, raw.sum(axis=0) / np.maximum(movie_counts, 1), np.nan)

    global_user_avg = float(np.nanmean(user_avg))
    global_movie_avg = float(np.nanmean(movie_avg))
    # Zero-rating users/movies degrade gracefully: their deviation terms vanish.
    user_avg = np.where(np.isnan(user_avg), global_user_avg, user_avg)
    movie_avg = np.where(np.isnan(movie_avg), global_movie_avg, movie_avg)

    user_dev = user_avg - global_user_avg
    movie_dev = movie_avg - global_movie_avg
    values = raw - user_dev[:, None] - movie_dev[None, :]
    values = np.where(mask, values, 0.0)
    return AdjustedMatrix(
        values=values,
        mask=mask,
        user_avg=user_avg,
        movie_avg=movie_avg,
        global_user_avg=global_user_avg,
        global_movie_avg=global_movie_avg,
    )


def factorize(adj: AdjustedMatrix, k: int) -> LatentSpace:
    """Truncated SVD of the adjusted matrix, with deterministic factor signs.

    Signs are aligned so the largest-magnitude entry of each movie-feature
    column is positive, making factorizations reproducible across runs.
    """
    m, n = adj.shape
    max_rank = min(m, n)
    if not 1 <= k <= max_rank:
        raise FactorizationError(f"rank k={k} out of range [1, {max_rank}]")
    try:
        u, s, vt = np.linalg.svd(adj.values, full_matrices=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise FactorizationError(f"SVD did not converge: {exc}") from exc

    u_k = u[:, :k].copy()
    s_k = s[:k].copy()
    v_k = vt[:k].T.copy()

    # Sign alignment: flip column pairs so max-|.| entry of each V column is positive.
    for col in range(k):
        pivot = np.argmax(np.abs(v_k[:, col]))
        if v_k[pivot, col] < 0:
            v_k[:, col] = -v_k[:, col]
            u_k[:, col] = -u_k[:, col]

    user_coords = adj.values @ v_k
    return LatentSpace(
        k=k,
        user_features=u_k,
        singular_values=s_k,
        movie_features=v_k,
        user_coords=user_coords,
    )


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; 0.0 when either vector is all-zero."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def user_similarity(space: LatentSpace, u_idx: int, v_idx: int) -> float:
    return cosine(space.user_coords[u_idx], space.user_coords[v_idx])


def similarity_vector(space: LatentSpace, coords_u: np.ndarray) -> np.ndarray:
    """Cosine of one user's coordinates against every user's coordinates."""
    norms = np.linalg.norm(space.user_coords, axis=1)
    norm_u = float(np.linalg.norm(coords_u))
    if norm_u == 0.0:
        return np.zeros(space.user_coords.shape[0])
    dots = space.user_coords @ coords_u
    with np.errstate(invalid="ignore", divide="ignore"):
        sims = dots / (norms * norm_u)
    sims[norms == 0.0] = 0.0
    return sims


@dataclass(frozen=True)
class UserNeighborhood:
    """Similarities, recommendable candidates, and degrees for one user.

    `raw_degrees`/`degrees` are NaN outside the candidate list; `degrees`
    is the per-user min-max normalization of the raw values to [0, 1].
    """

    similarities: np.ndarray  # (m,)
    similar_mask: np.ndarray  # (m,) bool, s_uv >= 0
    candidate_mask: np.ndarray  # (n,) bool, the recommendable list
    raw_degrees: np.ndarray  # (n,)
    degrees: np.ndarray  # (n,)

    @property
    def candidates(self) -> np.ndarray:
        return np.flatnonzero(self.candidate_mask)


def compute_neighborhood(
    space: LatentSpace,
    adj: AdjustedMatrix,
    raw: np.ndarray,
    user_row: np.ndarray,
    user_mask_row: np.ndarray,
    coords_u: np.ndarray,
    w_c: float,
    by_similarity_sum: bool = False,
) -> UserNeighborhood:
    """All neighborhood quantities for a single (possibly unseen) user.

    `user_row`/`user_mask_row` are the user's own raw ratings and mask;
    passing all-zero rows models a user with no history, whose similarity
    to everyone is 0 and whose similar set is therefore every user.
    """
    sims = similarity_vector(space, coords_u)
    similar = sims >= 0.0

    sim_weights = np.where(similar, sims, 0.0)
    numer = raw.T @ sim_weights  # sum of r_vi * s_uv over similar raters
    if by_similarity_sum:
        denom = (raw > 0).astype(np.float64).T @ sim_weights
    else:
        denom = raw.T @ similar.astype(np.float64)  # sum of r_vi over similar raters

    qualifying = (adj.values >= w_c) & adj.mask
    has_qualifying = qualifying.T @ similar.astype(np.float64) > 0.0

    candidate = (~user_mask_row) & has_qualifying & (denom > 0.0)

    raw_degrees = np.full(raw.shape[1], np.nan)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = numer / denom
    raw_degrees[candidate] = ratio[candidate]

    degrees = np.full(raw.shape[1], np.nan)
    if candidate.any():
        vals = raw_degrees[candidate]
        lo, hi = float(vals.min()), float(vals.max())
        if hi > lo:
            degrees[candidate] = (vals - lo) / (hi - lo)
        else:
            # All candidates equally recommendable.
            degrees[candidate] = 1.0
    return UserNeighborhood(
        similarities=sims,
        similar_mask=similar,
        candidate_mask=candidate,
        raw_degrees=raw_degrees,
        degrees=degrees,
    )


def recommendable_list(
    space: LatentSpace,
    adj: AdjustedMatrix,
    raw: np.ndarray,
    u_idx: int,
    w_c: float,
) -> np.ndarray:
    """Movie indexes unrated by the user but rated >= w_c (adjusted) by a
    similar user."""
    hood = compute_neighborhood(
        space, adj, raw, raw[u_idx], adj.mask[u_idx], space.user_coords[u_idx], w_c
    )
    return hood.candidates


def recommendation_degree(hood: UserNeighborhood, movie_idx: int) -> tuple[float, float]:
    """(raw, normalized) degree for one candidate movie."""
    if not hood.candidate_mask[movie_idx]:
        raise ValueError(f"movie index {movie_idx} is not in the recommendable list")
    return float(hood.raw_degrees[movie_idx]), float(hood.degrees[movie_idx])
