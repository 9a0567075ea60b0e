"""Engine facade: preprocessed dataset + latent space + per-user views.

An `Engine` is immutable after `build()` and safe to share across sessions;
everything feedback-dependent lives in throwaway `UserView` objects that
layer thumb state over the shared snapshot.
"""

from __future__ import annotations

import logging
import time
from functools import cached_property

import numpy as np

from .config import EngineParams
from .dataset import RatingDataset
from .latent import (
    AdjustedMatrix,
    LatentSpace,
    UserNeighborhood,
    adjust_ratings,
    compute_neighborhood,
    factorize,
)
from .semantic import (
    DimensionLayout,
    Interval,
    MovieGroups,
    ValidationReport,
    ValidationRow,
    classify_layout,
    layout_dimension,
    partition_groups,
    region_degree_sums,
    score_dimension,
    interactive_score,
    select_dimensions,
    _pearson,
)

logger = logging.getLogger(__name__)


class EngineError(Exception):
    """Base class for engine-level failures."""


class UnknownUserError(EngineError):
    pass


class UnknownMovieError(EngineError):
    pass


class Engine:
    """Shared, read-only recommendation model over one dataset."""

    def __init__(
        self,
        dataset: RatingDataset,
        params: EngineParams,
        adjusted: AdjustedMatrix,
        space: LatentSpace,
    ):
        self.dataset = dataset
        self.params = params
        self.adjusted = adjusted
        self.space = space
        self.raw, self.mask = dataset.rating_matrix()
        self.popularity = self.mask.sum(axis=0)  # raters per movie
        with np.errstate(invalid="ignore"):
            sums = self.raw.sum(axis=0)
            self.movie_avg_rating = np.where(
                self.popularity > 0, sums / np.maximum(self.popularity, 1), np.nan
            )
        self._neighborhoods: dict[int | None, UserNeighborhood] = {}
        # Rating-independent per-dimension geometry, shared by every view.
        self._extents = [
            Interval(
                float(space.movie_features[:, p].min()),
                float(space.movie_features[:, p].max()),
            )
            for p in range(space.k)
        ]
        self._boundaries = [
            float(np.quantile(np.abs(space.movie_features[:, p]), params.rho))
            for p in range(space.k)
        ]

    @classmethod
    def build(cls, dataset: RatingDataset, params: EngineParams | None = None) -> "Engine":
        """Preprocess: adjust ratings and factorize. The truncation rank is
        clamped to the matrix rank bound for small datasets."""
        params = params or EngineParams()
        t0 = time.monotonic()
        adjusted = adjust_ratings(dataset)
        max_rank = min(dataset.n_users, dataset.n_movies)
        k = min(params.k, max_rank)
        if k != params.k:
            logger.info("clamping k from %d to %d (rank bound)", params.k, k)
            params = params.with_overrides(k=k)
        space = factorize(adjusted, k)
        engine = cls(dataset, params, adjusted, space)
        logger.info(
            "built engine: %d users x %d movies, k=%d, %.2fs",
            dataset.n_users,
            dataset.n_movies,
            k,
            time.monotonic() - t0,
        )
        return engine

    # -- id / index plumbing ------------------------------------------------

    def user_idx(self, user_id: int) -> int | None:
        """Dense row for a known user; None models a zero-history newcomer."""
        return self.dataset.user_index.get(user_id)

    def movie_idx(self, movie_id: int) -> int:
        try:
            return self.dataset.movie_index[movie_id]
        except KeyError:
            raise UnknownMovieError(f"unknown movie id {movie_id}") from None

    def movie_id(self, movie_idx: int) -> int:
        return self.dataset.movies[movie_idx].movie_id

    def has_user(self, user_id: int) -> bool:
        return user_id in self.dataset.user_index

    def extent(self, dim: int) -> Interval:
        return self._extents[dim]

    def typicality_boundary(self, dim: int) -> float:
        return self._boundaries[dim]

    def projections(self, dim: int) -> np.ndarray:
        return self.space.movie_features[:, dim]

    # -- per-user quantities --------------------------------------------------

    def _user_rows(self, user_id: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        idx = self.user_idx(user_id)
        if idx is None:
            n = self.dataset.n_movies
            zero_row = np.zeros(n)
            return zero_row, np.zeros(n, dtype=bool), np.zeros(self.space.k)
        return self.raw[idx], self.mask[idx], self.space.user_coords[idx]

    def neighborhood(self, user_id: int) -> UserNeighborhood:
        """Similarities, candidate list, and degrees; cached per user. All
        zero-history users share one cache entry since they are
        indistinguishable to the model."""
        idx = self.user_idx(user_id)
        key = idx
        if key not in self._neighborhoods:
            row, mask_row, coords = self._user_rows(user_id)
            self._neighborhoods[key] = compute_neighborhood(
                self.space,
                self.adjusted,
                self.raw,
                row,
                mask_row,
                coords,
                self.params.w_c,
                self.params.degree_by_similarity_sum,
            )
        return self._neighborhoods[key]

    def view(
        self,
        user_id: int,
        thumbs_up: frozenset[int] = frozenset(),
        thumbs_down: frozenset[int] = frozenset(),
        weights: dict[int, float] | None = None,
        params: EngineParams | None = None,
    ) -> "UserView":
        """Feedback-state view; thumb sets and weights are movie *indexes*."""
        return UserView(self, user_id, thumbs_up, thumbs_down, weights or {}, params)


class UserView:
    """Groups, layouts, and dimension scores for one (user, feedback) state.

    Immutable; sessions discard and rebuild views whenever feedback changes.
    """

    def __init__(
        self,
        engine: Engine,
        user_id: int,
        thumbs_up: frozenset[int],
        thumbs_down: frozenset[int],
        weights: dict[int, float],
        params: EngineParams | None = None,
        relaxed: bool = False,
    ):
        self.engine = engine
        self.user_id = user_id
        self.thumbs_up = frozenset(thumbs_up)
        self.thumbs_down = frozenset(thumbs_down)
        self.params = params or engine.params
        self.relaxed = relaxed
        self._weights_by_idx = dict(weights)
        self._layouts: dict[int, DimensionLayout] = {}

    # -- raw ingredients ----------------------------------------------------

    @cached_property
    def neighborhood(self) -> UserNeighborhood:
        return self.engine.neighborhood(self.user_id)

    @property
    def degrees(self) -> np.ndarray:
        return self.neighborhood.degrees

    @cached_property
    def weight_array(self) -> np.ndarray:
        w = np.ones(self.engine.dataset.n_movies)
        for idx, value in self._weights_by_idx.items():
            w[idx] = value
        return w

    @cached_property
    def groups(self) -> MovieGroups:
        idx = self.engine.user_idx(self.user_id)
        if idx is None:
            n = self.engine.dataset.n_movies
            raw_row = np.zeros(n)
            mask_row = np.zeros(n, dtype=bool)
        else:
            raw_row = self.engine.raw[idx]
            mask_row = self.engine.mask[idx]
        return partition_groups(
            raw_row,
            mask_row,
            self.degrees,
            self.thumbs_up,
            self.thumbs_down,
            self.params.tau_plus,
            self.params.tau_minus,
            self.params.tau_r,
        )

    def layout(self, dim: int) -> DimensionLayout:
        if dim not in self._layouts:
            self._layouts[dim] = layout_dimension(
                dim,
                self.groups,
                self.engine.projections(dim),
                self.params.rho,
                boundary=self.engine.typicality_boundary(dim),
                extent=self.engine.extent(dim),
            )
        return self._layouts[dim]

    # -- scores and selection -------------------------------------------------

    @cached_property
    def suitability_scores(self) -> list[float]:
        """Per-dimension visualization suitability (before feedback)."""
        p = self.params
        return [
            score_dimension(self.layout(d), p.w_plus, p.w_o, p.w_theta)
            for d in range(self.engine.space.k)
        ]

    @cached_property
    def adjusted_scores(self) -> list[float]:
        """Per-dimension suitability adjusted by thumb feedback."""
        return [
            interactive_score(
                self.suitability_scores[d],
                self.layout(d),
                self.engine.projections(d),
                self.thumbs_up,
                self.thumbs_down,
                self.degrees,
                self.params.w_int,
            )
            for d in range(self.engine.space.k)
        ]

    @cached_property
    def selected_dimensions(self) -> list[int]:
        p = self.params
        return select_dimensions(
            [self.layout(d) for d in range(self.engine.space.k)],
            self.suitability_scores,
            self.engine.space.movie_features,
            self.neighborhood.candidates,
            self.weight_array,
            self.thumbs_up,
            self.thumbs_down,
            self.degrees,
            p.tau_v,
            p.tau_s,
            p.max_dims,
            p.w_int,
        )

    def best_dimension(self) -> int:
        scores = self.suitability_scores
        return int(np.argmax(scores)) if scores else 0

    def relax(self) -> "UserView":
        """One-shot threshold relaxation used when the recommendable pool
        runs dry during story generation."""
        relaxed_params = self.params.with_overrides(
            tau_plus=self.params.tau_plus - 1.0,
            tau_r=self.params.tau_r - 0.1,
        )
        return UserView(
            self.engine,
            self.user_id,
            self.thumbs_up,
            self.thumbs_down,
            self._weights_by_idx,
            relaxed_params,
            relaxed=True,
        )


def validate_model(engine: Engine, params: EngineParams | None = None) -> ValidationReport:
    """Per-user degree-mass statistics on each user's best dimension.

    For every user: find the top-suitability dimension, classify its
    like/dislike arrangement, and sum recommendation degrees of
    recommendable movies falling in the like and dislike ranges (also with
    the overlap removed). Cross-user averages and the Pearson correlation
    of the paired sums summarize how well the geometry concentrates
    recommendable mass in the like region.
    """
    params = params or engine.params
    rows: list[ValidationRow] = []
    case_counts: dict[int, int] = {}
    t0 = time.monotonic()
    for record in engine.dataset.users:
        view = engine.view(record.user_id, params=params)
        scores = view.suitability_scores
        best = int(np.argmax(scores)) if scores else 0
        layout = view.layout(best)
        case = classify_layout(layout)
        sums = region_degree_sums(
            layout, engine.projections(best), view.groups, view.degrees
        )
        rows.append(
            ValidationRow(
                user_id=record.user_id,
                best_dim=best if scores[best] > 0.0 else -1,
                case=case,
                sum_like=sums[0],
                sum_dislike=sums[1],
                sum_like_excl=sums[2],
                sum_dislike_excl=sums[3],
            )
        )
        case_counts[case] = case_counts.get(case, 0) + 1

    likes = np.array([r.sum_like for r in rows])
    dislikes = np.array([r.sum_dislike for r in rows])
    likes_excl = np.array([r.sum_like_excl for r in rows])
    dislikes_excl = np.array([r.sum_dislike_excl for r in rows])
    report = ValidationReport(
        rows=rows,
        avg_like=float(likes.mean()) if rows else 0.0,
        avg_dislike=float(dislikes.mean()) if rows else 0.0,
        avg_like_excl=float(likes_excl.mean()) if rows else 0.0,
        avg_dislike_excl=float(dislikes_excl.mean()) if rows else 0.0,
        pearson=_pearson(likes, dislikes),
        pearson_excl=_pearson(likes_excl, dislikes_excl),
        case_counts=case_counts,
    )
    logger.info("validated %d users in %.2fs", len(rows), time.monotonic() - t0)
    return report
