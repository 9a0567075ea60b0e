"""Semantic-zone geometry over latent dimensions.

Partitions each user's movies into five groups, lays out per-dimension
interval geometry (like/dislike ranges, familiar/diverse zones, the
typicality boundary), scores dimensions for visualization suitability,
dedups near-identical dimensions, and computes the model-validation
statistics across all users.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise ValueError(f"interval with hi < lo: [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def intersect(self, other: "Interval | None") -> "Interval | None":
        if other is None:
            return None
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def hull(self, other: "Interval | None") -> "Interval":
        if other is None:
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    @staticmethod
    def of(points: np.ndarray) -> "Interval | None":
        if points.size == 0:
            return None
        return Interval(float(points.min()), float(points.max()))

    def as_pair(self) -> tuple[float, float]:
        return (self.lo, self.hi)


def interval_length(iv: Interval | None) -> float:
    return iv.length if iv is not None else 0.0


def in_interval(iv: Interval | None, x: float) -> bool:
    return iv is not None and iv.contains(x)


GROUP_LIKE = "like"
GROUP_DISLIKE = "dislike"
GROUP_NEUTRAL = "neutral"
GROUP_RECOMMENDABLE = "recommendable"
GROUP_NOT_RECOMMENDABLE = "not_recommendable"

GROUP_NAMES = (
    GROUP_LIKE,
    GROUP_DISLIKE,
    GROUP_NEUTRAL,
    GROUP_RECOMMENDABLE,
    GROUP_NOT_RECOMMENDABLE,
)


@dataclass(frozen=True)
class MovieGroups:
    """Per-user partition of every movie into exactly one of five groups.

    Index arrays hold dense movie indexes. `history` is the union of rated
    and thumbed movies and anchors the familiar zone.
    """

    like: np.ndarray
    dislike: np.ndarray
    neutral: np.ndarray
    recommendable: np.ndarray
    not_recommendable: np.ndarray
    history: np.ndarray
    tau_plus: float
    tau_minus: float
    tau_r: float

    def group_of(self, movie_idx: int) -> str:
        for name, members in (
            (GROUP_LIKE, self.like),
            (GROUP_DISLIKE, self.dislike),
            (GROUP_NEUTRAL, self.neutral),
            (GROUP_RECOMMENDABLE, self.recommendable),
        ):
            if movie_idx in members:
                return name
        return GROUP_NOT_RECOMMENDABLE


def partition_groups(
    raw_row: np.ndarray,
    mask_row: np.ndarray,
    degrees: np.ndarray,
    thumbs_up: set[int] | frozenset[int],
    thumbs_down: set[int] | frozenset[int],
    tau_plus: float,
    tau_minus: float,
    tau_r: float,
) -> MovieGroups:
    """Split all movies into like/dislike/neutral/recommendable/not.

    Thumbed-down movies are always forced out of the recommendable pool;
    thumbed-up movies join the like group regardless of rating history.
    """
    n = raw_row.shape[0]
    up = np.zeros(n, dtype=bool)
    down = np.zeros(n, dtype=bool)
    for i in thumbs_up:
        up[i] = True
    for i in thumbs_down:
        down[i] = True
    up &= ~down  # latest-wins exclusivity is enforced upstream; belt and braces

    rated = mask_row & ~up & ~down
    like_rated = rated & (raw_row >= tau_plus)
    dislike = rated & (raw_row > 0) & (raw_row < tau_minus)
    neutral = rated & (raw_row >= tau_minus) & (raw_row < tau_plus)

    like = like_rated | up
    degree_ok = ~np.isnan(degrees) & (degrees >= tau_r)
    recommendable = (~mask_row) & ~up & ~down & degree_ok
    not_recommendable = ~like & ~dislike & ~neutral & ~recommendable

    if like_rated.sum() == 0 and not up.any():
        logger.debug("empty like group at tau_plus=%s", tau_plus)

    return MovieGroups(
        like=np.flatnonzero(like),
        dislike=np.flatnonzero(dislike),
        neutral=np.flatnonzero(neutral),
        recommendable=np.flatnonzero(recommendable),
        not_recommendable=np.flatnonzero(not_recommendable),
        history=np.flatnonzero(mask_row | up | down),
        tau_plus=tau_plus,
        tau_minus=tau_minus,
        tau_r=tau_r,
    )


@dataclass(frozen=True)
class DimensionLayout:
    """Interval geometry of one latent dimension for one user state."""

    dim: int
    extent: Interval
    like: Interval | None  # hull of like-group projections
    dislike: Interval | None
    overlap: Interval | None  # like ∩ dislike
    combined: Interval | None  # hull(like ∪ dislike)
    familiar: Interval | None  # hull of all history projections
    diverse: tuple[Interval, ...]  # extent minus familiar, up to 2 pieces
    typicality_boundary: float  # |projection| above this is "typical"
    recommendable_spread: float  # std of recommendable projections inside `like`
    like_center: float | None  # midpoint of `like`

    @property
    def degenerate(self) -> bool:
        return self.like is None

    def is_familiar(self, x: float) -> bool:
        return in_interval(self.familiar, x)

    def is_typical(self, x: float) -> bool:
        return abs(x) > self.typicality_boundary


def layout_dimension(
    dim: int,
    groups: MovieGroups,
    projections: np.ndarray,
    rho: float,
    *,
    boundary: float | None = None,
    extent: Interval | None = None,
) -> DimensionLayout:
    """Compute all interval fields of one dimension.

    `boundary` and `extent` are rating-independent and may be passed in
    precomputed; they are derived from `projections` otherwise.
    """
    if extent is None:
        extent = Interval.of(projections)
    if extent is None:
        raise ValueError("dimension has no movies")
    like = Interval.of(projections[groups.like])
    dislike = Interval.of(projections[groups.dislike])
    overlap = like.intersect(dislike) if like is not None else None
    combined = like.hull(dislike) if like is not None else dislike
    familiar = Interval.of(projections[groups.history])

    diverse: list[Interval] = []
    if familiar is None:
        diverse.append(extent)
    else:
        if familiar.lo > extent.lo:
            diverse.append(Interval(extent.lo, familiar.lo))
        if familiar.hi < extent.hi:
            diverse.append(Interval(familiar.hi, extent.hi))

    if boundary is None:
        boundary = float(np.quantile(np.abs(projections), rho))

    spread = 0.0
    if like is not None and groups.recommendable.size > 0:
        rec_proj = projections[groups.recommendable]
        inside = rec_proj[(rec_proj >= like.lo) & (rec_proj <= like.hi)]
        if inside.size > 0:
            spread = float(np.std(inside))

    return DimensionLayout(
        dim=dim,
        extent=extent,
        like=like,
        dislike=dislike,
        overlap=overlap,
        combined=combined,
        familiar=familiar,
        diverse=tuple(diverse),
        typicality_boundary=boundary,
        recommendable_spread=spread,
        like_center=(like.lo + like.hi) / 2.0 if like is not None else None,
    )


def score_dimension(
    layout: DimensionLayout,
    w_plus: float,
    w_o: float,
    w_theta: float,
) -> float:
    """Visualization-suitability score of a dimension.

    Rewards a wide like range relative to the combined range, penalizes
    like/dislike overlap heavily, and prefers recommendable movies spread
    across the like range. Degenerate geometry scores 0.
    """
    if layout.degenerate:
        return 0.0
    len_like = interval_length(layout.like)
    len_dislike = interval_length(layout.dislike)
    len_overlap = interval_length(layout.overlap)
    len_combined = interval_length(layout.combined)
    if len_combined == 0.0 or len_like == 0.0:
        return 0.0
    if layout.recommendable_spread == 0.0:
        # A point mass of recommendable movies cannot be laid out meaningfully.
        return 0.0
    if layout.overlap is not None and len_dislike == 0.0:
        # A point dislike range inside the like range is full containment.
        return 0.0

    share = len_like / len_combined
    sep_like = 1.0 - (len_overlap / len_like)
    sep_dislike = 1.0 - (len_overlap / len_dislike) if len_dislike > 0.0 else 1.0
    spread = len_like / layout.recommendable_spread
    if sep_like <= 0.0 or sep_dislike <= 0.0:
        return 0.0
    return (
        share**w_plus
        * sep_like**w_o
        * sep_dislike**w_o
        * spread**w_theta
    )


def classify_layout(layout: DimensionLayout) -> int:
    """Like/dislike arrangement case: 1 disjoint, 2 partial overlap,
    3 like inside dislike, 4 dislike inside like, 0 degenerate."""
    if layout.degenerate:
        return 0
    len_like = interval_length(layout.like)
    len_dislike = interval_length(layout.dislike)
    len_overlap = interval_length(layout.overlap)
    if layout.overlap is None:
        return 1
    if math.isclose(len_overlap, len_like, rel_tol=1e-12, abs_tol=0.0) or len_overlap == len_like:
        return 3
    if math.isclose(len_overlap, len_dislike, rel_tol=1e-12, abs_tol=0.0) or len_overlap == len_dislike:
        return 4
    if len_overlap == 0.0:
        return 1
    return 2


def _member_mask(iv: Interval | None, xs: np.ndarray) -> np.ndarray:
    if iv is None:
        return np.zeros(xs.shape, dtype=bool)
    return (xs >= iv.lo) & (xs <= iv.hi)


def dimension_disagreement(
    layout_p: DimensionLayout,
    layout_q: DimensionLayout,
    projections_p: np.ndarray,
    projections_q: np.ndarray,
    candidates: np.ndarray,
    weights: np.ndarray,
) -> float:
    """Weighted count of candidate movies whose like/dislike-range
    memberships differ between two dimensions. Symmetric; 0 for p == q."""
    if candidates.size == 0:
        return 0.0
    xp = projections_p[candidates]
    xq = projections_q[candidates]
    w = weights[candidates]
    xor_like = _member_mask(layout_p.like, xp) != _member_mask(layout_q.like, xq)
    xor_dislike = _member_mask(layout_p.dislike, xp) != _member_mask(layout_q.dislike, xq)
    return float(np.sum(w * (xor_like.astype(np.float64) + xor_dislike.astype(np.float64))))


def normalized_disagreement(
    layout_p: DimensionLayout,
    layout_q: DimensionLayout,
    projections_p: np.ndarray,
    projections_q: np.ndarray,
    candidates: np.ndarray,
    weights: np.ndarray,
) -> float:
    """Disagreement scaled into [0, 1] by its maximum attainable value."""
    if candidates.size == 0:
        return 0.0
    raw = dimension_disagreement(
        layout_p, layout_q, projections_p, projections_q, candidates, weights
    )
    ceiling = 2.0 * float(weights[candidates].sum())
    return raw / ceiling if ceiling > 0.0 else 0.0


def interactive_score(
    base_score: float,
    layout: DimensionLayout,
    projections: np.ndarray,
    thumbs_up: set[int] | frozenset[int],
    thumbs_down: set[int] | frozenset[int],
    degrees: np.ndarray,
    w_int: float,
) -> float:
    """Suitability adjusted by thumb feedback.

    Rewards dimensions where thumbed-up movies fall in the like range (and
    thumbed-down in the dislike range); penalizes the crossed placements.
    """
    aligned = 0.0
    crossed = 0.0
    for i in thumbs_up:
        b = degrees[i]
        if np.isnan(b):
            continue
        x = float(projections[i])
        if in_interval(layout.like, x):
            aligned += float(b)
        if in_interval(layout.dislike, x):
            crossed += float(b)
    for i in thumbs_down:
        b = degrees[i]
        if np.isnan(b):
            continue
        x = float(projections[i])
        if in_interval(layout.dislike, x):
            aligned += float(b)
        if in_interval(layout.like, x):
            crossed += float(b)
    return base_score + w_int * (aligned - crossed)


def select_dimensions(
    layouts: list[DimensionLayout],
    scores: list[float],
    movie_features: np.ndarray,
    candidates: np.ndarray,
    weights: np.ndarray,
    thumbs_up: set[int] | frozenset[int],
    thumbs_down: set[int] | frozenset[int],
    degrees: np.ndarray,
    tau_v: float,
    tau_s: float,
    max_dims: int,
    w_int: float,
) -> list[int]:
    """Ordered list of visualization dimensions.

    Filters by the suitability floor, removes near-duplicate dimensions
    keeping the better-scoring one, then orders by the feedback-adjusted
    score. Falls back to the raw top scores when no dimension clears the
    floor (e.g. a user with no usable geometry anywhere).
    """
    k = len(layouts)
    passing = [p for p in range(k) if scores[p] > tau_v]

    if not passing:
        logger.warning(
            "no dimension above suitability threshold %.4g; falling back to top %d",
            tau_v,
            max_dims,
        )
        order = sorted(range(k), key=lambda p: (-scores[p], p))
        return order[:max_dims]

    # Dedup: greedy scan in score order keeps the higher-scoring member of
    # each similar pair, independent of pair enumeration order.
    ordered = sorted(passing, key=lambda p: (-scores[p], p))
    kept: list[int] = []
    for p in ordered:
        similar_to_kept = False
        for q in kept:
            nd = normalized_disagreement(
                layouts[p],
                layouts[q],
                movie_features[:, p],
                movie_features[:, q],
                candidates,
                weights,
            )
            if nd < tau_s:
                similar_to_kept = True
                break
        if not similar_to_kept:
            kept.append(p)

    adjusted = {
        p: interactive_score(
            scores[p],
            layouts[p],
            movie_features[:, p],
            thumbs_up,
            thumbs_down,
            degrees,
            w_int,
        )
        for p in kept
    }
    final = sorted(kept, key=lambda p: (-adjusted[p], p))
    return final[:max_dims]


@dataclass(frozen=True)
class ValidationRow:
    user_id: int
    best_dim: int
    case: int
    sum_like: float
    sum_dislike: float
    sum_like_excl: float  # like range minus the overlap
    sum_dislike_excl: float


@dataclass(frozen=True)
class ValidationReport:
    rows: list[ValidationRow]
    avg_like: float
    avg_dislike: float
    avg_like_excl: float
    avg_dislike_excl: float
    pearson: float  # NaN when undefined
    pearson_excl: float
    case_counts: dict[int, int]

    CSV_COLUMNS = (
        "user_id",
        "best_dim",
        "case",
        "sum_R+",
        "sum_R-",
        "sum_R+_minus_Ro",
        "sum_R-_minus_Ro",
    )

    def write_csv(self, path: str | Path) -> None:
        path = Path(path)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.CSV_COLUMNS)
            for row in self.rows:
                writer.writerow(
                    [
                        row.user_id,
                        row.best_dim,
                        row.case,
                        f"{row.sum_like:.6f}",
                        f"{row.sum_dislike:.6f}",
                        f"{row.sum_like_excl:.6f}",
                        f"{row.sum_dislike_excl:.6f}",
                    ]
                )

    def summary_text(self) -> str:
        frac_good = self.case_share((1, 2))
        lines = [
            "model validation summary",
            f"  users:                      {len(self.rows)}",
            f"  avg degree sum, like range: {self.avg_like:.1f}",
            f"  avg degree sum, dislike:    {self.avg_dislike:.1f}",
            f"  pearson (like, dislike):    {self.pearson:.3f}",
            f"  avg sum, like w/o overlap:  {self.avg_like_excl:.1f}",
            f"  avg sum, dislike w/o overlap: {self.avg_dislike_excl:.1f}",
            f"  pearson w/o overlap:        {self.pearson_excl:.3f}",
            f"  best-dim case counts:       {dict(sorted(self.case_counts.items()))}",
            f"  share of case 1/2:          {frac_good:.3f}",
        ]
        return "\n".join(lines)

    def case_share(self, cases: tuple[int, ...]) -> float:
        if not self.rows:
            return 0.0
        good = sum(self.case_counts.get(c, 0) for c in cases)
        return good / len(self.rows)


def layout_to_dict(layout: DimensionLayout) -> dict:
    """JSON-ready zone intervals of one dimension (rounded for transport)."""

    def pair(iv: Interval | None) -> list[float] | None:
        return [round(iv.lo, 6), round(iv.hi, 6)] if iv is not None else None

    return {
        "extent": pair(layout.extent),
        "like": pair(layout.like),
        "dislike": pair(layout.dislike),
        "overlap": pair(layout.overlap),
        "combined": pair(layout.combined),
        "familiar": pair(layout.familiar),
        "diverse": [pair(iv) for iv in layout.diverse],
        "typicality_boundary": round(layout.typicality_boundary, 6),
        "like_center": round(layout.like_center, 6) if layout.like_center is not None else None,
    }


def _pearson(xs: np.ndarray, ys: np.ndarray) -> float:
    if xs.size < 2:
        return float("nan")
    if float(np.std(xs)) == 0.0 or float(np.std(ys)) == 0.0:
        return float("nan")
    return float(np.corrcoef(xs, ys)[0, 1])


def region_degree_sums(
    layout: DimensionLayout,
    projections: np.ndarray,
    groups: MovieGroups,
    degrees: np.ndarray,
) -> tuple[float, float, float, float]:
    """Degree mass of recommendable movies inside the like and dislike
    ranges, with and without the overlapped region."""
    rec = groups.recommendable
    if rec.size == 0:
        return 0.0, 0.0, 0.0, 0.0
    b = degrees[rec]
    x = projections[rec]
    ok = ~np.isnan(b)
    b = b[ok]
    x = x[ok]
    in_like = _member_mask(layout.like, x)
    in_dislike = _member_mask(layout.dislike, x)
    in_over = _member_mask(layout.overlap, x)
    s_like = float(b[in_like].sum())
    s_dislike = float(b[in_dislike].sum())
    s_like_excl = float(b[in_like & ~in_over].sum())
    s_dislike_excl = float(b[in_dislike & ~in_over].sum())
    return s_like, s_dislike, s_like_excl, s_dislike_excl
