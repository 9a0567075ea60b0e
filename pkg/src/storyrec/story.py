"""Recommendation story generation.

A story is an ordered set of recommendable movies on one latent dimension,
traversing two semantic zones (familiar/diverse or typical/untypical)
according to the user's preferences, with roles, anchor examples, and
three detail levels attached to every event.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .engine import EngineError, UserView
from .semantic import DimensionLayout, Interval, layout_to_dict

logger = logging.getLogger(__name__)


class PoolExhaustedError(EngineError):
    """No recommendable movies left even after threshold relaxation."""


class _DimensionUnusable(Exception):
    """Internal: this dimension cannot host a story in the current state."""


class StructureKind(str, Enum):
    FAMILIAR_TO_DIVERSE = "familiar_to_diverse"
    DIVERSE_TO_FAMILIAR = "diverse_to_familiar"
    TYPICAL_TO_UNTYPICAL = "typical_to_untypical"
    UNTYPICAL_TO_TYPICAL = "untypical_to_typical"

    @property
    def axis(self) -> str:
        if self in (StructureKind.FAMILIAR_TO_DIVERSE, StructureKind.DIVERSE_TO_FAMILIAR):
            return "familiarity"
        return "typicality"


_STARTING_RULES = {
    StructureKind.FAMILIAR_TO_DIVERSE: "start_familiar",
    StructureKind.DIVERSE_TO_FAMILIAR: "start_diverse_near_likes",
    StructureKind.TYPICAL_TO_UNTYPICAL: "start_typical_near_likes",
    StructureKind.UNTYPICAL_TO_TYPICAL: "start_untypical",
}


@dataclass(frozen=True)
class Zone:
    """One semantic zone on a dimension; membership respects the open/closed
    boundary conventions (typical is strict, the familiar hull is closed)."""

    name: str  # familiar | diverse | typical | untypical
    interval: Interval

    def member(self, layout: DimensionLayout, x: float) -> bool:
        if self.name == "familiar":
            return layout.is_familiar(x)
        if self.name == "diverse":
            return self.interval.contains(x) and not layout.is_familiar(x)
        if self.name == "typical":
            return self.interval.contains(x) and layout.is_typical(x)
        return self.interval.contains(x) and not layout.is_typical(x)


@dataclass(frozen=True)
class NarrativeStructure:
    kind: StructureKind
    zones: tuple[Zone, Zone]  # traversal order
    ascending: bool
    starting_rule: str


@dataclass(frozen=True)
class Anchor:
    movie_id: int
    title: str
    poster_key: str
    projection: float
    user_rating: int


@dataclass(frozen=True)
class StoryEvent:
    movie_id: int
    title: str
    projection: float
    degree: float
    roles: tuple[str, ...]
    zone: str
    similar_liked: tuple[int, ...]  # movie ids, nearest liked first
    level1: dict
    level2: dict
    level3: dict


@dataclass(frozen=True)
class Story:
    dimension: int
    structure: StructureKind
    starting_rule: str
    ascending: bool
    zone_counts: tuple[int, int]
    zone_intervals: dict
    anchor_left: Anchor | None
    anchor_right: Anchor | None
    events: tuple[StoryEvent, ...]
    seed: tuple[int, int]
    relaxed: bool
    rebalanced: bool

    def to_dict(self) -> dict:
        """JSON-ready form; projections rounded to 6 decimals in transport."""

        def r6(x: float) -> float:
            return round(float(x), 6)

        def anchor_dict(a: Anchor | None) -> dict | None:
            if a is None:
                return None
            return {
                "movie_id": a.movie_id,
                "title": a.title,
                "poster_key": a.poster_key,
                "projection": r6(a.projection),
                "user_rating": a.user_rating,
            }

        return {
            "dimension": self.dimension,
            "structure": self.structure.value,
            "starting_rule": self.starting_rule,
            "ascending": self.ascending,
            "zone_counts": list(self.zone_counts),
            "zones": self.zone_intervals,
            "anchors": {
                "left": anchor_dict(self.anchor_left),
                "right": anchor_dict(self.anchor_right),
            },
            "events": [
                {
                    "movie_id": e.movie_id,
                    "title": e.title,
                    "projection": r6(e.projection),
                    "degree": r6(e.degree),
                    "roles": list(e.roles),
                    "zone": e.zone,
                    "similar_liked": list(e.similar_liked),
                    "level1": e.level1,
                    "level2": e.level2,
                    "level3": e.level3,
                }
                for e in self.events
            ],
            "seed": list(self.seed),
            "relaxed": self.relaxed,
            "rebalanced": self.rebalanced,
        }


def choose_structure(f: float, t: float, rng: np.random.Generator) -> StructureKind:
    """Pick uniformly between the familiarity- and typicality-axis structures
    implied by the preference values."""
    _check_pref(f, "f")
    _check_pref(t, "t")
    fam = StructureKind.FAMILIAR_TO_DIVERSE if f >= 0.5 else StructureKind.DIVERSE_TO_FAMILIAR
    typ = StructureKind.TYPICAL_TO_UNTYPICAL if t >= 0.5 else StructureKind.UNTYPICAL_TO_TYPICAL
    return (fam, typ)[int(rng.integers(0, 2))]


def candidate_structures(f: float, t: float) -> tuple[StructureKind, StructureKind]:
    _check_pref(f, "f")
    _check_pref(t, "t")
    fam = StructureKind.FAMILIAR_TO_DIVERSE if f >= 0.5 else StructureKind.DIVERSE_TO_FAMILIAR
    typ = StructureKind.TYPICAL_TO_UNTYPICAL if t >= 0.5 else StructureKind.UNTYPICAL_TO_TYPICAL
    return fam, typ


def _check_pref(value: float, name: str) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")


def sample_counts(f: float, t: float, total: int, kind: StructureKind) -> tuple[int, int]:
    """Per-zone sampling counts in the structure's traversal order.

    The typicality axis draws ceil(t * T) from the typical zone; the
    familiarity axis draws ceil(f * T) from the familiar zone; the rest
    comes from the opposite zone.
    """
    if total < 1:
        raise ValueError(f"story length must be >= 1, got {total}")
    s_typical = math.ceil(t * total)
    s_untypical = total - s_typical
    s_familiar = math.ceil(f * total)
    s_diverse = total - s_familiar
    if kind is StructureKind.TYPICAL_TO_UNTYPICAL:
        return s_typical, s_untypical
    if kind is StructureKind.UNTYPICAL_TO_TYPICAL:
        return s_untypical, s_typical
    if kind is StructureKind.FAMILIAR_TO_DIVERSE:
        return s_familiar, s_diverse
    return s_diverse, s_familiar


def _interval_distance(iv: Interval, x: float) -> float:
    if iv.contains(x):
        return 0.0
    return min(abs(x - iv.lo), abs(x - iv.hi))


def _diverse_near_likes(layout: DimensionLayout) -> Interval | None:
    """The diverse zone closest to the like group (familiar center when the
    user has no liked movies)."""
    if not layout.diverse:
        return None
    if layout.like_center is not None:
        center = layout.like_center
    elif layout.familiar is not None:
        center = (layout.familiar.lo + layout.familiar.hi) / 2.0
    else:
        center = 0.0
    return min(layout.diverse, key=lambda iv: (_interval_distance(iv, center), iv.lo))


def _typical_sides(layout: DimensionLayout) -> list[Interval]:
    theta = layout.typicality_boundary
    ext = layout.extent
    sides = []
    if ext.lo < -theta:
        sides.append(Interval(ext.lo, -theta))
    if ext.hi > theta:
        sides.append(Interval(theta, ext.hi))
    return sides


def _typical_near_likes(layout: DimensionLayout, rec_proj: np.ndarray) -> Interval | None:
    sides = _typical_sides(layout)
    if not sides:
        return None
    if len(sides) == 1:
        return sides[0]

    def pool_size(iv: Interval) -> int:
        theta = layout.typicality_boundary
        return int(np.sum((rec_proj >= iv.lo) & (rec_proj <= iv.hi) & (np.abs(rec_proj) > theta)))

    if layout.like_center is not None:
        c = layout.like_center
        dl, dr = _interval_distance(sides[0], c), _interval_distance(sides[1], c)
        if dl != dr:
            return sides[0] if dl < dr else sides[1]
    # Tie (or no like group): prefer the side with more candidates, then right.
    if pool_size(sides[0]) > pool_size(sides[1]):
        return sides[0]
    return sides[1]


def _untypical_zone(layout: DimensionLayout) -> Interval | None:
    theta = layout.typicality_boundary
    ext = layout.extent
    lo = max(ext.lo, -theta)
    hi = min(ext.hi, theta)
    return Interval(lo, hi) if lo <= hi else None


def build_structure(
    kind: StructureKind,
    layout: DimensionLayout,
    rec_proj: np.ndarray,
) -> NarrativeStructure | None:
    """Realize a structure's two zones on this dimension; None if the axis
    has no usable geometry here."""
    if kind.axis == "familiarity":
        if layout.familiar is None:
            return None
        familiar = Zone("familiar", layout.familiar)
        diverse_iv = _diverse_near_likes(layout)
        diverse = Zone("diverse", diverse_iv) if diverse_iv is not None else None
        if kind is StructureKind.FAMILIAR_TO_DIVERSE:
            zones = (familiar, diverse)
        else:
            zones = (diverse, familiar)
        if zones[0] is None or zones[1] is None:
            # A missing diverse zone is tolerable only when no quota lands on it;
            # represent it as an empty stand-in at the familiar edge.
            edge = layout.familiar.hi
            stub = Zone("diverse", Interval(edge, edge))
            zones = tuple(stub if z is None else z for z in zones)
    else:
        untypical_iv = _untypical_zone(layout)
        typical_iv = _typical_near_likes(layout, rec_proj)
        if untypical_iv is None and typical_iv is None:
            return None
        if untypical_iv is None:
            untypical_iv = Interval(typical_iv.lo, typical_iv.lo)
        if typical_iv is None:
            typical_iv = Interval(untypical_iv.hi, untypical_iv.hi)
        typical = Zone("typical", typical_iv)
        untypical = Zone("untypical", untypical_iv)
        if kind is StructureKind.TYPICAL_TO_UNTYPICAL:
            zones = (typical, untypical)
        else:
            zones = (untypical, typical)

    mid_a = (zones[0].interval.lo + zones[0].interval.hi) / 2.0
    mid_b = (zones[1].interval.lo + zones[1].interval.hi) / 2.0
    return NarrativeStructure(
        kind=kind,
        zones=zones,
        ascending=mid_a <= mid_b,
        starting_rule=_STARTING_RULES[kind],
    )


def _thumb_factor(
    proj_i: float,
    thumb_projections: list[tuple[float, bool]],
    radius: float,
    alpha_up: float,
    alpha_down: float,
) -> float:
    """Product of truncated-Gaussian boosts/penalties from thumbed movies."""
    sigma = radius / 2.0
    factor = 1.0
    for proj_q, is_up in thumb_projections:
        d = abs(proj_q - proj_i)
        if d > radius:
            continue
        g = math.exp(-(d * d) / (2.0 * sigma * sigma)) if sigma > 0.0 else 1.0
        factor *= (1.0 + alpha_up * g) if is_up else (1.0 - alpha_down * g)
    return factor


def select_movie(
    zone: Zone,
    pool: list[int],
    projections: np.ndarray,
    degrees: np.ndarray,
    thumb_projections: list[tuple[float, bool]],
    extent: Interval,
    rng: np.random.Generator,
    window_frac: float,
    influence_frac: float,
    alpha_up: float,
    alpha_down: float,
    eps_frac: float,
) -> tuple[int, float]:
    """Local-window candidate selection inside one zone.

    Picks a uniform location, then the best candidate within the window by
    degree, thumb influence, and closeness to the location; the window
    widens geometrically when empty. Returns (movie index, score).
    """
    if not pool:
        raise ValueError("select_movie called with an empty pool")
    location = float(rng.uniform(zone.interval.lo, zone.interval.hi))
    eps = max(eps_frac * extent.length, 1e-300)
    radius = influence_frac * extent.length

    distances = np.abs(projections[pool] - location)
    window = window_frac * zone.interval.length
    if window <= 0.0:
        window = eps
    while not np.any(distances <= window):
        window *= 2.0

    best_idx = -1
    best_score = -math.inf
    for j, i in enumerate(pool):
        if distances[j] > window:
            continue
        score = (
            float(degrees[i])
            * _thumb_factor(float(projections[i]), thumb_projections, radius, alpha_up, alpha_down)
            / max(float(distances[j]), eps)
        )
        if score > best_score:
            best_score = score
            best_idx = i
    return best_idx, best_score


def admit_candidate(value: float, chosen_values: list[float], target: float) -> bool:
    """Accept the candidate iff it pulls the running mean of the orthogonal
    attribute strictly closer to the target. An empty set always accepts."""
    if not chosen_values:
        return True
    old_mean = sum(chosen_values) / len(chosen_values)
    new_mean = (sum(chosen_values) + value) / (len(chosen_values) + 1)
    return abs(new_mean - target) < abs(old_mean - target)


def normalized_typicality(x: float, extent: Interval) -> float:
    scale = max(abs(extent.lo), abs(extent.hi))
    return abs(x) / scale if scale > 0.0 else 0.0


def normalized_familiarity(x: float, layout: DimensionLayout) -> float | None:
    """1 at the like-group center, falling to 0 at the farthest extent edge;
    None when the user has no like group on this dimension."""
    c = layout.like_center
    if c is None:
        return None
    h = max(abs(layout.extent.lo - c), abs(layout.extent.hi - c))
    if h == 0.0:
        return 1.0
    return 1.0 - abs(x - c) / h


def anchor_examples(
    view: UserView, dim: int
) -> tuple[int, int] | None:
    """Indexes of the leftmost- and rightmost-projected rated movies.

    Ties break toward the higher user rating, then the more-rated movie,
    then the lower index. None when fewer than two distinct projections
    exist (the dimension should be skipped, or anchors omitted for
    zero-history users).
    """
    engine = view.engine
    idx = engine.user_idx(view.user_id)
    if idx is None:
        return None
    rated = np.flatnonzero(engine.mask[idx])
    if rated.size < 2:
        return None
    proj = engine.projections(dim)[rated]
    if float(proj.min()) == float(proj.max()):
        return None

    def pick(extreme: float) -> int:
        at = rated[proj == extreme]
        ranked = sorted(
            at,
            key=lambda i: (-engine.raw[idx, i], -engine.popularity[i], i),
        )
        return int(ranked[0])

    return pick(float(proj.min())), pick(float(proj.max()))


def assign_roles(x: float, layout: DimensionLayout) -> tuple[str, ...]:
    """Semantic roles from zone membership; both axes always contribute."""
    roles = [
        "familiar" if layout.is_familiar(x) else "diverse",
        "typical" if layout.is_typical(x) else "untypical",
    ]
    if layout.like is not None and layout.like.contains(x):
        roles.append("liked_similar")
    return tuple(roles)


def similar_liked(view: UserView, dim: int, movie_idx: int, limit: int = 4) -> list[int]:
    """Up to `limit` like-group movies nearest on the dimension."""
    like = view.groups.like
    if like.size == 0:
        return []
    proj = view.engine.projections(dim)
    x = float(proj[movie_idx])
    ranked = sorted(like, key=lambda i: (abs(float(proj[i]) - x), i))
    return [int(i) for i in ranked[:limit]]


def _zone_pool(
    zone: Zone,
    layout: DimensionLayout,
    recommendable: np.ndarray,
    projections: np.ndarray,
    orthogonal_filter: str | None,
) -> list[int]:
    if recommendable.size == 0:
        return []
    x = projections[recommendable]
    iv = zone.interval
    inside = (x >= iv.lo) & (x <= iv.hi)
    if layout.familiar is not None:
        fam = (x >= layout.familiar.lo) & (x <= layout.familiar.hi)
    else:
        fam = np.zeros(x.shape, dtype=bool)
    typ = np.abs(x) > layout.typicality_boundary

    if zone.name == "familiar":
        selected = fam
    elif zone.name == "diverse":
        selected = inside & ~fam
    elif zone.name == "typical":
        selected = inside & typ
    else:
        selected = inside & ~typ

    if orthogonal_filter == "familiar":
        selected &= fam
    elif orthogonal_filter == "diverse":
        selected &= ~fam
    elif orthogonal_filter == "typical":
        selected &= typ
    elif orthogonal_filter == "untypical":
        selected &= ~typ
    return [int(i) for i in recommendable[selected]]


def _orthogonal_filter(kind: StructureKind, f: float, t: float) -> str | None:
    """Hard constraint from the orthogonal preference at its extremes, so a
    maxed-out slider binds regardless of which axis the structure runs on."""
    if kind.axis == "typicality":
        if f == 1.0:
            return "familiar"
        if f == 0.0:
            return "diverse"
    else:
        if t == 1.0:
            return "typical"
        if t == 0.0:
            return "untypical"
    return None


def _select_events(
    view: UserView,
    dim: int,
    structure: NarrativeStructure,
    counts: tuple[int, int],
    f: float,
    t: float,
    rng: np.random.Generator,
    strict_zones: bool,
) -> tuple[list[int], tuple[int, int], bool]:
    """Run the per-zone sampling loop; returns (chosen indexes, realized
    per-zone counts, whether quota had to be rebalanced).

    With `strict_zones` the dimension is rejected outright when any zone
    holds fewer candidates than its quota, so the caller can prefer a
    dimension where the narrative structure is realizable as sampled.
    """
    engine = view.engine
    params = view.params
    layout = view.layout(dim)
    projections = engine.projections(dim)
    degrees = view.degrees
    extent = layout.extent

    ortho = _orthogonal_filter(structure.kind, f, t)
    pools = [
        _zone_pool(zone, layout, view.groups.recommendable, projections, ortho)
        for zone in structure.zones
    ]
    quotas = list(counts)
    total = sum(quotas)
    if len(pools[0]) + len(pools[1]) < total:
        raise _DimensionUnusable(f"dimension {dim}: pool smaller than story length")
    if strict_zones and (len(pools[0]) < quotas[0] or len(pools[1]) < quotas[1]):
        raise _DimensionUnusable(
            f"dimension {dim}: zone pools {len(pools[0])}/{len(pools[1])} "
            f"cannot cover quotas {quotas}"
        )

    rebalanced = False
    for a, b in ((0, 1), (1, 0)):
        if quotas[a] > len(pools[a]):
            shift = quotas[a] - len(pools[a])
            quotas[a] -= shift
            quotas[b] += shift
            rebalanced = True

    thumb_projections = [
        (float(projections[i]), True) for i in sorted(view.thumbs_up)
    ] + [(float(projections[i]), False) for i in sorted(view.thumbs_down)]

    if structure.kind.axis == "familiarity":
        target = t

        def attribute(x: float) -> float | None:
            return normalized_typicality(x, extent)

    else:
        target = f

        def attribute(x: float) -> float | None:
            return normalized_familiarity(x, layout)

    chosen: list[int] = []
    chosen_attrs: list[float] = []
    realized = [0, 0]

    def draw(zone_pos: int) -> bool:
        pool = pools[zone_pos]
        if not pool:
            return False
        pick = _admit_loop(
            structure.zones[zone_pos],
            pool,
            projections,
            degrees,
            thumb_projections,
            extent,
            rng,
            params,
            attribute,
            chosen_attrs,
            target,
        )
        pool.remove(pick)
        chosen.append(pick)
        attr = attribute(float(projections[pick]))
        if attr is not None:
            chosen_attrs.append(attr)
        realized[zone_pos] += 1
        return True

    for zone_pos in (0, 1):
        for _ in range(quotas[zone_pos]):
            if not draw(zone_pos):
                rebalanced = True
                break

    # Any quota lost to a dry zone shifts to whichever zone still has movies.
    while len(chosen) < total:
        if not (draw(0) or draw(1)):
            break
    return chosen, (realized[0], realized[1]), rebalanced


def _admit_loop(
    zone: Zone,
    pool: list[int],
    projections: np.ndarray,
    degrees: np.ndarray,
    thumb_projections: list[tuple[float, bool]],
    extent: Interval,
    rng: np.random.Generator,
    params,
    attribute,
    chosen_attrs: list[float],
    target: float,
) -> int:
    best_rejected = -1
    best_rejected_score = -math.inf
    for _ in range(max(1, params.max_retries)):
        pick, score = select_movie(
            zone,
            pool,
            projections,
            degrees,
            thumb_projections,
            extent,
            rng,
            params.window_frac,
            params.influence_frac,
            params.alpha_up,
            params.alpha_down,
            params.eps_frac,
        )
        attr = attribute(float(projections[pick]))
        if attr is None or admit_candidate(attr, chosen_attrs, target):
            return pick
        if score > best_rejected_score:
            best_rejected_score = score
            best_rejected = pick
    return best_rejected


def generate_story(
    view: UserView,
    f: float,
    t: float,
    length: int,
    rng: np.random.Generator,
    seed_label: tuple[int, int],
    last_dim: int | None = None,
    rotation: int = 0,
) -> Story:
    """Build the next recommendation story for a user view.

    Tries the selected dimensions starting at the rotation offset (skipping
    the immediately previous story's dimension when possible), and relaxes
    the group thresholds once before giving up.
    """
    _check_pref(f, "f")
    _check_pref(t, "t")
    dims = view.selected_dimensions
    if not dims:
        raise PoolExhaustedError("no usable latent dimension")

    offset = rotation % len(dims)
    ordered = dims[offset:] + dims[:offset]
    if len(ordered) > 1 and ordered[0] == last_dim:
        ordered = ordered[1:] + ordered[:1]

    # First prefer a dimension where every zone can fill its quota; fall
    # back to quota rebalancing on a dry zone only when none can.
    for strict_zones in (True, False):
        for dim in ordered:
            try:
                return _story_on_dimension(
                    view, dim, f, t, length, rng, seed_label, strict_zones
                )
            except _DimensionUnusable as exc:
                logger.debug("skipping dimension %d: %s", dim, exc)

    if not view.relaxed:
        logger.info(
            "recommendable pool exhausted for user %s; relaxing thresholds once",
            view.user_id,
        )
        return generate_story(
            view.relax(), f, t, length, rng, seed_label, last_dim, rotation
        )
    raise PoolExhaustedError(
        f"recommendable pool exhausted for user {view.user_id}"
    )


def _story_on_dimension(
    view: UserView,
    dim: int,
    f: float,
    t: float,
    length: int,
    rng: np.random.Generator,
    seed_label: tuple[int, int],
    strict_zones: bool = False,
) -> Story:
    engine = view.engine
    layout = view.layout(dim)
    projections = engine.projections(dim)
    rec_proj = projections[view.groups.recommendable]

    kind = choose_structure(f, t, rng)
    structure = build_structure(kind, layout, rec_proj)
    if structure is None:
        # The chosen axis has no geometry here (e.g. no watch history);
        # fall back to the orthogonal candidate.
        fam, typ = candidate_structures(f, t)
        alternate = typ if kind.axis == "familiarity" else fam
        structure = build_structure(alternate, layout, rec_proj)
        if structure is None:
            raise _DimensionUnusable(f"dimension {dim}: no usable structure")
        kind = alternate

    counts = sample_counts(f, t, length, kind)
    chosen, realized, rebalanced = _select_events(
        view, dim, structure, counts, f, t, rng, strict_zones
    )
    if len(chosen) < length:
        raise _DimensionUnusable(
            f"dimension {dim}: only {len(chosen)} of {length} events fillable"
        )

    order = sorted(
        chosen,
        key=lambda i: (float(projections[i]), engine.movie_id(i)),
        reverse=not structure.ascending,
    )

    anchors = anchor_examples(view, dim)
    anchor_left = anchor_right = None
    if anchors is not None:
        anchor_left = _make_anchor(view, dim, anchors[0])
        anchor_right = _make_anchor(view, dim, anchors[1])
    elif engine.user_idx(view.user_id) is not None and engine.mask[
        engine.user_idx(view.user_id)
    ].any():
        raise _DimensionUnusable(f"dimension {dim}: degenerate anchors")

    events = tuple(_make_event(view, dim, structure, layout, i) for i in order)
    return Story(
        dimension=dim,
        structure=kind,
        starting_rule=structure.starting_rule,
        ascending=structure.ascending,
        zone_counts=realized,
        zone_intervals={
            "traversal": [
                {"name": z.name, "interval": [round(z.interval.lo, 6), round(z.interval.hi, 6)]}
                for z in structure.zones
            ],
            "layout": layout_to_dict(layout),
        },
        anchor_left=anchor_left,
        anchor_right=anchor_right,
        events=events,
        seed=seed_label,
        relaxed=view.relaxed,
        rebalanced=rebalanced,
    )


def _make_anchor(view: UserView, dim: int, movie_idx: int) -> Anchor:
    engine = view.engine
    record = engine.dataset.movies[movie_idx]
    user_row = engine.user_idx(view.user_id)
    rating = int(engine.raw[user_row, movie_idx]) if user_row is not None else 0
    return Anchor(
        movie_id=record.movie_id,
        title=record.title,
        poster_key=str(record.movie_id),
        projection=float(engine.projections(dim)[movie_idx]),
        user_rating=rating,
    )


def _make_event(
    view: UserView,
    dim: int,
    structure: NarrativeStructure,
    layout: DimensionLayout,
    movie_idx: int,
) -> StoryEvent:
    engine = view.engine
    record = engine.dataset.movies[movie_idx]
    x = float(engine.projections(dim)[movie_idx])
    degree = float(view.degrees[movie_idx])
    roles = assign_roles(x, layout)
    zone_name = next(
        (z.name for z in structure.zones if z.member(layout, x)),
        structure.zones[1].name,
    )
    similar = similar_liked(view, dim, movie_idx)
    similar_ids = tuple(engine.movie_id(i) for i in similar)
    proj = engine.projections(dim)
    genres = sorted(record.genres)
    level1 = {
        "movie_id": record.movie_id,
        "title": record.title,
        "poster_key": str(record.movie_id),
        "projection": round(x, 6),
        "genres": genres,
        "roles": list(roles),
    }
    level2 = {"degree": round(degree, 6)}
    level3 = {
        "similar_liked": [
            {
                "movie_id": engine.movie_id(i),
                "title": engine.dataset.movies[i].title,
                "poster_key": str(engine.movie_id(i)),
                "projection": round(float(proj[i]), 6),
                "genres": sorted(engine.dataset.movies[i].genres),
                "distance": round(abs(float(proj[i]) - x), 6),
            }
            for i in similar
        ]
    }
    return StoryEvent(
        movie_id=record.movie_id,
        title=record.title,
        projection=x,
        degree=degree,
        roles=roles,
        zone=zone_name,
        similar_liked=similar_ids,
        level1=level1,
        level2=level2,
        level3=level3,
    )
