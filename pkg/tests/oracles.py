"""Independent exhaustive-loop reference implementations.

Everything here is written with plain Python loops over dicts and lists,
deliberately avoiding the engine's vectorized code paths, so tests can
compare the two routes value-for-value.
"""

from __future__ import annotations

import math


def oracle_adjust(ratings: dict[tuple[int, int], int]) -> dict[tuple[int, int], float]:
    """Global-effects adjustment, one rated cell at a time."""
    users = sorted({u for u, _ in ratings})
    movies = sorted({m for _, m in ratings})
    user_avg = {}
    for u in users:
        vals = [r for (uu, _), r in ratings.items() if uu == u]
        user_avg[u] = sum(vals) / len(vals)
    movie_avg = {}
    for m in movies:
        vals = [r for (_, mm), r in ratings.items() if mm == m]
        movie_avg[m] = sum(vals) / len(vals)
    grand_user = sum(user_avg.values()) / len(user_avg)
    grand_movie = sum(movie_avg.values()) / len(movie_avg)
    return {
        (u, m): r - (user_avg[u] - grand_user) - (movie_avg[m] - grand_movie)
        for (u, m), r in ratings.items()
    }


def oracle_cosine(a: list[float], b: list[float]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def oracle_coords(
    adjusted: dict[tuple[int, int], float],
    users: list[int],
    movies: list[int],
    movie_features: list[list[float]],
) -> dict[int, list[float]]:
    """User coordinates: adjusted-rating row times the movie-feature matrix."""
    k = len(movie_features[0])
    coords = {}
    for u in users:
        row = [adjusted.get((u, m), 0.0) for m in movies]
        coords[u] = [
            sum(row[j] * movie_features[j][col] for j in range(len(movies)))
            for col in range(k)
        ]
    return coords


def oracle_candidates(
    ratings: dict[tuple[int, int], int],
    adjusted: dict[tuple[int, int], float],
    similarities: dict[int, float],
    user: int,
    users: list[int],
    movies: list[int],
    w_c: float,
) -> list[int]:
    """Movies unrated by `user` with an adjusted rating >= w_c from some
    nonnegative-similarity user."""
    similar = [v for v in users if similarities[v] >= 0.0]
    result = []
    for m in movies:
        if (user, m) in ratings:
            continue
        for v in similar:
            if (v, m) in adjusted and adjusted[(v, m)] >= w_c:
                result.append(m)
                break
    return result


def oracle_raw_degree(
    ratings: dict[tuple[int, int], int],
    similarities: dict[int, float],
    movie: int,
    users: list[int],
) -> float | None:
    """Rating-weighted similarity average over similar raters of the movie."""
    numer = 0.0
    denom = 0.0
    for v in users:
        if similarities[v] < 0.0:
            continue
        r = ratings.get((v, movie))
        if r is None:
            continue
        numer += r * similarities[v]
        denom += r
    if denom == 0.0:
        return None
    return numer / denom


def oracle_normalize_degrees(raw: dict[int, float]) -> dict[int, float]:
    if not raw:
        return {}
    lo = min(raw.values())
    hi = max(raw.values())
    if hi > lo:
        return {m: (v - lo) / (hi - lo) for m, v in raw.items()}
    return {m: 1.0 for m in raw}


def oracle_hull(points: list[float]) -> tuple[float, float] | None:
    if not points:
        return None
    return (min(points), max(points))


def oracle_layout(
    projections: dict[int, float],
    like: list[int],
    dislike: list[int],
    history: list[int],
    recommendable: list[int],
    rho: float,
) -> dict:
    """Interval geometry computed with loops and explicit arithmetic."""
    like_iv = oracle_hull([projections[i] for i in like])
    dislike_iv = oracle_hull([projections[i] for i in dislike])
    overlap = None
    if like_iv and dislike_iv:
        lo = max(like_iv[0], dislike_iv[0])
        hi = min(like_iv[1], dislike_iv[1])
        if lo <= hi:
            overlap = (lo, hi)
    combined = None
    if like_iv:
        pts = [like_iv[0], like_iv[1]]
        if dislike_iv:
            pts += [dislike_iv[0], dislike_iv[1]]
        combined = (min(pts), max(pts))
    familiar = oracle_hull([projections[i] for i in history])

    spread = 0.0
    if like_iv:
        inside = [
            projections[i]
            for i in recommendable
            if like_iv[0] <= projections[i] <= like_iv[1]
        ]
        if inside:
            mean = sum(inside) / len(inside)
            spread = math.sqrt(sum((x - mean) ** 2 for x in inside) / len(inside))

    return {
        "like": like_iv,
        "dislike": dislike_iv,
        "overlap": overlap,
        "combined": combined,
        "familiar": familiar,
        "spread": spread,
    }


def oracle_suitability(
    layout: dict, w_plus: float, w_o: float, w_theta: float
) -> float:
    """The dimension-suitability product, including every degenerate guard."""
    like = layout["like"]
    if like is None:
        return 0.0
    len_like = like[1] - like[0]
    combined = layout["combined"]
    len_combined = combined[1] - combined[0]
    overlap = layout["overlap"]
    len_overlap = (overlap[1] - overlap[0]) if overlap else 0.0
    dislike = layout["dislike"]
    len_dislike = (dislike[1] - dislike[0]) if dislike else 0.0
    spread = layout["spread"]
    if len_combined == 0.0 or len_like == 0.0 or spread == 0.0:
        return 0.0
    if overlap is not None and len_dislike == 0.0:
        return 0.0
    sep_like = 1.0 - len_overlap / len_like
    sep_dislike = 1.0 - len_overlap / len_dislike if len_dislike > 0.0 else 1.0
    if sep_like <= 0.0 or sep_dislike <= 0.0:
        return 0.0
    return (
        (len_like / len_combined) ** w_plus
        * sep_like**w_o
        * sep_dislike**w_o
        * (len_like / spread) ** w_theta
    )


def _inside(iv: tuple[float, float] | None, x: float) -> bool:
    return iv is not None and iv[0] <= x <= iv[1]


def oracle_disagreement(
    layout_p: dict,
    layout_q: dict,
    proj_p: dict[int, float],
    proj_q: dict[int, float],
    candidates: list[int],
    weights: dict[int, float],
) -> float:
    total = 0.0
    for i in candidates:
        w = weights.get(i, 1.0)
        like_xor = _inside(layout_p["like"], proj_p[i]) != _inside(layout_q["like"], proj_q[i])
        dis_xor = _inside(layout_p["dislike"], proj_p[i]) != _inside(
            layout_q["dislike"], proj_q[i]
        )
        total += w * (int(like_xor) + int(dis_xor))
    return total


def oracle_interactive(
    base: float,
    layout: dict,
    proj: dict[int, float],
    thumbs_up: list[int],
    thumbs_down: list[int],
    degrees: dict[int, float],
    w_int: float,
) -> float:
    aligned = 0.0
    crossed = 0.0
    for i in thumbs_up:
        if i not in degrees:
            continue
        if _inside(layout["like"], proj[i]):
            aligned += degrees[i]
        if _inside(layout["dislike"], proj[i]):
            crossed += degrees[i]
    for i in thumbs_down:
        if i not in degrees:
            continue
        if _inside(layout["dislike"], proj[i]):
            aligned += degrees[i]
        if _inside(layout["like"], proj[i]):
            crossed += degrees[i]
    return base + w_int * (aligned - crossed)


def oracle_region_sums(
    layout: dict,
    proj: dict[int, float],
    recommendable: list[int],
    degrees: dict[int, float],
) -> tuple[float, float, float, float]:
    s_like = s_dislike = s_like_x = s_dislike_x = 0.0
    for i in recommendable:
        if i not in degrees:
            continue
        x = proj[i]
        b = degrees[i]
        in_like = _inside(layout["like"], x)
        in_dis = _inside(layout["dislike"], x)
        in_over = _inside(layout["overlap"], x)
        if in_like:
            s_like += b
            if not in_over:
                s_like_x += b
        if in_dis:
            s_dislike += b
            if not in_over:
                s_dislike_x += b
    return s_like, s_dislike, s_like_x, s_dislike_x


def oracle_singular_values(matrix: list[list[float]]) -> list[float]:
    """Singular values via the eigendecomposition of the Gram matrix —
    an algorithmically independent route from any SVD driver."""
    import numpy as np

    a = np.array(matrix, dtype=float)
    gram = a.T @ a if a.shape[0] >= a.shape[1] else a @ a.T
    eigvals = np.linalg.eigvalsh(gram)
    eigvals = np.clip(eigvals, 0.0, None)
    return sorted((math.sqrt(v) for v in eigvals), reverse=True)
