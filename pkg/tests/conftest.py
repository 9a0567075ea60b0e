from __future__ import annotations

import pytest

from storyrec import Engine, EngineParams, generate_dataset
from storyrec.dataset import MovieRecord, RatingDataset, RatingRecord, UserRecord

# One line per acceptance criterion, shown in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

# Pinned 6-user x 8-movie table: (user, movie, rating). Every user leaves
# three movies unrated; every movie has at least three raters.
PINNED_RATINGS = [
    (1, 1, 5), (1, 2, 4), (1, 3, 2), (1, 4, 1), (1, 6, 3),
    (2, 1, 4), (2, 3, 5), (2, 5, 2), (2, 7, 1), (2, 8, 3),
    (3, 2, 5), (3, 4, 4), (3, 5, 1), (3, 6, 2), (3, 8, 4),
    (4, 1, 2), (4, 2, 1), (4, 5, 5), (4, 7, 4), (4, 8, 5),
    (5, 1, 1), (5, 3, 4), (5, 4, 2), (5, 6, 5), (5, 7, 5),
    (6, 2, 3), (6, 3, 1), (6, 5, 4), (6, 6, 4), (6, 8, 2),
]

PINNED_GENRES = {
    1: {"Action"},
    2: {"Drama", "Romance"},
    3: {"Comedy"},
    4: {"Drama"},
    5: {"Sci-Fi", "Thriller"},
    6: {"Documentary"},
    7: {"Horror"},
    8: {"Comedy", "Romance"},
}


def build_pinned_dataset(extra_user: bool = False) -> RatingDataset:
    movies = [
        MovieRecord(mid, f"Pinned Movie {mid:02d} (199{mid})", 1990 + mid, frozenset(g))
        for mid, g in PINNED_GENRES.items()
    ]
    users = [UserRecord(u, 20 + u, "M" if u % 2 else "F", "student") for u in range(1, 7)]
    if extra_user:
        users.append(UserRecord(7, 30, "F", "artist"))
    ratings = [
        RatingRecord(u, m, r, 874_000_000 + 60 * i)
        for i, (u, m, r) in enumerate(PINNED_RATINGS)
    ]
    return RatingDataset(movies=movies, users=users, ratings=ratings)


@pytest.fixture(scope="session")
def pinned_dataset() -> RatingDataset:
    return build_pinned_dataset()


@pytest.fixture(scope="session")
def pinned_engine(pinned_dataset) -> Engine:
    # k is clamped to the rank bound (6) at build time.
    return Engine.build(pinned_dataset, EngineParams(k=6, tau_plus=4.0, tau_minus=2.0))


@pytest.fixture(scope="session")
def small_engine() -> Engine:
    """Mid-sized corpus for story/session/service behavior."""
    ds = generate_dataset(n_users=80, n_movies=200, n_ratings=4800, seed=11)
    return Engine.build(ds)


@pytest.fixture(scope="session")
def full_engine() -> Engine:
    """The pinned full-size stand-in corpus used by the acceptance gate."""
    ds = generate_dataset(seed=7)
    return Engine.build(ds, EngineParams(tau_plus=4.0, tau_minus=2.0))
