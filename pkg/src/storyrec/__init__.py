"""Latent-factor movie recommendation engine with interactive storytelling."""

from .config import DEFAULT_PARAMS, EngineParams
from .dataset import (
    DatasetError,
    MovieRecord,
    RatingDataset,
    RatingRecord,
    UserRecord,
    dataset_stats,
    load_movielens,
)
from .engine import Engine, EngineError, UnknownMovieError, UnknownUserError, UserView, validate_model
from .latent import AdjustedMatrix, LatentSpace, adjust_ratings, factorize
from .semantic import (
    DimensionLayout,
    Interval,
    MovieGroups,
    ValidationReport,
    partition_groups,
    score_dimension,
)
from .session import Session, create_session, movie_details, replay_event_log, user_history
from .snapshot import SnapshotError, load_snapshot, save_snapshot
from .story import PoolExhaustedError, Story, StoryEvent, StructureKind, generate_story
from .synth import generate_dataset, write_movielens_dir

__version__ = "0.1.0"

__all__ = [
    "AdjustedMatrix",
    "DEFAULT_PARAMS",
    "DatasetError",
    "DimensionLayout",
    "Engine",
    "EngineError",
    "EngineParams",
    "Interval",
    "LatentSpace",
    "MovieGroups",
    "MovieRecord",
    "PoolExhaustedError",
    "RatingDataset",
    "RatingRecord",
    "Session",
    "SnapshotError",
    "Story",
    "StoryEvent",
    "StructureKind",
    "UnknownMovieError",
    "UnknownUserError",
    "UserRecord",
    "UserView",
    "ValidationReport",
    "adjust_ratings",
    "create_session",
    "dataset_stats",
    "factorize",
    "generate_dataset",
    "generate_story",
    "load_movielens",
    "load_snapshot",
    "movie_details",
    "partition_groups",
    "replay_event_log",
    "save_snapshot",
    "score_dimension",
    "user_history",
    "validate_model",
    "write_movielens_dir",
]
