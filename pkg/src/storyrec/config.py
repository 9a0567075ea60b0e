"""Engine parameters and their defaults."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class EngineParams:
    """All tunable knobs for preprocessing, scoring, and story generation.

    Immutable; use `with_overrides` to derive a variant.
    """

    # latent space
    k: int = 20

    # candidate selection
    w_c: float = 3.0  # positive-rating threshold on adjusted ratings

    # group thresholds
    tau_plus: float = 4.0
    tau_minus: float = 2.0
    tau_r: float = 0.0

    # dimension suitability weights
    w_plus: float = 5.0
    w_o: float = 10.0
    w_theta: float = 10.0

    # feedback weighting and dimension dedup
    w_int: float = 1.0
    tau_v: float = 0.0  # suitability floor; positive-score dims pass by default
    tau_s: float = 0.1

    # un-typicality boundary quantile
    rho: float = 1.0 / 3.0

    # storytelling
    story_length: int = 5  # movies per story (T)
    max_dims: int = 8
    window_frac: float = 0.10  # local sampling window, fraction of zone length
    influence_frac: float = 0.15  # thumb influence radius, fraction of extent
    alpha_up: float = 1.0
    alpha_down: float = 0.9
    eps_frac: float = 1e-6  # distance-division guard, fraction of extent
    max_retries: int = 20

    # alternative degree denominator (sum of similarities instead of ratings)
    degree_by_similarity_sum: bool = False

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0 < self.rho < 1:
            raise ValueError(f"rho must be in (0, 1), got {self.rho}")
        if self.story_length < 1:
            raise ValueError(f"story_length must be >= 1, got {self.story_length}")
        if self.max_dims < 1:
            raise ValueError(f"max_dims must be >= 1, got {self.max_dims}")
        if self.tau_minus > self.tau_plus:
            raise ValueError("tau_minus must not exceed tau_plus")

    def with_overrides(self, **overrides) -> "EngineParams":
        """Return a copy with the given fields replaced (None values ignored)."""
        effective = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **effective) if effective else self

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "EngineParams":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


DEFAULT_PARAMS = EngineParams()
