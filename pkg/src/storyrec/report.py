"""Figure rendering for validation reports and stories.

Figures are written next to the delimited outputs (CSV / JSON lines) so a
validation or recommendation run leaves a self-contained report directory.
"""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .semantic import ValidationReport
from .story import Story

logger = logging.getLogger(__name__)

ZONE_COLORS = {"like": "#2e8b57", "dislike": "#e07b39", "familiar": "#9ecae1"}


def render_validation_figures(report: ValidationReport, out_dir: str | Path) -> list[Path]:
    """Scatter of per-user degree sums (with and without the overlap region)
    plus a histogram of best-dimension layout cases."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: list[Path] = []

    likes = np.array([r.sum_like for r in report.rows])
    dislikes = np.array([r.sum_dislike for r in report.rows])
    likes_x = np.array([r.sum_like_excl for r in report.rows])
    dislikes_x = np.array([r.sum_dislike_excl for r in report.rows])

    fig, axes = plt.subplots(1, 2, figsize=(10, 4.2), sharey=True)
    axes[0].scatter(likes, dislikes, s=6, alpha=0.4, color="#3b6ea5")
    axes[0].set_title(f"full ranges (pearson {report.pearson:.2f})")
    axes[0].set_xlabel("degree sum in like range")
    axes[0].set_ylabel("degree sum in dislike range")
    axes[1].scatter(likes_x, dislikes_x, s=6, alpha=0.4, color="#a5553b")
    axes[1].set_title(f"overlap removed (pearson {report.pearson_excl:.2f})")
    axes[1].set_xlabel("degree sum in like range")
    for ax in axes:
        ax.spines["right"].set_visible(False)
        ax.spines["top"].set_visible(False)
    fig.tight_layout()
    scatter_path = out_dir / "validation_degree_sums.png"
    fig.savefig(scatter_path, dpi=120)
    plt.close(fig)
    paths.append(scatter_path)

    fig, ax = plt.subplots(figsize=(5, 3.6))
    cases = sorted(report.case_counts)
    ax.bar(
        [str(c) for c in cases],
        [report.case_counts[c] for c in cases],
        color="#3b6ea5",
    )
    ax.set_xlabel("best-dimension layout case")
    ax.set_ylabel("users")
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    case_path = out_dir / "validation_cases.png"
    fig.savefig(case_path, dpi=120)
    plt.close(fig)
    paths.append(case_path)

    logger.info("wrote %d validation figures to %s", len(paths), out_dir)
    return paths


def render_story_figure(story: Story, path: str | Path) -> Path:
    """One story as a dimension strip: shaded like/dislike/familiar bands,
    events placed at (projection, degree), anchors marked at the edges."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    layout = story.zone_intervals["layout"]

    fig, ax = plt.subplots(figsize=(9, 3.2))

    def band(pair, color, alpha, label):
        if pair:
            ax.axvspan(pair[0], pair[1], color=color, alpha=alpha, label=label)

    band(layout.get("familiar"), ZONE_COLORS["familiar"], 0.25, "familiar")
    band(layout.get("like"), ZONE_COLORS["like"], 0.3, "liked range")
    band(layout.get("dislike"), ZONE_COLORS["dislike"], 0.3, "disliked range")

    xs = [e.projection for e in story.events]
    ys = [e.degree for e in story.events]
    ax.scatter(xs, ys, s=60, color="#4b3b99", zorder=3)
    for order, event in enumerate(story.events, start=1):
        ax.annotate(
            f"{order}",
            (event.projection, event.degree),
            textcoords="offset points",
            xytext=(0, 8),
            ha="center",
            fontsize=9,
        )

    for anchor, marker in ((story.anchor_left, "<"), (story.anchor_right, ">")):
        if anchor is not None:
            ax.scatter([anchor.projection], [-0.08], marker=marker, color="black", zorder=3)

    extent = layout["extent"]
    ax.set_xlim(extent[0] - 0.02, extent[1] + 0.02)
    ax.set_ylim(-0.15, 1.1)
    ax.set_xlabel(f"latent dimension {story.dimension}")
    ax.set_ylabel("recommendation degree")
    ax.set_title(f"{story.structure.value} ({len(story.events)} movies)")
    ax.legend(loc="upper right", fontsize=8)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
