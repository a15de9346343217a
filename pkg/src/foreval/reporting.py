"""Leaderboard export: delimited files plus rendered figures.

The delimited format is the interchange contract (the service and the CLI
emit byte-identical files for the same snapshot); the figures are the
human-facing report, written alongside the data they render.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .scoring import LeaderboardSlice

SCHEMA_LINE = "# schema: leaderboard/1"


def leaderboard_lines(slices: list[LeaderboardSlice], grouping: list[str]) -> list[str]:
    lines = [SCHEMA_LINE, "\t".join(list(grouping) + ["n", "accuracy"])]
    for s in slices:
        values = [v for _, v in s.keys]
        lines.append("\t".join(values + [str(s.n), f"{s.accuracy:.4f}"]))
    return lines


def write_leaderboard(slices: list[LeaderboardSlice], grouping: list[str], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(leaderboard_lines(slices, grouping)) + "\n", encoding="utf-8")
    return path


def read_leaderboard(path: str | Path) -> list[dict]:
    rows = []
    header: list[str] | None = None
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        cells = line.split("\t")
        if header is None:
            header = cells
            continue
        rows.append(dict(zip(header, cells)))
    return rows


def render_figures(
    by_market: list[LeaderboardSlice],
    by_quadrant: list[LeaderboardSlice],
    by_model: list[LeaderboardSlice],
    outdir: str | Path,
) -> list[Path]:
    """Accuracy bar charts for the three standard views, written as PNGs."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    def bars(slices, label_fn, title, filename, rotate=0):
        labels = [label_fn(s) for s in slices]
        values = [s.accuracy for s in slices]
        fig, ax = plt.subplots(figsize=(max(6, 0.9 * len(labels)), 4))
        ax.bar(labels, values, color="#3b6ea5")
        ax.set_ylabel("accuracy (%)")
        ax.set_ylim(0, 100)
        ax.set_title(title)
        for i, (v, s) in enumerate(zip(values, slices)):
            ax.annotate(f"{v:.1f}\nN={s.n}", (i, v), ha="center", va="bottom", fontsize=8)
        if rotate:
            plt.setp(ax.get_xticklabels(), rotation=rotate, ha="right")
        fig.tight_layout()
        path = outdir / filename
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    if by_market:
        bars(by_market, lambda s: s.key_dict().get("market", "?"),
             "Accuracy by market", "accuracy_by_market.png")
    if by_quadrant:
        bars(
            by_quadrant,
            lambda s: f"{s.key_dict().get('track', '?')}\n{s.key_dict().get('level', '?')}",
            "Accuracy by track and level", "accuracy_by_track_level.png",
        )
    if by_model:
        bars(by_model, lambda s: s.key_dict().get("model", "?"),
             "Accuracy by model", "accuracy_by_model.png", rotate=30)
    return written
