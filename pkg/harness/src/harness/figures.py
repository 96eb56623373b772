"""Render figures from the miner's export-matrix ordering CSV.

Two views of the same table: a parallel-coordinates plot with one axis
per classifier (plus truth when present), and a heatmap of the ordered
prediction matrix with a highlight band over subgroup members.
"""

import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import BoundaryNorm, ListedColormap

_RESERVED = ("sorted_pos", "original_index", "member")


class RenderError(ValueError):
    """The ordering CSV does not have the expected shape."""


def read_ordering(path):
    """Parse an export-matrix CSV into [(axis name, label list)], member."""
    rows = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(line for line in handle
                            if not line.startswith("#"))
        try:
            header = next(reader)
        except StopIteration:
            raise RenderError(f"{path}: empty ordering file") from None
        rows = list(reader)
    if header[:2] != ["sorted_pos", "original_index"]:
        raise RenderError(
            f"{path}: expected sorted_pos,original_index leading columns, "
            f"got {header[:2]}")
    if not rows:
        raise RenderError(f"{path}: no cases")
    width = len(header)
    if any(len(r) != width for r in rows):
        raise RenderError(f"{path}: ragged rows")
    axes = [(name, [r[i] for r in rows]) for i, name in enumerate(header)
            if name not in _RESERVED]
    member = None
    if "member" in header:
        column = [r[header.index("member")] for r in rows]
        member = np.array([v == "1" for v in column])
    if not axes:
        raise RenderError(f"{path}: no prediction columns")
    return axes, member


def _encode(axes):
    """Shared label -> code mapping across all axes, first-seen order."""
    order = {}
    for _, labels in axes:
        for value in labels:
            order.setdefault(value, len(order))
    coded = np.array([[order[v] for v in labels] for _, labels in axes])
    return coded, list(order)


def _palette(k):
    cmap = plt.get_cmap("tab10")
    return [cmap(i % 10) for i in range(k)]


def parallel_coordinates(axes, member, out_path):
    coded, labels = _encode(axes)
    n_axes, m = coded.shape
    alpha = min(1.0, max(0.02, 60.0 / m))
    colors = _palette(len(labels))
    fig, ax = plt.subplots(figsize=(1.8 * n_axes + 1, 4.5))
    x = np.arange(n_axes)
    # color each case line by its value on the last axis (truth when
    # present, otherwise the final classifier)
    for i in range(m):
        ax.plot(x, coded[:, i], color=colors[coded[-1, i]], alpha=alpha,
                linewidth=0.8)
    ax.set_xticks(x, [name for name, _ in axes])
    ax.set_yticks(range(len(labels)), labels)
    ax.set_xlim(-0.2, n_axes - 0.8)
    ax.set_title("committee predictions, one line per case")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def matrix_heatmap(axes, member, out_path):
    coded, labels = _encode(axes)
    k = len(labels)
    cmap = ListedColormap(_palette(k))
    norm = BoundaryNorm(np.arange(k + 1) - 0.5, k)
    banded = member is not None and member.any()
    if banded:
        fig, (band_ax, ax) = plt.subplots(
            2, 1, figsize=(8, 0.6 * len(axes) + 1.4), sharex=True,
            gridspec_kw={"height_ratios": [1, 5 * len(axes)]})
        band = np.where(member, 1.0, np.nan)[None, :]
        band_ax.imshow(band, aspect="auto", cmap=ListedColormap(["#b22222"]),
                       interpolation="nearest")
        band_ax.set_yticks([])
        band_ax.set_ylabel("in subgroup", rotation=0, ha="right", va="center")
    else:
        fig, ax = plt.subplots(figsize=(8, 0.6 * len(axes) + 1))
    image = ax.imshow(coded, aspect="auto", cmap=cmap, norm=norm,
                      interpolation="nearest")
    ax.set_yticks(range(len(axes)), [name for name, _ in axes])
    ax.set_xlabel("cases, committee-sorted")
    colorbar = fig.colorbar(image, ax=ax, ticks=range(k), shrink=0.9)
    colorbar.ax.set_yticklabels(labels)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render(ordering_csv, out_dir=None):
    """Render both figures next to the CSV (or into out_dir)."""
    ordering_csv = Path(ordering_csv)
    out_dir = Path(out_dir) if out_dir else ordering_csv.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    axes, member = read_ordering(ordering_csv)
    stem = ordering_csv.stem
    return [
        parallel_coordinates(axes, member,
                             out_dir / f"{stem}_parallel_coordinates.png"),
        matrix_heatmap(axes, member, out_dir / f"{stem}_heatmap.png"),
    ]
