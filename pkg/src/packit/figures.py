"""Matplotlib rendering: board pictures and benchmark charts.

Backend is forced to Agg so rendering works headless; callers get file
paths back rather than figure objects.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Rectangle as PatchRect

from .core import GridDims, Placement

# one color per turn, cycling; grey is reserved for prefilled cells
_PALETTE = plt.get_cmap("tab20").colors
_PREFILLED_COLOR = (0.55, 0.55, 0.55)


def turn_color(turn: int) -> tuple:
    return _PALETTE[(turn - 1) % len(_PALETTE)]


def render_board(
    dims: GridDims,
    moves: Sequence[Placement],
    out_path: Union[str, Path],
    prefilled: Iterable[tuple[int, int]] = (),
    title: Optional[str] = None,
) -> Path:
    """Draw the board with one colored, numbered patch per move."""
    out = Path(out_path)
    side = max(dims.rows, dims.cols)
    fig, ax = plt.subplots(figsize=(1 + 6 * dims.cols / side, 1 + 6 * dims.rows / side))
    ax.set_xlim(0, dims.cols)
    ax.set_ylim(0, dims.rows)
    ax.invert_yaxis()
    ax.set_aspect("equal")
    ax.set_xticks(range(dims.cols + 1))
    ax.set_yticks(range(dims.rows + 1))
    ax.grid(True, color="0.85", linewidth=0.5)
    ax.tick_params(length=0, labelsize=6)
    for (r, c) in prefilled:
        ax.add_patch(
            PatchRect((c, r), 1, 1, facecolor=_PREFILLED_COLOR, edgecolor="none")
        )
    for move in moves:
        ax.add_patch(
            PatchRect(
                (move.x, move.y),
                move.h,
                move.v,
                facecolor=turn_color(move.turn),
                edgecolor="black",
                linewidth=1.0,
            )
        )
        if dims.cols <= 60 and dims.rows <= 60:
            ax.annotate(
                str(move.turn),
                (move.x + move.h / 2, move.y + move.v / 2),
                ha="center",
                va="center",
                fontsize=9,
            )
    ax.set_title(title or f"{dims.rows}x{dims.cols}")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def render_bench(
    rows: Sequence[Mapping], out_prefix: Union[str, Path]
) -> list[Path]:
    """Charts for a benchmark run: formula growth and solve time.

    ``rows`` are the CSV rows (keys n, vars, clauses, solve_seconds,
    status). The clause chart overlays the smallest cubic envelope
    C * n^3 covering the data, which is the growth the encoding is
    designed to stay under.
    """
    prefix = Path(out_prefix)
    # boards with no formula (arithmetically impossible) have no point here
    encoded = [r for r in rows if int(r["clauses"]) > 0]
    out_paths: list[Path] = []
    if not encoded:
        return out_paths
    sizes = np.array([int(r["n"]) for r in encoded])

    clauses = np.array([int(r["clauses"]) for r in encoded])
    coeff = float(np.max(clauses / sizes.astype(float) ** 3))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(sizes, clauses, "o-", label="clauses")
    grid = np.linspace(sizes.min(), sizes.max(), 200)
    ax.plot(grid, coeff * grid**3, "--", label=f"{coeff:.2f} n^3 envelope")
    ax.set_xlabel("board side n")
    ax.set_ylabel("clauses")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("formula size")
    fig.tight_layout()
    clause_path = prefix.with_name(prefix.name + "_clauses.png")
    fig.savefig(clause_path, dpi=150)
    plt.close(fig)
    out_paths.append(clause_path)

    seconds = np.array([float(r["solve_seconds"]) for r in encoded])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(sizes, np.maximum(seconds, 1e-4), "o-")
    ax.set_xlabel("board side n")
    ax.set_ylabel("solve seconds")
    ax.set_yscale("log")
    ax.set_title("solve time")
    fig.tight_layout()
    time_path = prefix.with_name(prefix.name + "_seconds.png")
    fig.savefig(time_path, dpi=150)
    plt.close(fig)
    out_paths.append(time_path)
    return out_paths
