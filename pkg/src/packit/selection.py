"""Choosing rectangle dimensions before any packing is attempted.

A perfect game needs one rectangle per turn with area t or t+1, shapes
that fit the board, and a total equal to the board area. This module
answers that question with a subset-sum style dynamic program over
(turns used, total area), reconstructs concrete selections from the
table, and enumerates alternatives for retry logic. Geometry is not
considered here at all; whether the chosen rectangles can actually be
packed is the SAT pipeline's problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .arithmetic import tau
from .core import GridDims
from .errors import FormatError, InvalidDimsError, InvalidInputError


def fit_witness(area: int, rows: int, cols: int) -> Optional[tuple[int, int]]:
    """Most-square (h, v) factor pair of ``area`` that fits the board.

    A pair fits, allowing rotation, when its smaller side is at most the
    shorter board side and its larger side at most the longer one. Pairs
    are returned with h <= v and the largest side as small as possible;
    None when no factorization fits.
    """
    if area < 1:
        return None
    short, long = sorted((rows, cols))
    for small in range(math.isqrt(area), 0, -1):
        if area % small:
            continue
        big = area // small
        if small <= short and big <= long:
            return (small, big)
    return None


def fits(area: int, rows: int, cols: int) -> bool:
    """Whether some rectangle of ``area`` fits a rows x cols board."""
    return fit_witness(area, rows, cols) is not None


def shape_options(area: int, rows: int, cols: int) -> list[tuple[int, int]]:
    """All fitting canonical (h <= v) factor pairs, most square first."""
    short, long = sorted((rows, cols))
    out = []
    for small in range(math.isqrt(area), 0, -1):
        if area % small:
            continue
        big = area // small
        if small <= short and big <= long:
            out.append((small, big))
    return out


@dataclass(frozen=True)
class RectangleSelection:
    """Ordered rectangle dimensions, one per turn.

    ``rects[i]`` belongs to turn ``start_turn + i``. Normal games start
    at turn 1; completion queries carve out later turn windows.
    """

    dims: GridDims
    rects: tuple[tuple[int, int], ...]
    start_turn: int = 1

    def areas(self) -> tuple[int, ...]:
        return tuple(h * v for h, v in self.rects)

    def turn_of(self, index: int) -> int:
        return self.start_turn + index

    @property
    def expansions(self) -> int:
        """Number of turns that take the larger area t+1."""
        return sum(
            1 for i, (h, v) in enumerate(self.rects) if h * v == self.turn_of(i) + 1
        )

    def validate(self) -> None:
        """Raise InvalidInputError unless every invariant holds."""
        total = 0
        for i, (h, v) in enumerate(self.rects):
            t = self.turn_of(i)
            area = h * v
            if area not in (t, t + 1):
                raise InvalidInputError(f"turn {t}: area {area} not in {{{t}, {t + 1}}}")
            if fit_witness(area, self.dims.rows, self.dims.cols) is None:
                raise InvalidInputError(f"turn {t}: no {area}-cell rectangle fits {self.dims}")
            short, long = sorted((h, v))
            if short > min(self.dims.rows, self.dims.cols) or long > max(
                self.dims.rows, self.dims.cols
            ):
                raise InvalidInputError(f"turn {t}: rectangle {h}x{v} cannot fit {self.dims}")
            total += area
        if self.start_turn == 1:
            if total != self.dims.area:
                raise InvalidInputError(
                    f"selection covers {total} cells, board has {self.dims.area}"
                )
            if len(self.rects) != tau(self.dims.area):
                raise InvalidInputError(
                    f"selection has {len(self.rects)} rectangles, "
                    f"a perfect game needs {tau(self.dims.area)}"
                )


@dataclass(frozen=True)
class DpTable:
    """Reachability table: which totals the first t turns can produce.

    ``has(t, total)`` is true when turns ``start_turn .. start_turn+t-1``
    can pick areas (each its turn number or one more, shape-fitting)
    summing to ``total``. Rows are stored as bitsets over
    0..limit_total.
    """

    dims: GridDims
    start_turn: int
    turn_count: int
    limit_total: int
    _rows: tuple[int, ...]

    @property
    def rect_count(self) -> int:
        return self.turn_count

    @property
    def solvable(self) -> bool:
        return self.has(self.turn_count, self.limit_total)

    def has(self, turns_used: int, total: int) -> bool:
        if not (0 <= turns_used <= self.turn_count):
            return False
        if not (0 <= total <= self.limit_total):
            return False
        return bool(self._rows[turns_used] >> total & 1)


def _build_table(dims: GridDims, start_turn: int, turn_count: int, limit_total: int) -> DpTable:
    mask = (1 << (limit_total + 1)) - 1
    rows = [1]  # zero turns reach exactly total 0
    reach = 1
    for i in range(turn_count):
        t = start_turn + i
        nxt = 0
        if fits(t, dims.rows, dims.cols):
            nxt |= reach << t
        if fits(t + 1, dims.rows, dims.cols):
            nxt |= reach << (t + 1)
        reach = nxt & mask
        rows.append(reach)
    return DpTable(
        dims=dims,
        start_turn=start_turn,
        turn_count=turn_count,
        limit_total=limit_total,
        _rows=tuple(rows),
    )


def dp_table(rows: int, cols: int) -> DpTable:
    """Full-game table for a rows x cols board (turn 1 through tau(area))."""
    if rows < 1 or cols < 1:
        raise InvalidDimsError(f"grid dimensions must be positive, got {rows}x{cols}")
    dims = GridDims(rows, cols)
    return _build_table(dims, 1, tau(dims.area), dims.area)


def window_table(dims: GridDims, start_turn: int, turn_count: int, target: int) -> DpTable:
    """Table for a turn window, used by completion queries."""
    if start_turn < 1 or turn_count < 0 or target < 0:
        raise InvalidDimsError("window parameters must be non-negative (start_turn >= 1)")
    return _build_table(dims, start_turn, turn_count, target)


def _area_vectors(table: DpTable, limit: int) -> list[tuple[int, ...]]:
    """Up to ``limit`` area vectors, deterministic order.

    Turns are assigned from the last one down, trying the non-expansion
    area first, so the first vector found matches extract_selection's
    tie-break.
    """
    dims = table.dims
    found: list[tuple[int, ...]] = []
    acc: list[int] = []

    def descend(turns_left: int, total: int) -> None:
        if len(found) >= limit:
            return
        if turns_left == 0:
            if total == 0:
                found.append(tuple(reversed(acc)))
            return
        t = table.start_turn + turns_left - 1
        for area in (t, t + 1):
            if len(found) >= limit:
                return
            if area <= total and fits(area, dims.rows, dims.cols) and table.has(
                turns_left - 1, total - area
            ):
                acc.append(area)
                descend(turns_left - 1, total - area)
                acc.pop()

    descend(table.turn_count, table.limit_total)
    return found


def _materialize(table: DpTable, areas: tuple[int, ...]) -> RectangleSelection:
    rects = []
    for area in areas:
        witness = fit_witness(area, table.dims.rows, table.dims.cols)
        assert witness is not None  # guaranteed by the fits() filter
        rects.append(witness)
    return RectangleSelection(dims=table.dims, rects=tuple(rects), start_turn=table.start_turn)


def extract_selection(table: DpTable) -> Optional[RectangleSelection]:
    """First selection in the table, or None when no selection exists.

    Backtracks from (all turns, full total) preferring the plain area t
    over the expansion t+1, which pushes unavoidable expansions to the
    latest turns possible and keeps the output deterministic.
    """
    vectors = _area_vectors(table, 1)
    if not vectors:
        return None
    return _materialize(table, vectors[0])


def selections_from_table(table: DpTable, limit: int) -> list[RectangleSelection]:
    """Up to ``limit`` distinct selections drawn from ``table``.

    Works for full-board tables and for turn windows alike. Each area
    vector is materialized with its canonical most-square shapes; the
    first entry equals extract_selection(table).
    """
    if limit < 1:
        raise InvalidInputError(f"limit must be at least 1, got {limit}")
    return [_materialize(table, areas) for areas in _area_vectors(table, limit)]


def enumerate_selections(rows: int, cols: int, limit: int) -> list[RectangleSelection]:
    """Up to ``limit`` distinct selections for a board, deterministic order."""
    return selections_from_table(dp_table(rows, cols), limit)


def format_selection(sel: RectangleSelection) -> str:
    """Selection text: one ``t h v`` line per rectangle."""
    lines = [f"{sel.turn_of(i)} {h} {v}" for i, (h, v) in enumerate(sel.rects)]
    return "\n".join(lines) + "\n" if lines else ""


def parse_selection(text: str, dims: GridDims) -> RectangleSelection:
    """Parse ``t h v`` lines; turns must be consecutive."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 't h v', got {raw!r}")
        try:
            t, h, v = (int(p) for p in parts)
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer field in {raw!r}") from None
        entries.append((t, h, v))
    if not entries:
        raise FormatError("selection text contains no rectangles")
    start = entries[0][0]
    for i, (t, _, _) in enumerate(entries):
        if t != start + i:
            raise FormatError(f"turn numbers must be consecutive, {t} breaks the run")
    return RectangleSelection(
        dims=dims, rects=tuple((h, v) for _, h, v in entries), start_turn=start
    )
