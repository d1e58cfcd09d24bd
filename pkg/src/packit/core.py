"""Game state, legal moves and transcript verification for PackIt!.

PackIt! is played on a rows x cols grid. On turn t a rectangle of area
t or t+1 is placed axis-aligned on empty cells. A game is *perfect* when
the placed rectangles cover the whole grid. Everything else in this
package (feasibility arithmetic, the CNF pipeline, hardness instances)
is ultimately checked against the replay logic in this module.

Coordinates: ``x`` is the column and ``y`` the row of a rectangle's
top-left corner, origin at the top-left of the board; ``h`` is the
horizontal extent (width) and ``v`` the vertical extent (height).

States are immutable values. Applying a move returns a fresh state, so
undo and search never need to patch anything back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import (
    AreaError,
    BoundsError,
    FormatError,
    InvalidDimsError,
    OverlapError,
    TurnError,
)

# Turn tag used for cells that were occupied before the game started
# (partially filled boards, e.g. hardness instances).
PREFILLED = 0


@dataclass(frozen=True)
class GridDims:
    """Board dimensions, rows x cols."""

    rows: int
    cols: int

    @property
    def area(self) -> int:
        return self.rows * self.cols

    def __str__(self) -> str:
        return f"{self.rows}x{self.cols}"


@dataclass(frozen=True)
class Placement:
    """One move: on ``turn``, an h-wide, v-tall rectangle at column x, row y."""

    turn: int
    h: int
    v: int
    x: int
    y: int

    @property
    def area(self) -> int:
        return self.h * self.v

    def cells(self) -> Iterator[tuple[int, int]]:
        """(row, col) pairs covered by this rectangle."""
        for r in range(self.y, self.y + self.v):
            for c in range(self.x, self.x + self.h):
                yield (r, c)


@dataclass(frozen=True)
class GameState:
    """Immutable snapshot of a game in progress.

    ``occupied`` maps each filled cell (row, col) to the turn that filled
    it (``PREFILLED`` for cells that were given, not played). ``turn`` is
    the next turn to be played.
    """

    dims: GridDims
    occupied: Mapping[tuple[int, int], int]
    turn: int
    transcript: tuple[Placement, ...]

    @property
    def covered(self) -> int:
        return len(self.occupied)

    @property
    def full(self) -> bool:
        return len(self.occupied) == self.dims.area


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of replaying a transcript from scratch.

    ``perfect`` implies ``valid``; a perfect replay covers every cell.
    ``failure`` describes the first rejected move (turn plus reason).
    """

    valid: bool
    perfect: bool
    failure: Optional[str] = None


@dataclass(frozen=True)
class TwoPlayerStatus:
    """Whose move it is and, once no move exists, who lost."""

    mover: int
    finished: bool
    loser: Optional[int] = None


def new_game(dims: GridDims) -> GameState:
    """Fresh empty board at turn 1."""
    if dims.rows < 1 or dims.cols < 1:
        raise InvalidDimsError(f"grid dimensions must be positive, got {dims}")
    return GameState(dims=dims, occupied={}, turn=1, transcript=())


def from_prefilled(
    dims: GridDims, filled: Iterable[tuple[int, int]], start_turn: int = 1
) -> GameState:
    """Board with some cells already occupied, play starting at ``start_turn``."""
    if dims.rows < 1 or dims.cols < 1:
        raise InvalidDimsError(f"grid dimensions must be positive, got {dims}")
    if start_turn < 1:
        raise InvalidDimsError(f"start turn must be at least 1, got {start_turn}")
    occupied = {}
    for (r, c) in filled:
        if not (0 <= r < dims.rows and 0 <= c < dims.cols):
            raise BoundsError(f"prefilled cell {(r, c)} outside {dims}")
        occupied[(r, c)] = PREFILLED
    return GameState(dims=dims, occupied=occupied, turn=start_turn, transcript=())


def _shapes_for_area(area: int) -> list[tuple[int, int]]:
    """All (h, v) factor pairs of ``area``, unordered orientation included."""
    out = []
    for h in range(1, area + 1):
        if area % h == 0:
            out.append((h, area // h))
    return out


def legal_placements(state: GameState) -> list[Placement]:
    """Every legal move for the current turn.

    The order is deterministic: sorted by (h, v, y, x). An empty list in
    two-player mode means the mover has lost.
    """
    t = state.turn
    dims = state.dims
    occupied = state.occupied
    found = []
    for area in (t, t + 1):
        for h, v in _shapes_for_area(area):
            if h > dims.cols or v > dims.rows:
                continue
            for y in range(dims.rows - v + 1):
                for x in range(dims.cols - h + 1):
                    if _cells_free(occupied, x, y, h, v):
                        found.append(Placement(t, h, v, x, y))
    found.sort(key=lambda p: (p.h, p.v, p.y, p.x))
    return found


def _cells_free(occupied, x: int, y: int, h: int, v: int) -> bool:
    for r in range(y, y + v):
        for c in range(x, x + h):
            if (r, c) in occupied:
                return False
    return True


def apply_placement(state: GameState, p: Placement) -> GameState:
    """Validate and apply one move, returning the successor state.

    Raises TurnError, AreaError, BoundsError or OverlapError; the input
    state is never modified.
    """
    if p.turn != state.turn:
        raise TurnError(f"expected turn {state.turn}, move says {p.turn}")
    if p.h < 1 or p.v < 1:
        raise AreaError(f"rectangle sides must be positive, got {p.h}x{p.v}")
    if p.area not in (state.turn, state.turn + 1):
        raise AreaError(
            f"area {p.area} not allowed on turn {state.turn} "
            f"(must be {state.turn} or {state.turn + 1})"
        )
    dims = state.dims
    if p.x < 0 or p.y < 0 or p.x + p.h > dims.cols or p.y + p.v > dims.rows:
        raise BoundsError(
            f"rectangle {p.h}x{p.v} at ({p.x}, {p.y}) leaves the {dims} grid"
        )
    for cell in p.cells():
        if cell in state.occupied:
            raise OverlapError(
                f"cell (row {cell[0]}, col {cell[1]}) already filled on turn "
                f"{state.occupied[cell]}"
            )
    occupied = dict(state.occupied)
    for cell in p.cells():
        occupied[cell] = p.turn
    return GameState(
        dims=dims,
        occupied=occupied,
        turn=state.turn + 1,
        transcript=state.transcript + (p,),
    )


def verify_transcript(
    dims: GridDims,
    moves: Sequence[Placement],
    prefilled: Optional[Iterable[tuple[int, int]]] = None,
    start_turn: int = 1,
) -> VerifyReport:
    """Replay ``moves`` from scratch and report validity and perfection.

    ``prefilled``/``start_turn`` support partially filled boards; the
    default replays a normal game from an empty board at turn 1.
    """
    if prefilled is None:
        state = new_game(dims)
    else:
        state = from_prefilled(dims, prefilled, start_turn)
    for move in moves:
        try:
            state = apply_placement(state, move)
        except (TurnError, AreaError, BoundsError, OverlapError) as err:
            return VerifyReport(
                valid=False, perfect=False, failure=f"turn {move.turn}: {err.message}"
            )
    return VerifyReport(valid=True, perfect=state.full, failure=None)


def two_player_status(state: GameState) -> TwoPlayerStatus:
    """Player 1 moves on odd turns; whoever faces no legal move loses."""
    mover = 1 if state.turn % 2 == 1 else 2
    finished = not legal_placements(state)
    return TwoPlayerStatus(mover=mover, finished=finished, loser=mover if finished else None)


# ---------------------------------------------------------------------------
# Text formats shared by the CLI, the service and the file-based tools.
# ---------------------------------------------------------------------------

def format_transcript(moves: Sequence[Placement], comments: Sequence[str] = ()) -> str:
    """Transcript text: one ``t h v x y`` line per move, LF endings."""
    lines = [f"# {c}" for c in comments]
    for p in moves:
        lines.append(f"{p.turn} {p.h} {p.v} {p.x} {p.y}")
    return "\n".join(lines) + "\n" if lines else ""


def placement_to_dict(p: Placement) -> dict:
    """JSON-friendly form shared by the CLI and the HTTP service."""
    return {"turn": p.turn, "h": p.h, "v": p.v, "x": p.x, "y": p.y}


def placement_from_dict(data: Mapping) -> Placement:
    """Inverse of placement_to_dict; FormatError on bad shape."""
    try:
        return Placement(
            turn=int(data["turn"]),
            h=int(data["h"]),
            v=int(data["v"]),
            x=int(data["x"]),
            y=int(data["y"]),
        )
    except (KeyError, TypeError, ValueError):
        raise FormatError(f"placement object needs integer turn/h/v/x/y, got {data!r}") from None


def parse_transcript(text: str) -> list[Placement]:
    """Parse transcript text; ``#`` comment lines and blank lines are skipped."""
    moves = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 5:
            raise FormatError(f"line {lineno}: expected 't h v x y', got {raw!r}")
        try:
            t, h, v, x, y = (int(p) for p in parts)
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer field in {raw!r}") from None
        moves.append(Placement(t, h, v, x, y))
    return moves


def format_grid(dims: GridDims, filled: Iterable[tuple[int, int]], start_turn: int = 1) -> str:
    """Partial-grid text: header ``rows cols turn``, then '.'/'#' rows."""
    filled = set(filled)
    lines = [f"{dims.rows} {dims.cols} {start_turn}"]
    for r in range(dims.rows):
        lines.append(
            "".join("#" if (r, c) in filled else "." for c in range(dims.cols))
        )
    return "\n".join(lines) + "\n"


def parse_grid(text: str) -> tuple[GridDims, set[tuple[int, int]], int]:
    """Parse partial-grid text back into (dims, filled cells, start turn).

    No comment syntax here: '#' marks a filled cell, so rows may well
    start with one.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty grid file")
    header = lines[0].split()
    if len(header) != 3:
        raise FormatError(f"grid header must be 'rows cols turn', got {lines[0]!r}")
    try:
        rows, cols, turn = (int(p) for p in header)
    except ValueError:
        raise FormatError(f"non-integer grid header {lines[0]!r}") from None
    if len(lines) - 1 != rows:
        raise FormatError(f"expected {rows} grid rows, found {len(lines) - 1}")
    filled = set()
    for r, row in enumerate(lines[1:]):
        if len(row) != cols:
            raise FormatError(f"grid row {r} has {len(row)} cells, expected {cols}")
        for c, ch in enumerate(row):
            if ch == "#":
                filled.add((r, c))
            elif ch != ".":
                raise FormatError(f"grid row {r}: unexpected character {ch!r}")
    return GridDims(rows, cols), filled, turn
