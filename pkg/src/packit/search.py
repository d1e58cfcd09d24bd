"""Solvers: SAT-backed perfect play, exhaustive search, completions.

Three ways to answer "can this board be packed perfectly":

* solve_perfect drives the CNF pipeline: pick an expansion pattern,
  encode, hand to the SAT solver, decode and replay the witness. The
  pattern and the factorization of each rectangle are chosen outside the
  encoding, so unsatisfiable attempts are retried with the next pattern.
* brute_force_perfect explores every packing directly. It is the oracle
  the pipeline is tested against and only reasonable for small boards.
* completion_query asks the same question from a midgame position,
  answering Yes/No/Unknown rather than producing a status per attempt.

construct_two_row builds, without any search, a perfect game for the
2 x n^2/2 board (n even); these boards realize every gap value, which
makes them good large test subjects.

Exhaustive search keeps itself honest with two classic devices: the
next rectangle must cover the first empty cell in row-major order
(any packing can be reordered cell by cell, so this loses nothing), and
a branch dies as soon as no turn count can make the remaining area.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .arithmetic import tau, triangle, verdict
from .core import GameState, GridDims, Placement, verify_transcript
from .encoding import clause_stats, decode_model, emit_dimacs, encode
from .errors import DecodeError, InvalidDimsError, InvalidInputError
from .selection import (
    RectangleSelection,
    dp_table,
    extract_selection,
    fits,
    selections_from_table,
    shape_options,
    window_table,
)
from .solver import SAT, UNSAT, resolve_solver, run_solver

PERFECT = "Perfect"
ARITHMETICALLY_IMPOSSIBLE = "ArithmeticallyImpossible"
UNSAT_RESULT = "Unsat"
TIMEOUT = "Timeout"

YES = "Yes"
NO = "No"
UNKNOWN_ANSWER = "Unknown"

#: Positions with at most this many empty cells are completed by exhaustive
#: search, which can answer No; larger remainders go through the SAT pipeline.
BRUTE_THRESHOLD = 36

DEFAULT_NODE_CAP = 20_000_000


@dataclass(frozen=True)
class PackingResult:
    """Outcome of a perfect-packing attempt.

    ``transcript`` is a replayable move list when status is Perfect and
    None otherwise. ``solver_stats`` carries whatever the backend wants
    to report (attempt counts, clause totals, node counts).
    """

    status: str
    transcript: Optional[tuple[Placement, ...]]
    seconds: float
    detail: str = ""
    solver_stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == PERFECT


@dataclass(frozen=True)
class Feasibility:
    """Answer to a completion query.

    ``witness`` holds the continuation moves when the answer is Yes.
    No is only ever produced by exact reasoning; a lost race against the
    budget degrades to Unknown.
    """

    answer: str
    witness: Optional[tuple[Placement, ...]]
    detail: str = ""


class _BudgetExceeded(Exception):
    """Internal: node cap or deadline hit inside exhaustive search."""


@dataclass
class _Budget:
    node_cap: Optional[int]
    deadline: Optional[float]
    nodes: int = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.node_cap is not None and self.nodes > self.node_cap:
            raise _BudgetExceeded
        if self.deadline is not None and self.nodes % 4096 == 0:
            if time.monotonic() > self.deadline:
                raise _BudgetExceeded


def _turn_options(dims: GridDims, turn: int) -> tuple[int, ...]:
    """Areas turn ``turn`` can actually take on this board, ascending."""
    return tuple(a for a in (turn, turn + 1) if fits(a, dims.rows, dims.cols))


def _turn_bracket(dims: GridDims, start_turn: int, remaining: int) -> Optional[int]:
    """Number of further turns a completion must use, or None.

    With k turns from ``start_turn`` the reachable totals lie between the
    sum of the smallest and the sum of the largest per-turn areas;
    consecutive k-intervals are separated by at least the turn number, so
    at most one k fits and the area alone pins the turn count.
    """
    lo = hi = 0
    k = 0
    while True:
        if lo <= remaining <= hi:
            return k
        options = _turn_options(dims, start_turn + k)
        if not options or lo > remaining:
            return None
        lo += options[0]
        hi += options[-1]
        k += 1


def _oriented_shapes(dims: GridDims, area: int) -> tuple[tuple[int, int], ...]:
    """(h, v) pairs of ``area`` that fit the board, sorted by width."""
    out = []
    for h in range(1, area + 1):
        if area % h:
            continue
        v = area // h
        if h <= dims.cols and v <= dims.rows:
            out.append((h, v))
    return tuple(out)


def _anchored_pack(
    dims: GridDims,
    occupied: int,
    turns: Sequence[int],
    budget: _Budget,
) -> Optional[list[Placement]]:
    """Exhaustive search for a completion, first-empty-cell anchored.

    ``occupied`` is a bitboard (bit r*cols + c); ``turns`` are the turn
    numbers still to be played, each exactly once. The rectangle covering
    the first free cell cannot extend up or left past it, so its top-left
    corner sits on that cell; crucially it may belong to ANY unplayed
    turn, so the branching at the anchor runs over the whole unused set.
    Returns a completion's moves sorted by turn, None when provably none
    exists; raises _BudgetExceeded when the caps bite first.
    """
    cols = dims.cols
    full = (1 << dims.area) - 1
    turn_list = tuple(turns)
    count = len(turn_list)
    area_options = [_turn_options(dims, t) for t in turn_list]
    shapes_cache: dict[int, tuple[tuple[int, int], ...]] = {}
    reach_cache: dict[int, int] = {}
    dead: set[tuple[int, int]] = set()

    def shapes(area: int) -> tuple[tuple[int, int], ...]:
        got = shapes_cache.get(area)
        if got is None:
            got = shapes_cache[area] = _oriented_shapes(dims, area)
        return got

    def reach_bits(unused: int) -> int:
        """Bitset of totals reachable using every turn in ``unused`` once."""
        got = reach_cache.get(unused)
        if got is None:
            got = 1
            for i in range(count):
                if unused >> i & 1:
                    acc = 0
                    for a in area_options[i]:
                        acc |= got << a
                    got = acc
            reach_cache[unused] = got
        return got

    def descend(occ: int, unused: int, remaining: int) -> Optional[list[Placement]]:
        budget.tick()
        if remaining == 0:
            # a perfect completion plays out every turn of the window
            return [] if unused == 0 else None
        if not reach_bits(unused) >> remaining & 1:
            return None
        key = (occ, unused)
        if key in dead:
            return None
        free = ~occ & full
        anchor = (free & -free).bit_length() - 1
        r0, c0 = divmod(anchor, cols)
        for i in range(count):
            if not unused >> i & 1:
                continue
            for area in area_options[i]:
                if area > remaining:
                    continue
                for h, v in shapes(area):
                    if c0 + h > dims.cols or r0 + v > dims.rows:
                        continue
                    mask = 0
                    strip = ((1 << h) - 1) << c0
                    for r in range(r0, r0 + v):
                        mask |= strip << (r * cols)
                    if mask & occ:
                        continue
                    rest = descend(occ | mask, unused & ~(1 << i), remaining - area)
                    if rest is not None:
                        rest.append(Placement(turn_list[i], h, v, c0, r0))
                        return rest
        if len(dead) < 1_000_000:
            dead.add(key)
        return None

    found = descend(occupied, (1 << count) - 1, dims.area - bin(occupied).count("1"))
    if found is None:
        return None
    found.sort(key=lambda p: p.turn)
    return found


def brute_force_perfect(
    dims: GridDims, node_cap: Optional[int] = DEFAULT_NODE_CAP
) -> PackingResult:
    """Search every packing of an empty board; exact but exponential.

    Perfect with a transcript, Unsat when the whole tree is exhausted, or
    Timeout when ``node_cap`` search nodes were not enough to decide.
    """
    if dims.rows < 1 or dims.cols < 1:
        raise InvalidDimsError(f"grid dimensions must be positive, got {dims}")
    budget = _Budget(node_cap=node_cap, deadline=None)
    started = time.monotonic()
    turn_count = _turn_bracket(dims, 1, dims.area)
    if turn_count is None:
        return PackingResult(
            status=UNSAT_RESULT,
            transcript=None,
            seconds=time.monotonic() - started,
            detail="no turn count can cover the board area",
            solver_stats={"nodes": 0},
        )
    try:
        moves = _anchored_pack(dims, 0, range(1, turn_count + 1), budget)
    except _BudgetExceeded:
        return PackingResult(
            status=TIMEOUT,
            transcript=None,
            seconds=time.monotonic() - started,
            detail=f"gave up after {budget.nodes} search nodes",
            solver_stats={"nodes": budget.nodes},
        )
    elapsed = time.monotonic() - started
    if moves is None:
        return PackingResult(
            status=UNSAT_RESULT,
            transcript=None,
            seconds=elapsed,
            detail=f"exhausted the search tree in {budget.nodes} nodes",
            solver_stats={"nodes": budget.nodes},
        )
    report = verify_transcript(dims, moves)
    if not report.perfect:
        raise DecodeError(f"search produced a bad packing: {report.failure}")
    return PackingResult(
        status=PERFECT,
        transcript=tuple(moves),
        seconds=elapsed,
        detail=f"found in {budget.nodes} nodes",
        solver_stats={"nodes": budget.nodes},
    )


def _shape_variants(selection: RectangleSelection) -> Iterator[RectangleSelection]:
    """All factorization choices for a fixed area pattern, canonical first.

    The encoding fixes one (h, v) pair per rectangle and only decides its
    rotation, so trying 3x4 never tries 2x6; those alternatives are
    separate attempts produced here.
    """
    dims = selection.dims
    per_rect = [shape_options(a, dims.rows, dims.cols) for a in selection.areas()]
    for combo in itertools.product(*per_rect):
        yield RectangleSelection(
            dims=dims, rects=tuple(combo), start_turn=selection.start_turn
        )


def _attempt_ladder(
    selections: Sequence[RectangleSelection], cap: int
) -> Iterator[RectangleSelection]:
    """At most ``cap`` encode attempts: patterns major, factorizations minor."""
    produced = 0
    for selection in selections:
        for variant in _shape_variants(selection):
            if produced >= cap:
                return
            produced += 1
            yield variant


def solve_perfect(
    dims: GridDims,
    time_budget: float = 600.0,
    selection_retries: int = 8,
    solver_command: Optional[Sequence[str]] = None,
) -> PackingResult:
    """Find a perfect game via the CNF pipeline.

    Tries up to ``selection_retries`` (pattern, factorization) attempts
    inside ``time_budget`` seconds total. A satisfying model is decoded
    and replayed before being reported; Unsat means every attempt was
    refuted (the detail says whether that exhausted all patterns);
    Timeout means the budget ran out first.
    """
    if dims.rows < 1 or dims.cols < 1:
        raise InvalidDimsError(f"grid dimensions must be positive, got {dims}")
    started = time.monotonic()
    deadline = started + time_budget
    table = dp_table(dims.rows, dims.cols)
    if extract_selection(table) is None:
        word = verdict(dims.rows, dims.cols)
        return PackingResult(
            status=ARITHMETICALLY_IMPOSSIBLE,
            transcript=None,
            seconds=time.monotonic() - started,
            detail=f"{word.kind}: {word.witness}",
            solver_stats={"attempts": 0},
        )
    command = list(solver_command) if solver_command else resolve_solver()
    # the first attempt plus up to selection_retries retries; one extra
    # ladder slot so a clean finish is distinguishable from the cap
    max_attempts = selection_retries + 1
    selections = selections_from_table(table, max_attempts + 1)
    attempts = 0
    timed_out = False
    ladder_done = True
    for candidate in _attempt_ladder(selections, max_attempts + 1):
        if attempts >= max_attempts:
            ladder_done = False
            break
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            timed_out = True
            break
        attempts += 1
        formula, varmap = encode(dims, candidate)
        outcome = run_solver(emit_dimacs(formula), command, time_budget=remaining)
        if outcome.status == SAT:
            moves = decode_model(varmap, outcome.model).to_placements()
            report = verify_transcript(dims, moves)
            if not report.perfect:
                raise DecodeError(f"decoded packing fails replay: {report.failure}")
            stats = clause_stats(formula, varmap)
            return PackingResult(
                status=PERFECT,
                transcript=tuple(moves),
                seconds=time.monotonic() - started,
                detail=f"attempt {attempts} satisfiable",
                solver_stats={
                    "attempts": attempts,
                    "vars": stats["vars"],
                    "clauses": stats["clauses"],
                    "solver": " ".join(outcome.command),
                    "solve_seconds": outcome.seconds,
                },
            )
        if outcome.status == UNSAT:
            continue
        timed_out = True
        break
    elapsed = time.monotonic() - started
    if timed_out:
        return PackingResult(
            status=TIMEOUT,
            transcript=None,
            seconds=elapsed,
            detail=f"time budget exhausted after {attempts} attempts",
            solver_stats={"attempts": attempts},
        )
    if ladder_done:
        detail = f"all {attempts} pattern attempts unsatisfiable"
    else:
        detail = (
            f"first {attempts} pattern attempts unsatisfiable "
            "(more exist beyond the retry cap)"
        )
    return PackingResult(
        status=UNSAT_RESULT,
        transcript=None,
        seconds=elapsed,
        detail=detail,
        solver_stats={"attempts": attempts},
    )


def completion_query(
    state: GameState,
    time_budget: float = 60.0,
    brute_threshold: int = BRUTE_THRESHOLD,
    selection_retries: int = 8,
    solver_command: Optional[Sequence[str]] = None,
) -> Feasibility:
    """Can the current position still end in a perfect game?

    Yes comes with a replayable continuation. No is exact: either no
    turn count matches the remaining area, no expansion pattern fits, or
    a small remainder was searched exhaustively. Everything the budget
    cuts short is Unknown.
    """
    dims = state.dims
    remaining = dims.area - state.covered
    if remaining == 0:
        return Feasibility(answer=YES, witness=(), detail="board already full")
    window = _turn_bracket(dims, state.turn, remaining)
    if window is None:
        return Feasibility(
            answer=NO,
            witness=None,
            detail=(
                f"no turn count from turn {state.turn} can cover "
                f"{remaining} remaining cells"
            ),
        )
    deadline = time.monotonic() + time_budget
    if remaining <= brute_threshold:
        occupied = 0
        for (r, c) in state.occupied:
            occupied |= 1 << (r * dims.cols + c)
        budget = _Budget(node_cap=None, deadline=deadline)
        try:
            moves = _anchored_pack(
                dims, occupied, range(state.turn, state.turn + window), budget
            )
        except _BudgetExceeded:
            return Feasibility(
                answer=UNKNOWN_ANSWER,
                witness=None,
                detail=f"search ran out of time after {budget.nodes} nodes",
            )
        if moves is None:
            return Feasibility(
                answer=NO,
                witness=None,
                detail=f"exhausted all completions in {budget.nodes} nodes",
            )
        return Feasibility(
            answer=YES, witness=tuple(moves), detail=f"found in {budget.nodes} nodes"
        )
    table = window_table(dims, state.turn, window, remaining)
    selections = selections_from_table(table, selection_retries)
    if not selections:
        return Feasibility(
            answer=NO,
            witness=None,
            detail=(
                f"no expansion pattern over {window} turns covers "
                f"{remaining} remaining cells"
            ),
        )
    command = list(solver_command) if solver_command else resolve_solver()
    blocked = sorted(state.occupied)
    attempts = 0
    for candidate in _attempt_ladder(selections, selection_retries):
        budget_left = deadline - time.monotonic()
        if budget_left <= 0:
            return Feasibility(
                answer=UNKNOWN_ANSWER,
                witness=None,
                detail=f"time budget exhausted after {attempts} attempts",
            )
        attempts += 1
        formula, varmap = encode(dims, candidate, blocked_cells=blocked)
        outcome = run_solver(emit_dimacs(formula), command, time_budget=budget_left)
        if outcome.status == SAT:
            moves = decode_model(varmap, outcome.model).to_placements()
            report = verify_transcript(
                dims, moves, prefilled=state.occupied, start_turn=state.turn
            )
            if not report.perfect:
                raise DecodeError(f"decoded completion fails replay: {report.failure}")
            return Feasibility(
                answer=YES,
                witness=tuple(moves),
                detail=f"attempt {attempts} satisfiable",
            )
        if outcome.status != UNSAT:
            return Feasibility(
                answer=UNKNOWN_ANSWER,
                witness=None,
                detail=f"solver gave up on attempt {attempts}",
            )
    return Feasibility(
        answer=UNKNOWN_ANSWER,
        witness=None,
        detail=(
            f"{attempts} pattern attempts unsatisfiable; refutation is not "
            "exhaustive at this size"
        ),
    )


def construct_two_row(n: int) -> list[Placement]:
    """Perfect game on the 2 x n^2/2 board for even n, no search involved.

    Every rectangle is a one-row strip. Turns 1..n-1 start in the top
    row and the rest in the bottom row; depending on how many expansion
    turns the area forces, a couple of turns switch rows so both rows
    come out to exactly n^2/2. The number of expanded turns always equals
    the board's forced expansion count. The two smallest boards are
    written out literally; the general scheme starts at n = 6.
    """
    if n < 2 or n % 2:
        raise InvalidInputError(f"two-row boards need an even n >= 2, got {n}")
    if n == 2:
        return [Placement(1, 2, 1, 0, 0), Placement(2, 2, 1, 0, 1)]
    if n == 4:
        return [
            Placement(1, 2, 1, 0, 0),
            Placement(2, 2, 1, 2, 0),
            Placement(3, 3, 1, 0, 1),
            Placement(4, 4, 1, 4, 0),
            Placement(5, 5, 1, 3, 1),
        ]
    cols = n * n // 2
    rect_count = tau(n * n)
    gap = n * n - triangle(rect_count)
    half = n // 2
    row_one = set(range(1, n))
    row_two = set(range(n, rect_count + 1))
    if gap <= half:
        expanded = set(range(1, gap + 1))
        if gap < half:
            # top row is n/2 - gap cells short: trade its strip of length
            # n/2 + gap for the bottom row's strip of length n
            row_one.discard(half + gap)
            row_two.add(half + gap)
            row_two.discard(n)
            row_one.add(n)
    elif gap < n - 1:
        # expanding gap of the first gap+1 turns overshoots the top row by
        # exactly i cells, so turn i moves down un-expanded
        i = gap - half
        row_one.discard(i)
        row_two.add(i)
        expanded = set(range(1, gap + 2)) - {i}
    else:
        # every top-row turn expands, the rest of the gap expands the
        # first bottom-row turns, and moving turn n/2 - 2 down rebalances
        expanded = set(range(1, gap + 1))
        i = half - 2
        row_one.discard(i)
        row_two.add(i)

    def strip(turn: int) -> int:
        return turn + 1 if turn in expanded else turn

    assert sum(strip(t) for t in row_one) == cols
    assert sum(strip(t) for t in row_two) == cols
    moves = []
    for y, turns in enumerate((row_one, row_two)):
        x = 0
        for turn in sorted(turns):
            width = strip(turn)
            moves.append(Placement(turn, width, 1, x, y))
            x += width
    moves.sort(key=lambda p: p.turn)
    return moves
