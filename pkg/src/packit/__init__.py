"""PackIt! engine: rules, feasibility arithmetic, solvers and instances.

The game: on turn t, place a rectangle of area t or t+1 on the empty
cells of a grid. A game is perfect when the grid ends up fully covered.
This package answers whether boards admit perfect games (arithmetic
verdicts, SAT-backed search, exhaustive search), serves midgame
completion queries, builds the constructive two-row family, and turns
3-Partition instances into partially filled boards.

Most callers want :func:`verdict`, :func:`solve_perfect` or the CLI
(``packit --help``). The HTTP service lives in :mod:`packit.service`.
"""

from .arithmetic import (
    ArithmeticProfile,
    LARGE_GAP_IMPOSSIBLE,
    OPEN,
    PellSolution,
    SMALL_GAP_IMPOSSIBLE,
    Verdict,
    pell_gap_one_family,
    profile,
    tau,
    triangle,
    verdict,
)
from .core import (
    GameState,
    GridDims,
    Placement,
    PREFILLED,
    TwoPlayerStatus,
    VerifyReport,
    apply_placement,
    format_grid,
    format_transcript,
    from_prefilled,
    legal_placements,
    new_game,
    parse_grid,
    parse_transcript,
    two_player_status,
    verify_transcript,
)
from .encoding import (
    CnfFormula,
    DecodedPacking,
    VariableMap,
    clause_stats,
    decode_model,
    emit_dimacs,
    encode,
)
from .errors import EngineError
from .search import (
    Feasibility,
    PackingResult,
    brute_force_perfect,
    completion_query,
    construct_two_row,
    solve_perfect,
)
from .selection import (
    RectangleSelection,
    dp_table,
    enumerate_selections,
    extract_selection,
    fits,
)

__version__ = "0.1.0"

__all__ = [
    "ArithmeticProfile",
    "CnfFormula",
    "DecodedPacking",
    "EngineError",
    "Feasibility",
    "GameState",
    "GridDims",
    "LARGE_GAP_IMPOSSIBLE",
    "OPEN",
    "PREFILLED",
    "PackingResult",
    "PellSolution",
    "Placement",
    "RectangleSelection",
    "SMALL_GAP_IMPOSSIBLE",
    "TwoPlayerStatus",
    "VariableMap",
    "Verdict",
    "VerifyReport",
    "apply_placement",
    "brute_force_perfect",
    "clause_stats",
    "completion_query",
    "construct_two_row",
    "decode_model",
    "dp_table",
    "emit_dimacs",
    "encode",
    "enumerate_selections",
    "extract_selection",
    "fits",
    "format_grid",
    "format_transcript",
    "from_prefilled",
    "legal_placements",
    "new_game",
    "parse_grid",
    "parse_transcript",
    "pell_gap_one_family",
    "profile",
    "solve_perfect",
    "tau",
    "triangle",
    "two_player_status",
    "verdict",
    "verify_transcript",
]
