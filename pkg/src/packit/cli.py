"""Command-line frontend.

One subcommand per engine capability; see ``packit --help``. Outputs are
deterministic given the same solver binary, and ``--json`` switches the
human-readable forms to JSON. Engine failures exit 1 with a
``{code, message, detail}`` object on stderr; usage errors exit 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import shlex
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .arithmetic import pell_gap_one_family, profile, verdict
from .config import load_config
from .core import (
    GameState,
    GridDims,
    PREFILLED,
    apply_placement,
    format_grid,
    format_transcript,
    from_prefilled,
    legal_placements,
    new_game,
    parse_grid,
    parse_transcript,
    placement_to_dict,
    two_player_status,
    verify_transcript,
)
from .encoding import clause_stats, decode_model, emit_dimacs, encode
from .errors import EngineError, FormatError, InvalidInputError
from .reduction import build_grid, validate_partition_instance
from .search import (
    PERFECT,
    brute_force_perfect,
    completion_query,
    construct_two_row,
    solve_perfect,
)
from .selection import dp_table, extract_selection
from .solver import parse_model_text, resolve_solver


def _board_arg(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"board sides must be positive, got {n}")
    return n


def _read_text(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_or_print(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _emit(args, human: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _solver_command(args) -> Optional[list[str]]:
    spec = getattr(args, "solver", None)
    if spec:
        return shlex.split(spec)
    return None


def cmd_verdict(args) -> int:
    word = verdict(args.m, args.n)
    _emit(args, f"{word.kind}: {word.witness}", {"kind": word.kind, "witness": word.witness})
    return 0


def _profile_payload(rows: int, cols: int) -> dict:
    prof = profile(rows, cols)
    word = verdict(rows, cols)
    return {
        "rows": prof.dims.rows,
        "cols": prof.dims.cols,
        "area": prof.dims.area,
        "rect_count": prof.rect_count,
        "gap": prof.gap,
        "blocked_primes": list(prof.blocked_primes),
        "successor_prime": prof.successor_prime,
        "verdict": word.kind,
        "witness": word.witness,
    }


def cmd_profile(args) -> int:
    payload = _profile_payload(args.m, args.n)
    lines = [
        f"board           {payload['rows']}x{payload['cols']} ({payload['area']} cells)",
        f"rectangles      {payload['rect_count']}",
        f"expansion turns {payload['gap']}",
        f"blocked primes  {payload['blocked_primes'] or 'none'}",
        f"successor prime {'yes' if payload['successor_prime'] else 'no'}",
        f"verdict         {payload['verdict']} ({payload['witness']})",
    ]
    _emit(args, "\n".join(lines), payload)
    return 0


def cmd_solve(args) -> int:
    dims = GridDims(args.n, args.n)
    result = solve_perfect(
        dims,
        time_budget=args.budget,
        selection_retries=args.retries,
        solver_command=_solver_command(args),
    )
    transcript = list(result.transcript or ())
    text = format_transcript(transcript)
    if args.json:
        print(
            json.dumps(
                {
                    "status": result.status,
                    "seconds": round(result.seconds, 3),
                    "detail": result.detail,
                    "transcript": [placement_to_dict(p) for p in transcript],
                    "solver_stats": result.solver_stats,
                },
                sort_keys=True,
            )
        )
        if args.out and result.status == PERFECT:
            Path(args.out).write_text(text, encoding="utf-8")
        return 0
    print(f"{result.status} in {result.seconds:.2f}s ({result.detail})", file=sys.stderr)
    if result.status == PERFECT:
        _write_or_print(text, args.out)
    return 0


def cmd_encode(args) -> int:
    dims = GridDims(args.n, args.n)
    selection = extract_selection(dp_table(dims.rows, dims.cols))
    if selection is None:
        raise InvalidInputError(
            f"{dims} admits no rectangle selection; nothing to encode"
        )
    formula, varmap = encode(dims, selection)
    _write_or_print(emit_dimacs(formula), args.out)
    stats = clause_stats(formula, varmap)
    print(
        f"{stats['vars']} vars, {stats['clauses']} clauses",
        file=sys.stderr,
    )
    return 0


def cmd_decode(args) -> int:
    dims = GridDims(args.n, args.n)
    selection = extract_selection(dp_table(dims.rows, dims.cols))
    if selection is None:
        raise InvalidInputError(f"{dims} admits no rectangle selection")
    formula, varmap = encode(dims, selection)
    if args.cnf:
        header = next(
            (ln for ln in _read_text(args.cnf).splitlines() if ln.startswith("p ")),
            "",
        )
        expected = f"p cnf {formula.num_vars} {len(formula.clauses)}"
        if header.strip() != expected:
            raise InvalidInputError(
                f"CNF header {header!r} does not match this board ({expected!r})"
            )
    parsed = parse_model_text(_read_text(args.model))
    if parsed.status == "unsat":
        raise InvalidInputError("model file reports unsatisfiable; nothing to decode")
    if not parsed.saw_literals:
        raise InvalidInputError("model file contains no assignment")
    moves = decode_model(varmap, parsed.true_vars).to_placements()
    report = verify_transcript(dims, moves)
    if not report.perfect:
        raise InvalidInputError(f"decoded transcript is not perfect: {report.failure}")
    if args.json:
        print(json.dumps({"transcript": [placement_to_dict(p) for p in moves]}, sort_keys=True))
    else:
        sys.stdout.write(format_transcript(moves))
    return 0


def cmd_verify(args) -> int:
    moves = parse_transcript(_read_text(args.file))
    if args.grid:
        dims, filled, start_turn = parse_grid(_read_text(args.grid))
        if (dims.rows, dims.cols) != (args.m, args.n):
            raise InvalidInputError(
                f"grid file is {dims}, command line says {args.m}x{args.n}"
            )
        report = verify_transcript(dims, moves, prefilled=filled, start_turn=start_turn)
    else:
        dims = GridDims(args.m, args.n)
        report = verify_transcript(dims, moves)
    if report.perfect:
        _emit(args, "perfect", {"valid": True, "perfect": True})
        return 0
    if report.valid:
        covered = sum(p.area for p in moves)
        _emit(
            args,
            f"valid ({covered} of {dims.area} cells covered)",
            {"valid": True, "perfect": False, "covered": covered},
        )
        return 0
    _emit(
        args,
        f"invalid: {report.failure}",
        {"valid": False, "perfect": False, "failure": report.failure},
    )
    print(
        json.dumps({"code": "invalid-input", "message": report.failure, "detail": None}),
        file=sys.stderr,
    )
    return 1


def _render_state(state: GameState) -> str:
    rows = []
    for r in range(state.dims.rows):
        chars = []
        for c in range(state.dims.cols):
            turn = state.occupied.get((r, c))
            if turn is None:
                chars.append(".")
            elif turn == PREFILLED:
                chars.append("#")
            else:
                chars.append(str(turn % 10))
        rows.append("".join(chars))
    return "\n".join(rows)


def cmd_play(args) -> int:
    dims = GridDims(args.n, args.n)
    state = new_game(dims)
    history = [state]
    interactive = sys.stdin.isatty()
    word = verdict(dims.rows, dims.cols)
    print(f"PackIt! on {dims}  [{word.kind}]")
    print("moves: 'h v x y' or 't h v x y'; commands: legal, undo, hint, quit")
    while True:
        print()
        print(_render_state(state))
        if state.full:
            print("perfect game!")
            return 0
        moves = legal_placements(state)
        if not moves:
            status = two_player_status(state)
            if args.two_player:
                print(f"no legal move for player {status.mover}: player {status.loser} loses")
            else:
                print("no legal moves remain")
            return 0
        mover = f" (player {1 if state.turn % 2 else 2})" if args.two_player else ""
        if interactive:
            sys.stdout.write(f"turn {state.turn}{mover}, area {state.turn} or {state.turn + 1} > ")
            sys.stdout.flush()
        line = sys.stdin.readline()
        if not line:
            print("bye")
            return 0
        words = line.split()
        if not words:
            continue
        if words[0] in ("quit", "exit", "q"):
            print("bye")
            return 0
        if words[0] == "legal":
            for p in moves:
                print(f"  {p.h} {p.v} {p.x} {p.y}")
            continue
        if words[0] == "undo":
            if len(history) > 1:
                history.pop()
                state = history[-1]
            else:
                print("nothing to undo")
            continue
        if words[0] == "hint":
            budget = float(words[1]) if len(words) > 1 else 5.0
            answer = completion_query(state, time_budget=budget)
            if answer.witness:
                p = answer.witness[0]
                print(f"{answer.answer}: try {p.h} {p.v} {p.x} {p.y}")
            else:
                print(f"{answer.answer}: {answer.detail}")
            continue
        try:
            parts = [int(w) for w in words]
        except ValueError:
            print(f"did not understand {line.strip()!r}")
            continue
        if len(parts) == 4:
            parts = [state.turn] + parts
        if len(parts) != 5:
            print("need 'h v x y' or 't h v x y'")
            continue
        from .core import Placement

        try:
            state = apply_placement(state, Placement(*parts))
        except EngineError as err:
            print(f"rejected ({err.code}): {err.message}")
            continue
        history.append(state)


def cmd_tworow(args) -> int:
    moves = construct_two_row(args.n)
    dims = GridDims(2, args.n * args.n // 2)
    if args.json:
        print(
            json.dumps(
                {
                    "rows": dims.rows,
                    "cols": dims.cols,
                    "transcript": [placement_to_dict(p) for p in moves],
                },
                sort_keys=True,
            )
        )
    else:
        sys.stdout.write(format_transcript(moves))
    return 0


def cmd_reduce(args) -> int:
    try:
        values = [int(part) for part in args.set.split(",") if part.strip()]
    except ValueError:
        raise FormatError(f"--set wants comma-separated integers, got {args.set!r}") from None
    instance = validate_partition_instance(values)
    reduced = build_grid(instance)
    text = format_grid(reduced.dims, reduced.filled, start_turn=1)
    if args.json:
        print(
            json.dumps(
                {
                    "values": list(instance.values),
                    "target": instance.target,
                    "rows": reduced.dims.rows,
                    "cols": reduced.dims.cols,
                    "holes": reduced.holes,
                    "gadgets": [
                        {"kind": g.kind, "col": g.col, "hole": g.hole}
                        for g in reduced.gadgets
                    ],
                },
                sort_keys=True,
            )
        )
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        return 0
    _write_or_print(text, args.out)
    print(
        f"{reduced.dims} board, {reduced.holes} holes, target sum {instance.target}",
        file=sys.stderr,
    )
    return 0


def cmd_pell(args) -> int:
    members = pell_gap_one_family(args.count)
    if args.json:
        print(
            json.dumps(
                [{"n": m.n, "t": m.t, "generation": m.generation} for m in members]
            )
        )
    else:
        for m in members:
            print(f"{m.n} {m.t}")
    return 0


def _parse_range(text: str) -> range:
    parts = text.split("..")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"range must look like 5..50, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like 5..50, got {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return range(lo, hi + 1)


def cmd_bench(args) -> int:
    fieldnames = ["n", "vars", "clauses", "solve_seconds", "status"]
    rows = []
    command = _solver_command(args)
    for n in args.sizes:
        dims = GridDims(n, n)
        selection = extract_selection(dp_table(n, n))
        if selection is None:
            row = {
                "n": n,
                "vars": 0,
                "clauses": 0,
                "solve_seconds": 0.0,
                "status": verdict(n, n).kind,
            }
        else:
            formula, varmap = encode(dims, selection)
            stats = clause_stats(formula, varmap)
            result = solve_perfect(
                dims,
                time_budget=args.budget,
                selection_retries=args.retries,
                solver_command=command,
            )
            row = {
                "n": n,
                "vars": stats["vars"],
                "clauses": stats["clauses"],
                "solve_seconds": round(result.seconds, 3),
                "status": result.status,
            }
        rows.append(row)
        print(
            f"n={row['n']:>3} {row['status']:<24} vars={row['vars']:>8} "
            f"clauses={row['clauses']:>9} {row['solve_seconds']:>8.3f}s",
            file=sys.stderr,
        )
    if args.report:
        report = Path(args.report)
        with open(report, "w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=fieldnames)
            writer.writeheader()
            writer.writerows(rows)
        from .figures import render_bench

        figures = render_bench(rows, report.with_suffix(""))
        for path in figures:
            print(f"wrote {path}", file=sys.stderr)
        print(f"wrote {report}", file=sys.stderr)
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    return 0


def cmd_render(args) -> int:
    moves = parse_transcript(_read_text(args.file))
    prefilled: set = set()
    if args.grid:
        dims, prefilled, start_turn = parse_grid(_read_text(args.grid))
        report = verify_transcript(dims, moves, prefilled=prefilled, start_turn=start_turn)
    else:
        if not args.dims:
            raise InvalidInputError("render needs --dims ROWSxCOLS or --grid FILE")
        try:
            rows, cols = (int(p) for p in args.dims.lower().split("x"))
        except ValueError:
            raise FormatError(f"--dims wants ROWSxCOLS, got {args.dims!r}") from None
        dims = GridDims(rows, cols)
        report = verify_transcript(dims, moves)
    if not report.valid:
        raise InvalidInputError(f"transcript does not replay: {report.failure}")
    from .figures import render_board

    out = render_board(dims, moves, args.out, prefilled=prefilled)
    print(f"wrote {out}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    config = load_config(args.config)
    from .service import create_app

    import uvicorn

    app = create_app(config)
    port = args.port if args.port is not None else config.port
    uvicorn.run(app, host=args.host, port=port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="packit",
        description="Rectangle-packing game engine: verdicts, solvers, instances.",
    )
    parser.add_argument("--version", action="version", version=f"packit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON output")

    p = sub.add_parser("verdict", parents=[common], help="feasibility verdict for a board")
    p.add_argument("m", type=_board_arg)
    p.add_argument("n", type=_board_arg)
    p.set_defaults(func=cmd_verdict)

    p = sub.add_parser("profile", parents=[common], help="forced-count profile for a board")
    p.add_argument("m", type=_board_arg)
    p.add_argument("n", type=_board_arg)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("solve", parents=[common], help="find a perfect game on n x n")
    p.add_argument("n", type=_board_arg)
    p.add_argument("--budget", type=float, default=600.0, help="seconds (default 600)")
    p.add_argument("--retries", type=int, default=8, help="extra pattern attempts (default 8)")
    p.add_argument("--out", help="write the transcript here instead of stdout")
    p.add_argument("--solver", help="solver command line override")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("encode", parents=[common], help="emit the DIMACS formula for n x n")
    p.add_argument("n", type=_board_arg)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="decode a model file into a transcript")
    p.add_argument("n", type=_board_arg)
    p.add_argument("--cnf", help="formula file to cross-check against")
    p.add_argument("--model", required=True, help="solver output with v-lines, or '-'")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", parents=[common], help="replay a transcript from stdin or a file")
    p.add_argument("m", type=_board_arg)
    p.add_argument("n", type=_board_arg)
    p.add_argument("--file", help="transcript path (default stdin)")
    p.add_argument("--grid", help="partial-grid file giving prefilled cells")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("play", parents=[common], help="play on the terminal")
    p.add_argument("n", type=_board_arg)
    p.add_argument("--two-player", action="store_true", help="hot-seat two player scoring")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("tworow", parents=[common], help="constructive 2 x n^2/2 perfect game")
    p.add_argument("n", type=_board_arg)
    p.set_defaults(func=cmd_tworow)

    p = sub.add_parser("reduce", parents=[common], help="3-partition instance to partial grid")
    p.add_argument("--set", required=True, metavar="A,B,C,...", help="comma separated elements")
    p.add_argument("--out", help="grid file path (default stdout)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("pell", parents=[common], help="square boards forced to one expansion turn")
    p.add_argument("count", type=_board_arg)
    p.set_defaults(func=cmd_pell)

    p = sub.add_parser("bench", parents=[common], help="encode and solve a size range")
    p.add_argument("sizes", type=_parse_range, metavar="LO..HI")
    p.add_argument("--report", help="CSV path; charts are written next to it")
    p.add_argument("--budget", type=float, default=600.0)
    p.add_argument("--retries", type=int, default=8)
    p.add_argument("--solver", help="solver command line override")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", parents=[common], help="draw a transcript as a PNG")
    p.add_argument("--dims", help="board as ROWSxCOLS")
    p.add_argument("--grid", help="partial-grid file giving board and prefilled cells")
    p.add_argument("--file", help="transcript path (default stdin)")
    p.add_argument("--out", required=True, help="PNG path")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--config", help="TOML config path")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, help="override the configured port")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EngineError as err:
        print(json.dumps(err.to_payload()), file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
