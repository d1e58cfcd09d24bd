"""Small standalone DIMACS CNF solver.

Unit propagation over two watched literals with chronological
backtracking and a static branching order. Orders of magnitude slower
than a real CDCL solver, but dependency-free, so the package still
works on a machine with no solver binary installed. The ``packit-sat``
console script speaks enough of the usual solver protocol (exit code
10/20, ``s`` status line, ``v`` model lines) that the subprocess
harness cannot tell the difference.
"""

from __future__ import annotations

import sys
import time

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"


class _OutOfTime(Exception):
    pass


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """Tolerant DIMACS reader: comments and layout quirks ignored."""
    num_vars = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        if line[0] == "%":
            # SATLIB benchmark files end with "%" and a stray 0; reading
            # past it would fabricate an empty clause
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) >= 3:
                num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
                num_vars = max(num_vars, abs(lit))
    if current:
        clauses.append(current)
    return num_vars, clauses


def solve(
    num_vars: int, clauses: list[list[int]], deadline: float | None = None
) -> tuple[str, set[int] | None]:
    """Decide satisfiability; on SAT also return the set of true variables.

    ``deadline`` is an absolute time.monotonic() value; passing it makes
    the search stop with status "unknown".
    """
    assign = [0] * (num_vars + 1)
    trail: list[int] = []
    qhead = 0

    def value(lit: int) -> int:
        v = assign[lit] if lit > 0 else -assign[-lit]
        return v

    def push(lit: int) -> None:
        assign[abs(lit)] = 1 if lit > 0 else -1
        trail.append(lit)

    # Preprocess: drop tautologies and duplicate literals, queue units.
    watched: list[list[int]] = []
    watches: dict[int, list[int]] = {}
    occurrences = [0] * (num_vars + 1)
    phase_votes = [0] * (num_vars + 1)
    for raw in clauses:
        seen = set()
        cl = []
        tautology = False
        for lit in raw:
            if -lit in seen:
                tautology = True
                break
            if lit not in seen:
                seen.add(lit)
                cl.append(lit)
        if tautology:
            continue
        if not cl:
            return UNSAT, None
        for lit in cl:
            occurrences[abs(lit)] += 1
            phase_votes[abs(lit)] += 1 if lit > 0 else -1
        if len(cl) == 1:
            lit = cl[0]
            if value(lit) == -1:
                return UNSAT, None
            if value(lit) == 0:
                push(lit)
            continue
        idx = len(watched)
        watched.append(cl)
        watches.setdefault(cl[0], []).append(idx)
        watches.setdefault(cl[1], []).append(idx)

    steps = 0

    def propagate() -> bool:
        nonlocal qhead, steps
        while qhead < len(trail):
            lit = trail[qhead]
            qhead += 1
            steps += 1
            if deadline is not None and steps % 2048 == 0:
                if time.monotonic() > deadline:
                    raise _OutOfTime
            neg = -lit
            ws = watches.get(neg)
            if not ws:
                continue
            kept: list[int] = []
            for pos, ci in enumerate(ws):
                cl = watched[ci]
                if cl[0] == neg:
                    cl[0], cl[1] = cl[1], cl[0]
                first = cl[0]
                if value(first) == 1:
                    kept.append(ci)
                    continue
                moved = False
                for k in range(2, len(cl)):
                    if value(cl[k]) != -1:
                        cl[1], cl[k] = cl[k], cl[1]
                        watches.setdefault(cl[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                if first == neg or value(first) == -1:
                    kept.extend(ws[pos + 1 :])
                    watches[neg] = kept
                    return False
                if value(first) == 0:
                    push(first)
            watches[neg] = kept
        return True

    def undo_to(mark: int) -> None:
        nonlocal qhead
        while len(trail) > mark:
            assign[abs(trail.pop())] = 0
        qhead = mark

    order = sorted(range(1, num_vars + 1), key=lambda v: -occurrences[v])
    # decision stack entries: [trail mark, decided literal, tried both phases]
    decisions: list[list] = []

    try:
        if not propagate():
            return UNSAT, None
        while True:
            chosen = 0
            for var in order:
                if assign[var] == 0:
                    chosen = var
                    break
            if chosen == 0:
                return SAT, {v for v in range(1, num_vars + 1) if assign[v] == 1}
            lit = chosen if phase_votes[chosen] >= 0 else -chosen
            decisions.append([len(trail), lit, False])
            push(lit)
            while not propagate():
                while decisions and decisions[-1][2]:
                    undo_to(decisions.pop()[0])
                if not decisions:
                    return UNSAT, None
                mark, first_try, _ = decisions[-1]
                undo_to(mark)
                decisions[-1] = [mark, -first_try, True]
                push(-first_try)
    except _OutOfTime:
        return UNKNOWN, None


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else argv
    if not args or args[0] in ("-h", "--help"):
        print("usage: packit-sat FILE.cnf [TIMEOUT_SECONDS]", file=sys.stderr)
        return 2
    with open(args[0], "r", encoding="ascii") as fh:
        num_vars, clauses = parse_dimacs(fh.read())
    deadline = None
    if len(args) > 1:
        deadline = time.monotonic() + float(args[1])
    status, model = solve(num_vars, clauses, deadline)
    print("c packit-sat: watched-literal backtracking solver")
    if status == SAT:
        print("s SATISFIABLE")
        lits = [v if (model and v in model) else -v for v in range(1, num_vars + 1)]
        for start in range(0, len(lits), 20):
            chunk = lits[start : start + 20]
            tail = " 0" if start + 20 >= len(lits) else ""
            print("v " + " ".join(str(l) for l in chunk) + tail)
        if not lits:
            print("v 0")
        return 10
    if status == UNSAT:
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


if __name__ == "__main__":
    sys.exit(main())
