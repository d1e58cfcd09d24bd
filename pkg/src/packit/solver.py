"""Subprocess harness for external DIMACS SAT solvers.

The solver is any executable taking a CNF path and answering in the
usual competition style: an ``s SATISFIABLE`` / ``s UNSATISFIABLE``
status line and ``v`` model lines (exit codes 10/20 are also
understood). Some solvers write the model to an answer file next to the
input instead of stdout; the harness runs in a scratch directory and
picks those up too.

Resolution order for which binary to run:

1. PACKIT_SOLVER environment variable (a command line, split like a shell),
2. ``solver_path`` from the config file,
3. well-known names on PATH,
4. the bundled pure-Python fallback (slow, but always there).

An explicitly configured solver that does not exist is an error rather
than a silent fallback.
"""

from __future__ import annotations

import math
import os
import shlex
import shutil
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .errors import SolverError

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"

#: PATH candidates, best first. splr is the one the test environment installs.
WELL_KNOWN_SOLVERS = (
    "kissat",
    "cadical",
    "cryptominisat5",
    "glucose",
    "minisat",
    "splr",
)


@dataclass(frozen=True)
class ParsedOutput:
    """Status and assignment scraped from solver text."""

    status: Optional[str]
    true_vars: set[int]
    saw_literals: bool


@dataclass(frozen=True)
class SolverResult:
    status: str
    model: Optional[set[int]]
    seconds: float
    command: tuple[str, ...]


def fallback_command() -> list[str]:
    """The bundled Python solver, run as a subprocess like any other."""
    return [sys.executable, "-m", "packit.dpll"]


def resolve_solver(configured_path: Optional[str] = None) -> list[str]:
    """Pick the solver command line per the resolution order above."""
    env_value = os.environ.get("PACKIT_SOLVER", "").strip()
    if env_value:
        command = shlex.split(env_value)
        if not command or shutil.which(command[0]) is None:
            raise SolverError(
                f"PACKIT_SOLVER points at {command[0] if command else env_value!r}, "
                "which is not an executable"
            )
        return command
    if configured_path:
        command = shlex.split(configured_path)
        if not command or shutil.which(command[0]) is None:
            raise SolverError(
                f"configured solver {configured_path!r} is not an executable"
            )
        return command
    for name in WELL_KNOWN_SOLVERS:
        if shutil.which(name):
            return [name]
    return fallback_command()


def parse_model_text(text: str) -> ParsedOutput:
    """Extract status and true variables from solver output.

    Accepts competition-style output (``s``/``v`` lines) as well as a
    bare list of signed literals, which is what a hand-saved model file
    looks like. Bare lines only count when every token is an integer, so
    progress noise from chatty solvers cannot leak into the model.
    """
    status: Optional[str] = None
    true_vars: set[int] = set()
    saw_literals = False

    def consume(tokens: Sequence[str]) -> None:
        nonlocal saw_literals
        for tok in tokens:
            lit = int(tok)
            if lit != 0:
                saw_literals = True
            if lit > 0:
                true_vars.add(lit)

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("p"):
            continue
        if line.startswith("s"):
            parts = line.split()
            token = parts[1].upper() if len(parts) > 1 else ""
            if token.startswith("UNSAT"):
                status = UNSAT
            elif token.startswith("SAT"):
                status = SAT
            elif token.startswith("UNKNOWN"):
                status = UNKNOWN
            continue
        if line.startswith("v ") or line == "v":
            consume(line.split()[1:])
            continue
        tokens = line.split()
        try:
            ints = [int(tok) for tok in tokens]
        except ValueError:
            continue
        consume(tokens)
    return ParsedOutput(status=status, true_vars=true_vars, saw_literals=saw_literals)


def run_solver(
    dimacs_text: str,
    command: Optional[Sequence[str]] = None,
    time_budget: Optional[float] = None,
) -> SolverResult:
    """Run one CNF through the external solver.

    Returns UNKNOWN when the budget runs out; raises SolverError when the
    process cannot be run or its output makes no sense.
    """
    cmd = list(command) if command else resolve_solver()
    if time_budget is not None and not math.isfinite(time_budget):
        time_budget = None
    started = time.monotonic()
    with tempfile.TemporaryDirectory(prefix="packit-cnf-") as scratch:
        cnf_path = Path(scratch) / "problem.cnf"
        cnf_path.write_text(dimacs_text, encoding="ascii")
        try:
            proc = subprocess.run(
                cmd + [cnf_path.name],
                cwd=scratch,
                capture_output=True,
                text=True,
                errors="replace",
                timeout=time_budget,
            )
        except subprocess.TimeoutExpired:
            return SolverResult(
                status=UNKNOWN,
                model=None,
                seconds=time.monotonic() - started,
                command=tuple(cmd),
            )
        except OSError as err:
            raise SolverError(f"cannot run solver {cmd[0]}: {err}") from err
        parsed = parse_model_text(proc.stdout)
        status = parsed.status
        true_vars = parsed.true_vars
        saw_model = parsed.saw_literals
        if status in (SAT, None) and not saw_model:
            # some solvers (splr among them) leave the model in an answer
            # file beside the input rather than on stdout
            for extra in sorted(Path(scratch).iterdir()):
                if extra.name == cnf_path.name:
                    continue
                from_file = parse_model_text(
                    extra.read_text(encoding="ascii", errors="replace")
                )
                if from_file.saw_literals and from_file.status in (SAT, None):
                    true_vars = from_file.true_vars
                    saw_model = True
                    if status is None:
                        status = from_file.status or status
                    break
        if status is None:
            if proc.returncode == 10:
                status = SAT
            elif proc.returncode == 20:
                status = UNSAT
            else:
                raise SolverError(
                    f"solver {cmd[0]} produced no status "
                    f"(exit {proc.returncode}): {proc.stderr.strip()[:200]}"
                )
        elapsed = time.monotonic() - started
        if status == SAT and not saw_model:
            raise SolverError(f"solver {cmd[0]} reported SAT without a model")
        return SolverResult(
            status=status,
            model=true_vars if status == SAT else None,
            seconds=elapsed,
            command=tuple(cmd),
        )
