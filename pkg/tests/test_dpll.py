"""Bundled DIMACS solver: parsing, correctness, CLI entry point."""

import itertools
import shutil
import subprocess
import sys

import pytest

from packit.dpll import main, parse_dimacs, solve


def brute_force_status(num_vars, clauses):
    for bits in itertools.product((False, True), repeat=num_vars):
        if all(
            any(bits[abs(lit) - 1] == (lit > 0) for lit in clause)
            for clause in clauses
        ):
            return "sat"
    return "unsat"


def random_cnf(rng, num_vars, num_clauses, width=3):
    clauses = []
    for _ in range(num_clauses):
        size = rng.randint(1, width)
        chosen = rng.sample(range(1, num_vars + 1), min(size, num_vars))
        clauses.append([v if rng.random() < 0.5 else -v for v in chosen])
    return clauses


def to_dimacs(num_vars, clauses):
    lines = [f"p cnf {num_vars} {len(clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in clauses]
    return "\n".join(lines) + "\n"


class TestParseDimacs:
    def test_basic(self):
        nv, clauses = parse_dimacs("c hi\np cnf 3 2\n1 -2 0\n2 3 0\n")
        assert nv == 3
        assert clauses == [[1, -2], [2, 3]]

    def test_clause_split_across_lines(self):
        _, clauses = parse_dimacs("p cnf 3 1\n1 2\n3 0\n")
        assert clauses == [[1, 2, 3]]

    def test_vars_grow_beyond_header(self):
        nv, _ = parse_dimacs("p cnf 1 1\n5 0\n")
        assert nv == 5

    def test_percent_terminator_ends_input(self):
        nv, clauses = parse_dimacs("p cnf 1 1\n1 0\n%\n0\n")
        assert clauses == [[1]]


class TestSolve:
    def test_trivial_sat(self):
        status, model = solve(1, [[1]])
        assert status == "sat" and model == {1}

    def test_trivial_unsat(self):
        status, model = solve(1, [[1], [-1]])
        assert status == "unsat" and model is None

    def test_empty_clause_unsat(self):
        status, _ = solve(2, [[1], []])
        assert status == "unsat"

    def test_empty_formula_sat(self):
        status, model = solve(3, [])
        assert status == "sat"

    def test_all_false_model(self):
        status, model = solve(2, [[-1], [-2]])
        assert status == "sat" and model == set()

    def test_model_satisfies_formula(self, rng):
        for _ in range(150):
            nv = rng.randint(1, 10)
            clauses = random_cnf(rng, nv, rng.randint(1, 30))
            status, model = solve(nv, clauses)
            assert status == brute_force_status(nv, clauses)
            if status == "sat":
                for clause in clauses:
                    assert any(
                        (lit > 0) == (abs(lit) in model) for lit in clause
                    ), (clauses, model)

    @pytest.mark.skipif(shutil.which("splr") is None, reason="splr not installed")
    def test_agrees_with_splr(self, rng, tmp_path):
        from packit.solver import run_solver

        for i in range(25):
            nv = rng.randint(3, 14)
            clauses = random_cnf(rng, nv, rng.randint(5, 45))
            status, _ = solve(nv, clauses)
            theirs = run_solver(to_dimacs(nv, clauses), ["splr"])
            assert status == theirs.status, (nv, clauses)


class TestCommandLine:
    def test_sat_exit_code_and_model(self, tmp_path, capsys):
        path = tmp_path / "f.cnf"
        path.write_text("p cnf 2 1\n1 2 0\n")
        code = main([str(path)])
        out = capsys.readouterr().out
        assert code == 10
        assert "s SATISFIABLE" in out
        assert any(line.startswith("v ") for line in out.splitlines())

    def test_unsat_exit_code(self, tmp_path, capsys):
        path = tmp_path / "f.cnf"
        path.write_text("p cnf 1 2\n1 0\n-1 0\n")
        assert main([str(path)]) == 20
        assert "s UNSATISFIABLE" in capsys.readouterr().out

    def test_runs_as_module(self, tmp_path):
        path = tmp_path / "f.cnf"
        path.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
        proc = subprocess.run(
            [sys.executable, "-m", "packit.dpll", str(path)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 10
        assert "s SATISFIABLE" in proc.stdout
