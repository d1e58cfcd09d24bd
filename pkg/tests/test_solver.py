"""Subprocess solver harness: discovery, output parsing, execution."""

import math
import os
import shutil
import stat
import sys

import pytest

from packit.errors import SolverError
from packit.solver import (
    fallback_command,
    parse_model_text,
    resolve_solver,
    run_solver,
    SAT,
    UNKNOWN,
    UNSAT,
)

SAT_CNF = "p cnf 2 2\n1 2 0\n-1 0\n"
UNSAT_CNF = "p cnf 1 2\n1 0\n-1 0\n"


def fake_solver(tmp_path, name, body):
    path = tmp_path / name
    path.write_text("#!/bin/sh\n" + body)
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return str(path)


class TestResolution:
    def test_env_wins(self, monkeypatch, tmp_path):
        exe = fake_solver(tmp_path, "mysolver", "exit 20\n")
        monkeypatch.setenv("PACKIT_SOLVER", exe)
        assert resolve_solver("ignored-anyway") == [exe]

    def test_env_missing_raises(self, monkeypatch):
        monkeypatch.setenv("PACKIT_SOLVER", "/nonexistent/solver-binary")
        with pytest.raises(SolverError):
            resolve_solver()

    def test_configured_path(self, monkeypatch, tmp_path):
        monkeypatch.delenv("PACKIT_SOLVER", raising=False)
        exe = fake_solver(tmp_path, "cfg-solver", "exit 10\n")
        assert resolve_solver(exe) == [exe]

    def test_configured_missing_raises(self, monkeypatch):
        monkeypatch.delenv("PACKIT_SOLVER", raising=False)
        with pytest.raises(SolverError):
            resolve_solver("/nonexistent/solver-binary")

    def test_fallback_when_path_empty(self, monkeypatch):
        monkeypatch.delenv("PACKIT_SOLVER", raising=False)
        monkeypatch.setenv("PATH", "/definitely/not/a/dir")
        assert resolve_solver() == fallback_command()

    def test_path_scan_prefers_known_names(self, monkeypatch, tmp_path):
        monkeypatch.delenv("PACKIT_SOLVER", raising=False)
        fake_solver(tmp_path, "kissat", "exit 20\n")
        monkeypatch.setenv("PATH", str(tmp_path))
        assert resolve_solver() == ["kissat"]

    def test_fallback_is_runnable(self):
        cmd = fallback_command()
        assert cmd[0] == sys.executable
        result = run_solver(SAT_CNF, cmd)
        assert result.status == SAT


class TestParseModelText:
    def test_competition_sat(self):
        parsed = parse_model_text("c comment\ns SATISFIABLE\nv 1 -2 3 0\n")
        assert parsed.status == SAT
        assert parsed.true_vars == {1, 3}
        assert parsed.saw_literals

    def test_unsat_not_mistaken_for_sat(self):
        # "UNSATISFIABLE" contains "SATISFIABLE" as a substring
        assert parse_model_text("s UNSATISFIABLE\n").status == UNSAT

    def test_unknown(self):
        assert parse_model_text("s UNKNOWN\n").status == UNKNOWN

    def test_multiline_v_lines(self):
        parsed = parse_model_text("s SATISFIABLE\nv 1 2\nv -3\nv 0\n")
        assert parsed.true_vars == {1, 2}

    def test_bare_literal_file(self):
        # a hand-saved model: no s line at all
        parsed = parse_model_text("1 -2 3 -4 0\n")
        assert parsed.status is None
        assert parsed.true_vars == {1, 3}
        assert parsed.saw_literals

    def test_all_false_model_still_counts(self):
        # distinguishes "every variable false" from "no model printed"
        parsed = parse_model_text("s SATISFIABLE\nv -1 -2 0\n")
        assert parsed.true_vars == set()
        assert parsed.saw_literals

    def test_no_model_at_all(self):
        parsed = parse_model_text("s SATISFIABLE\n")
        assert not parsed.saw_literals

    def test_progress_noise_ignored(self):
        # chatty solvers print mixed-token lines; none of it is a model
        text = "#propagate 123, #decision 45\n\x1b[1G\x1b[K 670 clauses\n"
        parsed = parse_model_text(text)
        assert parsed.true_vars == set()
        assert not parsed.saw_literals

    def test_comment_and_header_skipped(self):
        parsed = parse_model_text("c 1 2 3\np cnf 3 1\n")
        assert not parsed.saw_literals


class TestRunSolver:
    def test_sat_with_fallback(self):
        result = run_solver(SAT_CNF)
        assert result.status == SAT
        assert 2 in result.model and 1 not in result.model

    def test_unsat_with_fallback(self):
        result = run_solver(UNSAT_CNF)
        assert result.status == UNSAT
        assert result.model is None

    def test_seconds_recorded(self):
        assert run_solver(SAT_CNF).seconds >= 0

    def test_infinite_budget_means_none(self):
        result = run_solver(SAT_CNF, time_budget=math.inf)
        assert result.status == SAT

    def test_timeout_returns_unknown(self, tmp_path):
        exe = fake_solver(tmp_path, "slow", "sleep 30\n")
        result = run_solver(SAT_CNF, [exe], time_budget=0.2)
        assert result.status == UNKNOWN
        assert result.model is None

    def test_missing_binary_raises(self):
        with pytest.raises(SolverError):
            run_solver(SAT_CNF, ["/nonexistent/solver-binary"])

    def test_sat_without_model_raises(self, tmp_path):
        exe = fake_solver(tmp_path, "mute", 'echo "s SATISFIABLE"\n')
        with pytest.raises(SolverError):
            run_solver(SAT_CNF, [exe])

    def test_exit_code_10_means_sat_with_printed_model(self, tmp_path):
        exe = fake_solver(tmp_path, "tenner", 'echo "v -1 2 0"\nexit 10\n')
        result = run_solver(SAT_CNF, [exe])
        assert result.status == SAT
        assert result.model == {2}

    def test_exit_code_20_means_unsat(self, tmp_path):
        exe = fake_solver(tmp_path, "twenty", "exit 20\n")
        result = run_solver(UNSAT_CNF, [exe])
        assert result.status == UNSAT

    def test_answer_file_scan(self, tmp_path):
        # splr-style: status on stdout, model saved next to the problem
        exe = fake_solver(
            tmp_path,
            "filer",
            'echo "s SATISFIABLE"\necho "-1 2 0" > ans_problem.cnf\nexit 10\n',
        )
        result = run_solver(SAT_CNF, [exe])
        assert result.status == SAT
        assert result.model == {2}

    @pytest.mark.skipif(shutil.which("splr") is None, reason="splr not installed")
    def test_real_splr(self):
        result = run_solver(SAT_CNF, ["splr"])
        assert result.status == SAT
        assert result.model == {2}
        assert run_solver(UNSAT_CNF, ["splr"]).status == UNSAT

    def test_command_recorded(self):
        result = run_solver(SAT_CNF)
        assert list(result.command) == resolve_solver()
