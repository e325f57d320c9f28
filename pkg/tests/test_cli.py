"""Command-line behavior: parsing, exit codes, output formats, file handling."""

import csv
import json
import signal

import pytest

from conftest import FIXTURES, GOLDEN
from sheetcsp import cli
from sheetcsp.cli import (
    EXIT_COMPILE_ERROR,
    EXIT_INTERRUPTED,
    EXIT_OK,
    EXIT_UNSAT,
    EXIT_USAGE,
    main,
    parse_cli,
)

SCHED = str(FIXTURES / "sched.json")
KNAPSACK = str(FIXTURES / "knapsack.json")
UNSAT = str(FIXTURES / "unsat.json")
QUEENS = str(FIXTURES / "queens8.json")


# --- argument parsing ----------------------------------------------------------


def test_parse_solve_defaults():
    cfg = parse_cli(["solve", SCHED])
    assert cfg.command == "solve"
    assert cfg.workbook_path == SCHED
    assert cfg.solutions == "first"
    assert cfg.output_format == "table"


def test_parse_solve_flags():
    cfg = parse_cli(["solve", SCHED, "--all", "--format", "json", "--emit-clp", "x.pl"])
    assert cfg.solutions == "all"
    assert cfg.output_format == "json"
    assert cfg.emit_path == "x.pl"
    cfg = parse_cli(["solve", SCHED, "--max", "7"])
    assert (cfg.solutions, cfg.max_solutions) == ("max", 7)


def test_parse_serve_flags():
    cfg = parse_cli(["serve", "--port", "9001", "--host", "0.0.0.0", "--workbook", SCHED])
    assert (cfg.port, cfg.host, cfg.workbook_path) == (9001, "0.0.0.0", SCHED)
    assert cfg.frontend_dir is None
    cfg = parse_cli(["serve", "--frontend-dir", "webui/dist"])
    assert cfg.frontend_dir == "webui/dist"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["solve"],  # no input at all
        ["solve", SCHED, "--csv-dir", "x"],  # both inputs
        ["solve", SCHED, "--all", "--max", "3"],  # exclusive flags
        ["solve", SCHED, "--max", "0"],
        ["solve", SCHED, "--format", "yaml"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == EXIT_USAGE
    capsys.readouterr()


# --- check ---------------------------------------------------------------------


def test_check_clean_model(capsys):
    assert main(["check", SCHED]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "ok: 5 variables, 6 constraints"


def test_check_compile_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "sheets": [
                    {
                        "name": "Sheet1",
                        "cells": {
                            "A1": "1..3",
                            "C1": "A1 #= Z9",
                            "E1": "ssVarRanges(A1)",
                            "E2": "ssConstraintRanges(C1)",
                        },
                    }
                ],
                "active": 0,
            }
        )
    )
    assert main(["check", str(bad)]) == EXIT_COMPILE_ERROR
    err = capsys.readouterr().err
    assert "error UNKNOWN_CELL at Z9:" in err


# --- solve -----------------------------------------------------------------------


def test_solve_first_table(capsys):
    assert main(["solve", KNAPSACK]) == EXIT_OK
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0] == "-- solution 1 of 1 --"
    assert lines[1].split() == ["A", "B", "C", "D"]
    assert lines[2].split() == ["1", "1", "1", "1", "32"]
    assert lines[3] == "objective = 32"


def test_solve_all_json(capsys):
    assert main(["solve", SCHED, "--all", "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 3
    assert payload["objective"] == 9
    assert payload["solutions"][0] == {"A1": 0, "A2": 2, "A3": 2, "A4": 5, "A5": 9}
    assert {"A1", "A2", "A3", "A4", "A5"} == set(payload["solutions"][1])


def test_solve_max_caps_output(capsys):
    assert main(["solve", QUEENS, "--max", "4", "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 4


def test_solve_unsat_exit_3(capsys):
    assert main(["solve", UNSAT]) == EXIT_UNSAT
    assert "UNSAT" in capsys.readouterr().err


def test_solve_emit_clp_side_file(tmp_path, capsys):
    out_path = tmp_path / "model.pl"
    assert main(["solve", SCHED, "--emit-clp", str(out_path)]) == EXIT_OK
    capsys.readouterr()
    assert out_path.read_text() == (GOLDEN / "sched.pl").read_text()


def test_solve_table_blanks_constraint_cells(capsys):
    # scheduling vars A1:A5 sit in the same columns as nothing else; widen the
    # box with the resource fixture instead: vars B11:C15 plus C16, and B16 is
    # plain empty, so the rendered box has a blank but no constraint text.
    assert main(["solve", str(FIXTURES / "resource.json")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "ssDomain" not in out
    assert "nthElement" not in out


def test_solve_interrupt_exit_130(monkeypatch, capsys):
    real_config = cli.SearchConfig

    def cancelled_config(**kw):
        kw["should_cancel"] = lambda: True
        return real_config(**kw)

    monkeypatch.setattr(cli, "SearchConfig", cancelled_config)
    before = signal.getsignal(signal.SIGINT)
    assert main(["solve", QUEENS, "--all"]) == EXIT_INTERRUPTED
    assert "interrupted" in capsys.readouterr().err
    assert signal.getsignal(signal.SIGINT) is before  # handler restored


# --- emit ------------------------------------------------------------------------


def test_emit_stdout_matches_golden(capsys):
    assert main(["emit", SCHED]) == EXIT_OK
    assert capsys.readouterr().out == (GOLDEN / "sched.pl").read_text()


def test_emit_to_file(tmp_path, capsys):
    out_path = tmp_path / "sched.pl"
    assert main(["emit", SCHED, "-o", str(out_path)]) == EXIT_OK
    capsys.readouterr()
    assert out_path.read_text() == (GOLDEN / "sched.pl").read_text()


def test_emit_compile_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"sheets": [{"name": "S", "cells": {"A1": "1..2"}}]}))
    assert main(["emit", str(bad)]) == EXIT_COMPILE_ERROR
    assert "MISSING_VAR_RANGES" in capsys.readouterr().err


# --- input loading --------------------------------------------------------------


def test_missing_file_exit_2(capsys):
    assert main(["check", "/nonexistent/wb.json"]) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_invalid_json_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["check", str(bad)]) == EXIT_USAGE
    assert "invalid workbook JSON" in capsys.readouterr().err


def test_csv_dir_input(tmp_path, capsys):
    rows = [
        ["1..3", "", "A1 #> 1"],
        ["", "", ""],
        ["ssVarRanges(A1)", "", "ssConstraintRanges(C1)"],
    ]
    with open(tmp_path / "Sheet1.csv", "w", newline="") as fh:
        csv.writer(fh).writerows(rows)
    assert main(["check", "--csv-dir", str(tmp_path)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "ok: 1 variables, 1 constraints"
    assert main(["solve", "--csv-dir", str(tmp_path), "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["solutions"] == [{"A1": 2}]
