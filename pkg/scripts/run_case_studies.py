#!/usr/bin/env python3
"""Run the bundled case-study workbooks and print a timing/result table.

Each case is loaded from its JSON fixture, compiled to a CSP, and solved
(enumerating everything, or optimizing when the model declares an
objective). The table reports model size, outcome, and wall time.

Usage:
    python3 scripts/run_case_studies.py [--fixture-dir DIR] [--case NAME ...]
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from sheetcsp.compiler import build_csp
from sheetcsp.fdsolver import SearchConfig, solve_all, solve_optimal
from sheetcsp.grid import load_workbook_json

DEFAULT_FIXTURE_DIR = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
CASES = ("queens8", "sudoku", "knapsack", "sched", "resource", "unsat")


@dataclass
class CaseResult:
    name: str
    n_vars: int
    n_constraints: int
    solutions: int
    objective: int | None
    seconds: float


def run_case(name: str, fixture_dir: Path, config: SearchConfig) -> CaseResult:
    wb = load_workbook_json(fixture_dir / f"{name}.json")
    csp = build_csp(wb)
    start = time.perf_counter()
    if csp.objective is None:
        solutions = solve_all(csp, config)
        count, objective = len(solutions), None
    else:
        result = solve_optimal(csp, config)
        count, objective = len(result.all_optimal), result.objective
    seconds = time.perf_counter() - start
    return CaseResult(name, len(csp.vars), len(csp.constraints), count, objective, seconds)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--fixture-dir", type=Path, default=DEFAULT_FIXTURE_DIR)
    parser.add_argument("--case", action="append", choices=CASES, help="run only this case (repeatable)")
    parser.add_argument("--max-solutions", type=int, default=1000)
    args = parser.parse_args(argv)

    config = SearchConfig(max_solutions=args.max_solutions)
    names = args.case or list(CASES)
    results = [run_case(name, args.fixture_dir, config) for name in names]

    header = f"{'case':<10} {'vars':>5} {'constraints':>12} {'solutions':>10} {'objective':>10} {'time':>8}"
    print(header)
    print("-" * len(header))
    for r in results:
        objective = "-" if r.objective is None else str(r.objective)
        print(
            f"{r.name:<10} {r.n_vars:>5} {r.n_constraints:>12} "
            f"{r.solutions:>10} {objective:>10} {r.seconds:>7.2f}s"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
