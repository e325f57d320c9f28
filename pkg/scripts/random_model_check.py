#!/usr/bin/env python3
"""Differential testing of the search engine against exhaustive enumeration.

Generates random small CSPs (mixed all-different, fold-aggregate,
element, and arithmetic-relation constraints over interval-set domains)
and checks that the engine's solution set matches brute-force
enumeration of the full cross product. Any mismatch is reported with the
model's structure and the two solution sets; the exit code is nonzero if
any case disagrees.

Usage:
    python3 scripts/random_model_check.py [--cases N] [--seed N] [--max-vars N]
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from sheetcsp.csp import (
    AbsIR,
    AllDiff,
    ArithRelIR,
    BinIR,
    Const,
    Csp,
    Element,
    FoldRel,
    MaxIR,
    MinIR,
    ModIR,
    TermExpr,
    Var,
    VarInfo,
)
from sheetcsp.domain import Domain
from sheetcsp.fdsolver import SearchConfig, evaluate, solve_all
from sheetcsp.grid import CellAddr
from sheetcsp.sslang import BinArithOp, RelOp

BIN_OPS = (BinArithOp.PLUS, BinArithOp.MINUS, BinArithOp.TIMES)
RELS = tuple(RelOp)


@dataclass
class CheckConfig:
    cases: int = 1000
    seed: int = 0
    max_vars: int = 5
    max_value: int = 5
    max_constraints: int = 4
    progress_every: int = 200


def rand_term(rng: random.Random, n_vars: int, lo: int = 0, hi: int = 5):
    if rng.random() < 0.6:
        return Var(rng.randrange(n_vars))
    return Const(rng.randint(lo, hi))


def rand_expr(rng: random.Random, n_vars: int, depth: int):
    if depth == 0 or rng.random() < 0.35:
        return TermExpr(rand_term(rng, n_vars))
    kind = rng.choice(("bin", "bin", "mod", "abs", "min", "max"))
    lhs = rand_expr(rng, n_vars, depth - 1)
    if kind == "abs":
        return AbsIR(lhs)
    rhs = rand_expr(rng, n_vars, depth - 1)
    if kind == "bin":
        return BinIR(rng.choice(BIN_OPS), lhs, rhs)
    if kind == "mod":
        return ModIR(lhs, rhs)
    return MinIR(lhs, rhs) if kind == "min" else MaxIR(lhs, rhs)


def rand_constraint(rng: random.Random, n_vars: int):
    kinds = ["fold", "element", "arith"]
    if n_vars >= 2:
        kinds.append("alldiff")
    kind = rng.choice(kinds)
    if kind == "alldiff":
        return AllDiff(tuple(rng.sample(range(n_vars), rng.randint(2, n_vars))))
    if kind == "fold":
        operands = tuple(rand_term(rng, n_vars) for _ in range(rng.randint(1, 3)))
        return FoldRel(rng.choice(BIN_OPS), operands, rng.choice(RELS), rand_term(rng, n_vars, 0, 10))
    if kind == "element":
        table = tuple(rand_term(rng, n_vars) for _ in range(rng.randint(1, 4)))
        return Element(rand_term(rng, n_vars, 1, 4), table, rand_term(rng, n_vars))
    return ArithRelIR(rand_expr(rng, n_vars, 2), rng.choice(RELS), rand_expr(rng, n_vars, 2))


def rand_csp(rng: random.Random, cfg: CheckConfig) -> Csp:
    n_vars = rng.randint(1, cfg.max_vars)
    infos = [
        VarInfo(
            CellAddr(0, 1, i + 1),
            f"V{i}",
            Domain.from_values(rng.sample(range(cfg.max_value + 1), rng.randint(1, cfg.max_value + 1))),
        )
        for i in range(n_vars)
    ]
    constraints = [rand_constraint(rng, n_vars) for _ in range(rng.randint(1, cfg.max_constraints))]
    return Csp(infos, constraints, None)


def exhaustive(csp: Csp) -> set[tuple[int, ...]]:
    spaces = [list(v.domain) for v in csp.vars]
    return {a for a in itertools.product(*spaces) if evaluate(csp, a) is None}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cases", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-vars", type=int, default=5)
    args = parser.parse_args(argv)

    cfg = CheckConfig(cases=args.cases, seed=args.seed, max_vars=args.max_vars)
    rng = random.Random(cfg.seed)
    search = SearchConfig(max_solutions=10 * (cfg.max_value + 1) ** cfg.max_vars)
    mismatches = 0
    start = time.perf_counter()
    for case in range(cfg.cases):
        csp = rand_csp(rng, cfg)
        got = set(solve_all(csp, search))
        want = exhaustive(csp)
        if got != want:
            mismatches += 1
            print(f"MISMATCH in case {case}:")
            print(f"  domains: {[list(v.domain) for v in csp.vars]}")
            for c in csp.constraints:
                print(f"  constraint: {c}")
            print(f"  search-only: {sorted(got - want)[:10]}")
            print(f"  exhaustive-only: {sorted(want - got)[:10]}")
        if cfg.progress_every and (case + 1) % cfg.progress_every == 0:
            print(f"  ... {case + 1}/{cfg.cases} cases checked")
    elapsed = time.perf_counter() - start

    verdict = "all matched" if mismatches == 0 else f"{mismatches} MISMATCHES"
    print(f"{cfg.cases} random models, {verdict}, {elapsed:.1f} s (seed {cfg.seed})")
    return 0 if mismatches == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
