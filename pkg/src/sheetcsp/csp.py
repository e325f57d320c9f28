"""Constraint-model intermediate representation.

The compiler lowers cell text into this form; the solver and the direct
evaluator both consume it. Variables are dense integer ids assigned in
declaration order, one per distinct cell in the variable ranges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .domain import Domain
from .grid import CellAddr
from .sslang import BinArithOp, RelOp


@dataclass(frozen=True)
class Var:
    id: int


@dataclass(frozen=True)
class Const:
    value: int


Term = Union[Var, Const]


# Expression IR mirrors the surface arithmetic grammar with terms at leaves.


@dataclass(frozen=True)
class TermExpr:
    term: Term


@dataclass(frozen=True)
class BinIR:
    op: BinArithOp
    lhs: "ExprIR"
    rhs: "ExprIR"


@dataclass(frozen=True)
class ModIR:
    lhs: "ExprIR"
    rhs: "ExprIR"


@dataclass(frozen=True)
class AbsIR:
    arg: "ExprIR"


@dataclass(frozen=True)
class MinIR:
    lhs: "ExprIR"
    rhs: "ExprIR"


@dataclass(frozen=True)
class MaxIR:
    lhs: "ExprIR"
    rhs: "ExprIR"


ExprIR = Union[TermExpr, BinIR, ModIR, AbsIR, MinIR, MaxIR]


@dataclass(frozen=True)
class AllDiff:
    vars: tuple[int, ...]


@dataclass(frozen=True)
class FoldRel:
    """Left fold of operands under op, related to rhs: ((t1 op t2) op ...) rel rhs."""

    op: BinArithOp
    operands: tuple[Term, ...]
    rel: RelOp
    rhs: Term


@dataclass(frozen=True)
class Element:
    """1-based list indexing: table[index] = value."""

    index: Term
    table: tuple[Term, ...]
    value: Term


@dataclass(frozen=True)
class ArithRelIR:
    lhs: ExprIR
    rel: RelOp
    rhs: ExprIR


CspConstraint = Union[AllDiff, FoldRel, Element, ArithRelIR]


class Sense(Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


@dataclass(frozen=True)
class Objective:
    sense: Sense
    var: int


@dataclass
class VarInfo:
    addr: CellAddr
    name: str
    domain: Domain


@dataclass
class Csp:
    vars: list[VarInfo] = field(default_factory=list)
    constraints: list[CspConstraint] = field(default_factory=list)
    objective: Optional[Objective] = None

    def var_names(self) -> list[str]:
        return [v.name for v in self.vars]


def expr_vars(expr: ExprIR) -> set[int]:
    """Variable ids occurring in an expression."""
    if isinstance(expr, TermExpr):
        return {expr.term.id} if isinstance(expr.term, Var) else set()
    if isinstance(expr, AbsIR):
        return expr_vars(expr.arg)
    return expr_vars(expr.lhs) | expr_vars(expr.rhs)


def constraint_vars(c: CspConstraint) -> set[int]:
    """Variable ids a constraint observes (its propagation triggers)."""
    if isinstance(c, AllDiff):
        return set(c.vars)
    if isinstance(c, FoldRel):
        out = {t.id for t in c.operands if isinstance(t, Var)}
        if isinstance(c.rhs, Var):
            out.add(c.rhs.id)
        return out
    if isinstance(c, Element):
        out = {t.id for t in c.table if isinstance(t, Var)}
        for t in (c.index, c.value):
            if isinstance(t, Var):
                out.add(t.id)
        return out
    return expr_vars(c.lhs) | expr_vars(c.rhs)
