"""Lowering from cell text to the constraint IR, and program-text emission.

The compile pipeline: locate the marker declarations, number the variable
cells in declaration order, parse each constraint cell, then lower every
call through the range transformations. Emission renders the same parsed
cells into a finite-domain logic program, one line per cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import rangekit, sslang
from .csp import (
    AbsIR,
    AllDiff,
    ArithRelIR,
    BinIR,
    Const,
    Csp,
    Element,
    ExprIR,
    FoldRel,
    MaxIR,
    MinIR,
    ModIR,
    Objective,
    Sense,
    Term,
    TermExpr,
    Var,
    VarInfo,
)
from .domain import Domain
from .errors import (
    CompileError,
    DomainOnConstant,
    MultipleObjectives,
    NonIntegerConstantCell,
    ObjectiveNotSingleCell,
    PairLengthMismatch,
    UnboundedVariable,
    UnknownCell,
)
from .grid import CellAddr, Workbook, clean_cell_text, format_cell_addr, var_name
from .sslang import (
    AllDifferentDecl,
    ArithExpr,
    ArithRel,
    BackDiagonalAggregate,
    BinArithOp,
    BinOp,
    CellRefExpr,
    CellResult,
    ColsAggregate,
    ColsAllDifferent,
    ConstraintAst,
    DiagonalAggregate,
    DomainDecl,
    IntLit,
    Interval,
    LiteralList,
    MarkerDecl,
    Maximize,
    Minimize,
    NthElement,
    PairCellsAggregate,
    ResultListSpec,
    RowsAggregate,
    RowsAllDifferent,
    ScalarResult,
    SingleValue,
    find_markers,
    parse_constraint,
    parse_domain_literal,
)


@dataclass
class Diagnostic:
    """One compile problem, serializable for the CLI and the HTTP service."""

    code: str
    message: str
    cell: Optional[str] = None

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, "cell": self.cell}


@dataclass
class CompiledModel:
    workbook: Workbook
    csp: Csp
    var_ids: dict[CellAddr, int]
    var_literals: dict[int, sslang.DomainLiteral]
    constraint_cells: list[tuple[CellAddr, ConstraintAst]]
    var_marker: MarkerDecl
    constraint_marker: MarkerDecl


class _Resolver:
    """Term resolution over a finished variable table."""

    def __init__(self, wb: Workbook, var_ids: dict[CellAddr, int]):
        self.wb = wb
        self.var_ids = var_ids

    def resolve(self, addr: CellAddr) -> Term:
        """A cell in the variable ranges is a Var; anything else must hold
        an integer, read from the grid as a constant."""
        vid = self.var_ids.get(addr)
        if vid is not None:
            return Var(vid)
        text = self.wb.get(addr)
        where = format_cell_addr(self.wb, addr, self.wb.active)
        if text is None or not clean_cell_text(text):
            raise UnknownCell(
                f"cell {where} is empty and outside the variable ranges", cell=addr
            )
        try:
            return Const(int(clean_cell_text(text)))
        except ValueError:
            raise NonIntegerConstantCell(
                f"cell {where} holds non-integer text {text!r}", cell=addr
            ) from None

    def resolve_result(self, result: ResultListSpec, cell: CellAddr) -> list[Term]:
        if isinstance(result, LiteralList):
            return [Const(v) for v in result.values]
        if isinstance(result, ScalarResult):
            return [Const(result.value)]
        if isinstance(result, CellResult):
            return [self.resolve(result.addr)]
        return [self.resolve(a) for a in rangekit.flatten(result.spec)]

    def lower_expr(self, expr: ArithExpr) -> ExprIR:
        if isinstance(expr, IntLit):
            return TermExpr(Const(expr.value))
        if isinstance(expr, CellRefExpr):
            return TermExpr(self.resolve(expr.addr))
        if isinstance(expr, BinOp):
            return BinIR(expr.op, self.lower_expr(expr.lhs), self.lower_expr(expr.rhs))
        if isinstance(expr, sslang.ModExpr):
            return ModIR(self.lower_expr(expr.lhs), self.lower_expr(expr.rhs))
        if isinstance(expr, sslang.AbsExpr):
            return AbsIR(self.lower_expr(expr.arg))
        if isinstance(expr, sslang.MinExpr):
            return MinIR(self.lower_expr(expr.lhs), self.lower_expr(expr.rhs))
        if isinstance(expr, sslang.MaxExpr):
            return MaxIR(self.lower_expr(expr.lhs), self.lower_expr(expr.rhs))
        raise TypeError(f"not an expression: {expr!r}")


class _Lowering(_Resolver):
    def __init__(self, wb: Workbook):
        self.var_marker, self.constraint_marker = find_markers(wb)
        super().__init__(wb, {})
        self.var_order: list[CellAddr] = []
        self.domains: list[Optional[Domain]] = []
        self.var_literals: dict[int, sslang.DomainLiteral] = {}
        self.constraints: list = []
        self.objective: Optional[Objective] = None

    def declare_vars(self) -> None:
        for spec in self.var_marker.ranges:
            for addr in rangekit.flatten(spec):
                if addr in self.var_ids:
                    continue
                vid = len(self.var_order)
                self.var_ids[addr] = vid
                self.var_order.append(addr)
                self.domains.append(None)
                text = self.wb.get(addr)
                if text is not None and clean_cell_text(text):
                    lit = parse_domain_literal(text, addr)
                    self.var_literals[vid] = lit
                    self.domains[vid] = _literal_domain(lit)

    # -- constraint lowering ----------------------------------------------

    def lower(self, cell: CellAddr, ast: ConstraintAst) -> None:
        where = format_cell_addr(self.wb, cell, self.wb.active)
        if isinstance(ast, DomainDecl):
            for addr in rangekit.flatten(ast.spec):
                vid = self.var_ids.get(addr)
                if vid is None:
                    raise DomainOnConstant(
                        f"ssDomain in {where} covers {format_cell_addr(self.wb, addr, self.wb.active)},"
                        " which is outside the variable ranges",
                        cell=cell,
                    )
                bound = Domain.interval(ast.lo, ast.hi)
                self.domains[vid] = (
                    bound if self.domains[vid] is None else self.domains[vid].intersect(bound)
                )
        elif isinstance(ast, AllDifferentDecl):
            self.constraints.append(AllDiff(self._var_group(ast.spec, cell)))
        elif isinstance(ast, RowsAllDifferent):
            for group in rangekit.rows(ast.rect):
                self.constraints.append(AllDiff(self._var_ids_for(group, cell)))
        elif isinstance(ast, ColsAllDifferent):
            for group in rangekit.cols(ast.rect):
                self.constraints.append(AllDiff(self._var_ids_for(group, cell)))
        elif isinstance(ast, (ColsAggregate, RowsAggregate, DiagonalAggregate, BackDiagonalAggregate)):
            groups = _AGGREGATE_GROUPING[type(ast)](ast.rect)
            rhs_terms = rangekit.set_len(self.resolve_result(ast.result, cell), len(groups))
            for group, rhs in zip(groups, rhs_terms):
                operands = tuple(self.resolve(a) for a in group)
                self.constraints.append(FoldRel(ast.op, operands, ast.rel, rhs))
        elif isinstance(ast, PairCellsAggregate):
            first = rangekit.flatten(ast.first)
            second = rangekit.flatten(ast.second)
            if len(first) != len(second):
                raise PairLengthMismatch(
                    f"ssPairCellsAggregate in {where} pairs {len(first)} cells with {len(second)}",
                    cell=cell,
                )
            rhs_terms = rangekit.set_len(self.resolve_result(ast.result, cell), len(first))
            for a, b, rhs in zip(first, second, rhs_terms):
                self.constraints.append(
                    FoldRel(ast.op, (self.resolve(a), self.resolve(b)), ast.rel, rhs)
                )
        elif isinstance(ast, NthElement):
            if isinstance(ast.index, IntLit):
                index: Term = Const(ast.index.value)
            else:
                index = self.resolve(ast.index.addr)
            table = tuple(self.resolve(a) for a in rangekit.flatten(ast.table))
            self.constraints.append(Element(index, table, self.resolve(ast.value)))
        elif isinstance(ast, (Minimize, Maximize)):
            term = self.resolve(ast.addr)
            if not isinstance(term, Var):
                raise ObjectiveNotSingleCell(
                    f"objective cell in {where} is not a declared variable", cell=cell
                )
            if self.objective is not None:
                raise MultipleObjectives(
                    f"second objective in {where}; one ssMin/ssMax per model", cell=cell
                )
            sense = Sense.MINIMIZE if isinstance(ast, Minimize) else Sense.MAXIMIZE
            self.objective = Objective(sense, term.id)
        elif isinstance(ast, ArithRel):
            self.constraints.append(
                ArithRelIR(self.lower_expr(ast.lhs), ast.rel, self.lower_expr(ast.rhs))
            )
        else:
            raise TypeError(f"not a constraint AST: {ast!r}")

    def _var_group(self, spec, cell: CellAddr) -> tuple[int, ...]:
        return self._var_ids_for(rangekit.flatten(spec), cell)

    def _var_ids_for(self, addrs: list[CellAddr], cell: CellAddr) -> tuple[int, ...]:
        ids = []
        for addr in addrs:
            vid = self.var_ids.get(addr)
            if vid is None:
                raise CompileError(
                    f"all-different group includes {format_cell_addr(self.wb, addr, self.wb.active)},"
                    " which is outside the variable ranges",
                    cell=cell,
                    code="ALL_DIFFERENT_ON_CONSTANT",
                )
            ids.append(vid)
        return tuple(ids)


_AGGREGATE_GROUPING = {
    ColsAggregate: rangekit.cols,
    RowsAggregate: rangekit.rows,
    DiagonalAggregate: rangekit.diagonals,
    BackDiagonalAggregate: rangekit.back_diagonals,
}


def _literal_domain(lit: sslang.DomainLiteral) -> Domain:
    if isinstance(lit, SingleValue):
        return Domain.singleton(lit.value)
    if isinstance(lit, Interval):
        return Domain.interval(lit.lo, lit.hi)
    return Domain.from_values(lit.values)


def collect_constraint_cells(
    wb: Workbook, marker: MarkerDecl
) -> list[tuple[CellAddr, ConstraintAst]]:
    """Parse every non-empty cell in the constraint ranges, range order.

    Marker declarations that happen to sit inside the range are skipped;
    they are declarations, not constraints.
    """
    out = []
    for spec in marker.ranges:
        for addr in rangekit.flatten(spec):
            text = wb.get(addr)
            if text is None or not clean_cell_text(text):
                continue
            if sslang.is_marker_text(text):
                continue
            out.append((addr, parse_constraint(wb, text, addr.sheet, addr)))
    return out


def compile_workbook(wb: Workbook) -> CompiledModel:
    """Full lowering: markers, variable table, constraints, objective."""
    low = _Lowering(wb)
    low.declare_vars()
    cells = collect_constraint_cells(wb, low.constraint_marker)
    for addr, ast in cells:
        low.lower(addr, ast)
    infos = []
    for addr in low.var_order:
        vid = low.var_ids[addr]
        dom = low.domains[vid]
        if dom is None:
            raise UnboundedVariable(
                f"variable cell {format_cell_addr(wb, addr, wb.active)} has no domain:"
                " give it a literal or cover it with ssDomain",
                cell=addr,
            )
        infos.append(VarInfo(addr, var_name(wb, addr, wb.active), dom))
    csp = Csp(infos, low.constraints, low.objective)
    return CompiledModel(
        wb, csp, low.var_ids, low.var_literals, cells, low.var_marker, low.constraint_marker
    )


def build_csp(wb: Workbook) -> Csp:
    return compile_workbook(wb).csp


def diagnostic_from_error(wb: Workbook, err) -> Diagnostic:
    cell = None
    if getattr(err, "cell", None) is not None:
        cell = format_cell_addr(wb, err.cell, wb.active)
    return Diagnostic(getattr(err, "code", "ERROR"), str(err), cell)


# --- program-text emission ----------------------------------------------


def _term_text(term: Term, names: list[str]) -> str:
    return names[term.id] if isinstance(term, Var) else str(term.value)


def _term_list(terms, names: list[str]) -> str:
    return "[" + ", ".join(_term_text(t, names) for t in terms) + "]"


def _ir_expr_text(expr: ExprIR, names: list[str]) -> str:
    def fmt(node: ExprIR, parent_prec: int, right_side: bool) -> str:
        if isinstance(node, TermExpr):
            return _term_text(node.term, names)
        if isinstance(node, AbsIR):
            return f"abs({fmt(node.arg, 0, False)})"
        if isinstance(node, MinIR):
            return f"min({fmt(node.lhs, 0, False)}, {fmt(node.rhs, 0, False)})"
        if isinstance(node, MaxIR):
            return f"max({fmt(node.lhs, 0, False)}, {fmt(node.rhs, 0, False)})"
        if isinstance(node, ModIR):
            prec = 2
            text = f"{fmt(node.lhs, prec, False)} mod {fmt(node.rhs, prec, True)}"
        else:
            prec = 2 if node.op is BinArithOp.TIMES else 1
            text = f"{fmt(node.lhs, prec, False)} {node.op.value} {fmt(node.rhs, prec, True)}"
        if prec < parent_prec or (prec == parent_prec and right_side):
            return f"({text})"
        return text

    return fmt(expr, 0, False)


def _constraint_line(model: CompiledModel, low_cache: _Resolver, ast: ConstraintAst, cell: CellAddr) -> Optional[str]:
    """Render one constraint cell as one program line; objectives render none."""
    names = model.csp.var_names()
    resolve = low_cache.resolve
    wb = model.workbook

    def cells_list(addrs) -> str:
        return _term_list([resolve(a) for a in addrs], names)

    if isinstance(ast, DomainDecl):
        return f"{cells_list(rangekit.flatten(ast.spec))} in {ast.lo}..{ast.hi}"
    if isinstance(ast, AllDifferentDecl):
        return f"all_different({cells_list(rangekit.flatten(ast.spec))})"
    if isinstance(ast, (RowsAllDifferent, ColsAllDifferent)):
        grouping = rangekit.rows if isinstance(ast, RowsAllDifferent) else rangekit.cols
        groups = ", ".join(cells_list(g) for g in grouping(ast.rect))
        return f"subListAllDifferent([{groups}])"
    if isinstance(ast, (ColsAggregate, RowsAggregate, DiagonalAggregate, BackDiagonalAggregate)):
        groups = _AGGREGATE_GROUPING[type(ast)](ast.rect)
        rhs = rangekit.set_len(low_cache.resolve_result(ast.result, cell), len(groups))
        grouped = ", ".join(cells_list(g) for g in groups)
        return (
            f"subListAggregate({ast.op.value}, [{grouped}], {ast.rel.value}, "
            f"{_term_list(rhs, names)})"
        )
    if isinstance(ast, PairCellsAggregate):
        first = rangekit.flatten(ast.first)
        second = rangekit.flatten(ast.second)
        rhs = rangekit.set_len(low_cache.resolve_result(ast.result, cell), len(first))
        return (
            f"pairsAggregate({cells_list(first)}, {ast.op.value}, {cells_list(second)}, "
            f"{ast.rel.value}, {_term_list(rhs, names)})"
        )
    if isinstance(ast, NthElement):
        if isinstance(ast.index, IntLit):
            idx = str(ast.index.value)
        else:
            idx = _term_text(resolve(ast.index.addr), names)
        table = cells_list(rangekit.flatten(ast.table))
        value = _term_text(resolve(ast.value), names)
        return f"nthElement({idx}, {table}, {value})"
    if isinstance(ast, (Minimize, Maximize)):
        return None
    if isinstance(ast, ArithRel):
        lhs = _ir_expr_text(low_cache.lower_expr(ast.lhs), names)
        rhs = _ir_expr_text(low_cache.lower_expr(ast.rhs), names)
        return f"{lhs} {ast.rel.value} {rhs}"
    raise TypeError(f"not a constraint AST: {ast!r}")


def emit_clp(wb: Workbook) -> str:
    """Render the compiled model as finite-domain logic program text.

    Layout: two library directives, a blank line, a mainQuery clause whose
    head lists every variable, one body line per domain literal and per
    constraint cell, then the labeling goal carrying the objective.
    """
    model = compile_workbook(wb)
    low = _Resolver(wb, model.var_ids)
    names = model.csp.var_names()
    var_list = "[" + ", ".join(names) + "]"

    lines: list[str] = []
    for vid, name in enumerate(names):
        lit = model.var_literals.get(vid)
        if lit is None:
            continue
        if isinstance(lit, SingleValue):
            lines.append(f"{name} #= {lit.value}")
        elif isinstance(lit, Interval):
            lines.append(f"{name} in {lit.lo}..{lit.hi}")
        else:
            values = ",".join(str(v) for v in lit.values)
            lines.append(f"{name} in [{values}]")
    for cell, ast in model.constraint_cells:
        line = _constraint_line(model, low, ast, cell)
        if line is not None:
            lines.append(line)

    if model.csp.objective is None:
        option = ""
    else:
        fn = "min" if model.csp.objective.sense is Sense.MINIMIZE else "max"
        option = f"{fn}({names[model.csp.objective.var]})"

    out = [
        ":- use_module(library(bounds)).",
        ":- use_module(library(excel)).",
        "",
        f"mainQuery({var_list}):-",
    ]
    out.extend(f"    {line}," for line in lines)
    out.append(f"    labeling([{option}], {var_list}).")
    return "\n".join(out) + "\n"
