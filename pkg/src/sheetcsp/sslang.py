"""Parser for the cell constraint language.

Variable cells hold domain literals ("200", "1..3", "[1,2,3,5,6]").
Constraint cells hold ss* function calls or plain arithmetic relations
("A1 + 2 #=< B1"). Two marker declarations, ssVarRanges and
ssConstraintRanges, tell the compiler where variables and constraints live.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import ObjectiveNotSingleCell, ParseError
from .grid import (
    CellAddr,
    Enumeration,
    RangeSpec,
    Rect,
    Single,
    Workbook,
    clean_cell_text,
    format_cell_addr,
    format_range_spec,
    make_rect,
)

MAX_COLS = 256
MAX_ROWS = 65536

_A1_RE = re.compile(r"^([A-Za-z]{1,2})([0-9]{1,6})$")


class RelOp(Enum):
    EQ = "#="
    NEQ = "#\\="
    LT = "#<"
    GT = "#>"
    LE = "#=<"
    GE = "#>="


class BinArithOp(Enum):
    PLUS = "+"
    MINUS = "-"
    TIMES = "*"


# --- arithmetic expressions ---------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class CellRefExpr:
    addr: CellAddr


@dataclass(frozen=True)
class BinOp:
    op: BinArithOp
    lhs: "ArithExpr"
    rhs: "ArithExpr"


@dataclass(frozen=True)
class ModExpr:
    lhs: "ArithExpr"
    rhs: "ArithExpr"


@dataclass(frozen=True)
class AbsExpr:
    arg: "ArithExpr"


@dataclass(frozen=True)
class MinExpr:
    lhs: "ArithExpr"
    rhs: "ArithExpr"


@dataclass(frozen=True)
class MaxExpr:
    lhs: "ArithExpr"
    rhs: "ArithExpr"


ArithExpr = Union[IntLit, CellRefExpr, BinOp, ModExpr, AbsExpr, MinExpr, MaxExpr]


# --- domain literals ------------------------------------------------------


@dataclass(frozen=True)
class SingleValue:
    value: int


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int


@dataclass(frozen=True)
class ValueSet:
    values: tuple[int, ...]  # sorted ascending, distinct


DomainLiteral = Union[SingleValue, Interval, ValueSet]


# --- result lists -----------------------------------------------------------


@dataclass(frozen=True)
class LiteralList:
    values: tuple[int, ...]


@dataclass(frozen=True)
class ScalarResult:
    value: int


@dataclass(frozen=True)
class RangeResult:
    spec: RangeSpec


@dataclass(frozen=True)
class CellResult:
    addr: CellAddr


ResultListSpec = Union[LiteralList, ScalarResult, RangeResult, CellResult]


# --- constraints ------------------------------------------------------------


@dataclass(frozen=True)
class DomainDecl:
    spec: RangeSpec
    lo: int
    hi: int


@dataclass(frozen=True)
class AllDifferentDecl:
    spec: RangeSpec


@dataclass(frozen=True)
class RowsAllDifferent:
    rect: Rect


@dataclass(frozen=True)
class ColsAllDifferent:
    rect: Rect


@dataclass(frozen=True)
class ColsAggregate:
    op: BinArithOp
    rect: Rect
    rel: RelOp
    result: ResultListSpec


@dataclass(frozen=True)
class RowsAggregate:
    op: BinArithOp
    rect: Rect
    rel: RelOp
    result: ResultListSpec


@dataclass(frozen=True)
class DiagonalAggregate:
    op: BinArithOp
    rect: Rect
    rel: RelOp
    result: ResultListSpec


@dataclass(frozen=True)
class BackDiagonalAggregate:
    op: BinArithOp
    rect: Rect
    rel: RelOp
    result: ResultListSpec


@dataclass(frozen=True)
class PairCellsAggregate:
    first: Rect
    op: BinArithOp
    second: Rect
    rel: RelOp
    result: ResultListSpec


@dataclass(frozen=True)
class NthElement:
    index: ArithExpr  # IntLit or CellRefExpr
    table: RangeSpec
    value: CellAddr


@dataclass(frozen=True)
class Minimize:
    addr: CellAddr


@dataclass(frozen=True)
class Maximize:
    addr: CellAddr


@dataclass(frozen=True)
class ArithRel:
    lhs: ArithExpr
    rel: RelOp
    rhs: ArithExpr


ConstraintAst = Union[
    DomainDecl,
    AllDifferentDecl,
    RowsAllDifferent,
    ColsAllDifferent,
    ColsAggregate,
    RowsAggregate,
    DiagonalAggregate,
    BackDiagonalAggregate,
    PairCellsAggregate,
    NthElement,
    Minimize,
    Maximize,
    ArithRel,
]


@dataclass(frozen=True)
class MarkerDecl:
    kind: str  # "var" or "constraint"
    ranges: tuple[Union[Single, Rect], ...]
    location: CellAddr


VAR_MARKER = "ssvarranges"
CONSTRAINT_MARKER = "ssconstraintranges"

_SS_FUNCTIONS = {
    "ssdomain",
    "ssalldifferent",
    "ssrowsalldifferent",
    "sscolsalldifferent",
    "sscolsaggregate",
    "ssrowsaggregate",
    "ssdiagonalaggregate",
    "ssbackdiagonalaggregate",
    "sspaircellsaggregate",
    "nthelement",
    "ssmin",
    "ssmax",
}

_EXPR_FUNCTIONS = {"abs", "min", "max"}


# --- tokenizer --------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<relop>\#=<|\#>=|\#\\=|\#=|\#<|\#>)
      | (?P<dotdot>\.\.)
      | (?P<int>[0-9]+)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<sym>[()\[\],:!+\-*])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str, cell: CellAddr | None = None) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at {pos}", cell=cell)
        pos = m.end()
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), m.start()))
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, wb: Workbook, text: str, current_sheet: int, cell: CellAddr | None):
        self.wb = wb
        self.text = text
        self.sheet = current_sheet
        self.cell = cell
        self.toks = _tokenize(text, cell)
        self.i = 0

    # -- token plumbing

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            wanted = text or kind
            raise self.fail(f"expected {wanted!r}, found {tok.text or 'end of text'!r}")
        return tok

    def fail(self, msg: str) -> ParseError:
        return ParseError(f"{msg} in {self.text!r}", cell=self.cell)

    def at_end(self) -> bool:
        return self.peek().kind == "end"

    def expect_end(self) -> None:
        if not self.at_end():
            raise self.fail(f"unexpected trailing {self.peek().text!r}")

    # -- shared pieces

    def parse_int(self) -> int:
        neg = False
        if self.peek().kind == "sym" and self.peek().text == "-":
            self.next()
            neg = True
        tok = self.expect("int")
        value = int(tok.text)
        return -value if neg else value

    def parse_addr(self, default_sheet: int | None = None) -> CellAddr:
        sheet = self.sheet if default_sheet is None else default_sheet
        tok = self.expect("ident")
        name = tok.text
        if self.peek().kind == "sym" and self.peek().text == "!":
            self.next()
            sheet = self.wb.sheet_index(name)
            name = self.expect("ident").text
        m = _A1_RE.match(name)
        if not m:
            raise self.fail(f"malformed cell address {name!r}")
        col = 0
        for ch in m.group(1).upper():
            col = col * 26 + (ord(ch) - ord("A") + 1)
        row = int(m.group(2))
        if not 1 <= col <= MAX_COLS or not 1 <= row <= MAX_ROWS:
            raise self.fail(f"cell address {name!r} out of bounds")
        return CellAddr(sheet, col, row)

    def parse_range_item(self) -> Union[Single, Rect]:
        a = self.parse_addr()
        if self.peek().kind == "sym" and self.peek().text == ":":
            self.next()
            b = self.parse_addr(default_sheet=a.sheet)
            return make_rect(a, b)
        return Single(a)

    def parse_range(self) -> RangeSpec:
        if self.peek().kind == "sym" and self.peek().text == "[":
            self.next()
            items = [self.parse_range_item()]
            while self.peek().text == ",":
                self.next()
                items.append(self.parse_range_item())
            self.expect("sym", "]")
            return Enumeration(tuple(items))
        return self.parse_range_item()

    def parse_rect(self) -> Rect:
        spec = self.parse_range()
        if not isinstance(spec, Rect):
            from .errors import MatrixRequired

            raise MatrixRequired(
                f"a matrix range (written with ':') is required in {self.text!r}",
                cell=self.cell,
            )
        return spec

    def parse_rel(self) -> RelOp:
        tok = self.expect("relop")
        return RelOp(tok.text)

    def parse_arith_op(self) -> BinArithOp:
        tok = self.next()
        if tok.kind != "sym" or tok.text not in "+-*":
            raise self.fail(f"expected an arithmetic operator, found {tok.text!r}")
        return BinArithOp(tok.text)

    def parse_result_list(self) -> ResultListSpec:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "[":
            self.next()
            ints: list[int] = []
            items: list[Union[Single, Rect]] = []
            while True:
                if self.peek().kind == "int" or self.peek().text == "-":
                    ints.append(self.parse_int())
                else:
                    items.append(self.parse_range_item())
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect("sym", "]")
            if ints and items:
                raise self.fail("result list mixes integers and cell references")
            if ints:
                return LiteralList(tuple(ints))
            return RangeResult(Enumeration(tuple(items)))
        if tok.kind == "int" or (tok.kind == "sym" and tok.text == "-"):
            return ScalarResult(self.parse_int())
        spec = self.parse_range_item()
        if isinstance(spec, Single):
            return CellResult(spec.addr)
        return RangeResult(spec)

    # -- arithmetic expressions

    def parse_expr(self) -> ArithExpr:
        node = self.parse_term()
        while self.peek().kind == "sym" and self.peek().text in "+-":
            op = BinArithOp(self.next().text)
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> ArithExpr:
        node = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text == "*":
                self.next()
                node = BinOp(BinArithOp.TIMES, node, self.parse_factor())
            elif tok.kind == "ident" and tok.text.lower() == "mod":
                self.next()
                node = ModExpr(node, self.parse_factor())
            else:
                return node

    def parse_factor(self) -> ArithExpr:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "(":
            self.next()
            node = self.parse_expr()
            self.expect("sym", ")")
            return node
        if tok.kind == "sym" and tok.text == "-":
            self.next()
            return IntLit(-int(self.expect("int").text))
        if tok.kind == "int":
            return IntLit(int(self.next().text))
        if tok.kind == "ident":
            name = tok.text.lower()
            if name in _EXPR_FUNCTIONS and self.peek(1).text == "(":
                self.next()
                self.next()
                first = self.parse_expr()
                if name == "abs":
                    self.expect("sym", ")")
                    return AbsExpr(first)
                self.expect("sym", ",")
                second = self.parse_expr()
                self.expect("sym", ")")
                return MinExpr(first, second) if name == "min" else MaxExpr(first, second)
            return CellRefExpr(self.parse_addr())
        raise self.fail(f"expected an expression, found {tok.text or 'end of text'!r}")


def parse_domain_literal(text: str, cell: CellAddr | None = None) -> DomainLiteral:
    """Parse a variable cell: "200", "1..3", or "[1,2,3,5,6]"."""
    toks = _tokenize(clean_cell_text(text), cell)

    def take_int(i: int) -> tuple[int, int]:
        neg = False
        if toks[i].kind == "sym" and toks[i].text == "-":
            neg = True
            i += 1
        if toks[i].kind != "int":
            raise ParseError(f"bad domain literal {text!r}", cell=cell)
        return (-int(toks[i].text) if neg else int(toks[i].text)), i + 1

    if toks[0].kind == "sym" and toks[0].text == "[":
        values = []
        i = 1
        while True:
            v, i = take_int(i)
            values.append(v)
            if toks[i].text == ",":
                i += 1
                continue
            break
        if toks[i].text != "]" or toks[i + 1].kind != "end":
            raise ParseError(f"bad domain literal {text!r}", cell=cell)
        if len(set(values)) != len(values):
            raise ParseError(f"duplicate values in domain literal {text!r}", cell=cell)
        return ValueSet(tuple(sorted(values)))
    v, i = take_int(0)
    if toks[i].kind == "dotdot":
        hi, i = take_int(i + 1)
        if toks[i].kind != "end":
            raise ParseError(f"bad domain literal {text!r}", cell=cell)
        if hi < v:
            raise ParseError(f"empty interval in domain literal {text!r}", cell=cell)
        return Interval(v, hi)
    if toks[i].kind != "end":
        raise ParseError(f"bad domain literal {text!r}", cell=cell)
    return SingleValue(v)


def parse_constraint(
    wb: Workbook, text: str, current_sheet: int, cell: CellAddr | None = None
) -> ConstraintAst:
    """Parse one constraint cell into its AST.

    Unqualified cell references bind to current_sheet (the sheet holding
    the constraint text). Function names match case-insensitively.
    """
    cleaned = clean_cell_text(text)
    if not cleaned:
        raise ParseError("empty constraint cell", cell=cell)
    p = _Parser(wb, cleaned, current_sheet, cell)
    head = p.peek()
    if head.kind == "ident" and p.peek(1).text == "(":
        name = head.text.lower()
        if name in (VAR_MARKER, CONSTRAINT_MARKER):
            raise ParseError(
                f"{head.text} is a marker declaration, not a constraint", cell=cell
            )
        if name in _SS_FUNCTIONS:
            return _parse_call(p, name)
    node = _parse_arith_rel(p)
    p.expect_end()
    return node


def _parse_arith_rel(p: _Parser) -> ArithRel:
    lhs = p.parse_expr()
    rel = p.parse_rel()
    rhs = p.parse_expr()
    return ArithRel(lhs, rel, rhs)


def _parse_call(p: _Parser, name: str) -> ConstraintAst:
    p.next()  # function name
    p.expect("sym", "(")

    def comma() -> None:
        p.expect("sym", ",")

    if name == "ssdomain":
        spec = p.parse_range()
        comma()
        lo = p.parse_int()
        comma()
        hi = p.parse_int()
        node: ConstraintAst = DomainDecl(spec, lo, hi)
    elif name == "ssalldifferent":
        node = AllDifferentDecl(p.parse_range())
    elif name == "ssrowsalldifferent":
        node = RowsAllDifferent(p.parse_rect())
    elif name == "sscolsalldifferent":
        node = ColsAllDifferent(p.parse_rect())
    elif name in ("sscolsaggregate", "ssrowsaggregate", "ssdiagonalaggregate", "ssbackdiagonalaggregate"):
        op = p.parse_arith_op()
        comma()
        rect = p.parse_rect()
        comma()
        rel = p.parse_rel()
        comma()
        result = p.parse_result_list()
        cls = {
            "sscolsaggregate": ColsAggregate,
            "ssrowsaggregate": RowsAggregate,
            "ssdiagonalaggregate": DiagonalAggregate,
            "ssbackdiagonalaggregate": BackDiagonalAggregate,
        }[name]
        node = cls(op, rect, rel, result)
    elif name == "sspaircellsaggregate":
        first = p.parse_rect()
        comma()
        op = p.parse_arith_op()
        comma()
        second = p.parse_rect()
        comma()
        rel = p.parse_rel()
        comma()
        result = p.parse_result_list()
        node = PairCellsAggregate(first, op, second, rel, result)
    elif name == "nthelement":
        if p.peek().kind == "int" or p.peek().text == "-":
            index: ArithExpr = IntLit(p.parse_int())
        else:
            index = CellRefExpr(p.parse_addr())
        comma()
        table = p.parse_range()
        comma()
        value = p.parse_addr()
        node = NthElement(index, table, value)
    elif name in ("ssmin", "ssmax"):
        spec = p.parse_range()
        if not isinstance(spec, Single):
            raise ObjectiveNotSingleCell(
                f"{'ssMin' if name == 'ssmin' else 'ssMax'} needs a single cell",
                cell=p.cell,
            )
        node = Minimize(spec.addr) if name == "ssmin" else Maximize(spec.addr)
    else:  # pragma: no cover - the dispatch table is closed
        raise p.fail(f"unknown function {name!r}")
    p.expect("sym", ")")
    p.expect_end()
    return node


def is_marker_text(text: str) -> str | None:
    """Return "var"/"constraint" if the cell text is a marker declaration."""
    cleaned = clean_cell_text(text).lower()
    for kind, marker in (("var", VAR_MARKER), ("constraint", CONSTRAINT_MARKER)):
        if cleaned.startswith(marker):
            rest = cleaned[len(marker):].lstrip()
            if rest.startswith("("):
                return kind
    return None


def parse_marker(wb: Workbook, text: str, location: CellAddr) -> MarkerDecl:
    """Parse a marker cell: a comma list of range items, no brackets needed."""
    kind = is_marker_text(text)
    if kind is None:
        raise ParseError(f"not a marker declaration: {text!r}", cell=location)
    p = _Parser(wb, clean_cell_text(text), location.sheet, location)
    p.next()  # marker name
    p.expect("sym", "(")
    ranges = [p.parse_range_item()]
    while p.peek().text == ",":
        p.next()
        ranges.append(p.parse_range_item())
    p.expect("sym", ")")
    p.expect_end()
    return MarkerDecl(kind, tuple(ranges), location)


def find_markers(wb: Workbook) -> tuple[MarkerDecl, MarkerDecl]:
    """Locate the single ssVarRanges and ssConstraintRanges declarations.

    Scans every sheet row-major. Range items in a declaration default to
    the sheet the declaration is written on.
    """
    from .errors import DuplicateMarker, MissingConstraintRanges, MissingVarRanges

    found: dict[str, MarkerDecl] = {}
    for addr, text in wb.iter_cells():
        kind = is_marker_text(text)
        if kind is None:
            continue
        if kind in found:
            raise DuplicateMarker(
                f"duplicate ss{'Var' if kind == 'var' else 'Constraint'}Ranges declaration",
                cell=addr,
            )
        found[kind] = parse_marker(wb, text, addr)
    if "var" not in found:
        raise MissingVarRanges("no ssVarRanges declaration in the workbook")
    if "constraint" not in found:
        raise MissingConstraintRanges("no ssConstraintRanges declaration in the workbook")
    return found["var"], found["constraint"]


# --- canonical formatting ---------------------------------------------------


def format_expr(wb: Workbook, expr: ArithExpr, current_sheet: int) -> str:
    def fmt(node: ArithExpr, parent_prec: int, right_side: bool) -> str:
        if isinstance(node, IntLit):
            return str(node.value)
        if isinstance(node, CellRefExpr):
            return format_cell_addr(wb, node.addr, current_sheet)
        if isinstance(node, AbsExpr):
            return f"abs({fmt(node.arg, 0, False)})"
        if isinstance(node, MinExpr):
            return f"min({fmt(node.lhs, 0, False)}, {fmt(node.rhs, 0, False)})"
        if isinstance(node, MaxExpr):
            return f"max({fmt(node.lhs, 0, False)}, {fmt(node.rhs, 0, False)})"
        if isinstance(node, ModExpr):
            text = f"{fmt(node.lhs, 2, False)} mod {fmt(node.rhs, 2, True)}"
            prec = 2
        else:
            prec = 2 if node.op is BinArithOp.TIMES else 1
            text = (
                f"{fmt(node.lhs, prec, False)} {node.op.value} {fmt(node.rhs, prec, True)}"
            )
        if prec < parent_prec or (prec == parent_prec and right_side):
            return f"({text})"
        return text

    return fmt(expr, 0, False)


def format_result_list(wb: Workbook, result: ResultListSpec, current_sheet: int) -> str:
    if isinstance(result, LiteralList):
        return "[" + ",".join(str(v) for v in result.values) + "]"
    if isinstance(result, ScalarResult):
        return str(result.value)
    if isinstance(result, CellResult):
        return format_cell_addr(wb, result.addr, current_sheet)
    return format_range_spec(wb, result.spec, current_sheet)


def format_constraint(wb: Workbook, ast: ConstraintAst, current_sheet: int) -> str:
    """Canonical text for an AST; parse_constraint of the result is identity."""

    def rng(spec: RangeSpec) -> str:
        return format_range_spec(wb, spec, current_sheet)
    if isinstance(ast, DomainDecl):
        return f"ssDomain({rng(ast.spec)},{ast.lo},{ast.hi})"
    if isinstance(ast, AllDifferentDecl):
        return f"ssAllDifferent({rng(ast.spec)})"
    if isinstance(ast, RowsAllDifferent):
        return f"ssRowsAllDifferent({rng(ast.rect)})"
    if isinstance(ast, ColsAllDifferent):
        return f"ssColsAllDifferent({rng(ast.rect)})"
    if isinstance(ast, (ColsAggregate, RowsAggregate, DiagonalAggregate, BackDiagonalAggregate)):
        name = {
            ColsAggregate: "ssColsAggregate",
            RowsAggregate: "ssRowsAggregate",
            DiagonalAggregate: "ssDiagonalAggregate",
            BackDiagonalAggregate: "ssBackDiagonalAggregate",
        }[type(ast)]
        result = format_result_list(wb, ast.result, current_sheet)
        return f"{name}({ast.op.value},{rng(ast.rect)},{ast.rel.value},{result})"
    if isinstance(ast, PairCellsAggregate):
        result = format_result_list(wb, ast.result, current_sheet)
        return (
            f"ssPairCellsAggregate({rng(ast.first)},{ast.op.value},"
            f"{rng(ast.second)},{ast.rel.value},{result})"
        )
    if isinstance(ast, NthElement):
        idx = format_expr(wb, ast.index, current_sheet)
        return f"nthElement({idx},{rng(ast.table)},{format_cell_addr(wb, ast.value, current_sheet)})"
    if isinstance(ast, Minimize):
        return f"ssMin({format_cell_addr(wb, ast.addr, current_sheet)})"
    if isinstance(ast, Maximize):
        return f"ssMax({format_cell_addr(wb, ast.addr, current_sheet)})"
    if isinstance(ast, ArithRel):
        lhs = format_expr(wb, ast.lhs, current_sheet)
        rhs = format_expr(wb, ast.rhs, current_sheet)
        return f"{lhs} {ast.rel.value} {rhs}"
    raise TypeError(f"not a constraint AST: {ast!r}")


def format_domain_literal(lit: DomainLiteral) -> str:
    if isinstance(lit, SingleValue):
        return str(lit.value)
    if isinstance(lit, Interval):
        return f"{lit.lo}..{lit.hi}"
    return "[" + ",".join(str(v) for v in lit.values) + "]"
