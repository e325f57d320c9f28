"""Finite-domain solver: propagation to fixpoint plus depth-first labeling.

Propagation strength, chosen to match the published behavior:

* all-different removes the values of fixed members from the others
  (forward checking);
* linear sums (the common shape of folds and arithmetic relations) get
  bounds reasoning with exact integer rounding;
* other arithmetic trees get interval evaluation with backward projection;
* element lookups prune both the index and the value.

Search is depth-first over variables in declaration order, values
ascending, so the solution order is reproducible. Optimization is
branch-and-bound: each incumbent tightens a bound on the objective
variable, and after exhaustion the optimum is re-enumerated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .csp import (
    AbsIR,
    AllDiff,
    ArithRelIR,
    BinIR,
    Const,
    Csp,
    CspConstraint,
    Element,
    ExprIR,
    FoldRel,
    MaxIR,
    MinIR,
    ModIR,
    Sense,
    Term,
    TermExpr,
    Var,
    VarInfo,
)
from .domain import Domain
from .errors import NodeLimitExceeded, SolveCancelled
from .sslang import BinArithOp, RelOp

Solution = tuple[int, ...]


@dataclass
class SearchConfig:
    """Search knobs; defaults match the interactive session."""

    max_solutions: int = 1000
    node_limit: Optional[int] = None
    should_cancel: Optional[Callable[[], bool]] = None

    def __post_init__(self) -> None:
        if self.max_solutions < 1:
            raise ValueError("max_solutions must be >= 1")
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be >= 1")


class VarStore:
    """Current domains plus a trail for chronological backtracking."""

    def __init__(self, domains: Iterable[Domain]):
        self.domains: list[Domain] = list(domains)
        self.trail: list[tuple[int, Domain]] = []
        self.changes: list[int] = []

    def mark(self) -> int:
        return len(self.trail)

    def undo_to(self, mark: int) -> None:
        while len(self.trail) > mark:
            vid, old = self.trail.pop()
            self.domains[vid] = old
        self.changes.clear()

    def narrow(self, vid: int, new: Domain) -> bool:
        """Replace a domain with a subset; False when it became empty."""
        old = self.domains[vid]
        if new.intervals == old.intervals:
            return True
        self.trail.append((vid, old))
        self.domains[vid] = new
        self.changes.append(vid)
        return not new.empty

    def clamp(self, vid: int, lo: Optional[int], hi: Optional[int]) -> bool:
        return self.narrow(vid, self.domains[vid].clamp(lo, hi))

    def remove_value(self, vid: int, value: int) -> bool:
        return self.narrow(vid, self.domains[vid].remove_value(value))

    def drain(self) -> list[int]:
        out = self.changes[:]
        self.changes.clear()
        return out


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _term_bounds(store: VarStore, t: Term) -> tuple[int, int]:
    if isinstance(t, Const):
        return t.value, t.value
    d = store.domains[t.id]
    return d.min, d.max


def _term_domain(store: VarStore, t: Term) -> Domain:
    if isinstance(t, Const):
        return Domain.singleton(t.value)
    return store.domains[t.id]


# --- propagators ----------------------------------------------------------


class _AllDiffProp:
    """Forward checking: a fixed member's value leaves every other member."""

    __slots__ = ("vars",)

    def __init__(self, vars: tuple[int, ...]):
        self.vars = vars

    def watched(self) -> set[int]:
        return set(self.vars)

    def filter(self, store: VarStore) -> bool:
        fixed: dict[int, int] = {}
        for vid in self.vars:
            d = store.domains[vid]
            if d.is_singleton:
                value = d.value
                if value in fixed and fixed[value] != vid:
                    return False
                fixed[value] = vid
        if not fixed:
            return True
        for vid in self.vars:
            d = store.domains[vid]
            if d.is_singleton:
                continue
            for value, owner in fixed.items():
                if owner != vid and value in d:
                    if not store.remove_value(vid, value):
                        return False
                    d = store.domains[vid]
        return True


_NEED = {
    RelOp.EQ: (0, 0),
    RelOp.LE: (None, 0),
    RelOp.LT: (None, -1),
    RelOp.GE: (0, None),
    RelOp.GT: (1, None),
}


class _LinearProp:
    """sum(coef*var) + const REL 0 with bounds-consistent narrowing."""

    __slots__ = ("terms", "const", "rel")

    def __init__(self, terms: tuple[tuple[int, int], ...], const: int, rel: RelOp):
        self.terms = terms  # (coef, vid), coef != 0
        self.const = const
        self.rel = rel

    def watched(self) -> set[int]:
        return {vid for _, vid in self.terms}

    def filter(self, store: VarStore) -> bool:
        if self.rel is RelOp.NEQ:
            return self._filter_neq(store)
        need_lo, need_hi = _NEED[self.rel]
        doms = store.domains
        lo = hi = self.const
        spans = []
        for c, vid in self.terms:
            d = doms[vid]
            if c > 0:
                tlo, thi = c * d.min, c * d.max
            else:
                tlo, thi = c * d.max, c * d.min
            spans.append((tlo, thi))
            lo += tlo
            hi += thi
        if need_lo is not None and hi < need_lo:
            return False
        if need_hi is not None and lo > need_hi:
            return False
        for (c, vid), (tlo, thi) in zip(self.terms, spans):
            # bounds the term c*vid must stay within, given the others
            t_lo = None if need_lo is None else need_lo - (hi - thi)
            t_hi = None if need_hi is None else need_hi - (lo - tlo)
            if t_lo is None and t_hi is None:
                continue
            if c > 0:
                x_lo = None if t_lo is None else _ceil_div(t_lo, c)
                x_hi = None if t_hi is None else t_hi // c
            else:
                x_lo = None if t_hi is None else _ceil_div(t_hi, c)
                x_hi = None if t_lo is None else t_lo // c
            if x_lo is not None or x_hi is not None:
                if not store.clamp(vid, x_lo, x_hi):
                    return False
        return True

    def _filter_neq(self, store: VarStore) -> bool:
        rest = self.const
        open_term = None
        for c, vid in self.terms:
            d = store.domains[vid]
            if d.is_singleton:
                rest += c * d.value
            elif open_term is None:
                open_term = (c, vid)
            else:
                return True  # two unfixed vars: nothing to prune yet
        if open_term is None:
            return rest != 0
        c, vid = open_term
        if rest % c == 0:
            return store.remove_value(vid, -rest // c)
        return True


class _ElementProp:
    """table[index] = value with 1-based index."""

    __slots__ = ("index", "table", "value")

    def __init__(self, index: Term, table: tuple[Term, ...], value: Term):
        self.index = index
        self.table = table
        self.value = value

    def watched(self) -> set[int]:
        out = {t.id for t in self.table if isinstance(t, Var)}
        for t in (self.index, self.value):
            if isinstance(t, Var):
                out.add(t.id)
        return out

    def filter(self, store: VarStore) -> bool:
        n = len(self.table)
        idx_dom = _term_domain(store, self.index).clamp(1, n)
        if idx_dom.empty:
            return False
        value_dom = _term_domain(store, self.value)
        feasible = []
        reachable = Domain()
        for i in idx_dom:
            entry_dom = _term_domain(store, self.table[i - 1])
            hit = entry_dom.intersect(value_dom)
            if not hit.empty:
                feasible.append(i)
                reachable = reachable.union(hit)
        if not feasible:
            return False
        if isinstance(self.index, Var):
            if not store.narrow(self.index.id, Domain.from_values(feasible)):
                return False
        elif self.index.value not in feasible:
            return False
        if isinstance(self.value, Var):
            if not store.narrow(self.value.id, store.domains[self.value.id].intersect(reachable)):
                return False
        elif self.value.value not in reachable:
            return False
        if len(feasible) == 1:
            entry = self.table[feasible[0] - 1]
            if isinstance(entry, Var):
                hit = store.domains[entry.id].intersect(_term_domain(store, self.value))
                if not store.narrow(entry.id, hit):
                    return False
        return True


class _Hc4Prop:
    """Interval evaluation with backward projection over one relation."""

    __slots__ = ("lhs", "rel", "rhs")

    def __init__(self, lhs: ExprIR, rel: RelOp, rhs: ExprIR):
        if rel is RelOp.GE:
            lhs, rel, rhs = rhs, RelOp.LE, lhs
        elif rel is RelOp.GT:
            lhs, rel, rhs = rhs, RelOp.LT, lhs
        self.lhs = lhs
        self.rel = rel
        self.rhs = rhs

    def watched(self) -> set[int]:
        from .csp import expr_vars

        return expr_vars(self.lhs) | expr_vars(self.rhs)

    def filter(self, store: VarStore) -> bool:
        lbox = _forward(self.lhs, store)
        if lbox is None:
            return False
        rbox = _forward(self.rhs, store)
        if rbox is None:
            return False
        ll, lh = lbox
        rl, rh = rbox
        rel = self.rel
        if rel is RelOp.EQ:
            lo, hi = max(ll, rl), min(lh, rh)
            if lo > hi:
                return False
            return _backward(self.lhs, store, lo, hi) and _backward(self.rhs, store, lo, hi)
        if rel is RelOp.NEQ:
            if ll == lh == rl == rh:
                return False
            if rl == rh and isinstance(self.lhs, TermExpr) and isinstance(self.lhs.term, Var):
                return store.remove_value(self.lhs.term.id, rl)
            if ll == lh and isinstance(self.rhs, TermExpr) and isinstance(self.rhs.term, Var):
                return store.remove_value(self.rhs.term.id, ll)
            return True
        gap = 1 if rel is RelOp.LT else 0
        # lhs <= rhs - gap
        if ll > rh - gap:
            return False
        return _backward(self.lhs, store, ll, rh - gap) and _backward(
            self.rhs, store, ll + gap, rh
        )


def _forward(expr: ExprIR, store: VarStore) -> Optional[tuple[int, int]]:
    """Interval evaluation; None signals a detected inconsistency."""
    if isinstance(expr, TermExpr):
        return _term_bounds(store, expr.term)
    if isinstance(expr, AbsIR):
        box = _forward(expr.arg, store)
        if box is None:
            return None
        lo, hi = box
        if lo >= 0:
            return lo, hi
        if hi <= 0:
            return -hi, -lo
        return 0, max(-lo, hi)
    if isinstance(expr, (MinIR, MaxIR)):
        lbox = _forward(expr.lhs, store)
        rbox = _forward(expr.rhs, store)
        if lbox is None or rbox is None:
            return None
        if isinstance(expr, MinIR):
            return min(lbox[0], rbox[0]), min(lbox[1], rbox[1])
        return max(lbox[0], rbox[0]), max(lbox[1], rbox[1])
    if isinstance(expr, ModIR):
        lbox = _forward(expr.lhs, store)
        rbox = _forward(expr.rhs, store)
        if lbox is None or rbox is None:
            return None
        rl, rh = rbox
        if rl <= 0 <= rh:
            # the divisor must not be zero; prune when it is a bare variable
            if isinstance(expr.rhs, TermExpr):
                t = expr.rhs.term
                if isinstance(t, Const):
                    if rl == rh == 0:
                        return None
                elif not store.remove_value(t.id, 0):
                    return None
                else:
                    d = store.domains[t.id]
                    rl, rh = d.min, d.max
            if rl == rh == 0:
                return None
        if rl == rh and lbox[0] == lbox[1] and rl != 0:
            v = lbox[0] % rl
            return v, v
        if rl > 0:
            return 0, rh - 1
        if rh < 0:
            return rh + 1, 0
        m = max(abs(rl), abs(rh))
        return -(m - 1), m - 1
    lbox = _forward(expr.lhs, store)
    rbox = _forward(expr.rhs, store)
    if lbox is None or rbox is None:
        return None
    ll, lh = lbox
    rl, rh = rbox
    if expr.op is BinArithOp.PLUS:
        return ll + rl, lh + rh
    if expr.op is BinArithOp.MINUS:
        return ll - rh, lh - rl
    products = (ll * rl, ll * rh, lh * rl, lh * rh)
    return min(products), max(products)


def _backward(expr: ExprIR, store: VarStore, lo: int, hi: int) -> bool:
    """Require expr within [lo, hi]; narrow variable leaves accordingly."""
    box = _forward(expr, store)
    if box is None:
        return False
    lo = max(lo, box[0])
    hi = min(hi, box[1])
    if lo > hi:
        return False
    if isinstance(expr, TermExpr):
        t = expr.term
        if isinstance(t, Const):
            return lo <= t.value <= hi
        return store.clamp(t.id, lo, hi)
    if isinstance(expr, AbsIR):
        return _backward(expr.arg, store, -hi, hi)
    if isinstance(expr, MinIR):
        # both args >= lo; an arg must take the minimum when the other cannot
        lbox = _forward(expr.lhs, store)
        rbox = _forward(expr.rhs, store)
        if lbox is None or rbox is None:
            return False
        if not _backward(expr.lhs, store, lo, hi if rbox[0] > hi else lbox[1]):
            return False
        rbox2 = _forward(expr.rhs, store)
        lbox2 = _forward(expr.lhs, store)
        if rbox2 is None or lbox2 is None:
            return False
        return _backward(expr.rhs, store, lo, hi if lbox2[0] > hi else rbox2[1])
    if isinstance(expr, MaxIR):
        lbox = _forward(expr.lhs, store)
        rbox = _forward(expr.rhs, store)
        if lbox is None or rbox is None:
            return False
        if not _backward(expr.lhs, store, lo if rbox[1] < lo else lbox[0], hi):
            return False
        rbox2 = _forward(expr.rhs, store)
        lbox2 = _forward(expr.lhs, store)
        if rbox2 is None or lbox2 is None:
            return False
        return _backward(expr.rhs, store, lo if lbox2[1] < lo else rbox2[0], hi)
    if isinstance(expr, ModIR):
        return True  # forward-checked only
    lbox = _forward(expr.lhs, store)
    rbox = _forward(expr.rhs, store)
    if lbox is None or rbox is None:
        return False
    ll, lh = lbox
    rl, rh = rbox
    if expr.op is BinArithOp.PLUS:
        if not _backward(expr.lhs, store, lo - rh, hi - rl):
            return False
        lbox2 = _forward(expr.lhs, store)
        if lbox2 is None:
            return False
        return _backward(expr.rhs, store, lo - lbox2[1], hi - lbox2[0])
    if expr.op is BinArithOp.MINUS:
        if not _backward(expr.lhs, store, lo + rl, hi + rh):
            return False
        lbox2 = _forward(expr.lhs, store)
        if lbox2 is None:
            return False
        return _backward(expr.rhs, store, lbox2[0] - hi, lbox2[1] - lo)
    # multiplication: divide through when the other side excludes zero
    if rl > 0 or rh < 0:
        cands_lo = min(_ceil_div(lo, rl), _ceil_div(lo, rh), _ceil_div(hi, rl), _ceil_div(hi, rh))
        cands_hi = max(lo // rl, lo // rh, hi // rl, hi // rh)
        if not _backward(expr.lhs, store, cands_lo, cands_hi):
            return False
    lbox2 = _forward(expr.lhs, store)
    if lbox2 is None:
        return False
    ll, lh = lbox2
    if ll > 0 or lh < 0:
        cands_lo = min(_ceil_div(lo, ll), _ceil_div(lo, lh), _ceil_div(hi, ll), _ceil_div(hi, lh))
        cands_hi = max(lo // ll, lo // lh, hi // ll, hi // lh)
        return _backward(expr.rhs, store, cands_lo, cands_hi)
    return True


# --- compiling constraints to propagators -----------------------------------


def _fold_linear(c: FoldRel) -> Optional[tuple[tuple[tuple[int, int], ...], int]]:
    """Coefficient form of a +/- fold including the moved rhs, if linear."""
    if c.op is BinArithOp.TIMES:
        return None
    coefs: dict[int, int] = {}
    const = 0

    def add(t: Term, sign: int) -> None:
        nonlocal const
        if isinstance(t, Var):
            coefs[t.id] = coefs.get(t.id, 0) + sign
        else:
            const += sign * t.value

    add(c.operands[0], 1)
    rest_sign = 1 if c.op is BinArithOp.PLUS else -1
    for t in c.operands[1:]:
        add(t, rest_sign)
    add(c.rhs, -1)
    terms = tuple((coef, vid) for vid, coef in coefs.items() if coef != 0)
    return terms, const


def _linearize_expr(expr: ExprIR) -> Optional[tuple[dict[int, int], int]]:
    if isinstance(expr, TermExpr):
        if isinstance(expr.term, Var):
            return {expr.term.id: 1}, 0
        return {}, expr.term.value
    if isinstance(expr, BinIR):
        left = _linearize_expr(expr.lhs)
        right = _linearize_expr(expr.rhs)
        if left is None or right is None:
            return None
        lc, lk = left
        rc, rk = right
        if expr.op is BinArithOp.PLUS:
            out = dict(lc)
            for vid, coef in rc.items():
                out[vid] = out.get(vid, 0) + coef
            return out, lk + rk
        if expr.op is BinArithOp.MINUS:
            out = dict(lc)
            for vid, coef in rc.items():
                out[vid] = out.get(vid, 0) - coef
            return out, lk - rk
        if not lc:
            return {vid: lk * coef for vid, coef in rc.items()}, lk * rk
        if not rc:
            return {vid: rk * coef for vid, coef in lc.items()}, rk * lk
        return None
    return None


def _fold_expr(c: FoldRel) -> ExprIR:
    node: ExprIR = TermExpr(c.operands[0])
    for t in c.operands[1:]:
        node = BinIR(c.op, node, TermExpr(t))
    return node


def compile_propagator(c: CspConstraint):
    if isinstance(c, AllDiff):
        return _AllDiffProp(c.vars)
    if isinstance(c, FoldRel):
        linear = _fold_linear(c)
        if linear is not None:
            terms, const = linear
            return _LinearProp(terms, const, c.rel)
        return _Hc4Prop(_fold_expr(c), c.rel, TermExpr(c.rhs))
    if isinstance(c, Element):
        return _ElementProp(c.index, c.table, c.value)
    if isinstance(c, ArithRelIR):
        lhs = _linearize_expr(c.lhs)
        rhs = _linearize_expr(c.rhs)
        if lhs is not None and rhs is not None:
            coefs = dict(lhs[0])
            for vid, coef in rhs[0].items():
                coefs[vid] = coefs.get(vid, 0) - coef
            terms = tuple((coef, vid) for vid, coef in coefs.items() if coef != 0)
            return _LinearProp(terms, lhs[1] - rhs[1], c.rel)
        return _Hc4Prop(c.lhs, c.rel, c.rhs)
    raise TypeError(f"not a constraint: {c!r}")


def propagate(store: VarStore, constraints: Iterable[CspConstraint]) -> bool:
    """Run all constraints to fixpoint on the store; False when inconsistent."""
    props = [compile_propagator(c) for c in constraints]
    watchers: dict[int, list[int]] = {}
    for i, prop in enumerate(props):
        for vid in prop.watched():
            watchers.setdefault(vid, []).append(i)
    return _fixpoint(store, props, watchers, range(len(props)))


def _fixpoint(store, props, watchers, seed) -> bool:
    queue = deque(seed)
    queued = [False] * len(props)
    for i in queue:
        queued[i] = True
    store.changes.clear()
    while queue:
        i = queue.popleft()
        queued[i] = False
        if not props[i].filter(store):
            store.changes.clear()
            return False
        for vid in store.drain():
            for j in watchers.get(vid, ()):
                if not queued[j]:
                    queued[j] = True
                    queue.append(j)
    return True


# --- search ------------------------------------------------------------


@dataclass
class OptimizeResult:
    best: Optional[Solution]
    all_optimal: list[Solution] = field(default_factory=list)
    objective: Optional[int] = None


class _Engine:
    def __init__(self, csp: Csp, config: SearchConfig):
        self.csp = csp
        self.config = config
        self.props = [compile_propagator(c) for c in csp.constraints]
        self.watchers: dict[int, list[int]] = {}
        for i, prop in enumerate(self.props):
            for vid in prop.watched():
                self.watchers.setdefault(vid, []).append(i)
        self.store = VarStore([v.domain for v in csp.vars])
        self.nodes = 0
        # branch-and-bound clamp, applied at every node when set
        self.obj_var: Optional[int] = None
        self.obj_sense: Optional[Sense] = None
        self.bound: Optional[int] = None

    def _tick(self) -> None:
        self.nodes += 1
        limit = self.config.node_limit
        if limit is not None and self.nodes > limit:
            raise NodeLimitExceeded(f"search exceeded {limit} nodes")
        cancel = self.config.should_cancel
        if cancel is not None and cancel():
            raise SolveCancelled("solve cancelled")

    def run(self, on_solution: Callable[[Solution], bool]) -> None:
        if any(d.empty for d in self.store.domains):
            return
        self._dfs(range(len(self.props)), on_solution)

    def _dfs(self, seed, on_solution) -> bool:
        if self.bound is not None:
            if self.obj_sense is Sense.MINIMIZE:
                ok = self.store.clamp(self.obj_var, None, self.bound - 1)
            else:
                ok = self.store.clamp(self.obj_var, self.bound + 1, None)
            if not ok:
                return True
            # the clamp may have narrowed the objective: rerun its watchers
            seed = set(seed) | set(self.watchers.get(self.obj_var, ()))
        if not _fixpoint(self.store, self.props, self.watchers, seed):
            return True
        domains = self.store.domains
        vid = None
        for i, d in enumerate(domains):
            if not d.is_singleton:
                vid = i
                break
        if vid is None:
            return on_solution(tuple(d.min for d in domains))
        for value in tuple(domains[vid]):
            self._tick()
            mark = self.store.mark()
            self.store.narrow(vid, Domain.singleton(value))
            keep_going = self._dfs(self.watchers.get(vid, ()), on_solution)
            self.store.undo_to(mark)
            if not keep_going:
                return False
        return True


def solve_all(csp: Csp, config: SearchConfig | None = None) -> list[Solution]:
    """Every solution up to the cap, in declaration-order/ascending order."""
    if csp.objective is not None:
        raise ValueError("solve_all does not handle objectives; use solve_optimal")
    config = config or SearchConfig()
    engine = _Engine(csp, config)
    solutions: list[Solution] = []

    def collect(sol: Solution) -> bool:
        assert evaluate(csp, sol) is None, "propagation admitted a bad solution"
        solutions.append(sol)
        return len(solutions) < config.max_solutions

    engine.run(collect)
    return solutions


def solve_optimal(csp: Csp, config: SearchConfig | None = None) -> OptimizeResult:
    """Branch-and-bound on the objective, then enumerate all optima."""
    if csp.objective is None:
        raise ValueError("solve_optimal needs an objective; use solve_all")
    config = config or SearchConfig()
    engine = _Engine(csp, config)
    engine.obj_var = csp.objective.var
    engine.obj_sense = csp.objective.sense
    incumbent: list[Optional[Solution]] = [None]

    def improve(sol: Solution) -> bool:
        incumbent[0] = sol
        engine.bound = sol[csp.objective.var]
        return True

    engine.run(improve)
    if incumbent[0] is None:
        return OptimizeResult(None)
    best_value = incumbent[0][csp.objective.var]

    fixed = Csp(
        [
            VarInfo(v.addr, v.name, v.domain.clamp(best_value, best_value))
            if i == csp.objective.var
            else v
            for i, v in enumerate(csp.vars)
        ],
        csp.constraints,
        None,
    )
    optima: list[Solution] = []
    second = _Engine(fixed, config)
    second.nodes = engine.nodes  # the node budget spans both phases

    def collect(sol: Solution) -> bool:
        assert evaluate(csp, sol) is None, "propagation admitted a bad solution"
        optima.append(sol)
        return len(optima) < config.max_solutions

    second.run(collect)
    return OptimizeResult(optima[0], optima, best_value)


# --- direct evaluation -------------------------------------------------


class _ModByZero(Exception):
    pass


def _eval_term(t: Term, sol: Solution) -> int:
    return sol[t.id] if isinstance(t, Var) else t.value


def _eval_expr(expr: ExprIR, sol: Solution) -> int:
    if isinstance(expr, TermExpr):
        return _eval_term(expr.term, sol)
    if isinstance(expr, AbsIR):
        return abs(_eval_expr(expr.arg, sol))
    if isinstance(expr, MinIR):
        return min(_eval_expr(expr.lhs, sol), _eval_expr(expr.rhs, sol))
    if isinstance(expr, MaxIR):
        return max(_eval_expr(expr.lhs, sol), _eval_expr(expr.rhs, sol))
    if isinstance(expr, ModIR):
        divisor = _eval_expr(expr.rhs, sol)
        if divisor == 0:
            raise _ModByZero
        return _eval_expr(expr.lhs, sol) % divisor
    lhs = _eval_expr(expr.lhs, sol)
    rhs = _eval_expr(expr.rhs, sol)
    if expr.op is BinArithOp.PLUS:
        return lhs + rhs
    if expr.op is BinArithOp.MINUS:
        return lhs - rhs
    return lhs * rhs


_REL_CHECK = {
    RelOp.EQ: lambda a, b: a == b,
    RelOp.NEQ: lambda a, b: a != b,
    RelOp.LT: lambda a, b: a < b,
    RelOp.GT: lambda a, b: a > b,
    RelOp.LE: lambda a, b: a <= b,
    RelOp.GE: lambda a, b: a >= b,
}


def _holds(c: CspConstraint, sol: Solution) -> bool:
    if isinstance(c, AllDiff):
        values = [sol[v] for v in c.vars]
        return len(set(values)) == len(values)
    if isinstance(c, FoldRel):
        acc = _eval_term(c.operands[0], sol)
        for t in c.operands[1:]:
            v = _eval_term(t, sol)
            if c.op is BinArithOp.PLUS:
                acc += v
            elif c.op is BinArithOp.MINUS:
                acc -= v
            else:
                acc *= v
        return _REL_CHECK[c.rel](acc, _eval_term(c.rhs, sol))
    if isinstance(c, Element):
        idx = _eval_term(c.index, sol)
        if not 1 <= idx <= len(c.table):
            return False
        return _eval_term(c.table[idx - 1], sol) == _eval_term(c.value, sol)
    try:
        return _REL_CHECK[c.rel](_eval_expr(c.lhs, sol), _eval_expr(c.rhs, sol))
    except _ModByZero:
        return False


def evaluate(csp: Csp, assignment: Solution) -> Optional[int]:
    """Index of the first violated constraint, or None when all hold.

    This is a direct check, independent of the propagators, so tests can
    use it as an oracle against the search results.
    """
    for i, c in enumerate(csp.constraints):
        if not _holds(c, assignment):
            return i
    return None
