"""Solver behavior: propagation, backtracking, search order, optimization.

The core guarantee is checked by hypothesis: on random small models,
depth-first search returns exactly the assignments that the direct
evaluator accepts, in lexicographic order.
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

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
    Objective,
    Sense,
    TermExpr,
    Var,
    VarInfo,
)
from sheetcsp.domain import Domain
from sheetcsp.errors import NodeLimitExceeded, SolveCancelled
from sheetcsp.fdsolver import (
    OptimizeResult,
    SearchConfig,
    VarStore,
    evaluate,
    propagate,
    solve_all,
    solve_optimal,
)
from sheetcsp.grid import CellAddr
from sheetcsp.sslang import BinArithOp, RelOp


def make_csp(domains, constraints=(), objective=None) -> Csp:
    infos = [
        VarInfo(CellAddr(0, 1, i + 1), f"V{i}", Domain.from_values(values))
        for i, values in enumerate(domains)
    ]
    return Csp(infos, list(constraints), objective)


def brute_force(csp: Csp) -> list[tuple[int, ...]]:
    spaces = [list(v.domain) for v in csp.vars]
    return [
        assignment
        for assignment in itertools.product(*spaces)
        if evaluate(csp, assignment) is None
    ]


def rel(lhs, op, rhs) -> ArithRelIR:
    return ArithRelIR(lhs, op, rhs)


def v(i: int) -> TermExpr:
    return TermExpr(Var(i))


def k(value: int) -> TermExpr:
    return TermExpr(Const(value))


# --- store and trail ---------------------------------------------------------


def test_store_trail_restores_domains():
    store = VarStore([Domain.interval(0, 9), Domain.interval(0, 9)])
    mark = store.mark()
    assert store.clamp(0, 3, 5)
    assert store.remove_value(1, 4)
    assert store.domains[0] == Domain.interval(3, 5)
    store.undo_to(mark)
    assert store.domains[0] == Domain.interval(0, 9)
    assert store.domains[1] == Domain.interval(0, 9)
    assert store.trail == []


def test_store_narrow_reports_wipeout_and_tracks_changes():
    store = VarStore([Domain.interval(0, 5)])
    assert store.narrow(0, Domain.interval(0, 5))  # no-op records nothing
    assert store.drain() == []
    assert not store.clamp(0, 7, 9)
    assert store.domains[0].empty


# --- individual propagators ---------------------------------------------------


def test_all_different_forward_checking():
    store = VarStore([Domain.singleton(2), Domain.interval(1, 3), Domain.interval(1, 3)])
    assert propagate(store, [AllDiff((0, 1, 2))])
    assert list(store.domains[1]) == [1, 3]
    assert list(store.domains[2]) == [1, 3]


def test_all_different_detects_clash():
    store = VarStore([Domain.singleton(2), Domain.singleton(2)])
    assert not propagate(store, [AllDiff((0, 1))])


def test_linear_sum_bounds():
    # V0 + V1 = 10 with V1 in 0..3 forces V0 into 7..10
    store = VarStore([Domain.interval(0, 20), Domain.interval(0, 3)])
    c = FoldRel(BinArithOp.PLUS, (Var(0), Var(1)), RelOp.EQ, Const(10))
    assert propagate(store, [c])
    assert store.domains[0] == Domain.interval(7, 10)


def test_linear_coefficient_rounding():
    # 2*V0 <= 7 rounds down to V0 <= 3; 2*V0 >= 7 rounds up to V0 >= 4
    store = VarStore([Domain.interval(0, 9)])
    le = ArithRelIR(BinIR(BinArithOp.TIMES, k(2), v(0)), RelOp.LE, k(7))
    assert propagate(store, [le])
    assert store.domains[0].max == 3
    store = VarStore([Domain.interval(0, 9)])
    ge = ArithRelIR(BinIR(BinArithOp.TIMES, k(2), v(0)), RelOp.GE, k(7))
    assert propagate(store, [ge])
    assert store.domains[0].min == 4


def test_linear_neq_waits_for_one_open_variable():
    store = VarStore([Domain.interval(0, 5), Domain.singleton(3)])
    c = FoldRel(BinArithOp.PLUS, (Var(0), Var(1)), RelOp.NEQ, Const(7))
    assert propagate(store, [c])
    assert list(store.domains[0]) == [0, 1, 2, 3, 5]


def test_element_prunes_index_and_value():
    # table = (10, 20, 30); value in {20, 30, 40} -> index in {2, 3}
    store = VarStore([Domain.interval(1, 3), Domain.from_values([20, 30, 40])])
    c = Element(Var(0), (Const(10), Const(20), Const(30)), Var(1))
    assert propagate(store, [c])
    assert list(store.domains[0]) == [2, 3]
    assert list(store.domains[1]) == [20, 30]


def test_element_fixed_index_narrows_table_entry():
    store = VarStore([Domain.interval(0, 99), Domain.singleton(7)])
    c = Element(Const(2), (Const(5), Var(0)), Var(1))
    assert propagate(store, [c])
    assert store.domains[0] == Domain.singleton(7)


def test_element_index_out_of_range_fails():
    store = VarStore([Domain.interval(0, 9)])
    c = Element(Const(7), (Const(1), Const(2)), Var(0))
    assert not propagate(store, [c])


def test_interval_projection_through_abs():
    store = VarStore([Domain.interval(-5, 5)])
    c = ArithRelIR(AbsIR(v(0)), RelOp.EQ, k(3))
    assert propagate(store, [c])
    assert store.domains[0] == Domain.interval(-3, 3)


def test_interval_projection_through_product():
    # V0 * V1 = 12 with V0 in 3..3 forces V1 = 4
    store = VarStore([Domain.singleton(3), Domain.interval(0, 9)])
    c = ArithRelIR(BinIR(BinArithOp.TIMES, v(0), v(1)), RelOp.EQ, k(12))
    assert propagate(store, [c])
    assert store.domains[1] == Domain.singleton(4)


def test_mod_forward_bounds():
    # V0 mod 4 = 3 narrows nothing here (forward-checked), but V1 in 0..3
    store = VarStore([Domain.interval(0, 20), Domain.interval(0, 9)])
    c = ArithRelIR(ModIR(v(0), k(4)), RelOp.EQ, v(1))
    assert propagate(store, [c])
    assert store.domains[1].max == 3


def test_propagation_chains_to_fixpoint():
    store = VarStore([Domain.interval(0, 9)] * 3)
    cs = [
        ArithRelIR(v(0), RelOp.EQ, v(1)),
        ArithRelIR(v(1), RelOp.EQ, v(2)),
        ArithRelIR(v(2), RelOp.EQ, k(5)),
    ]
    assert propagate(store, cs)
    assert all(d == Domain.singleton(5) for d in store.domains)


# --- enumeration ----------------------------------------------------------------


def test_solutions_in_lexicographic_order():
    csp = make_csp(
        [[0, 1, 2], [0, 1, 2]],
        [ArithRelIR(v(0), RelOp.NEQ, v(1))],
    )
    assert solve_all(csp) == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]


def test_unsat_returns_empty():
    csp = make_csp([[1, 2]], [ArithRelIR(v(0), RelOp.GT, k(5))])
    assert solve_all(csp) == []


def test_empty_domain_returns_empty():
    csp = make_csp([[]])
    assert solve_all(csp) == []


def test_max_solutions_caps_enumeration():
    csp = make_csp([[0, 1, 2], [0, 1, 2]])
    full = solve_all(csp)
    capped = solve_all(csp, SearchConfig(max_solutions=4))
    assert capped == full[:4]
    assert len(capped) == 4


def test_node_limit_raises():
    csp = make_csp([[0, 1, 2, 3, 4]] * 3)
    with pytest.raises(NodeLimitExceeded):
        solve_all(csp, SearchConfig(node_limit=2))


def test_cancellation_raises():
    calls = [0]

    def cancel() -> bool:
        calls[0] += 1
        return calls[0] > 5

    csp = make_csp([[0, 1, 2, 3, 4]] * 3)
    with pytest.raises(SolveCancelled):
        solve_all(csp, SearchConfig(should_cancel=cancel))


def test_solve_all_rejects_objective():
    csp = make_csp([[0, 1]], objective=Objective(Sense.MINIMIZE, 0))
    with pytest.raises(ValueError):
        solve_all(csp)


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(max_solutions=0)
    with pytest.raises(ValueError):
        SearchConfig(node_limit=0)


# --- optimization -----------------------------------------------------------------


def test_minimize_finds_optimum_and_all_ties():
    csp = make_csp([[0, 1, 2], [0, 1, 2]], objective=Objective(Sense.MINIMIZE, 0))
    result = solve_optimal(csp)
    assert result.objective == 0
    assert result.best == (0, 0)
    assert result.all_optimal == [(0, 0), (0, 1), (0, 2)]


def test_maximize_with_constraint():
    csp = make_csp(
        [list(range(10)), list(range(1, 10))],
        [FoldRel(BinArithOp.PLUS, (Var(0), Var(1)), RelOp.LE, Const(3))],
        objective=Objective(Sense.MAXIMIZE, 0),
    )
    result = solve_optimal(csp)
    assert result.objective == 2
    assert result.all_optimal == [(2, 1)]


def test_optimize_unsat():
    csp = make_csp(
        [[1, 2]],
        [ArithRelIR(v(0), RelOp.GT, k(5))],
        objective=Objective(Sense.MAXIMIZE, 0),
    )
    result = solve_optimal(csp)
    assert result == OptimizeResult(None)


def test_solve_optimal_requires_objective():
    with pytest.raises(ValueError):
        solve_optimal(make_csp([[0, 1]]))


def test_optimum_agrees_with_brute_force_on_ties():
    # minimize V2 subject to V2 >= V0 and V2 >= V1
    csp = make_csp(
        [[0, 1, 2], [0, 1, 2], [0, 1, 2]],
        [
            ArithRelIR(v(2), RelOp.GE, v(0)),
            ArithRelIR(v(2), RelOp.GE, v(1)),
        ],
        objective=Objective(Sense.MINIMIZE, 2),
    )
    result = solve_optimal(csp)
    unconstrained = make_csp([[0, 1, 2]] * 3, csp.constraints)
    feasible = brute_force(unconstrained)
    best = min(s[2] for s in feasible)
    assert result.objective == best
    assert result.all_optimal == [s for s in feasible if s[2] == best]


# --- random-model equivalence with the direct evaluator --------------------------------


def _terms(n_vars: int):
    return st.one_of(
        st.integers(min_value=0, max_value=n_vars - 1).map(Var),
        st.integers(min_value=-2, max_value=5).map(Const),
    )


def _exprs(n_vars: int):
    leaves = _terms(n_vars).map(TermExpr)
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(BinIR, st.sampled_from(list(BinArithOp)), kids, kids),
            st.builds(ModIR, kids, kids),
            st.builds(AbsIR, kids),
            st.builds(MinIR, kids, kids),
            st.builds(MaxIR, kids, kids),
        ),
        max_leaves=4,
    )


@st.composite
def random_csps(draw):
    n_vars = draw(st.integers(min_value=1, max_value=4))
    domains = draw(
        st.lists(
            st.sets(st.integers(min_value=0, max_value=4), min_size=1, max_size=5),
            min_size=n_vars,
            max_size=n_vars,
        )
    )
    rels = st.sampled_from(list(RelOp))

    def alldiff():
        return st.lists(
            st.integers(min_value=0, max_value=n_vars - 1),
            min_size=2,
            max_size=n_vars,
            unique=True,
        ).map(lambda ids: AllDiff(tuple(ids)))

    def fold():
        return st.builds(
            FoldRel,
            st.sampled_from(list(BinArithOp)),
            st.lists(_terms(n_vars), min_size=1, max_size=3).map(tuple),
            rels,
            _terms(n_vars),
        )

    def element():
        return st.builds(
            Element,
            _terms(n_vars),
            st.lists(_terms(n_vars), min_size=1, max_size=3).map(tuple),
            _terms(n_vars),
        )

    def arith():
        return st.builds(ArithRelIR, _exprs(n_vars), rels, _exprs(n_vars))

    kinds = [fold(), element(), arith()]
    if n_vars >= 2:
        kinds.append(alldiff())
    constraints = draw(st.lists(st.one_of(*kinds), max_size=4))
    return make_csp(domains, constraints)


@settings(max_examples=200, deadline=None)
@given(random_csps())
def test_search_equals_direct_enumeration(csp):
    assert solve_all(csp) == brute_force(csp)


@settings(max_examples=100, deadline=None)
@given(random_csps(), st.sampled_from(list(Sense)))
def test_optimization_equals_direct_enumeration(csp, sense):
    csp = Csp(csp.vars, csp.constraints, Objective(sense, 0))
    result = solve_optimal(csp)
    feasible = brute_force(Csp(csp.vars, csp.constraints, None))
    if not feasible:
        assert result.best is None
        return
    values = [s[0] for s in feasible]
    best = min(values) if sense is Sense.MINIMIZE else max(values)
    assert result.objective == best
    assert result.all_optimal == [s for s in feasible if s[0] == best]
    assert result.best == result.all_optimal[0]


# --- direct evaluator ---------------------------------------------------------------


def test_evaluate_reports_first_violation():
    csp = make_csp(
        [[1]],
        [
            ArithRelIR(v(0), RelOp.EQ, k(1)),
            ArithRelIR(v(0), RelOp.EQ, k(2)),
            ArithRelIR(v(0), RelOp.EQ, k(3)),
        ],
    )
    assert evaluate(csp, (1,)) == 1


def test_evaluate_mod_by_zero_is_violation():
    csp = make_csp([[0]], [ArithRelIR(ModIR(k(5), v(0)), RelOp.EQ, k(0))])
    assert evaluate(csp, (0,)) == 0
