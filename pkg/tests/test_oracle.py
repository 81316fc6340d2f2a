from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from coclones.instances import (
    Constraint,
    Instance,
    KIND_MAXCUT,
    KIND_MINO,
    KIND_SAT,
    KIND_UMO,
    KIND_VCSP,
    KIND_WMO,
    Threshold,
    default_resolver,
)
from coclones.oracle import OracleError, SolveResult, decide, solve


def umo(n, cons, **kw):
    return Instance(KIND_UMO, n, tuple(Constraint(r, a) for r, a in cons), **kw)


def test_independent_set_triangle():
    # NAND2 on a 3-clique: max ones = independence number = 1
    inst = umo(3, [("NAND2", (0, 1)), ("NAND2", (0, 2)), ("NAND2", (1, 2))])
    res = solve(inst)
    assert res.satisfiable and res.optimum == 1
    assert res.witness == 0b001  # least optimal assignment


def test_vcsp_fneq_triangle():
    cons = tuple(Constraint("f_neq", e) for e in ((0, 1), (0, 2), (1, 2)))
    inst = Instance(KIND_VCSP, 3, cons)
    assert solve(inst).optimum == 1


def test_sat_single_weak_base_constraint():
    inst = Instance(KIND_SAT, 8, (Constraint("R_II2", tuple(range(8))),))
    assert solve(inst).satisfiable


def test_maxcut_triangle_decisions():
    cons = tuple(Constraint("edge", e) for e in ((0, 1), (0, 2), (1, 2)))
    inst = Instance(KIND_MAXCUT, 3, cons)
    assert solve(inst).optimum == 2
    assert decide(inst, Threshold(">=", Fraction(2)))
    assert not decide(inst, Threshold(">=", Fraction(3)))


def test_unsat_is_distinct_outcome():
    inst = umo(1, [("T", (0,)), ("F", (0,))])
    res = solve(inst)
    assert not res.satisfiable and res.optimum is None and res.witness is None
    assert not decide(inst, Threshold(">=", Fraction(0)))


def test_satisfiable_maxones_ge_zero():
    inst = umo(2, [("OR2", (0, 1))])
    assert decide(inst, Threshold(">=", Fraction(0)))


def test_weighted_rational_objective():
    inst = Instance(KIND_WMO, 2, (Constraint("OR2", (0, 1)),),
                    var_weights=(Fraction(1, 3), Fraction(1, 2)))
    res = solve(inst)
    assert res.optimum == Fraction(5, 6)


def test_want_all_optimal_set():
    inst = Instance(KIND_MINO, 2, (Constraint("neq", (0, 1)),))
    res = solve(inst, want_all=True)
    assert res.optimum == 1
    assert set(res.optimal_set) == {0b01, 0b10}


def test_cap_enforced():
    with pytest.raises(OracleError):
        solve(Instance(KIND_SAT, 23, ()), want_all=True)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_optimum_invariant_under_variable_permutation(data):
    import itertools
    n = data.draw(st.integers(2, 4))
    m = data.draw(st.integers(1, 3))
    cons = []
    for _ in range(m):
        args = tuple(data.draw(st.integers(0, n - 1)) for _ in range(2))
        cons.append(("OR2", args))
    inst = umo(n, cons)
    base = solve(inst)
    perm = data.draw(st.permutations(list(range(n))))
    pcons = [(r, tuple(perm[v] for v in a)) for r, a in cons]
    permuted = solve(umo(n, pcons))
    assert permuted.satisfiable == base.satisfiable
    assert permuted.optimum == base.optimum


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_maxones_monotone_under_weight_increase(data):
    n = data.draw(st.integers(2, 4))
    cons = tuple(Constraint("NAND2", (data.draw(st.integers(0, n - 1)),
                                      data.draw(st.integers(0, n - 1))))
                 for _ in range(2))
    weights = [Fraction(data.draw(st.integers(0, 3))) for _ in range(n)]
    inst = Instance(KIND_WMO, n, cons, var_weights=tuple(weights))
    res = solve(inst)
    i = data.draw(st.integers(0, n - 1))
    bump = list(weights)
    bump[i] += Fraction(data.draw(st.integers(1, 3)))
    res2 = solve(Instance(KIND_WMO, n, cons, var_weights=tuple(bump)))
    if res.satisfiable:
        assert res2.optimum >= res.optimum


def test_parallel_equals_sequential():
    cons = tuple(Constraint("R_II2", tuple((i + j) % 10 for j in range(8))) for i in range(3))
    inst = Instance(KIND_UMO, 10, cons)
    a = solve(inst, jobs=1, want_all=True)
    b = solve(inst, jobs=8, want_all=True)
    assert a == b
