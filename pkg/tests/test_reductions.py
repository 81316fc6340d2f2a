from fractions import Fraction

import pytest

from coclones.instances import (
    Constraint,
    Instance,
    KIND_MAXCSP,
    KIND_MAXCUT,
    KIND_MINO,
    KIND_SAT,
    KIND_UMO,
    KIND_VCSP,
    KIND_WMO,
    default_resolver,
)
from coclones.oracle import solve
from coclones.reductions import (
    ACCEPTANCE_ENTRIES,
    QPP_FAMILY,
    QWPP_FAMILY,
    REGISTRY,
    ReductionError,
    apply,
    certify,
)

RESOLVER = default_resolver()


def test_registry_covers_every_construction():
    assert len(QPP_FAMILY) == 6
    assert len(QWPP_FAMILY) == 6
    assert len(ACCEPTANCE_ENTRIES) == 13
    for name in ACCEPTANCE_ENTRIES:
        assert name in REGISTRY


def test_language_mismatch_rejected():
    inst = Instance(KIND_UMO, 3, (Constraint("OR2", (0, 1)),))
    with pytest.raises(ReductionError):
        apply("umo_II2_to_IN2", inst)


def test_degree_bound_enforced():
    cons = tuple(Constraint("R_II2", (0,) * 8) for _ in range(3))
    inst = Instance(KIND_SAT, 1, cons)
    with pytest.raises(ReductionError):
        apply("sat2_to_umo_IL2", inst)


def test_sat2_to_umo_il2_counts_and_threshold():
    inst = Instance(KIND_SAT, 4, (Constraint("R_II2", (0, 1, 2, 3, 0, 1, 2, 3)),))
    tgt, info = apply("sat2_to_umo_IL2", inst)
    n, m = 4, 1
    assert tgt.num_vars == 2 + 2 * n + 3 * m
    assert tgt.num_vars <= 2 + 8 * n
    assert info.threshold.value == n + 1 + 2 * m


def test_umo_il2_to_il0_spec_example():
    src = Instance(KIND_UMO, 4, (Constraint("R_IL2", (1, 1, 0, 2, 2, 3, 0, 3)),))
    assert solve(src).optimum == 2
    tgt, info = apply("umo_IL2_to_IL0", src)
    assert tgt.num_vars == 10
    assert solve(tgt).optimum == 7


def test_swapped_constant_sources_stay_sound():
    # the inequality structure forces variable 0 to 1, yet it sits in the
    # constant-0 slot: unsatisfiable strictly, satisfiable with the constants
    # swapped; the pinning atom keeps the rewrite sound (regression)
    src = Instance(KIND_UMO, 4, (Constraint("R_IL2", (0, 0, 1, 1, 1, 2, 0, 3)),))
    sres = solve(src)
    assert not sres.satisfiable
    tgt, info = apply("umo_IL2_to_IL0", src)
    tres = solve(tgt)
    assert tres.satisfiable
    assert tres.optimum < info.value_offset


def test_maxcut_triangle_example():
    tri = Instance(KIND_MAXCUT, 3,
                   tuple(Constraint("edge", e) for e in ((0, 1), (0, 2), (1, 2))))
    tgt, _ = apply("maxcut_to_vcsp_neq", tri)
    assert solve(tgt).optimum == 1


def test_uvcsp_translation_structure():
    fn_ref = "cost2_0_1_2_0"
    src = Instance(KIND_VCSP, 2, (Constraint(fn_ref, (0, 1)),))
    tgt, info = apply("uvcspd_to_minones", src)
    s, t = 2, 2
    assert tgt.num_vars <= 2 + 1 * (2 * s + t * ((1 << s) + 1))
    assert info.value_offset == 2
    sres, tres = solve(src), solve(tgt)
    assert tres.optimum == sres.optimum + 2


def test_qpp_threshold_map():
    src = Instance(KIND_UMO, 3, (Constraint("R_IS1_2", (0, 1, 2)),))
    k = solve(src).optimum
    for name in QPP_FAMILY:
        if REGISTRY[name].source_language != ("R_IS1_2",):
            continue
        tgt, info = apply(name, src)
        assert tgt.num_vars == src.num_vars + 2
        assert solve(tgt).optimum == k + 1


def test_qwpp_big_m_composition():
    src = Instance(KIND_WMO, 8, (Constraint("R_II2", tuple(range(8))),),
                   var_weights=tuple(Fraction(i % 3) for i in range(8)))
    sres = solve(src)
    for name in ("wmo_qwpp_IN2", "wmo_qwpp_ID2", "wmo_qwpp_IL2", "wmo_qwpp_IS1_2"):
        tgt, info = apply(name, src)
        assert tgt.num_vars == 8
        assert solve(tgt).optimum == sres.optimum + info.value_offset


def test_qwpp_chained_targets():
    src = Instance(KIND_WMO, 8, (Constraint("R_II2", tuple(range(8))),),
                   var_weights=tuple(Fraction(1) for _ in range(8)))
    sres = solve(src)
    mid, info1 = apply("wmo_qwpp_IL2", src)
    for name in ("wmo_qwpp_IL3", "wmo_qwpp_IL0"):
        tgt, info2 = apply(name, mid)
        assert solve(tgt).optimum == sres.optimum + info1.value_offset + info2.value_offset


def test_minones_map():
    src = Instance(KIND_MINO, 3, (Constraint("OR2", (0, 1)), Constraint("OR2", (1, 2))))
    tgt, _ = apply("maxones_to_minones", src)
    assert tgt.num_vars == 9
    assert solve(tgt).optimum == 2 * 3 - solve(src).optimum


def test_sat2_to_uvcsp2_zero_iff_sat():
    sat = Instance(KIND_SAT, 8, (Constraint("R_II2", tuple(range(8))),))
    tgt, _ = apply("sat2_to_uvcsp2", sat)
    assert tgt.num_vars == 8
    assert solve(tgt).optimum == 0
    unsat = Instance(KIND_SAT, 1, (Constraint("R_II2", (0,) * 8),))
    tgt2, _ = apply("sat2_to_uvcsp2", unsat)
    assert solve(tgt2).optimum > 0


def test_maxcsp_heavy_constraint_binds():
    src = Instance(KIND_MAXCSP, 2, (
        Constraint("NAND2", (0, 1), Fraction(2)),
        Constraint("T", (0,), Fraction(1)),
    ))
    tgt, info = apply("maxcsp_nandTF_to_neq", src)
    assert tgt.num_vars == 4
    res = solve(tgt, want_all=True)
    assert res.optimum == solve(src).optimum + info.extra["big_m"]
    v0, v1 = 2, 3
    for mask in res.optimal_set:
        assert ((mask >> v0) & 1) != ((mask >> v1) & 1)


def test_maxcutc_gap_flagged():
    src = Instance(KIND_MAXCUT, 3,
                   tuple(Constraint("edge", e, Fraction(2)) for e in ((0, 1), (1, 2))))
    tgt, info = apply("maxcutc_to_wmaxones", src)
    assert info.extra["definability_gap"] is True
    assert tgt.num_vars == 3 + 2
    assert solve(tgt).optimum == solve(src).optimum


def test_certify_small_all_entries():
    for name in ACCEPTANCE_ENTRIES:
        rep = certify(name, trials=8, seed=11)
        assert rep.ok, f"{name}: {rep.failures[:1]}"


def test_certify_reports_render():
    rep = certify("maxcut_to_vcsp_neq", trials=5, seed=3)
    text = rep.render()
    assert "maxcut_to_vcsp_neq" in text and "agree" in text


def test_certify_deterministic_under_seed():
    a = certify("umo_II2_to_IN2", trials=6, seed=5)
    b = certify("umo_II2_to_IN2", trials=6, seed=5)
    assert a == b
