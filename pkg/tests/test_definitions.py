from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from coclones.definitions import (
    ARGMAX_IDENTITIES,
    EXTENSION_FORMULAS,
    Formula,
    GadgetError,
    UnsatisfiableGadgetError,
    WppGadget,
    constant_extension_implications,
    eval_formula,
    eval_wpp,
    search_definition,
    verify_constant_extension,
    verify_qpp_definition,
)
from coclones.instances import Constraint, Instance, KIND_WMO, default_resolver
from coclones.relations import (
    ConstraintLanguage,
    Relation,
    rel_eq,
    rel_even,
    rel_neq,
    rel_or,
    rel_true,
)

RESOLVER = default_resolver()


def test_eval_formula_identity_and_projection():
    f = Formula(2, 0, (("eq", (0, 1)),))
    assert eval_formula(f, {"eq": rel_eq()}).tuples == rel_eq().tuples
    # OR2(x1,y1) & OR2(x2,y1) with existential y1 covers every pair
    f2 = Formula(2, 1, (("OR2", (0, 2)), ("OR2", (1, 2))))
    got = eval_formula(f2, {"OR2": rel_or(2)})
    assert got.tuples == (0, 1, 2, 3)


def test_eval_formula_projection_bound():
    # without quantifiers the solution count is bounded by the atom product
    f = Formula(3, 0, (("OR2", (0, 1)), ("neq", (1, 2))))
    got = eval_formula(f, {"OR2": rel_or(2), "neq": rel_neq()})
    assert len(got.tuples) <= len(rel_or(2).tuples) * len(rel_neq().tuples)


def test_verify_qpp_examples():
    assert verify_qpp_definition(Formula(2, 0, (("eq", (0, 1)),)), rel_eq(), {"eq": rel_eq()})
    with pytest.raises(GadgetError):
        verify_qpp_definition(Formula(2, 1, (("eq", (0, 1)),)), rel_eq(), {"eq": rel_eq()})
    # the ID2 weak-base formula over its building blocks
    lang = {"OR2": rel_or(2), "neq": rel_neq(), "T": rel_true(),
            "F": RESOLVER.relation("F")}
    id2 = Formula(6, 0, (("OR2", (0, 1)), ("neq", (0, 2)), ("neq", (1, 3)),
                         ("F", (4,)), ("T", (5,))))
    assert verify_qpp_definition(id2, RESOLVER.relation("R_ID2"), lang)


def test_even3_has_no_small_quantifier_free_definition_over_even2():
    # exhaustive search proves nonexistence within three binary parity atoms
    res = search_definition(rel_even(3), {"EVEN2": rel_even(2)}, max_aux=0, max_atoms=3)
    assert res.formula is None and res.exhausted


def test_search_eq_from_neq():
    res = search_definition(rel_eq(), ConstraintLanguage([rel_neq()]),
                            max_aux=1, max_atoms=2)
    assert res.formula is not None and res.exhausted
    assert res.formula.aux_vars == 1
    got = eval_formula(res.formula, {"neq": rel_neq(), "eq": rel_eq()})
    assert got.tuples == rel_eq().tuples
    # only inequality atoms are needed
    assert all(name == "eq" or name == "neq" for name, _ in res.formula.atoms)


def test_search_trivial_self_definition():
    res = search_definition(rel_true(), ConstraintLanguage([rel_true()]),
                            max_aux=0, max_atoms=1)
    assert res.formula is not None
    assert res.formula.atoms == (("T", (0,)),)


def test_search_budget_flag_distinct_from_exhaustion():
    res = search_definition(rel_even(3), {"R_II2": RESOLVER.relation("R_II2")},
                            max_aux=1, max_atoms=2, explore_budget=50)
    assert res.formula is None and not res.exhausted


def test_search_results_always_verify():
    lang = ConstraintLanguage([rel_or(2), rel_neq()])
    for target in (rel_or(2), rel_neq(), rel_eq()):
        res = search_definition(target, lang, max_aux=1, max_atoms=2)
        if res.formula is not None and res.formula.aux_vars == 0:
            assert verify_qpp_definition(res.formula, target, lang)
        elif res.formula is not None:
            got = eval_formula(res.formula, lang)
            assert got.tuples == target.tuples


def test_constant_extension_examples():
    rel = RESOLVER.relation("R_IS1_2")
    # padding with the two constants always works
    padded = Relation.from_masks(5, [t | (1 << 4) for t in rel.tuples])
    assert verify_constant_extension(rel, padded)
    t_rel = rel_true()
    bad = Relation.from_masks(3, [0b111])  # forces y0 = 1
    assert not verify_constant_extension(t_rel, bad)


def test_extension_formula_suite():
    for ext in EXTENSION_FORMULAS:
        rel = RESOLVER.relation(ext.source)
        rp = eval_formula(ext.formula, RESOLVER)
        i1, i2, i2top = constant_extension_implications(rel, rp)
        assert i1, ext.target
        if ext.source == "R_II2":
            # the wide extension admits an all-zero tuple, so only the
            # restriction to forced y1 = 1 implies membership
            assert i2top and not i2
            assert not verify_constant_extension(rel, rp)
        else:
            assert i2 and verify_constant_extension(rel, rp)


def test_argmax_identities_exact():
    for ident in ARGMAX_IDENTITIES:
        got = eval_wpp(ident.gadget(), RESOLVER)
        want = RESOLVER.relation(ident.target)
        assert got.tuples == want.tuples, ident.base
        assert ident.gadget().covers_all_variables


def test_eval_wpp_trivial_and_unsat():
    one = Instance(KIND_WMO, 1, (), var_weights=(Fraction(1),))
    got = eval_wpp(WppGadget(one, (0,)), RESOLVER)
    assert got.tuples == (1,)  # a free weighted variable maximizes to 1
    bad = Instance(KIND_WMO, 1, (Constraint("T", (0,)), Constraint("F", (0,))),
                   var_weights=(Fraction(1),))
    with pytest.raises(UnsatisfiableGadgetError):
        eval_wpp(WppGadget(bad, (0,)), RESOLVER)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4))
def test_eval_wpp_invariant_under_weight_scaling(num, den):
    scale = Fraction(num, den)
    ident = ARGMAX_IDENTITIES[0]
    base = eval_wpp(ident.gadget(), RESOLVER)
    inst = ident.gadget().instance
    scaled = Instance(KIND_WMO, inst.num_vars, inst.constraints,
                      var_weights=tuple(w * scale for w in inst.var_weights))
    got = eval_wpp(WppGadget(scaled, tuple(range(8))), RESOLVER)
    assert got.tuples == base.tuples
