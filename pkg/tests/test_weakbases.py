import pytest

from coclones.postlattice import CoCloneId, co_clone_of
from coclones.relations import (
    ConstraintLanguage,
    OP_NOT,
    RelationError,
    preserves,
)
from coclones.weakbases import R_II2, R_IN2, all_entries, weak_base, weak_base_entry

II2_ROWS = {"00111001", "01010101", "10001101"}
IN2_ROWS = {"00001111", "00111100", "01011010", "11110000", "11000011", "10100101"}


def test_ii2_matrix_golden():
    assert set(R_II2().row_strings()) == II2_ROWS
    assert R_II2().arity == 8 and len(R_II2().tuples) == 3


def test_in2_matrix_golden():
    assert set(R_IN2().row_strings()) == IN2_ROWS
    assert R_IN2().arity == 8 and len(R_IN2().tuples) == 6


def test_id2_golden():
    id2 = weak_base(CoCloneId("D2"))
    assert set(id2.row_strings()) == {"011001", "100101", "110001"}


def test_every_entry_identifies_to_its_coclone():
    for e in all_entries((2, 3)):
        got = co_clone_of(ConstraintLanguage([e.relation]))
        assert got == e.coclone, f"{e.coclone.display()} identified as {got.display()}"


def test_constant_columns_forced():
    # rows whose formula pins c0/c1 have constant 0/1 in those (last) positions
    checks = {
        "R2": (0, 1), "M2": (2, 3), "D1": (2, 3), "D2": (4, 5),
        "L2": (6, 7), "I2": (6, 7), "E2": (3, 4), "V2": (3, 4),
    }
    for fam, (c0_pos, c1_pos) in checks.items():
        rel = weak_base(CoCloneId(fam))
        for bits in rel.rows():
            assert bits[c0_pos] == 0 and bits[c1_pos] == 1


def test_complement_closure():
    assert preserves(OP_NOT, R_IN2())
    assert not preserves(OP_NOT, R_II2())


def test_limits_have_no_weak_base():
    with pytest.raises(RelationError):
        weak_base(CoCloneId("S1", None))


def test_chain_rows_need_index():
    r = weak_base(CoCloneId("S1"), 2)
    assert r.arity == 3 and set(r.row_strings()) == {"000", "010", "100"}


def test_formula_strings_present():
    for e in all_entries((2,)):
        assert e.formula
        assert e.relation.name and e.relation.name.startswith("R_I")
