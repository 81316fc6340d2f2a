"""Weak-base relations for every Boolean co-clone with a finite base.

Variable order follows each defining formula's written order, with the
forced-constant coordinates c0 and c1 always in the last positions; all
gadget reductions address coordinates by this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .postlattice import CHAIN_FAMILIES, CoCloneId
from .relations import Relation, RelationError


@dataclass(frozen=True)
class WeakBaseEntry:
    coclone: CoCloneId
    relation: Relation
    formula: str


def _rel(arity: int, pred: Callable[[tuple[int, ...]], bool], name: str) -> Relation:
    rows = []
    for m in range(1 << arity):
        bits = tuple((m >> i) & 1 for i in range(arity))
        if pred(bits):
            rows.append(m)
    return Relation.from_masks(arity, rows, name)


def _even(*xs: int) -> bool:
    return sum(xs) % 2 == 0


def _name(coclone: CoCloneId) -> str:
    if coclone.is_chain:
        return f"R_I{coclone.family}_{coclone.index}"
    return f"R_I{coclone.family}"


# builders for the non-chain rows: family -> (formula text, arity, predicate)
_PLAIN: dict[str, tuple[str, int, Callable[[tuple[int, ...]], bool]]] = {
    "BF": ("eq(x1,x2)", 2, lambda b: b[0] == b[1]),
    "R0": ("F(c0)", 1, lambda b: b[0] == 0),
    "R1": ("T(c1)", 1, lambda b: b[0] == 1),
    "R2": ("F(c0) & T(c1)", 2, lambda b: b == (0, 1)),
    "M": ("x1 -> x2", 2, lambda b: b[0] <= b[1]),
    "M0": ("(x1 -> x2) & F(c0)", 3, lambda b: b[0] <= b[1] and b[2] == 0),
    "M1": ("(x1 -> x2) & T(c1)", 3, lambda b: b[0] <= b[1] and b[2] == 1),
    "M2": ("(x1 -> x2) & F(c0) & T(c1)", 4,
           lambda b: b[0] <= b[1] and b[2] == 0 and b[3] == 1),
    "D": ("x1 != x2", 2, lambda b: b[0] != b[1]),
    "D1": ("(x1 != x2) & F(c0) & T(c1)", 4,
           lambda b: b[0] != b[1] and b[2] == 0 and b[3] == 1),
    "D2": ("OR2_2ne(x1..x4) & F(c0) & T(c1)", 6,
           lambda b: (b[0] or b[1]) and b[2] == 1 - b[0] and b[3] == 1 - b[1]
           and b[4] == 0 and b[5] == 1),
    "L": ("EVEN4(x1..x4)", 4, lambda b: _even(*b)),
    "L0": ("EVEN3(x1,x2,x3) & F(c0)", 4, lambda b: _even(*b[:3]) and b[3] == 0),
    "L1": ("ODD3(x1,x2,x3) & T(c1)", 4, lambda b: not _even(*b[:3]) and b[3] == 1),
    "L2": ("EVEN3_3ne(x1..x6) & F(c0) & T(c1)", 8,
           lambda b: _even(*b[:3]) and all(b[3 + j] == 1 - b[j] for j in range(3))
           and b[6] == 0 and b[7] == 1),
    "L3": ("EVEN4_4ne(x1..x8)", 8,
           lambda b: _even(*b[:4]) and all(b[4 + j] == 1 - b[j] for j in range(4))),
    "V": ("(~x1 <-> ~x2~x3) & (~x2 | ~x3 -> ~x4)", 4,
          lambda b: b[0] == (b[1] | b[2]) and b[3] <= (b[1] & b[2])),
    "V0": ("(~x1 <-> ~x2~x3) & F(c0)", 4,
           lambda b: b[0] == (b[1] | b[2]) and b[3] == 0),
    "V1": ("(~x1 <-> ~x2~x3) & (~x2 | ~x3 -> ~x4) & T(c1)", 5,
           lambda b: b[0] == (b[1] | b[2]) and b[3] <= (b[1] & b[2]) and b[4] == 1),
    "V2": ("(~x1 <-> ~x2~x3) & F(c0) & T(c1)", 5,
           lambda b: b[0] == (b[1] | b[2]) and b[3] == 0 and b[4] == 1),
    "E": ("(x1 <-> x2x3) & (x2 | x3 -> x4)", 4,
          lambda b: b[0] == (b[1] & b[2]) and (b[1] | b[2]) <= b[3]),
    "E0": ("(x1 <-> x2x3) & (x2 | x3 -> x4) & F(c0)", 5,
           lambda b: b[0] == (b[1] & b[2]) and (b[1] | b[2]) <= b[3] and b[4] == 0),
    "E1": ("(x1 <-> x2x3) & T(c1)", 4,
           lambda b: b[0] == (b[1] & b[2]) and b[3] == 1),
    "E2": ("(x1 <-> x2x3) & F(c0) & T(c1)", 5,
           lambda b: b[0] == (b[1] & b[2]) and b[3] == 0 and b[4] == 1),
    "N": ("EVEN4(x1..x4) & (x1x4 <-> x2x3)", 4,
          lambda b: _even(*b) and (b[0] & b[3]) == (b[1] & b[2])),
    "N2": ("EVEN4_4ne(x1..x8) & (x1x4 <-> x2x3)", 8,
           lambda b: _even(*b[:4]) and all(b[4 + j] == 1 - b[j] for j in range(4))
           and (b[0] & b[3]) == (b[1] & b[2])),
    "I": ("(x1 <-> x2x3) & (~x4 <-> ~x2~x3)", 4,
          lambda b: b[0] == (b[1] & b[2]) and b[3] == (b[1] | b[2])),
    "I0": ("(~x1 | ~x2) & (~x1~x2 <-> ~x3) & F(c0)", 4,
           lambda b: not (b[0] and b[1]) and b[2] == (b[0] | b[1]) and b[3] == 0),
    "I1": ("(x1 | x2) & (x1x2 <-> x3) & T(c1)", 4,
           lambda b: (b[0] or b[1]) and b[2] == (b[0] & b[1]) and b[3] == 1),
    "I2": ("R13_3ne(x1..x6) & F(c0) & T(c1)", 8,
           lambda b: sum(b[:3]) == 1 and all(b[3 + j] == 1 - b[j] for j in range(3))
           and b[6] == 0 and b[7] == 1),
}


def _chain_entry(family: str, n: int) -> tuple[str, int, Callable[[tuple[int, ...]], bool]]:
    if n < 2:
        raise RelationError("chain index must be >= 2")

    def or_n(b):
        return any(b[:n])

    def nand_n(b):
        return not all(b[:n])

    def x_implies_all(b):  # b[n] -> x1...xn
        return b[n] <= min(b[:n])

    def any_implies_x(b):  # x1 | ... | xn -> b[n]  (dual of x_implies_all)
        return max(b[:n]) <= b[n]

    if family == "S0":
        return (f"OR{n}(x1..x{n}) & T(c1)", n + 1, lambda b: or_n(b) and b[n] == 1)
    if family == "S02":
        return (f"OR{n}(x1..x{n}) & F(c0) & T(c1)", n + 2,
                lambda b: or_n(b) and b[n] == 0 and b[n + 1] == 1)
    if family == "S01":
        return (f"OR{n}(x1..x{n}) & (x -> x1..x{n}) & T(c1)", n + 2,
                lambda b: or_n(b) and x_implies_all(b) and b[n + 1] == 1)
    if family == "S00":
        return (f"OR{n}(x1..x{n}) & (x -> x1..x{n}) & F(c0) & T(c1)", n + 3,
                lambda b: or_n(b) and x_implies_all(b) and b[n + 1] == 0 and b[n + 2] == 1)
    if family == "S1":
        return (f"NAND{n}(x1..x{n}) & F(c0)", n + 1, lambda b: nand_n(b) and b[n] == 0)
    if family == "S12":
        return (f"NAND{n}(x1..x{n}) & F(c0) & T(c1)", n + 2,
                lambda b: nand_n(b) and b[n] == 0 and b[n + 1] == 1)
    if family == "S11":
        # dual of the S01 row: the side condition must read (x1|..|xn) -> x,
        # otherwise NAND forces x = 0 and the relation collapses to the S1 row
        return (f"NAND{n}(x1..x{n}) & (x1|..|x{n} -> x) & F(c0)", n + 2,
                lambda b: nand_n(b) and any_implies_x(b) and b[n + 1] == 0)
    if family == "S10":
        return (f"NAND{n}(x1..x{n}) & (x1|..|x{n} -> x) & F(c0) & T(c1)", n + 3,
                lambda b: nand_n(b) and any_implies_x(b) and b[n + 1] == 0 and b[n + 2] == 1)
    raise RelationError(f"unknown chain family {family!r}")


@lru_cache(maxsize=None)
def weak_base_entry(coclone: CoCloneId) -> WeakBaseEntry:
    if coclone.is_limit:
        raise RelationError(f"{coclone.display()} has no finite base, hence no weak base")
    if coclone.is_chain:
        formula, arity, pred = _chain_entry(coclone.family, coclone.index)
    else:
        formula, arity, pred = _PLAIN[coclone.family]
    rel = _rel(arity, pred, _name(coclone))
    return WeakBaseEntry(coclone, rel, formula)


def weak_base(coclone: CoCloneId, n: Optional[int] = None) -> Relation:
    """The weak-base relation of a co-clone (chain rows need an index)."""
    if n is not None:
        coclone = CoCloneId(coclone.family, n)
    return weak_base_entry(coclone).relation


def all_entries(chain_indices: tuple[int, ...] = (2, 3)) -> list[WeakBaseEntry]:
    out = []
    for fam in _PLAIN:
        out.append(weak_base_entry(CoCloneId(fam)))
    for fam in CHAIN_FAMILIES:
        for n in chain_indices:
            out.append(weak_base_entry(CoCloneId(fam, n)))
    return out


# frequently used handles
def R_II2() -> Relation:
    return weak_base(CoCloneId("I2"))


def R_IN2() -> Relation:
    return weak_base(CoCloneId("N2"))
