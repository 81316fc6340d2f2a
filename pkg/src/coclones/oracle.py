"""Exhaustive ground-truth solvers for every problem kind.

Assignments are enumerated as bitmasks (variable i in bit i) in numpy chunks;
objectives are computed in integers after clearing denominators, so optima
are exact.  No pruning beyond constraint evaluation: this is the test oracle
and trustworthiness outranks speed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .instances import (
    KIND_MAXCSP,
    KIND_MAXCUT,
    KIND_MINO,
    KIND_SAT,
    KIND_UMO,
    KIND_VCSP,
    KIND_WMO,
    MAXIMIZING_KINDS,
    Instance,
    InstanceError,
    Resolver,
    Threshold,
    default_resolver,
    validate_instance,
)

MAX_SOLVE_VARS = 24
MAX_ENUMERATE_VARS = 20
_CHUNK_BITS = 20
_INT_LIMIT = 1 << 60


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveResult:
    kind: str
    satisfiable: bool
    optimum: Optional[Fraction]  # None for SAT or unsatisfiable instances
    witness: Optional[int]  # lexicographically least optimal assignment mask
    optimal_set: Optional[tuple[int, ...]] = None

    def witness_bits(self, n: int) -> Optional[tuple[int, ...]]:
        if self.witness is None:
            return None
        return tuple((self.witness >> i) & 1 for i in range(n))


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _constraint_weight(c) -> Fraction:
    return c.weight if c.weight is not None else Fraction(1)


def solve(inst: Instance, resolver: Optional[Resolver] = None,
          want_all: bool = False, jobs: int = 1) -> SolveResult:
    """Exact optimum (or satisfiability) by enumeration of all assignments."""
    resolver = resolver or default_resolver()
    validate_instance(inst, resolver)
    n = inst.num_vars
    cap = MAX_ENUMERATE_VARS if want_all else MAX_SOLVE_VARS
    if n > cap:
        raise OracleError(f"instance has {n} variables, oracle cap is {cap}")

    kind = inst.kind
    maximize = kind in MAXIMIZING_KINDS

    # one integer scale clears every denominator that can reach the objective
    scale = 1
    if kind in (KIND_UMO, KIND_WMO, KIND_MINO):
        for w in inst.weights_or_default():
            scale = _lcm(scale, w.denominator)
    for c in inst.constraints:
        w = _constraint_weight(c)
        if kind == KIND_VCSP:
            for v in resolver.costfn(c.ref).table:
                scale = _lcm(scale, (w * v).denominator)
        else:
            scale = _lcm(scale, w.denominator)

    luts: dict[str, np.ndarray] = {}
    fused_cost: list[np.ndarray] = []
    if kind == KIND_VCSP:
        for c in inst.constraints:
            fn = resolver.costfn(c.ref)
            w = _constraint_weight(c)
            fused_cost.append(np.array(
                [int(w * v * scale) for v in fn.table], dtype=np.int64))
    elif kind != KIND_MAXCUT:
        for c in inst.constraints:
            if c.ref not in luts:
                rel = resolver.relation(c.ref)
                lut = np.zeros(1 << rel.arity, dtype=bool)
                lut[list(rel.tuples)] = True
                luts[c.ref] = lut

    wints = [int(w * scale) for w in inst.weights_or_default()] \
        if kind in (KIND_UMO, KIND_WMO, KIND_MINO) else []

    bound = sum(abs(w) for w in wints)
    for i, c in enumerate(inst.constraints):
        if kind == KIND_VCSP:
            bound += int(fused_cost[i].max(initial=0))
        else:
            bound += abs(int(_constraint_weight(c) * scale))
    if bound >= _INT_LIMIT:
        raise OracleError("objective magnitude exceeds the exact int64 budget")

    def tuple_index(idx: np.ndarray, args: tuple[int, ...]) -> np.ndarray:
        t = np.zeros_like(idx)
        for j, v in enumerate(args):
            t |= ((idx >> v) & 1) << j
        return t

    def eval_chunk(lo: int, hi: int):
        idx = np.arange(lo, hi, dtype=np.int64)
        feasible = np.ones(idx.shape, dtype=bool)
        if kind in (KIND_SAT, KIND_UMO, KIND_WMO, KIND_MINO):
            for c in inst.constraints:
                feasible &= luts[c.ref][tuple_index(idx, c.args)]
        obj = np.zeros(idx.shape, dtype=np.int64)
        if kind in (KIND_UMO, KIND_WMO, KIND_MINO):
            for i, w in enumerate(wints):
                if w:
                    obj += w * ((idx >> i) & 1)
        elif kind == KIND_VCSP:
            for i, c in enumerate(inst.constraints):
                obj += fused_cost[i][tuple_index(idx, c.args)]
        elif kind == KIND_MAXCSP:
            for c in inst.constraints:
                w = int(_constraint_weight(c) * scale)
                obj += w * luts[c.ref][tuple_index(idx, c.args)].astype(np.int64)
        elif kind == KIND_MAXCUT:
            for c in inst.constraints:
                w = int(_constraint_weight(c) * scale)
                u, v = c.args
                obj += w * (((idx >> u) ^ (idx >> v)) & 1)
        if not feasible.any():
            return None
        sub = obj[feasible]
        best = int(sub.max() if maximize else sub.min())
        where = idx[feasible & (obj == best)]
        return best, int(where[0]), (where if want_all else None)

    chunk = 1 << _CHUNK_BITS
    ranges = [(lo, min(lo + chunk, 1 << n)) for lo in range(0, 1 << n, chunk)]
    if jobs > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda r: eval_chunk(*r), ranges))
    else:
        results = [eval_chunk(*r) for r in ranges]

    best: Optional[int] = None
    witness: Optional[int] = None
    collected: list[np.ndarray] = []
    for res in results:  # deterministic merge in chunk order
        if res is None:
            continue
        val, wit, arr = res
        better = best is None or (val > best if maximize else val < best)
        if better:
            best, witness = val, wit
            collected = [arr] if want_all else []
        elif val == best:
            witness = min(witness, wit)
            if want_all:
                collected.append(arr)
    if best is None:
        return SolveResult(kind, False, None, None, () if want_all else None)
    optimal = tuple(int(v) for arr in collected for v in arr) if want_all else None
    opt_fraction = None if kind == KIND_SAT else Fraction(best, scale)
    return SolveResult(kind, True, opt_fraction, witness, optimal)


def decide(inst: Instance, threshold: Optional[Threshold] = None,
           resolver: Optional[Resolver] = None, jobs: int = 1) -> bool:
    """Compare the exact optimum to a threshold in the instance's direction."""
    th = threshold or inst.threshold
    res = solve(inst, resolver, jobs=jobs)
    if inst.kind == KIND_SAT:
        return res.satisfiable
    if th is None:
        raise InstanceError("decision requires a threshold")
    if not res.satisfiable:
        return False
    if th.direction == ">=":
        return res.optimum >= th.value
    return res.optimum <= th.value
