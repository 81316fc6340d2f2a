#!/usr/bin/env python3
"""Sweep random cost-function sets: classify, synthesize, verify.

Reports the tractable/hard breakdown, which multimorphism certified each
tractable set, and which case of the synthesis procedure each hard set took.
"""

import argparse
import random
import sys
from collections import Counter
from fractions import Fraction

from coclones.valued import CostFunction, classify_vcsp, express_neq, verify_neq_expression


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sets", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-arity", type=int, default=3)
    parser.add_argument("--max-value", type=int, default=4)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    outcomes = Counter()
    cases = Counter()
    failures = 0
    for _ in range(args.sets):
        fns = []
        for i in range(rng.randint(1, 2)):
            k = rng.randint(1, args.max_arity)
            fns.append(CostFunction(k, tuple(Fraction(rng.randint(0, args.max_value))
                                             for _ in range(1 << k)), f"f{i}"))
        cls = classify_vcsp(fns)
        if cls.is_polynomial:
            outcomes[f"P via {cls.admitted}"] += 1
            continue
        outcomes["NP-hard"] += 1
        expr = express_neq(fns)
        cases[expr.trace[2].split(":")[0]] += 1
        if not verify_neq_expression(expr, fns):
            failures += 1
            print(f"FAILURE on {[f.table for f in fns]}")

    print(f"{args.sets} random sets (seed {args.seed}):")
    for label, count in outcomes.most_common():
        print(f"  {label:20s} {count}")
    print("synthesis case split:")
    for label, count in cases.most_common():
        print(f"  {label:60s} {count}")
    print(f"verification failures: {failures}")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
