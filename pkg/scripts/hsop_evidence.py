"""Replay the case analysis for j1..j8 and sample the nullcone both ways.

    python scripts/hsop_evidence.py --samples 200
"""
from __future__ import annotations

import argparse
import random
from dataclasses import asdict, dataclass

from binforms.nullcone import (evaluate_invariants, independence_evidence, is_nullform,
                               random_nullform, random_point, verify_case_identities)
from binforms.polys import format_fraction

J = [f"j{i}" for i in range(1, 9)]


@dataclass
class Settings:
    samples: int = 100
    jacobian_points: int = 5
    seed: int = 0


def main(s: Settings) -> int:
    ok = True
    for rep in verify_case_identities():
        print(f"case {rep.case}: {'pass' if rep.passed else 'FAIL'} -> {rep.conclusion}")
        for c in rep.checks:
            scalar = "" if c.scalar is None else f"  scalar {format_fraction(c.scalar)}"
            print(f"   {'ok ' if c.passed else 'BAD'} {c.label}  ~ {c.claimed}{scalar}")
        ok &= rep.passed

    ind = independence_evidence(s.jacobian_points, s.seed)
    print(f"Jacobian ranks of j1..j8: {ind.ranks} ({ind.status})")

    rng = random.Random(s.seed)
    vanish = sum(not any(evaluate_invariants(random_nullform(rng)).values())
                 for _ in range(s.samples))
    print(f"nullforms with all invariants zero: {vanish}/{s.samples}")
    detected = total = 0
    for _ in range(s.samples):
        p = random_point(rng)
        if not is_nullform(p):
            total += 1
            detected += any(evaluate_invariants(p)[n] for n in J)
    print(f"non-nullforms with some j_i nonzero: {detected}/{total}")
    ok &= vanish == s.samples and detected == total and ind.certified
    return 0 if ok else 1


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f, v in asdict(Settings()).items():
        p.add_argument(f"--{f.replace('_', '-')}", type=type(v), default=v)
    raise SystemExit(main(Settings(**vars(p.parse_args()))))
