"""Survey shellability of minimal SOPs over random threshold systems.

Counts how many level functions admit a shelling order, how the disjoint
cover sizes of the three methods compare, and lists any non-shellable case.
"""
import argparse
import random
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

from mvthresh import SystemSpec
from mvthresh.expr import METHODS, Perspective, build_pre, minimal_sop, shellable_disjoint_cover, weight_order


def random_spec(rng, max_n, max_m, max_weight):
    n = rng.randint(1, max_n)
    ms = [rng.randint(1, max_m) for _ in range(n)]
    ws = [0] * n
    while not any(ws):
        ws = [rng.randint(0, max_weight) for _ in range(n)]
    total = sum(w * m for w, m in zip(ws, ms))
    cuts = sorted(rng.sample(range(1, 2 * total + 1), k=min(2 * total, rng.randint(1, 4))))
    return SystemSpec(tuple(ms), tuple(ws), (0,) + tuple(Fraction(c, 2) for c in cuts))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--systems", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-n", type=int, default=5)
    parser.add_argument("--max-m", type=int, default=3)
    parser.add_argument("--max-weight", type=int, default=5)
    parser.add_argument("--out", type=Path, default=None, help="also write a CSV row per level function")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    tally = Counter()
    failures = []
    rows = ["n,max_states,weights,thresholds,perspective,level,pis,shellable," + ",".join(METHODS)]
    for _ in range(args.systems):
        spec = random_spec(rng, args.max_n, args.max_m, args.max_weight)
        for perspective in (Perspective.SUCCESS, Perspective.FAILURE):
            for j in range(1, spec.top_level + 1):
                sop = minimal_sop(spec, j, perspective)
                shell = shellable_disjoint_cover(sop, component_order=weight_order(spec))
                sizes = [len(build_pre(spec, j, perspective, m)) for m in METHODS]
                tally["functions"] += 1
                tally["shellable"] += shell.shellable
                tally["reflection larger"] += sizes[1] > len(sop)
                tally["expansion larger"] += sizes[2] > len(sop)
                if not shell.shellable:
                    failures.append((spec, perspective.value, j))
                rows.append(
                    f"{spec.n},{' '.join(map(str, spec.max_states))},{' '.join(map(str, spec.weights))},"
                    f"{' '.join(map(str, spec.thresholds))},{perspective.value},{j},{len(sop)},{shell.shellable},"
                    + ",".join(map(str, sizes))
                )
    for key, value in tally.items():
        print(f"{key:>18}: {value}")
    for spec, perspective, j in failures:
        print(f"not shellable: {perspective} level {j} of {spec}", file=sys.stderr)
    if args.out:
        args.out.write_text("\n".join(rows) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
