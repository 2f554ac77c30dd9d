"""Print every artifact for the four-engine example: maps, boundary vectors,
minimal and disjoint expressions, and level probabilities."""
import argparse
import time

from mvthresh import ComponentDistribution, running_example
from mvthresh.boundary import enumerate_mlvs, enumerate_muvs
from mvthresh.expr import METHODS, Perspective, build_pre, minimal_sop, shellable_disjoint_cover, weight_order
from mvthresh.probability import level_probabilities_failure, level_probabilities_success
from mvthresh.render import render_level_map, render_structure_map


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ascii", action="store_true")
    parser.add_argument("--terms", action="store_true", help="print the expressions term by term")
    args = parser.parse_args()

    start = time.perf_counter()
    spec = running_example()
    print(render_structure_map(spec, values="sum"))
    print(render_structure_map(spec))

    for j in range(spec.top_level, 0, -1):
        muvs = enumerate_muvs(spec, j)
        mlvs = enumerate_mlvs(spec, j - 1)
        print(f"level {j}: {len(muvs)} MUVs {list(muvs.orbit_summary)}")
        print(f"level {j - 1}: {len(mlvs)} MLVs {list(mlvs.orbit_summary)}")

    print()
    print(f"{'indicator':<10} {'PIs':>4} {'shellable':>9} " + " ".join(f"{m:>10}" for m in METHODS))
    for perspective in (Perspective.SUCCESS, Perspective.FAILURE):
        for j in range(spec.top_level, 0, -1):
            sop = minimal_sop(spec, j, perspective)
            shell = shellable_disjoint_cover(sop, component_order=weight_order(spec))
            sizes = " ".join(f"{len(build_pre(spec, j, perspective, m)):>10}" for m in METHODS)
            print(f"{sop.lhs():<10} {len(sop):>4} {str(shell.shellable):>9} {sizes}")
            if args.terms:
                print("  " + shell.expression.render(ascii=args.ascii))

    print()
    print(render_level_map(spec, 1, Perspective.FAILURE, overlays=("cover", "mlv")).text)

    d = ComponentDistribution.uniform(spec.max_states)
    succ = level_probabilities_success(spec, d)
    fail = level_probabilities_failure(spec, d)
    for j in range(spec.top_level + 1):
        print(f"P(S={j}) = {succ.exactly[j]}  (failure side {fail.exactly[j]})")
    print(f"oracle agrees: {succ.oracle_agrees and fail.oracle_agrees}")
    print(f"elapsed {time.perf_counter() - start:.3f}s")


if __name__ == "__main__":
    main()
