"""Acceptance gate. Each test carries its criterion number; a summary line per
criterion is printed at the end of the run (see conftest)."""
import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

from mvthresh import SystemSpec, check_coherence, enumerate_mlvs, enumerate_muvs, evaluate_structure
from mvthresh.boundary import leq, verify_boundary_minimality
from mvthresh.expr import (
    METHODS,
    Perspective,
    ProductTerm,
    build_pre,
    denotation,
    is_pre,
    minimal_sop,
    shellable_disjoint_cover,
    weight_order,
)
from mvthresh.model import iter_states
from mvthresh.oracle import at_least, at_most, build_table, exactly_level, oracle_probability
from mvthresh.probability import (
    ComponentDistribution,
    expectation_of_pre,
    level_probabilities_failure,
    level_probabilities_success,
)
from mvthresh.render import render_level_map, render_structure_map
from strategies import dominating, random_distribution, random_spec

from conftest import FIXTURES

PERSPECTIVES = (Perspective.SUCCESS, Perspective.FAILURE)


def selector(j, perspective):
    return at_least(j) if perspective is Perspective.SUCCESS else at_most(j - 1)


def read_grid(name):
    """Cell values of a checked-in map, keyed by state vector."""
    lines = (FIXTURES / name).read_text(encoding="utf-8").splitlines()
    x1 = lines[0].split("|")[1].split()
    x2 = lines[1].split("|")[1].split()
    out = {}
    for line in lines[3:]:
        left, right = line.split("|")
        x3, x4 = map(int, left.split())
        for a, b, v in zip(x1, x2, right.split()):
            out[(int(a), int(b), x3, x4)] = int(v)
    return out


def gf_level_counts(spec):
    poly = [1]
    for w, m in zip(spec.weights, spec.max_states):
        nxt = [0] * (len(poly) + int(w) * m)
        for i, c in enumerate(poly):
            for v in range(m + 1):
                nxt[i + int(w) * v] += c
        poly = nxt
    bounds = [int(t) for t in spec.thresholds] + [len(poly)]
    return tuple(sum(poly[bounds[j]: bounds[j + 1]]) for j in range(spec.top_level + 1))


@pytest.mark.acceptance(1, "structure function reproduces the sum and level maps")
def test_ac1_structure_function(spec, table):
    levels, sums = read_grid("structure_map.txt"), read_grid("sum_map.txt")
    assert len(levels) == len(sums) == 81
    for x in iter_states(spec.max_states):
        assert evaluate_structure(spec, x) == levels[x]
        assert spec.weighted_sum(x) == sums[x]
    for x, s in (((0, 0, 0, 0), 0), ((2, 2, 2, 2), 3), ((1, 2, 2, 2), 3), ((2, 1, 1, 1), 2)):
        assert evaluate_structure(spec, x) == s
    assert table.level_counts == gf_level_counts(spec) == (5, 26, 35, 15)


@pytest.mark.acceptance(2, "MUV/MLV counts, orbits and prime-implicant sizes")
def test_ac2_boundary_vectors(spec):
    muv_orbits = {
        3: (((2, 2, 2, 0), 4, 3), ((2, 2, 1, 1), 6, 4)),
        2: (((2, 2, 0, 0), 6, 9), ((2, 1, 1, 0), 12, 12), ((1, 1, 1, 1), 1, 16)),
        1: (((2, 0, 0, 0), 4, 27), ((1, 1, 0, 0), 6, 36)),
    }
    mlv_orbits = {
        2: (((2, 2, 1, 0), 12, 18), ((2, 1, 1, 1), 4, 24)),
        1: (((2, 1, 0, 0), 12, 6), ((1, 1, 1, 0), 4, 8)),
        0: (((1, 0, 0, 0), 4, 2),),
    }
    for j, count in ((3, 10), (2, 19), (1, 10)):
        muvs = enumerate_muvs(spec, j)
        assert len(muvs) == count
        assert {rep: n for rep, n in muvs.orbit_summary} == {rep: n for rep, n, _ in muv_orbits[j]}
        sizes = {rep: c for rep, _, c in muv_orbits[j]}
        for v in muvs:
            assert ProductTerm.upper_cone(v, spec.max_states).cell_count == sizes[tuple(sorted(v, reverse=True))]
        assert verify_boundary_minimality(spec, muvs).ok
    for j, count in ((2, 16), (1, 16), (0, 4)):
        mlvs = enumerate_mlvs(spec, j)
        assert len(mlvs) == count
        assert {rep: n for rep, n in mlvs.orbit_summary} == {rep: n for rep, n, _ in mlv_orbits[j]}
        sizes = {rep: c for rep, _, c in mlv_orbits[j]}
        for v in mlvs:
            assert ProductTerm.lower_cone(v, spec.max_states).cell_count == sizes[tuple(sorted(v, reverse=True))]
        assert verify_boundary_minimality(spec, mlvs).ok


@pytest.mark.acceptance(3, "all six level functions are shellable with one term per PI")
def test_ac3_shellability(spec, table):
    expected = {(Perspective.SUCCESS, 3): 10, (Perspective.SUCCESS, 2): 19, (Perspective.SUCCESS, 1): 10,
                (Perspective.FAILURE, 3): 16, (Perspective.FAILURE, 2): 16, (Perspective.FAILURE, 1): 4}
    for (perspective, j), pis in expected.items():
        sop = minimal_sop(spec, j, perspective)
        assert len(sop) == pis
        result = shellable_disjoint_cover(sop)
        assert result.shellable
        assert len(result.expression) == pis
        assert is_pre(result.expression)
        assert denotation(result.expression) == table.select(selector(j, perspective))


@pytest.mark.acceptance(4, "shelling, reflection and expansion agree exactly")
def test_ac4_three_methods(spec, table):
    rng = random.Random(20240401)
    dists = [ComponentDistribution.uniform(spec.max_states)]
    dists += [random_distribution(rng, spec.max_states) for _ in range(20)]
    assert all(d.exact for d in dists)
    for perspective in PERSPECTIVES:
        for j in range(1, spec.top_level + 1):
            pres = {m: build_pre(spec, j, perspective, m) for m in METHODS}
            want = table.select(selector(j, perspective))
            for pre in pres.values():
                assert is_pre(pre)
                assert denotation(pre) == want
            for d in dists:
                values = {expectation_of_pre(pre, d) for pre in pres.values()}
                assert values == {oracle_probability(spec, d, selector(j, perspective), table)}


@pytest.mark.acceptance(5, "uniform level probabilities and success/failure duality")
def test_ac5_probabilities(spec, table):
    d = ComponentDistribution.uniform(spec.max_states)
    expected = tuple(Fraction(c, 81) for c in (5, 26, 35, 15))
    oracle = tuple(oracle_probability(spec, d, exactly_level(j), table) for j in range(4))
    assert oracle == expected
    succ = level_probabilities_success(spec, d)
    fail = level_probabilities_failure(spec, d)
    assert succ.exactly == expected
    assert fail.exactly == expected
    assert sum(succ.exactly) == 1 and sum(fail.exactly) == 1
    assert succ.oracle_agrees and fail.oracle_agrees


def binomial_tail(n, k, p):
    return sum(math.comb(n, i) * p**i * (1 - p) ** (n - i) for i in range(k, n + 1))


@pytest.mark.acceptance(6, "binary unit-weight systems reduce to k-out-of-n")
def test_ac6_k_out_of_n():
    rng = random.Random(6)
    for _ in range(10):
        n = rng.randint(1, 8)
        k = rng.randint(1, n)
        spec = SystemSpec((1,) * n, (1,) * n, (0, k))
        muvs = set(enumerate_muvs(spec, 1).vectors)
        subsets = {tuple(int(i in c) for i in range(n)) for c in combinations(range(n), k)}
        assert muvs == subsets
        p = Fraction(rng.randint(1, 9), 10)
        d = ComponentDistribution(((1 - p, p),) * n)
        for m in METHODS:
            assert expectation_of_pre(build_pre(spec, 1, Perspective.SUCCESS, m), d) == binomial_tail(n, k, p)
        assert level_probabilities_success(spec, d).at_least[1] == binomial_tail(n, k, p)


@pytest.mark.acceptance(7, "randomized property suite over 200 seeded systems")
def test_ac7_property_suite(capsys):
    rng = random.Random(7)
    not_shellable = []
    for case in range(200):
        spec = random_spec(rng)
        table = build_table(spec)
        assert check_coherence(spec).monotone
        for j in range(1, spec.top_level + 1):
            muvs, mlvs = enumerate_muvs(spec, j), enumerate_mlvs(spec, j - 1)
            for vset in (muvs, mlvs):
                assert all(not leq(a, b) and not leq(b, a) for a, b in combinations(vset.vectors, 2))
            for x, s in zip(table.states, table.levels):
                assert any(leq(v, x) for v in muvs) == (s >= j)
                assert any(leq(x, v) for v in mlvs) == (s <= j - 1)
            for perspective in PERSPECTIVES:
                want = table.select(selector(j, perspective))
                sop = minimal_sop(spec, j, perspective)
                assert denotation(sop) == want
                shell = shellable_disjoint_cover(sop, component_order=weight_order(spec))
                if not shell.shellable:
                    not_shellable.append((case, spec, perspective.value, j))
                for m in METHODS:
                    pre = shell.expression if m == "shelling" else build_pre(spec, j, perspective, m)
                    assert is_pre(pre)
                    assert denotation(pre) == want
        d = random_distribution(rng, spec.max_states)
        better = dominating(rng, d)
        low = level_probabilities_success(spec, d, check_oracle=False).at_least
        high = level_probabilities_success(spec, better, check_oracle=False).at_least
        assert all(h >= l for h, l in zip(high, low))
    with capsys.disabled():
        print(f"\n  property suite: 200 systems, {len(not_shellable)} level functions without a shelling order")
        for case, spec, perspective, j in not_shellable:
            print(f"    case {case}: {perspective} level {j} of {spec}")


@pytest.mark.acceptance(8, "map rendering matches the checked-in grid; cover regions (2,1,1,1)")
def test_ac8_rendering(spec):
    golden = (FIXTURES / "structure_map.txt").read_bytes()
    assert render_structure_map(spec).encode("utf-8") == golden
    lm = render_level_map(spec, 1, Perspective.FAILURE, overlays=("cover",))
    assert sorted((n for _, _, n in lm.regions), reverse=True) == [2, 1, 1, 1]
    assert lm.one_cells == 5
