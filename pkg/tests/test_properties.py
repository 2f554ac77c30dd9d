"""Randomized invariants over generated threshold systems."""
import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from mvthresh import check_coherence, enumerate_mlvs, enumerate_muvs
from mvthresh.expr import METHODS, Perspective, build_pre, denotation, instance_expression, is_pre, minimal_sop
from mvthresh.model import iter_states, validate_spec
from mvthresh.oracle import at_least, build_table, exactly_level, oracle_probability
from mvthresh.probability import expectation_of_pre, level_probabilities_failure, level_probabilities_success
from strategies import distributions, dominating, threshold_specs

PROFILE = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def level_set(spec, j, perspective):
    lo = spec.thresholds[j] if perspective is Perspective.SUCCESS else None
    hi = spec.thresholds[j] if perspective is Perspective.FAILURE else None
    return frozenset(
        x for x in iter_states(spec.max_states)
        if (lo is None or spec.weighted_sum(x) >= lo) and (hi is None or spec.weighted_sum(x) < hi)
    )


@PROFILE
@given(threshold_specs())
def test_valid_and_monotone(spec):
    assert validate_spec(spec).ok
    assert check_coherence(spec).monotone


@PROFILE
@given(threshold_specs())
def test_boundary_characterization(spec):
    # x is at level >= j iff it dominates some MUV, at level <= j-1 iff dominated by some MLV
    for j in range(1, spec.top_level + 1):
        muvs = enumerate_muvs(spec, j).vectors
        mlvs = enumerate_mlvs(spec, j - 1).vectors
        for x in iter_states(spec.max_states):
            up = any(all(a >= b for a, b in zip(x, v)) for v in muvs)
            down = any(all(a <= b for a, b in zip(x, v)) for v in mlvs)
            assert up == (spec.weighted_sum(x) >= spec.thresholds[j])
            assert down == (not up)


@PROFILE
@given(threshold_specs())
def test_every_expression_matches_oracle(spec):
    for perspective in (Perspective.SUCCESS, Perspective.FAILURE):
        for j in range(1, spec.top_level + 1):
            want = level_set(spec, j, perspective)
            assert denotation(minimal_sop(spec, j, perspective)) == want
            for m in METHODS:
                pre = build_pre(spec, j, perspective, m)
                assert is_pre(pre)
                assert denotation(pre) == want


@PROFILE
@given(threshold_specs())
def test_instance_expressions_partition(spec):
    table = build_table(spec)
    seen = set()
    for j in range(spec.top_level + 1):
        e = instance_expression(spec, j)
        cells = denotation(e)
        assert is_pre(e) and cells == table.select(exactly_level(j))
        assert not seen & cells
        seen |= cells
    assert len(seen) == len(table)


@PROFILE
@given(threshold_specs().flatmap(lambda s: st.tuples(st.just(s), distributions(s.max_states))))
def test_expectations_agree_with_oracle(pair):
    spec, d = pair
    table = build_table(spec)
    for j in range(1, spec.top_level + 1):
        expected = oracle_probability(spec, d, at_least(j), table)
        for m in METHODS:
            assert expectation_of_pre(build_pre(spec, j, Perspective.SUCCESS, m), d) == expected
    succ = level_probabilities_success(spec, d, check_oracle=False)
    fail = level_probabilities_failure(spec, d, check_oracle=False)
    assert succ.exactly == fail.exactly and sum(succ.exactly) == 1


@PROFILE
@given(
    threshold_specs().flatmap(lambda s: st.tuples(st.just(s), distributions(s.max_states))),
    st.integers(0, 2**32 - 1),
)
def test_stochastic_dominance(pair, seed):
    spec, d = pair
    better = dominating(random.Random(seed), d)
    low = level_probabilities_success(spec, d, check_oracle=False)
    high = level_probabilities_success(spec, better, check_oracle=False)
    assert all(h >= l for h, l in zip(high.at_least, low.at_least))
