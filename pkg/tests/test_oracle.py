import io
from fractions import Fraction

from mvthresh import SystemSpec, build_table, oracle_probability
from mvthresh.expr import parse_expression
from mvthresh.oracle import assert_equivalent, at_least, exactly_level, nothing, write_table_csv
from mvthresh.probability import ComponentDistribution


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, p in enumerate(a):
        for j, q in enumerate(b):
            out[i + j] += p * q
    return out


def sum_counts(spec):
    """Coefficients of prod_k (1 + x^w_k + ... + x^(m_k w_k)) for integer weights."""
    poly = [1]
    for w, m in zip(spec.weights, spec.max_states):
        factor = [0] * (int(w) * m + 1)
        for v in range(m + 1):
            factor[int(w) * v] += 1
        poly = poly_mul(poly, factor)
    return poly


def test_generating_function_counts(spec, table):
    coeffs = sum_counts(spec)
    assert coeffs == [1, 4, 10, 16, 19, 16, 10, 4, 1]
    by_level = [sum(coeffs[2 * j: 2 * j + 2]) for j in range(3)] + [sum(coeffs[6:])]
    assert by_level == [5, 26, 35, 15]
    assert table.level_counts == tuple(by_level)
    assert len(table) == 81


def test_generating_function_on_other_weights():
    spec = SystemSpec((1, 2, 3), (3, 1, 2), (0, 4, 7))
    table = build_table(spec)
    coeffs = sum_counts(spec)
    for s, c in enumerate(coeffs):
        assert sum(1 for t in table.sums if t == s) == c


def test_table_lookup(spec, table):
    assert table.level_of((2, 1, 1, 1)) == 2
    assert table.select(nothing) == frozenset()
    assert table.select(exactly_level(3)) == frozenset(x for x in table.states if sum(x) >= 6)


def test_probability_exact(spec, table):
    d = ComponentDistribution.uniform(spec.max_states)
    assert oracle_probability(spec, d, exactly_level(0), table) == Fraction(5, 81)
    assert oracle_probability(spec, d, at_least(0), table) == 1


def test_generating_function_probability(spec, table):
    # P(sum = s) from the product of per-component probability polynomials
    probs = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))
    d = ComponentDistribution((probs,) * 4)
    poly = [Fraction(1)]
    for _ in range(4):
        poly = poly_mul(poly, list(probs))
    assert oracle_probability(spec, d, exactly_level(3), table) == sum(poly[6:])
    assert oracle_probability(spec, d, exactly_level(1), table) == poly[2] + poly[3]


def test_equivalence_verdict(spec, table):
    e = parse_expression("X1{2} X2{2} X3{2}", spec.max_states)
    verdict = assert_equivalent(e, spec, exactly_level(3), table)
    assert not verdict.equal and not verdict.extra
    assert (2, 2, 1, 1) in verdict.missing
    assert bool(assert_equivalent(parse_expression("0", spec.max_states), spec, nothing, table))


def test_csv_dump(spec, table):
    buf = io.StringIO()
    write_table_csv(table, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x_1,x_2,x_3,x_4,weighted_sum,level"
    assert lines[1] == "0,0,0,0,0,0"
    assert lines[-1] == "2,2,2,2,8,3"
    assert len(lines) == 82
    buf = io.StringIO()
    write_table_csv(build_table(SystemSpec((1,), ("1/2",), (0, "1/2"))), buf)
    assert buf.getvalue().splitlines()[-1] == "1,1/2,1"
