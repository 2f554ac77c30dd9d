"""End-to-end cross-checks of every derived artifact against the oracle."""
from __future__ import annotations

from dataclasses import dataclass

from .boundary import enumerate_mlvs, enumerate_muvs, verify_boundary_minimality
from .expr import (
    METHODS,
    Perspective,
    build_pre,
    denotation,
    instance_expression,
    is_pre,
    minimal_sop,
    shellable_disjoint_cover,
    weight_order,
)
from .model import SystemSpec, check_coherence, ensure_within_cap
from .oracle import assert_equivalent, at_least, at_most, build_table, exactly_level
from .probability import (
    ComponentDistribution,
    close,
    expectation_of_pre,
    level_probabilities_failure,
    level_probabilities_success,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        tail = f"  ({self.detail})" if self.detail else ""
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}{tail}"


def selector_for(j: int, perspective: Perspective):
    if perspective is Perspective.SUCCESS:
        return at_least(j)
    if perspective is Perspective.FAILURE:
        return at_most(j - 1)
    return exactly_level(j)


def run_verification(
    spec: SystemSpec, dist: ComponentDistribution | None = None, cap: int | None = None
) -> list[CheckResult]:
    """Every check the ``verify`` command runs, in a fixed order."""
    ensure_within_cap(spec.max_states, cap)
    table = build_table(spec, cap)
    dist = dist or ComponentDistribution.uniform(spec.max_states)
    M = spec.top_level
    out: list[CheckResult] = []

    coh = check_coherence(spec, cap)
    out.append(CheckResult("structure function is monotone", coh.monotone))

    for j in range(1, M + 1):
        muvs = enumerate_muvs(spec, j, cap)
        v = verify_boundary_minimality(spec, muvs, cap)
        out.append(CheckResult(f"MUVs level {j} minimal and complete", v.ok, v.message or f"{len(muvs)} vectors"))
    for j in range(M):
        mlvs = enumerate_mlvs(spec, j, cap)
        v = verify_boundary_minimality(spec, mlvs, cap)
        out.append(CheckResult(f"MLVs level {j} maximal and complete", v.ok, v.message or f"{len(mlvs)} vectors"))

    for perspective in (Perspective.SUCCESS, Perspective.FAILURE):
        for j in range(1, M + 1):
            sel = selector_for(j, perspective)
            sop = minimal_sop(spec, j, perspective, cap)
            eq = assert_equivalent(sop, spec, sel, table)
            out.append(CheckResult(f"minimal SOP {sop.lhs()} matches oracle", eq.equal, f"{len(sop)} terms"))
            shell = shellable_disjoint_cover(sop, cap, weight_order(spec))
            out.append(
                CheckResult(
                    f"shelling {sop.lhs()}",
                    True,
                    f"shellable={str(shell.shellable).lower()}, {len(shell.expression)} terms",
                )
            )
            expectations = []
            for method in METHODS:
                pre = build_pre(spec, j, perspective, method, cap)
                ok = bool(is_pre(pre)) and assert_equivalent(pre, spec, sel, table).equal
                out.append(CheckResult(f"PRE {sop.lhs()} [{method}] disjoint and equivalent", ok, f"{len(pre)} terms"))
                expectations.append(expectation_of_pre(pre, dist) if is_pre(pre) else None)
            out.append(
                CheckResult(
                    f"PRE {sop.lhs()} methods agree on expectation",
                    None not in expectations and all(close(expectations[0], p) for p in expectations),
                )
            )

    cells = [denotation(instance_expression(spec, j, cap=cap), cap) for j in range(M + 1)]
    partition = sum(map(len, cells)) == len(table) and len(frozenset().union(*cells)) == len(table)
    out.append(CheckResult("instance expressions partition the state space", partition))
    for j in range(M + 1):
        e = instance_expression(spec, j, cap=cap)
        ok = bool(is_pre(e)) and assert_equivalent(e, spec, exactly_level(j), table).equal
        out.append(CheckResult(f"instance expression S{{{j}}} disjoint and equivalent", ok))

    succ = level_probabilities_success(spec, dist, cap=cap)
    fail = level_probabilities_failure(spec, dist, cap=cap)
    agree = all(close(a, b) for a, b in zip(succ.exactly, fail.exactly))
    out.append(CheckResult("success/failure probabilities agree", agree))
    out.append(CheckResult("probabilities match oracle", bool(succ.oracle_agrees and fail.oracle_agrees)))
    out.append(CheckResult("probabilities sum to one", close(sum(succ.exactly), 1 + 0 * succ.exactly[0])))
    return out
