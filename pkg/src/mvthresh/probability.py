"""Expectations of probability-ready expressions and level probability reports."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import InvalidDistribution, NotPre
from .expr import Perspective, SopExpression, build_pre, is_pre
from .model import State, SystemSpec, to_fraction

Number = Union[Fraction, float]
FLOAT_TOL = 1e-12


@dataclass(frozen=True)
class ComponentDistribution:
    """Independent per-component state probabilities.

    ``probs[k][v]`` is P(X_k = v). Entries that are ints, Fractions or ratio
    strings stay exact; any float entry switches the whole distribution to
    float mode.
    """

    probs: tuple[tuple[Number, ...], ...]

    def __post_init__(self):
        exact = all(not isinstance(p, float) for row in self.probs for p in row)
        conv = (lambda p: to_fraction(p)) if exact else float
        rows = tuple(tuple(conv(p) for p in row) for row in self.probs)
        object.__setattr__(self, "probs", rows)
        for k, row in enumerate(rows):
            if any(p < 0 for p in row):
                raise InvalidDistribution(f"component {k + 1} has a negative probability")
            total = sum(row)
            if (total != 1) if exact else abs(total - 1) > FLOAT_TOL:
                raise InvalidDistribution(f"component {k + 1} probabilities sum to {total}")

    @property
    def exact(self) -> bool:
        return all(isinstance(p, Fraction) for row in self.probs for p in row)

    @property
    def max_states(self) -> tuple[int, ...]:
        return tuple(len(row) - 1 for row in self.probs)

    @classmethod
    def uniform(cls, max_states: Sequence[int]) -> "ComponentDistribution":
        return cls(tuple(tuple(Fraction(1, m + 1) for _ in range(m + 1)) for m in max_states))

    @classmethod
    def degenerate(cls, x: State, max_states: Sequence[int]) -> "ComponentDistribution":
        """All mass on the single state vector ``x``."""
        return cls(tuple(tuple(Fraction(int(v == xk)) for v in range(m + 1)) for xk, m in zip(x, max_states)))

    def literal_probability(self, k: int, mask: int) -> Number:
        row = self.probs[k]
        return sum((row[v] for v in range(len(row)) if mask >> v & 1), row[0] * 0)

    def state_probability(self, x: State) -> Number:
        return math.prod((row[v] for row, v in zip(self.probs, x)), start=self.probs[0][0] * 0 + 1)


def expectation_of_pre(e: SopExpression, d: ComponentDistribution) -> Number:
    """Sum over terms of the product of literal probabilities.

    Only valid for disjoint terms; overlapping input raises :class:`NotPre`.
    """
    verdict = is_pre(e)
    if not verdict:
        raise NotPre(verdict.justification)
    zero = d.probs[0][0] * 0
    total = zero
    for t in e.terms:
        total += math.prod((d.literal_probability(k, mask) for k, mask in enumerate(t.masks)), start=zero + 1)
    return total


@dataclass(frozen=True)
class ProbabilityReport:
    """Level probabilities, index j = 0..M in each tuple."""

    at_least: tuple[Number, ...]
    at_most: tuple[Number, ...]
    exactly: tuple[Number, ...]
    perspective: Perspective
    method: str
    oracle_agrees: bool | None = None

    @property
    def top_level(self) -> int:
        return len(self.exactly) - 1


def close(a: Number, b: Number) -> bool:
    """Exact equality for fractions, 1e-12 absolute otherwise."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= FLOAT_TOL


def _oracle_check(spec: SystemSpec, d: ComponentDistribution, exactly, check_oracle: bool, cap) -> bool | None:
    if not check_oracle:
        return None
    from .oracle import build_table, exactly_level, oracle_probability

    table = build_table(spec, cap)
    return all(
        close(p, oracle_probability(spec, d, exactly_level(j), table)) for j, p in enumerate(exactly)
    )


def _cumulate(exactly: Sequence[Number]):
    at_least = [sum(exactly[j:], exactly[0] * 0) for j in range(len(exactly))]
    at_most = [sum(exactly[: j + 1], exactly[0] * 0) for j in range(len(exactly))]
    return tuple(at_least), tuple(at_most)


def level_probabilities_success(
    spec: SystemSpec,
    d: ComponentDistribution,
    method: str = "shelling",
    check_oracle: bool = True,
    cap: int | None = None,
) -> ProbabilityReport:
    """P(S = j) from the PREs of S{>=j}, j = M..1, by telescoping."""
    M = spec.top_level
    one = d.probs[0][0] * 0 + 1
    upper = [one] + [expectation_of_pre(build_pre(spec, j, Perspective.SUCCESS, method, cap), d) for j in range(1, M + 1)]
    exactly = [upper[j] - (upper[j + 1] if j < M else 0) for j in range(M + 1)]
    _, at_most = _cumulate(exactly)
    return ProbabilityReport(
        tuple(upper), at_most, tuple(exactly), Perspective.SUCCESS, method,
        _oracle_check(spec, d, exactly, check_oracle, cap),
    )


def level_probabilities_failure(
    spec: SystemSpec,
    d: ComponentDistribution,
    method: str = "shelling",
    check_oracle: bool = True,
    cap: int | None = None,
) -> ProbabilityReport:
    """P(S = j) from the PREs of S{<=j}, j = 0..M-1, by telescoping."""
    M = spec.top_level
    one = d.probs[0][0] * 0 + 1
    lower = [expectation_of_pre(build_pre(spec, j + 1, Perspective.FAILURE, method, cap), d) for j in range(M)]
    lower.append(one)
    exactly = [lower[j] - (lower[j - 1] if j > 0 else 0) for j in range(M + 1)]
    at_least, _ = _cumulate(exactly)
    return ProbabilityReport(
        at_least, tuple(lower), tuple(exactly), Perspective.FAILURE, method,
        _oracle_check(spec, d, exactly, check_oracle, cap),
    )
