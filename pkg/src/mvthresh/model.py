"""Threshold system definition and the multi-valued structure function.

Component indices are 0-based throughout the API; rendered output uses
1-based labels (``X1`` is component 0).
"""
from __future__ import annotations

import bisect
import itertools
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .errors import (
    AllZeroWeights,
    LevelOutOfRange,
    NegativeWeight,
    NonIncreasingThresholds,
    NonZeroBaseThreshold,
    SpecViolation,
    StateOutOfRange,
    StateSpaceTooLarge,
    UnreachableTopLevel,
)

DEFAULT_STATE_CAP = 10**7
CAP_ENV_VAR = "MVTHRESH_STATE_CAP"

State = tuple[int, ...]


def to_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, decimal/ratio string or float.

    Floats go through their shortest repr so ``0.1`` becomes 1/10.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def state_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(CAP_ENV_VAR)
    return int(env) if env else DEFAULT_STATE_CAP


def state_space_size(max_states: Sequence[int]) -> int:
    return math.prod(m + 1 for m in max_states)


def ensure_within_cap(max_states: Sequence[int], cap: int | None = None) -> int:
    size = state_space_size(max_states)
    limit = state_cap(cap)
    if size > limit:
        raise StateSpaceTooLarge(size, limit)
    return size


def iter_states(max_states: Sequence[int]) -> Iterator[State]:
    """All state vectors in ascending lexicographic order."""
    return itertools.product(*(range(m + 1) for m in max_states))


@dataclass(frozen=True)
class SystemSpec:
    """A truly-threshold multi-state system.

    Weights and thresholds are stored as exact fractions. ``thresholds`` is
    T_0..T_M; the open upper end of level M is :attr:`sentinel_top`.
    Construction only checks shapes; use :func:`validate_spec` for the
    threshold invariants.
    """

    max_states: tuple[int, ...]
    weights: tuple[Fraction, ...]
    thresholds: tuple[Fraction, ...]
    labels: Mapping[str, object] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "max_states", tuple(int(m) for m in self.max_states))
        object.__setattr__(self, "weights", tuple(to_fraction(w) for w in self.weights))
        object.__setattr__(self, "thresholds", tuple(to_fraction(t) for t in self.thresholds))
        if not self.max_states:
            raise ValueError("a system needs at least one component")
        if len(self.weights) != len(self.max_states):
            raise ValueError(
                f"{len(self.weights)} weights given for {len(self.max_states)} components"
            )
        if any(m < 1 for m in self.max_states):
            raise ValueError("every component needs max_state >= 1")
        if len(self.thresholds) < 2:
            raise ValueError("need thresholds T_0..T_M with M >= 1")

    @property
    def n(self) -> int:
        return len(self.max_states)

    @property
    def top_level(self) -> int:
        """M, the highest system level."""
        return len(self.thresholds) - 1

    @property
    def max_weighted_sum(self) -> Fraction:
        return sum((w * m for w, m in zip(self.weights, self.max_states)), Fraction(0))

    @property
    def sentinel_top(self) -> Fraction:
        return self.max_weighted_sum + 1

    def threshold(self, j: int) -> Fraction:
        """T_j for 0 <= j <= M + 1 (T_{M+1} is the sentinel)."""
        if j == self.top_level + 1:
            return self.sentinel_top
        return self.thresholds[j]

    @cached_property
    def scaled(self) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        """(D, D*W, D*T) with D the common denominator, for exact integer sums."""
        d = math.lcm(*(f.denominator for f in self.weights + self.thresholds))
        return d, tuple(int(w * d) for w in self.weights), tuple(int(t * d) for t in self.thresholds)

    def scaled_sum(self, x: Sequence[int]) -> int:
        return sum(w * v for w, v in zip(self.scaled[1], x))

    def weighted_sum(self, x: Sequence[int]) -> Fraction:
        return Fraction(self.scaled_sum(x), self.scaled[0])

    def level(self, x: Sequence[int]) -> int:
        """S(x) without range checks on x."""
        return bisect.bisect_right(self.scaled[2], self.scaled_sum(x)) - 1

    @property
    def state_count(self) -> int:
        return state_space_size(self.max_states)


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[SpecViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_first(self) -> None:
        if self.violations:
            raise self.violations[0]


def validate_spec(spec: SystemSpec) -> ValidationResult:
    out: list[SpecViolation] = []
    t = spec.thresholds
    if t[0] != 0:
        out.append(NonZeroBaseThreshold(f"T_0 must be 0, got {t[0]}"))
    for j in range(1, len(t)):
        if not t[j - 1] < t[j]:
            out.append(
                NonIncreasingThresholds(f"T_{j - 1} = {t[j - 1]} is not below T_{j} = {t[j]}")
            )
            break
    for i, w in enumerate(spec.weights):
        if w < 0:
            out.append(NegativeWeight(f"weight of component {i + 1} is negative ({w})"))
    if all(w == 0 for w in spec.weights):
        out.append(AllZeroWeights("at least one weight must be positive"))
    elif t[-1] > spec.max_weighted_sum:
        out.append(
            UnreachableTopLevel(
                f"T_M = {t[-1]} exceeds the largest weighted sum {spec.max_weighted_sum}"
            )
        )
    return ValidationResult(tuple(out))


def check_state(spec: SystemSpec, x: Sequence[int]) -> State:
    x = tuple(x)
    if len(x) != spec.n:
        raise StateOutOfRange(f"state has {len(x)} entries, system has {spec.n} components")
    for k, (v, m) in enumerate(zip(x, spec.max_states)):
        if not 0 <= v <= m:
            raise StateOutOfRange(f"X{k + 1} = {v} outside 0..{m}")
    return x


def level_of_sum(spec: SystemSpec, s: Fraction) -> int:
    # thresholds are strictly increasing with T_0 = 0 on a valid spec
    return bisect.bisect_right(spec.thresholds, s) - 1


def evaluate_structure(spec: SystemSpec, x: Sequence[int]) -> int:
    """S(x): the unique j with T_j <= sum W_i x_i < T_{j+1}."""
    x = check_state(spec, x)
    return spec.level(x)


def level_success(spec: SystemSpec, x: Sequence[int], j: int) -> int:
    """Binary success at level j, S{>=j}(x)."""
    if not 0 <= j <= spec.top_level:
        raise LevelOutOfRange(f"level {j} outside 0..{spec.top_level}")
    x = check_state(spec, x)
    return int(spec.weighted_sum(x) >= spec.thresholds[j])


def quotient(spec: SystemSpec, var: int, value: int) -> dict[State, int]:
    """S / X_var{value}: the structure function restricted to X_var = value.

    Keys are the states of the remaining components, in component order.
    """
    rest = [m for k, m in enumerate(spec.max_states) if k != var]
    out = {}
    for y in iter_states(rest):
        x = y[:var] + (value,) + y[var:]
        out[y] = evaluate_structure(spec, x)
    return out


@dataclass(frozen=True)
class CoherenceReport:
    """Outcome of the exhaustive coherence scan.

    ``witnesses`` maps a property name (``"causal"``, ``"monotone"``,
    ``"relevant[k]"``) to the state vectors that show it failing.
    """

    causal: bool
    monotone: bool
    relevant: tuple[bool, ...]
    witnesses: Mapping[str, tuple[State, ...]]

    @property
    def coherent(self) -> bool:
        return self.causal and self.monotone and all(self.relevant)


def check_coherence(spec: SystemSpec, cap: int | None = None) -> CoherenceReport:
    ensure_within_cap(spec.max_states, cap)
    M = spec.top_level
    levels = {x: spec.level(x) for x in iter_states(spec.max_states)}
    witnesses: dict[str, tuple[State, ...]] = {}

    bottom = tuple(0 for _ in spec.max_states)
    top = spec.max_states
    bad = tuple(v for v, want in ((bottom, 0), (top, M)) if levels[v] != want)
    if bad:
        witnesses["causal"] = bad

    monotone = True
    relevant = [False] * spec.n
    for x, s in levels.items():
        for k in range(spec.n):
            if x[k] == spec.max_states[k]:
                continue
            y = x[:k] + (x[k] + 1,) + x[k + 1 :]
            if levels[y] < s and monotone:
                monotone = False
                witnesses["monotone"] = (x, y)
            elif levels[y] > s:
                relevant[k] = True
    for k in range(spec.n):
        if not relevant[k]:
            lo = bottom
            hi = bottom[:k] + (spec.max_states[k],) + bottom[k + 1 :]
            witnesses[f"relevant[{k}]"] = (lo, hi)
    return CoherenceReport(not bad, monotone, tuple(relevant), witnesses)


@dataclass(frozen=True)
class SymmetryReport:
    symmetric: bool
    asymmetric_pair: tuple[int, int] | None = None
    witness: State | None = None


def check_total_symmetry(spec: SystemSpec, cap: int | None = None) -> SymmetryReport:
    """Swap test over every component pair; first failing pair is reported."""
    ensure_within_cap(spec.max_states, cap)
    states = list(iter_states(spec.max_states))
    levels = {x: spec.level(x) for x in states}
    for i, j in itertools.combinations(range(spec.n), 2):
        if spec.max_states[i] != spec.max_states[j]:
            return SymmetryReport(False, (i, j))
        for x in states:
            y = list(x)
            y[i], y[j] = y[j], y[i]
            if levels[tuple(y)] != levels[x]:
                return SymmetryReport(False, (i, j), x)
    return SymmetryReport(True)


@dataclass(frozen=True)
class BinaryImageReport:
    per_level: Mapping[int, bool]

    @property
    def binary_imaged(self) -> bool:
        return all(self.per_level.values())


def check_binary_imaged(spec: SystemSpec, muvs_per_level=None, mlvs_per_level=None) -> BinaryImageReport:
    """Level j passes when its MUVs use only {0, j} and the MLVs of level j-1
    use only {j-1, m_k} per coordinate.

    Boundary sets are enumerated when not supplied.
    """
    from .boundary import enumerate_mlvs, enumerate_muvs

    M = spec.top_level
    if muvs_per_level is None:
        muvs_per_level = {j: enumerate_muvs(spec, j) for j in range(1, M + 1)}
    if mlvs_per_level is None:
        mlvs_per_level = {j: enumerate_mlvs(spec, j) for j in range(M)}
    per_level = {}
    for j in range(1, M + 1):
        ok = all(all(v in (0, j) for v in x) for x in muvs_per_level[j].vectors)
        ok = ok and all(
            all(v in (j - 1, m) for v, m in zip(x, spec.max_states))
            for x in mlvs_per_level[j - 1].vectors
        )
        per_level[j] = ok
    return BinaryImageReport(per_level)


def running_example() -> SystemSpec:
    """Four three-state engines, unit weights, thresholds 0, 2, 4, 6."""
    return SystemSpec((2, 2, 2, 2), (1, 1, 1, 1), (0, 2, 4, 6))
