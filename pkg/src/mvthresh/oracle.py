"""Brute-force ground truth over the whole state space."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, TextIO

from .model import State, SystemSpec, ensure_within_cap, iter_states

LevelSelector = Callable[[int], bool]


def at_least(j: int) -> LevelSelector:
    return lambda s: s >= j


def at_most(j: int) -> LevelSelector:
    return lambda s: s <= j


def exactly_level(j: int) -> LevelSelector:
    return lambda s: s == j


def nothing(_: int) -> bool:
    return False


@dataclass(frozen=True)
class StateSpaceTable:
    spec: SystemSpec
    states: tuple[State, ...]
    sums: tuple[Fraction, ...]
    levels: tuple[int, ...]

    @property
    def level_counts(self) -> tuple[int, ...]:
        counts = [0] * (self.spec.top_level + 1)
        for s in self.levels:
            counts[s] += 1
        return tuple(counts)

    def __len__(self) -> int:
        return len(self.states)

    def select(self, selector: LevelSelector) -> frozenset[State]:
        return frozenset(x for x, s in zip(self.states, self.levels) if selector(s))

    def level_of(self, x: State) -> int:
        return self.levels[self.states.index(tuple(x))]


def build_table(spec: SystemSpec, cap: int | None = None) -> StateSpaceTable:
    ensure_within_cap(spec.max_states, cap)
    states = tuple(iter_states(spec.max_states))
    sums = tuple(spec.weighted_sum(x) for x in states)
    levels = tuple(spec.level(x) for x in states)
    return StateSpaceTable(spec, states, sums, levels)


def oracle_probability(spec: SystemSpec, d, selector: LevelSelector, table: StateSpaceTable | None = None):
    """Sum of prod_k p_k(x_k) over the states whose level passes ``selector``."""
    table = table or build_table(spec)
    zero = d.probs[0][0] * 0
    total = zero
    for x, s in zip(table.states, table.levels):
        if selector(s):
            total += math.prod((row[v] for row, v in zip(d.probs, x)), start=zero + 1)
    return total


@dataclass(frozen=True)
class EquivalenceVerdict:
    missing: frozenset[State]
    extra: frozenset[State]

    @property
    def equal(self) -> bool:
        return not self.missing and not self.extra

    def __bool__(self) -> bool:
        return self.equal


def assert_equivalent(e, spec: SystemSpec, selector: LevelSelector, table: StateSpaceTable | None = None) -> EquivalenceVerdict:
    """Compare an expression's covered cells with a level set, cell by cell.

    ``missing`` are selected states the expression fails to cover; ``extra``
    are covered states outside the selection.
    """
    table = table or build_table(spec)
    want = table.select(selector)
    got = frozenset(x for x in table.states if any(t.covers(x) for t in e.terms))
    return EquivalenceVerdict(want - got, got - want)


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else str(v)


def write_table_csv(table: StateSpaceTable, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f"x_{k + 1}" for k in range(table.spec.n)] + ["weighted_sum", "level"])
    for x, s, lv in zip(table.states, table.sums, table.levels):
        w.writerow(list(x) + [_fmt(s), lv])
