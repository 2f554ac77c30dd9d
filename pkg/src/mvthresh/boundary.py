"""Minimal upper vectors (MUVs) and maximal lower vectors (MLVs)."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Literal

from .errors import LevelOutOfRange
from .model import State, SystemSpec, ensure_within_cap, iter_states

Kind = Literal["MUV", "MLV"]


@dataclass(frozen=True)
class BoundaryVectorSet:
    """All MUVs of level j (S >= j) or all MLVs of level j (S <= j).

    ``vectors`` are in descending lexicographic order. ``orbit_summary``
    groups them by their descending-sorted coordinates, which is the
    permutation orbit for a totally symmetric system.
    """

    level: int
    kind: Kind
    max_states: tuple[int, ...]
    vectors: tuple[State, ...]

    @property
    def orbit_summary(self) -> tuple[tuple[State, int], ...]:
        counts = Counter(tuple(sorted(v, reverse=True)) for v in self.vectors)
        return tuple(sorted(counts.items(), reverse=True))

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def _check_level(spec: SystemSpec, j: int, lo: int, hi: int) -> None:
    if not lo <= j <= hi:
        raise LevelOutOfRange(f"level {j} outside {lo}..{hi}")


def enumerate_muvs(spec: SystemSpec, j: int, cap: int | None = None) -> BoundaryVectorSet:
    """Minimal vectors of {x : sum W_i x_i >= T_j}.

    Checking immediate predecessors suffices since the weighted sum is
    monotone in every coordinate.
    """
    _check_level(spec, j, 1, spec.top_level)
    ensure_within_cap(spec.max_states, cap)
    _, weights, thresholds = spec.scaled
    t = thresholds[j]
    found = []
    for x in iter_states(spec.max_states):
        s = spec.scaled_sum(x)
        if s < t:
            continue
        if all(s - w < t for w, v in zip(weights, x) if v > 0):
            found.append(x)
    found.sort(reverse=True)
    return BoundaryVectorSet(j, "MUV", spec.max_states, tuple(found))


def enumerate_mlvs(spec: SystemSpec, j: int, cap: int | None = None) -> BoundaryVectorSet:
    """Maximal vectors of {x : sum W_i x_i < T_{j+1}}."""
    _check_level(spec, j, 0, spec.top_level - 1)
    ensure_within_cap(spec.max_states, cap)
    _, weights, thresholds = spec.scaled
    t = thresholds[j + 1]
    found = []
    for x in iter_states(spec.max_states):
        s = spec.scaled_sum(x)
        if s >= t:
            continue
        if all(s + w >= t for w, v, m in zip(weights, x, spec.max_states) if v < m):
            found.append(x)
    found.sort(reverse=True)
    return BoundaryVectorSet(j, "MLV", spec.max_states, tuple(found))


def leq(a: State, b: State) -> bool:
    return all(p <= q for p, q in zip(a, b))


@dataclass(frozen=True)
class MinimalityVerdict:
    ok: bool
    message: str = ""
    offending: State | None = None


def verify_boundary_minimality(
    spec: SystemSpec, vset: BoundaryVectorSet, cap: int | None = None
) -> MinimalityVerdict:
    """Re-check a boundary set against its definition by full cone scans.

    Independent of the neighbour test used for enumeration: every vector
    must meet the level condition, every vector strictly below an MUV (or
    above an MLV) must violate it, and every state meeting the condition
    must lie in the cone of some member.
    """
    ensure_within_cap(spec.max_states, cap)
    j = vset.level
    levels = {x: spec.level(x) for x in iter_states(spec.max_states)}
    if vset.kind == "MUV":
        holds = lambda s: s >= j  # noqa: E731
        below = lambda y, v: leq(y, v)  # noqa: E731  y in the down-cone of v
    else:
        holds = lambda s: s <= j  # noqa: E731
        below = lambda y, v: leq(v, y)  # noqa: E731  y in the up-cone of v

    for v in vset.vectors:
        if not holds(levels[v]):
            return MinimalityVerdict(False, f"{v} does not satisfy the level condition", v)
        for y in levels:
            if y != v and below(y, v) and holds(levels[y]):
                return MinimalityVerdict(False, f"{v} is not extremal: {y} also qualifies", v)
    for x, s in levels.items():
        covered = any(below(v, x) for v in vset.vectors)
        if holds(s) != covered:
            what = "not covered by any" if holds(s) else "wrongly covered by an"
            return MinimalityVerdict(False, f"state {x} is {what} {vset.kind}", x)
    return MinimalityVerdict(True)
