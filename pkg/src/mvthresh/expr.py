"""Multi-valued sum-of-products expressions and their disjoint (PRE) forms.

A literal ``X_k{S}`` is stored as a bitmask over the states 0..m_k of
component k. A :class:`ProductTerm` keeps one mask per component, so a
component absent from a term simply carries the full mask (constant 1).
"""
from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .boundary import BoundaryVectorSet, enumerate_mlvs, enumerate_muvs
from .errors import LevelOutOfRange
from .model import State, SystemSpec, ensure_within_cap, iter_states

# beyond this many prime implicants the shelling search runs on a node budget
EXHAUSTIVE_SHELLING_LIMIT = 20
SHELLING_NODE_BUDGET = 20_000


class Perspective(str, enum.Enum):
    SUCCESS = "success"  # S{>=j}
    FAILURE = "failure"  # S{<=j-1}, i.e. failure at level j
    INSTANCE = "instance"  # S{j}


class Form(str, enum.Enum):
    MINIMAL = "minimal"
    DISJOINT = "disjoint"


def full_mask(m: int) -> int:
    return (1 << (m + 1)) - 1


def mask_values(mask: int) -> tuple[int, ...]:
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


def mask_of(values: Iterable[int]) -> int:
    out = 0
    for v in values:
        out |= 1 << v
    return out


@dataclass(frozen=True)
class MvLiteral:
    """``X_var{instances}`` over component states 0..max_state."""

    var: int
    mask: int
    max_state: int

    def __post_init__(self):
        if self.mask == 0:
            raise ValueError("empty literal; represent constant 0 at the term level")
        if self.mask & ~full_mask(self.max_state):
            raise ValueError(f"instances {mask_values(self.mask)} exceed 0..{self.max_state}")

    @classmethod
    def of(cls, var: int, values: Iterable[int], max_state: int) -> "MvLiteral":
        return cls(var, mask_of(values), max_state)

    @classmethod
    def upper(cls, var: int, j: int, max_state: int) -> "MvLiteral":
        """X_var{>=j}."""
        return cls(var, mask_of(range(j, max_state + 1)), max_state)

    @classmethod
    def lower(cls, var: int, j: int, max_state: int) -> "MvLiteral":
        """X_var{<=j}."""
        return cls(var, mask_of(range(0, j + 1)), max_state)

    @property
    def instances(self) -> tuple[int, ...]:
        return mask_values(self.mask)

    @property
    def is_constant(self) -> bool:
        return self.mask == full_mask(self.max_state)

    def complement(self) -> "MvLiteral":
        return MvLiteral(self.var, full_mask(self.max_state) & ~self.mask, self.max_state)

    def render(self, style: str = "instances") -> str:
        return render_literal(self.var, self.mask, self.max_state, style)


def render_literal(var: int, mask: int, m: int, style: str = "instances") -> str:
    values = mask_values(mask)
    contiguous = values == tuple(range(values[0], values[-1] + 1))
    if style == "upper" and contiguous and values[-1] == m:
        body = f">={values[0]}"
    elif style == "lower" and contiguous and values[0] == 0:
        body = f"<={values[-1]}"
    else:
        body = ",".join(map(str, values))
    return f"X{var + 1}{{{body}}}"


@dataclass(frozen=True)
class ProductTerm:
    masks: tuple[int, ...]
    max_states: tuple[int, ...]

    def __post_init__(self):
        if len(self.masks) != len(self.max_states):
            raise ValueError("one mask per component required")
        for mask, m in zip(self.masks, self.max_states):
            if mask == 0 or mask & ~full_mask(m):
                raise ValueError(f"invalid instance mask {mask:b} for 0..{m}")

    @classmethod
    def one(cls, max_states: Sequence[int]) -> "ProductTerm":
        return cls(tuple(full_mask(m) for m in max_states), tuple(max_states))

    @classmethod
    def from_literals(cls, literals: Iterable[MvLiteral], max_states: Sequence[int]) -> "ProductTerm":
        masks = [full_mask(m) for m in max_states]
        for lit in literals:
            masks[lit.var] &= lit.mask
        return cls(tuple(masks), tuple(max_states))

    @classmethod
    def upper_cone(cls, v: State, max_states: Sequence[int]) -> "ProductTerm":
        """Conjunction of X_k{>=v_k}: every state above v."""
        return cls.from_literals(
            (MvLiteral.upper(k, vk, m) for k, (vk, m) in enumerate(zip(v, max_states))), max_states
        )

    @classmethod
    def lower_cone(cls, v: State, max_states: Sequence[int]) -> "ProductTerm":
        return cls.from_literals(
            (MvLiteral.lower(k, vk, m) for k, (vk, m) in enumerate(zip(v, max_states))), max_states
        )

    @property
    def literals(self) -> tuple[MvLiteral, ...]:
        return tuple(MvLiteral(k, mask, m) for k, (mask, m) in enumerate(zip(self.masks, self.max_states)))

    @property
    def nontrivial_literal_count(self) -> int:
        return sum(mask != full_mask(m) for mask, m in zip(self.masks, self.max_states))

    @property
    def cell_count(self) -> int:
        return math.prod(mask.bit_count() for mask in self.masks)

    def covers(self, x: Sequence[int]) -> bool:
        return all(mask >> v & 1 for mask, v in zip(self.masks, x))

    def cells(self) -> Iterator[State]:
        return itertools.product(*(mask_values(mask) for mask in self.masks))

    def intersect(self, other: "ProductTerm") -> "ProductTerm | None":
        masks = tuple(a & b for a, b in zip(self.masks, other.masks))
        if 0 in masks:
            return None
        return ProductTerm(masks, self.max_states)

    def is_subset_of(self, other: "ProductTerm") -> bool:
        return all(a & ~b == 0 for a, b in zip(self.masks, other.masks))

    def render(self, style: str = "instances") -> str:
        return " ".join(
            render_literal(k, mask, m, style) for k, (mask, m) in enumerate(zip(self.masks, self.max_states))
        )


def is_disjoint_pair(a: ProductTerm, b: ProductTerm) -> bool:
    """True iff some component carries non-overlapping instance sets."""
    return any(p & q == 0 for p, q in zip(a.masks, b.masks))


@dataclass(frozen=True)
class SopExpression:
    """Disjunction of product terms for one level indicator.

    ``level`` is read with ``perspective``: success j is S{>=j}, failure j
    is S{<=j-1} (failure at level j), instance j is S{j}.
    """

    terms: tuple[ProductTerm, ...]
    max_states: tuple[int, ...]
    perspective: Perspective = Perspective.SUCCESS
    level: int | None = None
    form: Form = Form.MINIMAL

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def default_style(self) -> str:
        if self.form is Form.DISJOINT:
            return "instances"
        return "lower" if self.perspective is Perspective.FAILURE else "upper"

    def render(self, ascii: bool = False, style: str | None = None) -> str:
        if not self.terms:
            return "0"
        style = style or self.default_style
        joiner = " + " if ascii else " ∨ "
        return joiner.join(t.render(style) for t in self.terms)

    def with_terms(self, terms: Iterable[ProductTerm], form: Form) -> "SopExpression":
        return SopExpression(tuple(terms), self.max_states, self.perspective, self.level, form)

    def lhs(self) -> str:
        if self.level is None:
            return "f"
        if self.perspective is Perspective.SUCCESS:
            return f"S{{>={self.level}}}"
        if self.perspective is Perspective.FAILURE:
            return f"S{{<={self.level - 1}}}"
        return f"S{{{self.level}}}"


_LITERAL_RE = re.compile(r"X_?\s*(\d+)\s*\{([^}]*)\}")
_TERM_SPLIT_RE = re.compile(r"∨|\+|\\vee")


def _parse_instances(body: str, m: int) -> int:
    body = body.replace(" ", "").replace("≥", ">=").replace("≤", "<=")
    if body.startswith(">="):
        return mask_of(range(int(body[2:]), m + 1))
    if body.startswith("<="):
        return mask_of(range(0, int(body[2:]) + 1))
    if body.startswith(">"):
        return mask_of(range(int(body[1:]) + 1, m + 1))
    if body.startswith("<"):
        return mask_of(range(0, int(body[1:])))
    return mask_of(int(v) for v in body.split(","))


def parse_term(text: str, max_states: Sequence[int]) -> ProductTerm:
    masks = [full_mask(m) for m in max_states]
    rest = _LITERAL_RE.sub("", text).strip()
    if rest and rest != "1":
        raise ValueError(f"cannot parse term {text!r}")
    for var, body in _LITERAL_RE.findall(text):
        k = int(var) - 1
        if not 0 <= k < len(max_states):
            raise ValueError(f"unknown component X{var}")
        masks[k] &= _parse_instances(body, max_states[k])
    return ProductTerm(tuple(masks), tuple(max_states))


def parse_expression(
    text: str,
    max_states: Sequence[int],
    perspective: Perspective = Perspective.SUCCESS,
    level: int | None = None,
    form: Form = Form.MINIMAL,
) -> SopExpression:
    """Inverse of :meth:`SopExpression.render`; also accepts ``X_1{≥ 2}`` and
    ``{0, 1}`` spellings. ``"0"`` is the empty expression."""
    text = text.strip()
    if text == "0":
        return SopExpression((), tuple(max_states), perspective, level, form)
    terms = tuple(parse_term(t, max_states) for t in _TERM_SPLIT_RE.split(text) if t.strip())
    return SopExpression(terms, tuple(max_states), perspective, level, form)


def sop_from_muvs(muvs: BoundaryVectorSet) -> SopExpression:
    """One prime implicant X_1{>=v_1}...X_n{>=v_n} per MUV v."""
    terms = tuple(ProductTerm.upper_cone(v, muvs.max_states) for v in muvs.vectors)
    return SopExpression(terms, muvs.max_states, Perspective.SUCCESS, muvs.level, Form.MINIMAL)


def sop_from_mlvs(mlvs: BoundaryVectorSet) -> SopExpression:
    """One prime implicant of S{<=j} per MLV; failure at level j + 1."""
    terms = tuple(ProductTerm.lower_cone(v, mlvs.max_states) for v in mlvs.vectors)
    return SopExpression(terms, mlvs.max_states, Perspective.FAILURE, mlvs.level + 1, Form.MINIMAL)


@dataclass(frozen=True)
class PreVerdict:
    is_pre: bool
    first_overlap: tuple[int, int] | None = None
    justification: str = ""

    def __bool__(self) -> bool:
        return self.is_pre


_INDEPENDENCE_NOTE = (
    "each term is a product of single-component literals over independent "
    "components, so ANDed factors are independent"
)


def is_pre(e: SopExpression) -> PreVerdict:
    for i, a in enumerate(e.terms):
        for j in range(i + 1, len(e.terms)):
            if not is_disjoint_pair(a, e.terms[j]):
                return PreVerdict(False, (i, j), f"terms {i} and {j} overlap")
    return PreVerdict(True, None, "all term pairs disjoint; " + _INDEPENDENCE_NOTE)


def denotation(e: SopExpression, cap: int | None = None) -> frozenset[State]:
    """Exact set of state vectors covered by ``e``."""
    ensure_within_cap(e.max_states, cap)
    out: set[State] = set()
    for t in e.terms:
        out.update(t.cells())
    return frozenset(out)


# --- shelling -----------------------------------------------------------


class _BudgetExceeded(Exception):
    pass


def _subcube(cells: set[State], max_states: tuple[int, ...]) -> ProductTerm | None:
    if not cells:
        return None
    masks = [0] * len(max_states)
    for x in cells:
        for k, v in enumerate(x):
            masks[k] |= 1 << v
    if math.prod(m.bit_count() for m in masks) != len(cells):
        return None
    return ProductTerm(tuple(masks), max_states)


@dataclass(frozen=True)
class ShellingResult:
    expression: SopExpression
    shellable: bool
    order: tuple[int, ...] | None = None


def _lex_key(t: ProductTerm, component_order: Sequence[int]):
    # high lower bounds first, then low upper bounds: descending MUVs, ascending MLVs
    return tuple((-(t.masks[k] & -t.masks[k]).bit_length(), t.masks[k].bit_length()) for k in component_order)


def _shelling_candidates(terms: Sequence[ProductTerm], component_order=None) -> list[list[int]]:
    idx = range(len(terms))
    by_cells = sorted(idx, key=lambda i: -terms[i].cell_count)
    by_literals = sorted(idx, key=lambda i: terms[i].nontrivial_literal_count)
    out = [by_cells, by_literals]
    if terms:
        for order in (component_order, range(len(terms[0].masks))):
            if order is not None:
                out.append(sorted(idx, key=lambda i: _lex_key(terms[i], order)))
    return out


def _residuals(order, cells, max_states) -> list[ProductTerm] | None:
    covered: set[State] = set()
    out = []
    for i in order:
        cube = _subcube(cells[i] - covered, max_states)
        if cube is None:
            return None
        out.append(cube)
        covered |= cells[i]
    return out


def _search_shelling(cells, preference, max_states, budget) -> list[int] | None:
    n = len(cells)
    dead: set[int] = set()
    nodes = 0

    def dfs(used: int, covered: frozenset, seq: list[int]):
        nonlocal nodes
        if len(seq) == n:
            return seq
        if used in dead:
            return None
        for i in preference:
            if used >> i & 1:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise _BudgetExceeded
            if _subcube(cells[i] - covered, max_states) is None:
                continue
            found = dfs(used | 1 << i, covered | cells[i], seq + [i])
            if found:
                return found
        dead.add(used)
        return None

    try:
        return dfs(0, frozenset(), [])
    except _BudgetExceeded:
        return None


def shellable_disjoint_cover(
    e: SopExpression, cap: int | None = None, component_order: Sequence[int] | None = None
) -> ShellingResult:
    """Disjoint cover with one subcube per prime implicant, if one exists.

    Looks for an order of the terms in which each term minus all earlier
    terms is a single subcube. Tries descending cell count, fewest literals
    first, and lexicographic orders over ``component_order`` (heaviest
    component first works well for threshold systems) and the natural
    component order, then a backtracking search. Falls back to
    :func:`disjoint_via_reflection` with ``shellable=False``.
    """
    ensure_within_cap(e.max_states, cap)
    terms = e.terms
    if not terms:
        return ShellingResult(e.with_terms((), Form.DISJOINT), True, ())
    cells = [frozenset(t.cells()) for t in terms]
    candidates = _shelling_candidates(terms, component_order)
    for order in candidates:
        cubes = _residuals(order, cells, e.max_states)
        if cubes is not None:
            return ShellingResult(e.with_terms(cubes, Form.DISJOINT), True, tuple(order))
    budget = None if len(terms) <= EXHAUSTIVE_SHELLING_LIMIT else SHELLING_NODE_BUDGET
    order = _search_shelling(cells, candidates[0], e.max_states, budget)
    if order is not None:
        cubes = _residuals(order, cells, e.max_states)
        return ShellingResult(e.with_terms(cubes, Form.DISJOINT), True, tuple(order))
    return ShellingResult(disjoint_via_reflection(e), False, None)


# --- Reflection Law disjointing ----------------------------------------


def _subtract(p: ProductTerm, a: ProductTerm) -> list[ProductTerm]:
    """p AND NOT a as mutually disjoint terms.

    Components where p already implies a's literal form the common factor;
    the remaining literals Y_1..Y_e of a are negated with the disjoint
    De Morgan expansion  ~Y_1 v Y_1 ~Y_2 v ... v Y_1..Y_{e-1} ~Y_e.
    """
    if is_disjoint_pair(p, a):
        return [p]
    if p.is_subset_of(a):
        return []
    pieces = []
    cur = list(p.masks)
    for k, am in enumerate(a.masks):
        if cur[k] & ~am == 0:
            continue
        piece = cur.copy()
        piece[k] = cur[k] & ~am
        pieces.append(ProductTerm(tuple(piece), p.max_states))
        cur[k] &= am
    return pieces


def absorb(terms: Sequence[ProductTerm]) -> list[ProductTerm]:
    """Drop every term contained in another (first copy of duplicates kept)."""
    kept = []
    for i, t in enumerate(terms):
        swallowed = any(
            t.is_subset_of(u) and (not u.is_subset_of(t) or j < i) for j, u in enumerate(terms) if j != i
        )
        if not swallowed:
            kept.append(t)
    return kept


def disjoint_via_reflection(e: SopExpression) -> SopExpression:
    """Sum of disjoint products by repeated Reflection Law rewrites.

    Terms are absorbed, sorted so that terms with fewer literals come first,
    and each term is disjointed against every earlier (intact) term.
    """
    ordered = sorted(absorb(e.terms), key=lambda t: t.nontrivial_literal_count)
    out: list[ProductTerm] = []
    for i, b in enumerate(ordered):
        pieces = [b]
        for a in ordered[:i]:
            pieces = [q for p in pieces for q in _subtract(p, a)]
            if not pieces:
                break
        out.extend(pieces)
    return e.with_terms(out, Form.DISJOINT)


# --- Boole-Shannon expansion ---------------------------------------------


def level_interval(spec: SystemSpec, j: int, perspective: Perspective):
    """Weighted-sum interval [lo, hi) selecting the level indicator.

    ``hi`` is None for an unbounded interval.
    """
    M = spec.top_level
    perspective = Perspective(perspective)
    if perspective is Perspective.SUCCESS:
        if not 0 <= j <= M:
            raise LevelOutOfRange(f"success level {j} outside 0..{M}")
        return spec.thresholds[j], None
    if perspective is Perspective.FAILURE:
        if not 1 <= j <= M:
            raise LevelOutOfRange(f"failure level {j} outside 1..{M}")
        return spec.thresholds[0], spec.thresholds[j]
    if not 0 <= j <= M:
        raise LevelOutOfRange(f"level {j} outside 0..{M}")
    return spec.thresholds[j], (None if j == M else spec.thresholds[j + 1])


def _merge_sweep(terms: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    for var in reversed(range(n)):
        groups: dict[tuple[int, ...], int] = {}
        for masks in terms:
            key = masks[:var] + masks[var + 1 :]
            groups[key] = groups.get(key, 0) | masks[var]
        terms = [key[:var] + (mask,) + key[var:] for key, mask in groups.items()]
    return terms


def boole_shannon_pre(
    spec: SystemSpec, j: int, perspective: Perspective = Perspective.SUCCESS, cap: int | None = None
) -> SopExpression:
    """Disjoint expression by recursive expansion about X_1, X_2, ...

    Each branch fixes one component to a single instance, so terms from
    different branches are disjoint. A branch stops as soon as the
    remaining components can no longer change the indicator.
    """
    ensure_within_cap(spec.max_states, cap)
    lo, hi = level_interval(spec, j, perspective)
    n = spec.n
    full = tuple(full_mask(m) for m in spec.max_states)
    rest_max = [sum((w * m for w, m in zip(spec.weights[k:], spec.max_states[k:])), 0) for k in range(n + 1)]
    found: list[tuple[int, ...]] = []

    def expand(k: int, prefix: tuple[int, ...], s):
        top = s + rest_max[k]
        if top < lo or (hi is not None and s >= hi):
            return
        if s >= lo and (hi is None or top < hi):
            found.append(prefix + full[k:])
            return
        for v in range(spec.max_states[k] + 1):
            expand(k + 1, prefix + (1 << v,), s + spec.weights[k] * v)

    expand(0, (), 0)
    merged = _merge_sweep(found, n)
    terms = tuple(ProductTerm(masks, spec.max_states) for masks in merged)
    return SopExpression(terms, spec.max_states, Perspective(perspective), j, Form.DISJOINT)


# --- level pipelines ------------------------------------------------------

METHODS = ("shelling", "reflection", "expansion")


def minimal_sop(spec: SystemSpec, j: int, perspective: Perspective, cap: int | None = None) -> SopExpression:
    """Minimal SOP from boundary vectors: MUVs of level j for success,
    MLVs of level j - 1 for failure at level j."""
    perspective = Perspective(perspective)
    level_interval(spec, j, perspective)
    if perspective is Perspective.SUCCESS:
        if j == 0:
            return SopExpression((ProductTerm.one(spec.max_states),), spec.max_states, perspective, 0)
        return sop_from_muvs(enumerate_muvs(spec, j, cap))
    if perspective is Perspective.FAILURE:
        return sop_from_mlvs(enumerate_mlvs(spec, j - 1, cap))
    raise ValueError("instance indicators have no boundary-vector SOP; use instance_expression")


def build_pre(
    spec: SystemSpec, j: int, perspective: Perspective, method: str = "shelling", cap: int | None = None
) -> SopExpression:
    """Disjoint expression for a level indicator by the named method."""
    perspective = Perspective(perspective)
    if perspective is Perspective.INSTANCE:
        return instance_expression(spec, j, method, cap)
    if method == "expansion":
        return boole_shannon_pre(spec, j, perspective, cap)
    e = minimal_sop(spec, j, perspective, cap)
    if method == "shelling":
        return shellable_disjoint_cover(e, cap, weight_order(spec)).expression
    if method == "reflection":
        return disjoint_via_reflection(e)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def weight_order(spec: SystemSpec) -> list[int]:
    """Components by descending weight, ties by index."""
    return sorted(range(spec.n), key=lambda k: (-spec.weights[k], k))


def conjoin_disjoint(a: SopExpression, b: SopExpression) -> list[ProductTerm]:
    """Term-wise product of two disjoint expressions (stays disjoint)."""
    out = []
    for s in a.terms:
        for t in b.terms:
            u = s.intersect(t)
            if u is not None:
                out.append(u)
    return out


def instance_expression(spec: SystemSpec, j: int, method: str = "shelling", cap: int | None = None) -> SopExpression:
    """Disjoint expression for S{j} = S{>=j} AND S{<j+1}."""
    M = spec.top_level
    if not 0 <= j <= M:
        raise LevelOutOfRange(f"level {j} outside 0..{M}")
    one = SopExpression((ProductTerm.one(spec.max_states),), spec.max_states, form=Form.DISJOINT)
    upper = one if j == 0 else build_pre(spec, j, Perspective.SUCCESS, method, cap)
    lower = one if j == M else build_pre(spec, j + 1, Perspective.FAILURE, method, cap)
    terms = conjoin_disjoint(upper, lower)
    return SopExpression(tuple(terms), spec.max_states, Perspective.INSTANCE, j, Form.DISJOINT)


def level_states(spec: SystemSpec, j: int, perspective: Perspective) -> Iterator[State]:
    """States selected by a level indicator, straight from the weighted sums."""
    lo, hi = level_interval(spec, j, perspective)
    for x in iter_states(spec.max_states):
        s = spec.weighted_sum(x)
        if s >= lo and (hi is None or s < hi):
            yield x
