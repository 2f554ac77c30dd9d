"""Multi-valued Karnaugh maps as fixed-width text or CSV grids."""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from typing import Sequence

from .boundary import enumerate_mlvs, enumerate_muvs
from .errors import MapTooLarge
from .expr import Perspective, SopExpression, build_pre, level_interval
from .model import State, SystemSpec, ensure_within_cap, level_of_sum

TEXT_MAX_VARS = 6
TEXT_MAX_CELLS = 4096
MARKERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class MapLayout:
    """Which components index columns and rows; earlier variables vary slowest."""

    column_vars: tuple[int, ...]
    row_vars: tuple[int, ...]

    @classmethod
    def default(cls, n: int) -> "MapLayout":
        split = (n + 1) // 2
        return cls(tuple(range(split)), tuple(range(split, n)))

    def check(self, n: int) -> None:
        if sorted(self.column_vars + self.row_vars) != list(range(n)):
            raise ValueError("layout must place every component exactly once")

    def axis(self, vars_: Sequence[int], max_states: Sequence[int]) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(max_states[k] + 1) for k in vars_)))

    def state(self, n: int, col: tuple[int, ...], row: tuple[int, ...]) -> State:
        x = [0] * n
        for k, v in zip(self.column_vars, col):
            x[k] = v
        for k, v in zip(self.row_vars, row):
            x[k] = v
        return tuple(x)


def _grid(spec: SystemSpec, layout: MapLayout, cell) -> tuple[list, list, list[list[str]]]:
    layout.check(spec.n)
    cols = layout.axis(layout.column_vars, spec.max_states)
    rows = layout.axis(layout.row_vars, spec.max_states)
    body = [[cell(layout.state(spec.n, c, r)) for c in cols] for r in rows]
    return cols, rows, body


def _labels(vars_: Sequence[int]) -> list[str]:
    return [f"X{k + 1}" for k in vars_]


def _format_text(layout: MapLayout, cols, rows, body) -> str:
    if len(layout.column_vars) + len(layout.row_vars) > TEXT_MAX_VARS or len(cols) * len(rows) > TEXT_MAX_CELLS:
        raise MapTooLarge("map too large for text output; use CSV")
    row_labels = _labels(layout.row_vars)
    col_labels = _labels(layout.column_vars)
    row_head = " ".join(row_labels)
    first = f"{row_head} \\ {col_labels[0]}" if row_head else col_labels[0]
    width_left = max([len(first)] + [len(c) for c in col_labels])
    contents = [c for line in body for c in line] + [str(v) for col in cols for v in col]
    w = max(len(c) for c in contents) + 1

    lines = []
    for i, label in enumerate(col_labels):
        left = first if i == 0 else label
        values = "".join(str(col[i]).rjust(w) for col in cols)
        lines.append(f"{left.rjust(width_left)} |{values}")
    lines.append("-" * (width_left + 1) + "+" + "-" * (w * len(cols)))
    for r, line in zip(rows, body):
        left = " ".join(str(v).rjust(len(lab)) for v, lab in zip(r, row_labels))
        lines.append(f"{left.ljust(width_left)} |" + "".join(c.rjust(w) for c in line))
    return "\n".join(ln.rstrip() for ln in lines) + "\n"


def _format_csv(layout: MapLayout, cols, rows, body) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    corner = ":".join(_labels(layout.row_vars)) + "\\" + ":".join(_labels(layout.column_vars))
    w.writerow([corner] + [":".join(map(str, c)) for c in cols])
    for r, line in zip(rows, body):
        w.writerow([":".join(map(str, r))] + line)
    return buf.getvalue()


def _emit(layout, cols, rows, body, fmt: str) -> str:
    if fmt == "csv":
        return _format_csv(layout, cols, rows, body)
    if fmt == "text":
        return _format_text(layout, cols, rows, body)
    raise ValueError(f"unknown format {fmt!r}")


def render_structure_map(
    spec: SystemSpec, layout: MapLayout | None = None, values: str = "level", fmt: str = "text", cap: int | None = None
) -> str:
    """Grid of S(x) (``values="level"``) or of the weighted sum (``"sum"``)."""
    ensure_within_cap(spec.max_states, cap)
    layout = layout or MapLayout.default(spec.n)

    def cell(x):
        s = spec.weighted_sum(x)
        if values == "sum":
            return str(s.numerator) if s.denominator == 1 else str(s)
        return str(level_of_sum(spec, s))

    return _emit(layout, *_grid(spec, layout, cell), fmt)


@dataclass(frozen=True)
class LevelMap:
    """A rendered binary level map plus what was drawn on it."""

    text: str
    one_cells: int
    marked: frozenset[State]
    regions: tuple[tuple[str, str, int], ...]  # (marker, term, cell count)

    def __str__(self) -> str:
        return self.text


def render_level_map(
    spec: SystemSpec,
    j: int,
    perspective: Perspective = Perspective.SUCCESS,
    layout: MapLayout | None = None,
    overlays: Sequence[str] = (),
    cover: SopExpression | None = None,
    fmt: str = "text",
    cap: int | None = None,
) -> LevelMap:
    """Binary map of a level indicator.

    ``"1"`` marks cells where the indicator holds; other cells are blank.
    Overlays: ``"muv"`` stars the MUVs of level j, ``"mlv"`` stars the MLVs
    of level j - 1, ``"cover"`` replaces each one-cell by the letter of the
    disjoint-cover term containing it (shelling PRE unless ``cover`` given).
    """
    ensure_within_cap(spec.max_states, cap)
    perspective = Perspective(perspective)
    layout = layout or MapLayout.default(spec.n)
    lo, hi = level_interval(spec, j, perspective)

    marked: set[State] = set()
    if "muv" in overlays and j >= 1:
        marked.update(enumerate_muvs(spec, j, cap).vectors)
    if "mlv" in overlays and j >= 1:
        marked.update(enumerate_mlvs(spec, j - 1, cap).vectors)

    regions = []
    owner: dict[State, str] = {}
    if "cover" in overlays:
        cover = cover or build_pre(spec, j, perspective, "shelling", cap)
        for i, t in enumerate(cover.terms):
            marker = MARKERS[i] if i < len(MARKERS) else f"t{i + 1}"
            regions.append((marker, t.render(), t.cell_count))
            for x in t.cells():
                owner[x] = marker

    ones = 0

    def cell(x):
        nonlocal ones
        s = spec.weighted_sum(x)
        holds = s >= lo and (hi is None or s < hi)
        ones += holds
        text = (owner.get(x, "?") if owner else "1") if holds else ""
        return text + ("*" if x in marked else "")

    grid = _grid(spec, layout, cell)
    out = _emit(layout, *grid, fmt)
    if regions and fmt == "text":
        out += "".join(f"{m}: {term}  [{n} cell{'s' * (n != 1)}]\n" for m, term, n in regions)
    return LevelMap(out, ones, frozenset(marked), tuple(regions))
