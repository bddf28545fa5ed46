"""Expert-elicitation grid and technology selection by weighted set cover.

Rows are disabilities (``A``, ``B``, ...), columns are technologies
(``1``, ``2``, ...). A cell is either a recommendation score in (0, 1] or
``None`` (not applicable). Covering only looks at whether a cell is
recommended; scores feed the marginal summaries.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from . import _kernels
from .errors import TooLarge, Uncoverable

MAX_EXACT_COLUMNS = 20


def label_key(label: str):
    """Natural order for labels: ``"2" < "10"``, letters compare as text."""
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in re.findall(r"\d+|\D+", label))


@dataclass(frozen=True)
class JudgmentGrid:
    rows: tuple[tuple[str, str], ...]  # (label, name)
    cols: tuple[tuple[str, str, float], ...]  # (label, name, cost)
    cells: Mapping[tuple[str, str], Optional[float]] = field(default_factory=dict)

    def __post_init__(self):
        rows = tuple((str(l), str(n)) for l, n in self.rows)
        cols = tuple((str(l), str(n), float(c)) for l, n, c in self.cols)
        rl, cl = [r[0] for r in rows], [c[0] for c in cols]
        if len(set(rl)) != len(rl) or len(set(cl)) != len(cl):
            raise ValueError("row and column labels must be unique")
        for label, _, cost in cols:
            if not cost > 0.0:
                raise ValueError(f"technology {label!r} needs a positive cost, got {cost}")
        full = {(r, c): None for r in rl for c in cl}
        for (r, c), score in dict(self.cells).items():
            if (r, c) not in full:
                raise ValueError(f"cell {r}{c} is outside the grid")
            if score is not None:
                score = float(score)
                if not 0.0 < score <= 1.0:
                    raise ValueError(f"cell {r}{c}: score must lie in (0, 1], got {score}")
            full[(r, c)] = score
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "cells", full)

    @property
    def row_labels(self) -> tuple[str, ...]:
        return tuple(r[0] for r in self.rows)

    @property
    def col_labels(self) -> tuple[str, ...]:
        return tuple(c[0] for c in self.cols)

    def cost(self, col: str) -> float:
        for label, _, c in self.cols:
            if label == col:
                return c
        raise KeyError(col)

    def recommended(self, row: str, col: str) -> bool:
        return self.cells[(row, col)] is not None

    def column_rows(self, col: str, needs: Iterable[str]) -> frozenset:
        return frozenset(r for r in needs if self.cells[(r, col)] is not None)


@dataclass(frozen=True)
class Cluster:
    needs: frozenset
    selected: tuple[str, ...]  # natural label order
    covered: frozenset  # (row, col) cells
    total_cost: float

    def cell_names(self) -> list[str]:
        return [f"{r}{c}" for r, c in sorted(self.covered, key=lambda rc: (label_key(rc[0]), label_key(rc[1])))]


def make_cluster(grid: JudgmentGrid, needs: Iterable[str], selected: Iterable[str]) -> Cluster:
    """Cluster for an explicit technology selection (manual clustering)."""
    needs = _check_needs(grid, needs)
    selected = tuple(sorted(set(selected), key=label_key))
    for c in selected:
        if c not in grid.col_labels:
            raise KeyError(f"unknown technology {c!r}")
    covered = frozenset((r, c) for c in selected for r in needs if grid.recommended(r, c))
    total = 0.0
    for c in selected:
        total += grid.cost(c)
    return Cluster(needs, selected, covered, total)


def _check_needs(grid, needs) -> frozenset:
    needs = frozenset(needs)
    unknown = needs - set(grid.row_labels)
    if unknown:
        raise KeyError(f"unknown disability rows: {sorted(unknown)}")
    return needs


def _check_coverable(grid, needs):
    for r in sorted(needs, key=label_key):
        if not any(grid.recommended(r, c) for c in grid.col_labels):
            raise Uncoverable(r)


def cover_greedy(grid: JudgmentGrid, needs: Iterable[str]) -> Cluster:
    """Greedy weighted set cover: best (new rows)/cost ratio first."""
    needs = _check_needs(grid, needs)
    _check_coverable(grid, needs)
    uncovered = set(needs)
    chosen = []
    while uncovered:
        best = None
        for label, _, cost in grid.cols:
            if label in chosen:
                continue
            gain = len(grid.column_rows(label, uncovered))
            if gain == 0:
                continue
            key = (-(gain / cost), cost, label_key(label))
            if best is None or key < best[0]:
                best = (key, label)
        chosen.append(best[1])
        uncovered -= grid.column_rows(best[1], uncovered)
    return make_cluster(grid, needs, chosen)


def cover_exact(grid: JudgmentGrid, needs: Iterable[str]) -> Cluster:
    """Exhaustive minimum-cost cover (ties: fewer columns, then label order)."""
    needs = _check_needs(grid, needs)
    if len(grid.cols) > MAX_EXACT_COLUMNS:
        raise TooLarge(f"{len(grid.cols)} technologies exceed the exact-search limit of {MAX_EXACT_COLUMNS}")
    _check_coverable(grid, needs)
    cols = sorted(grid.cols, key=lambda c: label_key(c[0]))
    rows = sorted(needs, key=label_key)
    bit = {r: 1 << i for i, r in enumerate(rows)}
    masks = np.array([sum(bit[r] for r in grid.column_rows(c[0], rows)) for c in cols], dtype=np.int64)
    costs = np.array([c[2] for c in cols], dtype=np.float64)
    need_mask = (1 << len(rows)) - 1
    best = _kernels.exact_cover(masks, costs, need_mask) if cols else (0 if not rows else -1)
    if best < 0:  # pragma: no cover - excluded by _check_coverable
        raise Uncoverable(rows[0])
    selected = [c[0] for j, c in enumerate(cols) if (best >> j) & 1]
    return make_cluster(grid, needs, selected)


@dataclass(frozen=True)
class TechSummary:
    technology: str
    name: str
    covered_rows: tuple[str, ...]
    cost: float
    cost_share: float


@dataclass(frozen=True)
class NeedSummary:
    disability: str
    name: str
    technologies: tuple[str, ...]
    max_score: Optional[float]


def marginal_x(grid: JudgmentGrid, cluster: Cluster) -> list[TechSummary]:
    names = {l: n for l, n, _ in grid.cols}
    out = []
    for c in cluster.selected:
        rows = tuple(sorted({r for r, cc in cluster.covered if cc == c}, key=label_key))
        cost = grid.cost(c)
        share = cost / cluster.total_cost if cluster.total_cost > 0 else 0.0
        out.append(TechSummary(c, names[c], rows, cost, share))
    return out


def marginal_y(grid: JudgmentGrid, cluster: Cluster) -> list[NeedSummary]:
    names = dict(grid.rows)
    out = []
    for r in sorted(cluster.needs, key=label_key):
        techs = tuple(c for c in cluster.selected if (r, c) in cluster.covered)
        scores = [grid.cells[(r, c)] for c in techs]
        out.append(NeedSummary(r, names[r], techs, max(scores) if scores else None))
    return out
