"""Transformation catalog, mode classification and the reference Top-k table."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import (
    DuplicateName,
    InvalidAccuracy,
    InvalidTopk,
    InvalidTransformation,
    UnknownStage,
)
from .register import Category, Register, TraitDescriptor, descriptor_of


class Mode(str, enum.Enum):
    I = "I"  # noqa: E741  synthetic -> synthetic
    II = "II"  # real <-> synthetic
    III = "III"  # real -> real


def classify_mode(source: TraitDescriptor, target: TraitDescriptor) -> Mode:
    real = (source.category is Category.B) + (target.category is Category.B)
    return (Mode.I, Mode.II, Mode.III)[real]


def _check_probability(value, what="accuracy") -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidAccuracy(f"{what} must be a number, got {value!r}") from None
    if not 0.0 <= value <= 1.0:
        raise InvalidAccuracy(f"{what} {value!r} outside [0, 1]")
    return value


@dataclass(frozen=True)
class Transformation:
    id: str
    source: str
    target: str
    mode: Mode
    accuracy: float
    latency: float = 0.0
    cost: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "accuracy", _check_probability(self.accuracy))
        for attr in ("latency", "cost"):
            v = float(getattr(self, attr))
            if not v >= 0.0 or math.isinf(v):
                raise InvalidTransformation(f"{self.id}: {attr} must be finite and >= 0")
            object.__setattr__(self, attr, v)


def miscommunication(t: Transformation) -> float:
    return 1.0 - t.accuracy


@dataclass(frozen=True)
class Catalog:
    register: Register
    transformations: tuple[Transformation, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for t in self.transformations:
            if t.id in index:
                raise DuplicateName(f"transformation id {t.id!r} already used")
            src = descriptor_of(self.register, t.source)
            dst = descriptor_of(self.register, t.target)
            _check_endpoints(t.id, src, dst)
            if t.mode is not classify_mode(src, dst):
                raise InvalidTransformation(f"{t.id}: mode {t.mode.value} inconsistent with endpoints")
            index[t.id] = t
        object.__setattr__(self, "transformations", tuple(self.transformations))
        object.__setattr__(self, "_index", index)

    def __getitem__(self, tid: str) -> Transformation:
        try:
            return self._index[tid]
        except KeyError:
            raise UnknownStage(tid) from None

    def __contains__(self, tid) -> bool:
        return tid in self._index

    def __iter__(self) -> Iterator[Transformation]:
        return iter(self.transformations)

    def __len__(self) -> int:
        return len(self.transformations)


def _check_endpoints(tid, src, dst):
    if src.name == dst.name:
        raise InvalidTransformation(f"{tid}: self-loop on {src.name!r}")
    if (src.category is Category.B and dst.category is Category.B
            and src.base_kind is dst.base_kind and src.modality is dst.modality):
        raise InvalidTransformation(f"{tid}: {src.name!r} and {dst.name!r} are the same real trait")


def empty_catalog(register: Register) -> Catalog:
    return Catalog(register)


def add_transformation(catalog: Catalog, source: str, target: str, accuracy,
                       latency=0.0, cost=0.0, id: Optional[str] = None) -> Catalog:
    """Return a new catalog with one more edge; the mode is derived.

    Parallel edges between the same pair are kept. When ``id`` is omitted a
    ``source->target`` id is generated, suffixed ``#2``, ``#3``... on repeats.
    """
    src = descriptor_of(catalog.register, source)
    dst = descriptor_of(catalog.register, target)
    accuracy = _check_probability(accuracy)
    if id is None:
        id = f"{source}->{target}"
        n = 2
        while id in catalog:
            id = f"{source}->{target}#{n}"
            n += 1
    t = Transformation(id, source, target, classify_mode(src, dst), accuracy, latency, cost)
    return Catalog(catalog.register, catalog.transformations + (t,))


@dataclass(frozen=True)
class TopkRow:
    model: str
    dataset: str
    top1: float
    top5: float
    top10: float

    def __post_init__(self):
        vals = (self.top1, self.top5, self.top10)
        if any(not 0.0 <= v <= 100.0 for v in vals):
            raise InvalidTopk(f"{self.model}: percentages must lie in [0, 100]")
        if not self.top1 <= self.top5 <= self.top10:
            raise InvalidTopk(f"{self.model}: expected top1 <= top5 <= top10, got {vals}")


WLASL_2000 = "WLASL-2000"

# Top-1/5/10 accuracy (%) of word-level sign recognisers on WLASL-2000.
_TOPK_ROWS = (
    ("Pose-GRU", 22.54, 49.81, 61.38),
    ("Pose-TGCN", 23.65, 51.75, 62.24),
    ("I3D", 32.48, 57.31, 66.31),
    ("VGG-GRU", 8.44, 23.58, 32.58),
    ("Transformer encoder (hands + body)", 22.96, 53.12, 65.60),
    ("Transformer encoder (hands + body + face mesh)", 21.00, 51.30, 62.70),
    ("Transformer encoder + focus projection", 26.06, 56.91, 68.97),
)


def builtin_topk_table() -> list[TopkRow]:
    return [TopkRow(m, WLASL_2000, a, b, c) for m, a, b, c in _TOPK_ROWS]


def topk_row(model: str) -> TopkRow:
    for row in builtin_topk_table():
        if row.model == model:
            return row
    raise KeyError(model)


def accuracy_from_topk(row: TopkRow, k: int = 1) -> float:
    try:
        pct = {1: row.top1, 5: row.top5, 10: row.top10}[k]
    except KeyError:
        raise ValueError(f"k must be 1, 5 or 10, got {k!r}") from None
    return pct / 100.0
