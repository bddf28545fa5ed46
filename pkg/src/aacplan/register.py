"""The AAC biometric register: the shared trait vocabulary.

Every other module refers to traits by name. Real traits (category ``B``)
always carry one of the nine :class:`TraitKind` values; intermediate traits
(category ``I``) are either synthetic variants of a kind or non-biometric
data structures such as text.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import DuplicateName, InvalidDescriptor, UnknownTrait


class TraitKind(str, enum.Enum):
    Face = "Face"
    FacialExpression = "FacialExpression"
    LipMovement = "LipMovement"
    EyeGaze = "EyeGaze"
    HandGesture = "HandGesture"
    AuditorySignal = "AuditorySignal"
    Breathing = "Breathing"
    EmotionalState = "EmotionalState"
    EEG = "EEG"


class Category(str, enum.Enum):
    B = "B"
    I = "I"  # noqa: E741


class Modality(str, enum.Enum):
    visual = "visual"
    auditory = "auditory"
    tactile = "tactile"
    textual = "textual"
    physiological = "physiological"


@dataclass(frozen=True)
class TraitDescriptor:
    name: str
    category: Category
    base_kind: Optional[TraitKind]
    modality: Modality

    def __post_init__(self):
        # coerce plain strings so scenario data can be passed straight through
        try:
            object.__setattr__(self, "category", Category(self.category))
            object.__setattr__(self, "modality", Modality(self.modality))
            if self.base_kind is not None:
                object.__setattr__(self, "base_kind", TraitKind(self.base_kind))
        except ValueError as exc:
            raise InvalidDescriptor(f"{self.name!r}: {exc}") from None
        if not isinstance(self.name, str) or not self.name:
            raise InvalidDescriptor("descriptor name must be a non-empty string")
        if self.category is Category.B and self.base_kind is None:
            raise InvalidDescriptor(f"B-trait {self.name!r} needs a base_kind")

    @property
    def is_real(self) -> bool:
        return self.category is Category.B

    @property
    def is_synthetic(self) -> bool:
        """Synthetic variant of a biometric kind (I-trait with a base kind)."""
        return self.category is Category.I and self.base_kind is not None


@dataclass(frozen=True)
class Register:
    """Name-keyed, immutable collection of trait descriptors."""

    entries: tuple[TraitDescriptor, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for d in self.entries:
            if d.name in index:
                raise DuplicateName(f"trait {d.name!r} already registered")
            index[d.name] = d
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "_index", index)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[TraitDescriptor]:
        return iter(self.entries)

    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.entries)

    def by_category(self, category) -> tuple[TraitDescriptor, ...]:
        category = Category(category)
        return tuple(d for d in self.entries if d.category is category)


_B_MODALITY = {
    TraitKind.Face: Modality.visual,
    TraitKind.FacialExpression: Modality.visual,
    TraitKind.LipMovement: Modality.visual,
    TraitKind.EyeGaze: Modality.visual,
    TraitKind.HandGesture: Modality.visual,
    TraitKind.AuditorySignal: Modality.auditory,
    TraitKind.Breathing: Modality.physiological,
    # biomarker signals (heart rate variability, blood pressure, ...) are folded in here
    TraitKind.EmotionalState: Modality.physiological,
    TraitKind.EEG: Modality.physiological,
}

_I_ENTRIES = (
    ("Text", None, Modality.textual),
    ("SyntheticSpeech", TraitKind.AuditorySignal, Modality.auditory),
    ("SyntheticGesture", TraitKind.HandGesture, Modality.visual),
    ("SyntheticFacialExpression", TraitKind.FacialExpression, Modality.visual),
    ("SyntheticEyeGaze", TraitKind.EyeGaze, Modality.visual),
    ("SyntheticBreathing", TraitKind.Breathing, Modality.physiological),
    ("SyntheticEEG", TraitKind.EEG, Modality.physiological),
    ("AvatarVisual", None, Modality.visual),
    ("AvatarAudio", None, Modality.auditory),
)


def canonical_register() -> Register:
    """Nine real traits, one per kind, plus the standard intermediates."""
    real = [TraitDescriptor(k.value, Category.B, k, _B_MODALITY[k]) for k in TraitKind]
    inter = [TraitDescriptor(n, Category.I, k, m) for n, k, m in _I_ENTRIES]
    return Register(tuple(real + inter))


def descriptor_of(register: Register, name: str) -> TraitDescriptor:
    try:
        return register._index[name]
    except (KeyError, TypeError):
        raise UnknownTrait(name) from None


def extend_register(register: Register, descriptor: TraitDescriptor) -> Register:
    if not isinstance(descriptor, TraitDescriptor):
        raise InvalidDescriptor(f"expected TraitDescriptor, got {type(descriptor).__name__}")
    if descriptor.name in register:
        raise DuplicateName(f"trait {descriptor.name!r} already registered")
    return Register(register.entries + (descriptor,))
