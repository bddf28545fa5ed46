"""Perception-action personalization of per-transformation accuracy.

Three adaptation levels are supported:

* ``Manual``: the user's own setting (``prior``) is used as-is.
* ``ContextRule``: the prior shifted by a context bias, clamped to [0, 1].
* ``Online``: a pseudo-count smoothed success ratio,
  ``(successes + prior * w0) / (trials + w0)`` with ``w0 = 2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from statistics import NormalDist
from typing import Iterable, Mapping

from .channel import UserProfile
from .errors import InsufficientData, UnknownEstimate
from .transform import _check_probability

PSEUDO_COUNT = 2.0
DEFAULT_PRIOR = 0.5
DEFAULT_TAU = 0.02


class AdaptMode(str, enum.Enum):
    Manual = "Manual"
    ContextRule = "ContextRule"
    Online = "Online"


@dataclass(frozen=True)
class AdaptiveEstimate:
    user: str
    transformation: str
    mode: AdaptMode = AdaptMode.Online
    prior: float = DEFAULT_PRIOR
    successes: int = 0
    trials: int = 0
    context_bias: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mode", AdaptMode(self.mode))
        object.__setattr__(self, "prior", _check_probability(self.prior, "prior"))
        if not 0 <= self.successes <= self.trials:
            raise ValueError(f"need 0 <= successes <= trials, got {self.successes}/{self.trials}")


def estimate(e: AdaptiveEstimate) -> float:
    if e.mode is AdaptMode.Manual:
        return e.prior
    if e.mode is AdaptMode.ContextRule:
        return min(1.0, max(0.0, e.prior + e.context_bias))
    return (e.successes + e.prior * PSEUDO_COUNT) / (e.trials + PSEUDO_COUNT)


def observe(e: AdaptiveEstimate, success: bool) -> AdaptiveEstimate:
    if e.mode is not AdaptMode.Online:
        return e
    return replace(e, successes=e.successes + bool(success), trials=e.trials + 1)


def observe_many(e: AdaptiveEstimate, outcomes: Iterable[bool]) -> AdaptiveEstimate:
    for o in outcomes:
        e = observe(e, o)
    return e


def half_width(e: AdaptiveEstimate, confidence: float = 0.95) -> float:
    """Normal-approximation half-width of the raw success ratio."""
    if e.mode is not AdaptMode.Online:
        raise ValueError(f"half_width needs an Online estimate, got {e.mode.value}")
    if e.trials == 0:
        raise InsufficientData(f"no observations for {e.user}/{e.transformation}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    p = e.successes / e.trials
    return z * math.sqrt(p * (1.0 - p) / e.trials)


def converged(e: AdaptiveEstimate, tau: float = DEFAULT_TAU, confidence: float = 0.95) -> bool:
    if e.mode is not AdaptMode.Online:
        return True
    if e.trials == 0:
        return False
    return half_width(e, confidence) < tau


def perception_action_step(profile: UserProfile, estimates: Mapping[str, AdaptiveEstimate],
                           batch) -> tuple[UserProfile, dict]:
    """Perceptor folds ``batch`` into the estimates; Actuator writes overrides.

    ``estimates`` is keyed by transformation id. Only transformations seen in
    the batch are written back; Manual entries are written as their prior.
    """
    batch = list(batch)
    for tid, _ in batch:
        if tid not in estimates:
            raise UnknownEstimate(tid)
    updated = dict(estimates)
    for tid, outcome in batch:
        updated[tid] = observe(updated[tid], outcome)
    if not batch:
        return profile, updated
    touched = dict.fromkeys(tid for tid, _ in batch)
    writes = {tid: estimate(updated[tid]) for tid in touched}
    return profile.with_overrides(writes), updated
