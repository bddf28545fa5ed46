"""Channel planning between two user profiles.

A channel is a chain of transformations leading from a trait the sender can
produce to a trait the receiver can perceive. Plans are ranked by the
objective weight, then by stage count, then by the stage-id sequence, which
makes the chosen plan unique.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

from .errors import InvalidObjective, InvalidProfile, NoChannel, UnknownTrait
from .register import Category, Register, descriptor_of
from .transform import Catalog, Transformation, _check_probability


@dataclass(frozen=True)
class UserProfile:
    id: str
    produces: frozenset = frozenset()
    perceives: frozenset = frozenset()
    overrides: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "produces", frozenset(self.produces))
        object.__setattr__(self, "perceives", frozenset(self.perceives))
        checked = {}
        for tid, acc in dict(self.overrides).items():
            checked[tid] = _check_probability(acc, f"override {tid!r} of {self.id!r}")
        object.__setattr__(self, "overrides", MappingProxyType(checked))

    def __eq__(self, other):
        if not isinstance(other, UserProfile):
            return NotImplemented
        return (self.id, self.produces, self.perceives, dict(self.overrides)) == \
            (other.id, other.produces, other.perceives, dict(other.overrides))

    def __hash__(self):
        return hash((self.id, self.produces, self.perceives))

    def with_overrides(self, updates: Mapping[str, float]) -> "UserProfile":
        merged = dict(self.overrides)
        merged.update(updates)
        return UserProfile(self.id, self.produces, self.perceives, merged)


def validate_profile(profile: UserProfile, register: Register, catalog: Optional[Catalog] = None):
    """Raise if the profile names traits (or transformations) that do not resolve."""
    for name in sorted(profile.produces | profile.perceives):
        if name not in register:
            raise InvalidProfile(f"profile {profile.id!r}: {UnknownTrait(name)}")
    if catalog is not None:
        for tid in sorted(profile.overrides):
            if tid not in catalog:
                raise InvalidProfile(f"profile {profile.id!r}: override for unknown transformation {tid!r}")


@dataclass(frozen=True)
class Objective:
    w_acc: float = 1.0
    w_lat: float = 0.0
    w_cost: float = 0.0

    def __post_init__(self):
        ws = []
        for name in ("w_acc", "w_lat", "w_cost"):
            w = float(getattr(self, name))
            if not (w >= 0.0) or math.isinf(w):
                raise InvalidObjective(f"{name} must be finite and >= 0, got {w!r}")
            object.__setattr__(self, name, w)
            ws.append(w)
        if not any(ws):
            raise InvalidObjective("at least one objective weight must be positive")

    def edge_weight(self, accuracy: float, latency: float, cost: float) -> float:
        """Additive edge weight; ``inf`` for an unusable (accuracy 0) edge."""
        if accuracy <= 0.0:
            return math.inf
        w = 0.0
        if self.w_acc:
            w += self.w_acc * -math.log(accuracy)
        if self.w_lat:
            w += self.w_lat * latency
        if self.w_cost:
            w += self.w_cost * cost
        return w + 0.0  # normalise -0.0


@dataclass(frozen=True)
class ChannelPlan:
    source: str
    sink: str
    stages: tuple[str, ...]
    end_to_end_accuracy: float
    total_latency: float
    total_cost: float
    weight: float = 0.0

    @property
    def is_direct(self) -> bool:
        return not self.stages

    def to_dict(self, catalog: Optional[Catalog] = None) -> dict:
        out = {
            "source": self.source,
            "sink": self.sink,
            "stages": list(self.stages),
            "end_to_end_accuracy": self.end_to_end_accuracy,
            "total_latency": self.total_latency,
            "total_cost": self.total_cost,
            "weight": self.weight,
        }
        if catalog is not None:
            out["chain"] = [f"{catalog[s].source}->{catalog[s].target}" for s in self.stages]
        return out


def effective_accuracy(t: Transformation, sender: Optional[UserProfile]) -> float:
    if sender is not None and t.id in sender.overrides:
        return sender.overrides[t.id]
    return t.accuracy


def _adjacency(catalog: Catalog, sender: UserProfile, objective: Objective):
    adj: dict[str, list] = {}
    for t in catalog:
        acc = effective_accuracy(t, sender)
        if acc <= 0.0:
            continue  # unusable edges are not searched at all
        w = objective.edge_weight(acc, t.latency, t.cost)
        adj.setdefault(t.source, []).append((t.target, t.id, w))
    return adj


def _search(sources: Iterable[str], sinks: frozenset, adj, accept=None, pivot=None):
    """Lexicographic Dijkstra over (weight, n_stages, stage ids).

    With ``pivot`` the state space is (node, touched_pivot) and only
    states that touched a pivot node may terminate a non-empty path.
    Returns (key, final node) or None.
    """
    heap = []
    best = {}
    for s in sorted(sources):
        flag = pivot(s) if pivot else True
        state = (s, flag)
        key = (0.0, 0, ())
        best[state] = key
        heap.append((key, state))
    heapq.heapify(heap)
    done = set()
    while heap:
        key, state = heapq.heappop(heap)
        if state in done:
            continue
        done.add(state)
        node, flag = state
        if node in sinks and (flag or key[1] == 0):
            return key, node
        w, n, ids = key
        for target, tid, ew in adj.get(node, ()):
            nstate = (target, flag or (pivot(target) if pivot else True))
            if nstate in done:
                continue
            nkey = (w + ew, n + 1, ids + (tid,))
            old = best.get(nstate)
            if old is None or nkey < old:
                best[nstate] = nkey
                heapq.heappush(heap, (nkey, nstate))
    return None


def compose_plan(stages, sender: Optional[UserProfile], catalog: Catalog,
                 source: Optional[str] = None, objective: Optional[Objective] = None) -> ChannelPlan:
    """Build a ChannelPlan from explicit stage ids, checking they chain."""
    ts = [catalog[s] for s in stages]
    for a, b in zip(ts, ts[1:]):
        if a.target != b.source:
            raise NoChannel(f"stages {a.id!r} and {b.id!r} do not chain")
    if not ts:
        if source is None:
            raise NoChannel("an empty plan needs an explicit source trait")
        return ChannelPlan(source, source, (), 1.0, 0.0, 0.0, 0.0)
    acc, lat, cost, weight = 1.0, 0.0, 0.0, 0.0
    for t in ts:
        a = effective_accuracy(t, sender)
        acc *= a
        lat += t.latency
        cost += t.cost
        if objective is not None:
            weight += objective.edge_weight(a, t.latency, t.cost)
    return ChannelPlan(ts[0].source, ts[-1].target, tuple(s.id for s in ts), acc, lat, cost, weight)


def _plan(sender, receiver, catalog, objective, pivot=None):
    if not isinstance(objective, Objective):
        raise InvalidObjective("objective must be an Objective")
    for p in (sender, receiver):
        validate_profile(p, catalog.register)
    adj = _adjacency(catalog, sender, objective)
    found = _search(sender.produces, receiver.perceives, adj, pivot=pivot)
    if found is None:
        raise NoChannel(f"no channel from {sender.id!r} to {receiver.id!r}")
    (weight, _, ids), sink = found
    if not ids:
        return ChannelPlan(sink, sink, (), 1.0, 0.0, 0.0, 0.0)
    plan = compose_plan(ids, sender, catalog)
    # weight accumulated by the search is the authoritative one (same summation order)
    return ChannelPlan(plan.source, plan.sink, plan.stages, plan.end_to_end_accuracy,
                       plan.total_latency, plan.total_cost, weight)


def plan_channel(sender: UserProfile, receiver: UserProfile, catalog: Catalog,
                 objective: Objective = Objective()) -> ChannelPlan:
    return _plan(sender, receiver, catalog, objective)


def reverse_channel(sender: UserProfile, receiver: UserProfile, catalog: Catalog,
                    objective: Objective = Objective()) -> ChannelPlan:
    """Plan the reply direction: ``receiver`` talks back to ``sender``."""
    return _plan(receiver, sender, catalog, objective)


def pivot_planned(sender, receiver, catalog, objective):
    """Planner variant whose non-empty plans must touch an I-trait."""
    reg = catalog.register

    def is_pivot(name):
        return descriptor_of(reg, name).category is Category.I
    return _plan(sender, receiver, catalog, objective, pivot=is_pivot)


def channel_accuracy(plan: ChannelPlan, sender: Optional[UserProfile], catalog: Catalog) -> float:
    acc = 1.0
    for sid in plan.stages:
        acc *= effective_accuracy(catalog[sid], sender)
    return acc


def stage_accuracies(plan: ChannelPlan, sender: Optional[UserProfile], catalog: Catalog) -> list[float]:
    return [effective_accuracy(catalog[s], sender) for s in plan.stages]


@dataclass(frozen=True)
class Delivered:
    delivered = True


@dataclass(frozen=True)
class Corrupted:
    stage: int
    delivered = False


def simulate_message(plan: ChannelPlan, sender: Optional[UserProfile], catalog: Catalog, rng_stream):
    """One message through the channel; one Bernoulli draw per stage.

    ``rng_stream`` is anything with a ``random()`` method returning floats in
    [0, 1): a :class:`aacplan.rng.CounterStream` or a numpy ``Generator``.
    """
    failed = None
    for i, a in enumerate(stage_accuracies(plan, sender, catalog)):
        ok = rng_stream.random() < a
        if not ok and failed is None:
            failed = i
    return Delivered() if failed is None else Corrupted(failed)
