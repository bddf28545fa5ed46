"""Communication hub: pairwise channel reconfiguration across a team."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional

from .channel import ChannelPlan, Objective, UserProfile, pivot_planned
from .errors import NoChannel, SelfRoute, UnknownMember
from .transform import Catalog


@dataclass(frozen=True)
class Team:
    members: tuple[UserProfile, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValueError("a team needs at least one member")
        ids = [m.id for m in members]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate member ids in team: {ids}")
        object.__setattr__(self, "members", members)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.members)

    def member(self, mid: str) -> UserProfile:
        for m in self.members:
            if m.id == mid:
                return m
        raise UnknownMember(mid)


def route(team: Team, i: str, j: str, catalog: Catalog, objective: Objective = Objective()) -> ChannelPlan:
    """Plan AAC_{i->j}: any non-empty plan is forced through an I-trait pivot."""
    sender, receiver = team.member(i), team.member(j)
    if i == j:
        raise SelfRoute(f"cannot route {i!r} to itself")
    return pivot_planned(sender, receiver, catalog, objective)


@dataclass(frozen=True)
class ReachabilityMatrix:
    ids: tuple[str, ...]
    entries: dict  # (i, j) -> (accuracy, n_stages) for reachable pairs only

    def get(self, i: str, j: str) -> Optional[tuple[float, int]]:
        return self.entries.get((i, j))

    def is_complete(self) -> bool:
        return all((i, j) in self.entries for i in self.ids for j in self.ids if i != j)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + list(self.ids))
        for i in self.ids:
            row = [i]
            for j in self.ids:
                e = self.entries.get((i, j))
                row.append("" if e is None else repr(e[0]))
            w.writerow(row)
        return buf.getvalue()


def reachability_matrix(team: Team, catalog: Catalog, objective: Objective = Objective()) -> ReachabilityMatrix:
    entries = {}
    for i in team.ids:
        for j in team.ids:
            if i == j:
                continue
            try:
                plan = route(team, i, j, catalog, objective)
            except NoChannel:
                continue
            entries[(i, j)] = (plan.end_to_end_accuracy, len(plan.stages))
    return ReachabilityMatrix(team.ids, entries)
