"""Scenario files: YAML documents validated into a frozen :class:`Scenario`.

Unknown keys are rejected. Defaults are filled on parse, so a scenario
serialised with :func:`dump_scenario` and parsed again compares equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Literal, Optional, Union

import pydantic
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .adapt import DEFAULT_PRIOR, DEFAULT_TAU, AdaptiveEstimate, AdaptMode
from .channel import ChannelPlan, Objective, UserProfile, compose_plan, plan_channel
from .checkpoint import DEFAULT_RETRY_BOOST, PointName, SecurityPoint, check_pipeline, preload_profile
from .elicit import JudgmentGrid
from .errors import AACError, ParseError, ValidationError
from .hub import Team
from .register import Category, Modality, Register, TraitDescriptor, TraitKind, canonical_register, extend_register
from .transform import Catalog, accuracy_from_topk, add_transformation, topk_row

BUNDLED = ("border", "dialogue", "needs", "team")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class DescriptorSpec(_Strict):
    name: str
    category: Category
    base_kind: Optional[TraitKind] = None
    modality: Modality


class TopkRef(_Strict):
    model: str
    k: Literal[1, 5, 10] = 1


class TransformationSpec(_Strict):
    id: str
    source: str
    target: str
    accuracy: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    topk_ref: Optional[TopkRef] = None
    latency_ms: float = Field(default=0.0, ge=0.0)
    cost: float = Field(default=0.0, ge=0.0)

    @model_validator(mode="after")
    def _one_accuracy_source(self):
        if (self.accuracy is None) == (self.topk_ref is None):
            raise ValueError("give exactly one of 'accuracy' or 'topk_ref'")
        return self


class ProfileSpec(_Strict):
    id: str
    produces: tuple[str, ...] = ()
    perceives: tuple[str, ...] = ()
    overrides: dict[str, float] = Field(default_factory=dict)


class ObjectiveSpec(_Strict):
    w_acc: float = Field(default=1.0, ge=0.0)
    w_lat: float = Field(default=0.0, ge=0.0)
    w_cost: float = Field(default=0.0, ge=0.0)


class AdaptationSpec(_Strict):
    user: str
    transformation: str
    mode: AdaptMode = AdaptMode.Online
    prior: float = Field(default=DEFAULT_PRIOR, ge=0.0, le=1.0)
    # a number, or a tag looked up in the top-level ``contexts`` mapping
    context_bias: Union[float, str, None] = None
    tau: float = Field(default=DEFAULT_TAU, gt=0.0)


class RowSpec(_Strict):
    label: str
    name: str = ""


class ColSpec(_Strict):
    label: str
    name: str = ""
    cost: float = Field(gt=0.0)


class CellSpec(_Strict):
    row: str
    col: str
    score: Optional[float] = Field(default=None, gt=0.0, le=1.0)


class GridSpec(_Strict):
    rows: tuple[RowSpec, ...]
    cols: tuple[ColSpec, ...]
    cells: tuple[CellSpec, ...] = ()


class PointSpec(_Strict):
    index: int = Field(ge=1, le=6)
    name: PointName
    plan_ref: Optional[tuple[str, ...]] = None
    sender: Optional[str] = None
    receiver: Optional[str] = None
    max_retries: int = Field(default=0, ge=0)
    retry_boost: float = Field(default=DEFAULT_RETRY_BOOST, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _plan_source(self):
        by_ref = self.plan_ref is not None
        by_pair = self.sender is not None or self.receiver is not None
        if by_ref == by_pair:
            raise ValueError("give either 'plan_ref' or both 'sender' and 'receiver'")
        if by_pair and (self.sender is None or self.receiver is None):
            raise ValueError("'sender' and 'receiver' must be given together")
        if by_ref and not self.plan_ref:
            raise ValueError("'plan_ref' must list at least one transformation id")
        return self


class CheckpointSpec(_Strict):
    points: tuple[PointSpec, ...]
    n: int = Field(default=10_000, ge=1)
    seed: int = Field(default=0, ge=0)
    traveller: Optional[str] = None
    preload_adaptation: bool = False


class Scenario(_Strict):
    register_extensions: tuple[DescriptorSpec, ...] = ()
    transformations: tuple[TransformationSpec, ...] = ()
    profiles: tuple[ProfileSpec, ...] = ()
    objective: ObjectiveSpec = ObjectiveSpec()
    team: tuple[str, ...] = ()
    contexts: dict[str, float] = Field(default_factory=dict)
    adaptation: tuple[AdaptationSpec, ...] = ()
    grid: Optional[GridSpec] = None
    checkpoint: Optional[CheckpointSpec] = None


# --------------------------------------------------------------------------
# building library objects

@dataclass(frozen=True)
class World:
    """Library objects built from a validated scenario."""

    scenario: Scenario
    register: Register
    catalog: Catalog
    profiles: dict
    objective: Objective

    def profile(self, pid: str) -> UserProfile:
        try:
            return self.profiles[pid]
        except KeyError:
            raise ValidationError("profiles", f"no profile with id {pid!r}") from None

    def team(self) -> Team:
        ids = self.scenario.team or tuple(self.profiles)
        return Team(tuple(self.profiles[i] for i in ids))

    def estimates(self) -> dict:
        """Adaptation entries as ``{(user, transformation): AdaptiveEstimate}``."""
        out = {}
        for a in self.scenario.adaptation:
            bias = a.context_bias
            if isinstance(bias, str):
                bias = self.scenario.contexts[bias]
            out[(a.user, a.transformation)] = AdaptiveEstimate(
                a.user, a.transformation, a.mode, a.prior, context_bias=bias or 0.0)
        return out

    def grid(self) -> JudgmentGrid:
        g = self.scenario.grid
        if g is None:
            raise ValidationError("grid", "scenario has no grid")
        return JudgmentGrid(
            tuple((r.label, r.name) for r in g.rows),
            tuple((c.label, c.name, c.cost) for c in g.cols),
            {(c.row, c.col): c.score for c in g.cells},
        )

    def traveller(self) -> Optional[UserProfile]:
        cp = self.scenario.checkpoint
        if cp is None or cp.traveller is None:
            return None
        trav = self.profiles[cp.traveller]
        if cp.preload_adaptation:
            trav = preload_profile(trav, self.estimates())
        return trav

    def pipeline(self) -> tuple[SecurityPoint, ...]:
        cp = self.scenario.checkpoint
        if cp is None:
            raise ValidationError("checkpoint", "scenario has no checkpoint section")
        trav = self.traveller()
        points = []
        for p in cp.points:
            points.append(SecurityPoint(p.index, p.name, self._point_plan(p, trav), p.max_retries, p.retry_boost))
        return check_pipeline(points)

    def _point_plan(self, p: PointSpec, trav) -> ChannelPlan:
        if p.plan_ref is not None:
            return compose_plan(p.plan_ref, trav, self.catalog, objective=self.objective)
        sender = self.profiles[p.sender]
        if trav is not None and sender.id == trav.id:
            sender = trav
        return plan_channel(sender, self.profiles[p.receiver], self.catalog, self.objective)


def build_world(scn: Scenario) -> World:
    register = canonical_register()
    for d in scn.register_extensions:
        register = extend_register(register, TraitDescriptor(d.name, d.category, d.base_kind, d.modality))
    catalog = Catalog(register)
    for t in scn.transformations:
        acc = t.accuracy
        if t.topk_ref is not None:
            acc = accuracy_from_topk(topk_row(t.topk_ref.model), t.topk_ref.k)
        catalog = add_transformation(catalog, t.source, t.target, acc, t.latency_ms, t.cost, id=t.id)
    profiles = {p.id: UserProfile(p.id, p.produces, p.perceives, p.overrides) for p in scn.profiles}
    o = scn.objective
    return World(scn, register, catalog, profiles, Objective(o.w_acc, o.w_lat, o.w_cost))


# --------------------------------------------------------------------------
# parsing and validation

def _loc(loc) -> str:
    out = ""
    for part in loc:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or "<root>"


def _dups(values, path, what):
    seen = set()
    for i, v in enumerate(values):
        if v in seen:
            raise ValidationError(f"{path}[{i}]", f"duplicate {what} {v!r}")
        seen.add(v)


def _cross_check(scn: Scenario):
    register = canonical_register()
    for i, d in enumerate(scn.register_extensions):
        try:
            register = extend_register(register, TraitDescriptor(d.name, d.category, d.base_kind, d.modality))
        except AACError as exc:
            raise ValidationError(f"register_extensions[{i}]", str(exc)) from None

    _dups([t.id for t in scn.transformations], "transformations", "transformation id")
    tids = {t.id for t in scn.transformations}
    for i, t in enumerate(scn.transformations):
        for end in ("source", "target"):
            if getattr(t, end) not in register:
                raise ValidationError(f"transformations[{i}].{end}",
                                      f"transformation {t.id!r} references unknown trait {getattr(t, end)!r}")
        if t.topk_ref is not None:
            try:
                topk_row(t.topk_ref.model)
            except KeyError:
                raise ValidationError(f"transformations[{i}].topk_ref.model",
                                      f"unknown Top-k model {t.topk_ref.model!r}") from None

    _dups([p.id for p in scn.profiles], "profiles", "profile id")
    pids = {p.id for p in scn.profiles}
    for i, p in enumerate(scn.profiles):
        for key in ("produces", "perceives"):
            for name in getattr(p, key):
                if name not in register:
                    raise ValidationError(f"profiles[{i}].{key}",
                                          f"profile {p.id!r} references unknown trait {name!r}")
        for tid, v in p.overrides.items():
            if tid not in tids:
                raise ValidationError(f"profiles[{i}].overrides",
                                      f"profile {p.id!r} overrides unknown transformation {tid!r}")
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"profiles[{i}].overrides.{tid}", f"override {v!r} outside [0, 1]")

    o = scn.objective
    if not (o.w_acc or o.w_lat or o.w_cost):
        raise ValidationError("objective", "at least one weight must be positive")

    _dups(scn.team, "team", "member")
    for i, mid in enumerate(scn.team):
        if mid not in pids:
            raise ValidationError(f"team[{i}]", f"unknown profile {mid!r}")

    _dups([(a.user, a.transformation) for a in scn.adaptation], "adaptation", "entry")
    for i, a in enumerate(scn.adaptation):
        if a.user not in pids:
            raise ValidationError(f"adaptation[{i}].user", f"unknown profile {a.user!r}")
        if a.transformation not in tids:
            raise ValidationError(f"adaptation[{i}].transformation", f"unknown transformation {a.transformation!r}")
        if isinstance(a.context_bias, str) and a.context_bias not in scn.contexts:
            raise ValidationError(f"adaptation[{i}].context_bias", f"unknown context tag {a.context_bias!r}")

    if scn.grid is not None:
        g = scn.grid
        _dups([r.label for r in g.rows], "grid.rows", "row label")
        _dups([c.label for c in g.cols], "grid.cols", "column label")
        _dups([(c.row, c.col) for c in g.cells], "grid.cells", "cell")
        rows, cols = {r.label for r in g.rows}, {c.label for c in g.cols}
        for i, c in enumerate(g.cells):
            if c.row not in rows:
                raise ValidationError(f"grid.cells[{i}].row", f"unknown row label {c.row!r}")
            if c.col not in cols:
                raise ValidationError(f"grid.cells[{i}].col", f"unknown column label {c.col!r}")

    if scn.checkpoint is not None:
        cp = scn.checkpoint
        idx = [p.index for p in cp.points]
        if idx != sorted(set(idx)):
            raise ValidationError("checkpoint.points", f"indices must be unique and increasing, got {idx}")
        if cp.traveller is not None and cp.traveller not in pids:
            raise ValidationError("checkpoint.traveller", f"unknown profile {cp.traveller!r}")
        for i, p in enumerate(cp.points):
            for key in ("sender", "receiver"):
                v = getattr(p, key)
                if v is not None and v not in pids:
                    raise ValidationError(f"checkpoint.points[{i}].{key}", f"unknown profile {v!r}")
            if p.plan_ref is not None:
                byid = {t.id: t for t in scn.transformations}
                for s in p.plan_ref:
                    if s not in byid:
                        raise ValidationError(f"checkpoint.points[{i}].plan_ref", f"unknown transformation {s!r}")
                for a, b in zip(p.plan_ref, p.plan_ref[1:]):
                    if byid[a].target != byid[b].source:
                        raise ValidationError(f"checkpoint.points[{i}].plan_ref", f"stages {a!r} and {b!r} do not chain")


def scenario_from_dict(doc) -> Scenario:
    if not isinstance(doc, dict):
        raise ValidationError("<root>", "scenario must be a mapping")
    try:
        scn = Scenario.model_validate(doc)
    except pydantic.ValidationError as exc:
        err = exc.errors()[0]
        raise ValidationError(_loc(err["loc"]), err["msg"]) from None
    _cross_check(scn)
    return scn


def loads_scenario(text: str) -> Scenario:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ParseError(line, getattr(exc, "problem", None) or str(exc)) from None
    if doc is None:
        raise ParseError(1, "empty scenario document")
    if not isinstance(doc, dict):
        raise ParseError(1, "scenario document must be a mapping at top level")
    return scenario_from_dict(doc)


def parse_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(None, f"cannot read {path}: {exc.strerror}") from None
    return loads_scenario(text)


def dump_scenario(scn: Scenario) -> str:
    doc = scn.model_dump(mode="json")
    return yaml.safe_dump(doc, sort_keys=True, default_flow_style=False)


def bundled_scenario(name: str) -> Path:
    """Path of a scenario shipped with the package (``dialogue``, ``team``, ...)."""
    fname = name if name.endswith(".scenario") else f"{name}.scenario"
    return Path(str(resources.files("aacplan") / "scenarios" / fname))
