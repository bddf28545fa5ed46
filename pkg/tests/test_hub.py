import random

import pytest

from aacplan.channel import Objective, UserProfile, plan_channel
from aacplan.errors import NoChannel, SelfRoute, UnknownMember
from aacplan.hub import Team, reachability_matrix, route
from aacplan.register import Category, canonical_register, descriptor_of
from aacplan.transform import Catalog, add_transformation

from conftest import random_instance
from oracles import best_simple_path

REG = canonical_register()


def is_pivot(name):
    return descriptor_of(REG, name).category is Category.I


def touches_pivot(plan, catalog):
    nodes = [catalog[s].source for s in plan.stages] + [catalog[s].target for s in plan.stages]
    return any(is_pivot(n) for n in nodes)


def test_teammate_1_to_6_goes_through_text(team_world):
    plan = route(team_world.team(), "Teammate-1", "Teammate-6", team_world.catalog, team_world.objective)
    assert plan.stages == ("gesture_to_text", "text_to_avatar_audio")
    assert team_world.catalog[plan.stages[0]].target == "Text"


def test_self_route(team_world):
    with pytest.raises(SelfRoute):
        route(team_world.team(), "Teammate-1", "Teammate-1", team_world.catalog)


def test_unknown_member(team_world):
    with pytest.raises(UnknownMember):
        route(team_world.team(), "Teammate-1", "Teammate-9", team_world.catalog)


def test_pivot_constraint_forces_detour():
    cat = Catalog(REG)
    cat = add_transformation(cat, "AuditorySignal", "LipMovement", 0.9, id="direct")
    cat = add_transformation(cat, "AuditorySignal", "Text", 0.9, id="a")
    cat = add_transformation(cat, "Text", "LipMovement", 0.9, id="b")
    team = Team((UserProfile("x", {"AuditorySignal"}), UserProfile("y", perceives={"LipMovement"})))
    assert plan_channel(team.members[0], team.members[1], cat).stages == ("direct",)
    assert route(team, "x", "y", cat).stages == ("a", "b")


def test_pivot_constraint_can_make_pair_unreachable():
    cat = add_transformation(Catalog(REG), "AuditorySignal", "LipMovement", 0.9)
    team = Team((UserProfile("x", {"AuditorySignal"}), UserProfile("y", perceives={"LipMovement"})))
    with pytest.raises(NoChannel):
        route(team, "x", "y", cat)
    assert reachability_matrix(team, cat).entries == {}


def test_direct_perception_is_exempt(team_world):
    plan = route(team_world.team(), "Teammate-6", "Teammate-3", team_world.catalog)
    assert plan.stages == ()


@pytest.mark.parametrize("seed", range(80))
def test_route_matches_pivot_bruteforce(seed):
    cat, s, r, obj = random_instance(seed)
    team = Team((s, r))
    expected = best_simple_path(cat, s, r, obj, pivot=is_pivot)
    if expected is None:
        with pytest.raises(NoChannel):
            route(team, "s", "r", cat, obj)
        return
    plan = route(team, "s", "r", cat, obj)
    assert (plan.weight, len(plan.stages), plan.stages) == expected
    if plan.stages:
        assert touches_pivot(plan, cat)


@pytest.mark.parametrize("seed", range(80))
def test_route_equals_planner_when_optimum_has_pivot(seed):
    cat, s, r, obj = random_instance(seed)
    try:
        free = plan_channel(s, r, cat, obj)
    except NoChannel:
        return
    if free.stages and not touches_pivot(free, cat):
        return
    assert route(Team((s, r)), "s", "r", cat, obj).weight == free.weight


def test_team_matrix_complete(team_world):
    team = team_world.team()
    m = reachability_matrix(team, team_world.catalog, team_world.objective)
    assert len(m.entries) == 30
    assert m.is_complete()
    for (i, j), (acc, n) in m.entries.items():
        plan = route(team, i, j, team_world.catalog, team_world.objective)
        assert (acc, n) == (plan.end_to_end_accuracy, len(plan.stages))


def test_member_without_perception_has_empty_column(team_world):
    members = list(team_world.team().members)
    members[2] = UserProfile(members[2].id, members[2].produces, set())
    m = reachability_matrix(Team(tuple(members)), team_world.catalog)
    col = members[2].id
    assert all(m.get(i, col) is None for i in m.ids)
    assert m.get(col, members[0].id) is not None


def test_matrix_permutation_invariant(team_world):
    team = team_world.team()
    base = reachability_matrix(team, team_world.catalog).entries
    for seed in range(5):
        members = list(team.members)
        random.Random(seed).shuffle(members)
        assert reachability_matrix(Team(tuple(members)), team_world.catalog).entries == base


def test_matrix_csv(team_world):
    text = reachability_matrix(team_world.team(), team_world.catalog).to_csv()
    lines = text.splitlines()
    assert lines[0] == ",Teammate-1,Teammate-2,Teammate-3,Teammate-4,Teammate-5,Teammate-6"
    assert lines[1].split(",")[1] == ""  # diagonal blank
    assert len(lines) == 7


def test_team_rejects_duplicates():
    with pytest.raises(ValueError):
        Team((UserProfile("a"), UserProfile("a")))
    with pytest.raises(ValueError):
        Team(())
