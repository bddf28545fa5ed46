import random

import pytest

from aacplan import build_world, bundled_scenario, parse_scenario
from aacplan.channel import Objective, UserProfile
from aacplan.register import canonical_register
from aacplan.transform import Catalog, add_transformation

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture
def reg():
    return canonical_register()


@pytest.fixture(scope="session")
def dialogue():
    return build_world(parse_scenario(bundled_scenario("dialogue")))


@pytest.fixture(scope="session")
def team_world():
    return build_world(parse_scenario(bundled_scenario("team")))


@pytest.fixture(scope="session")
def needs():
    return build_world(parse_scenario(bundled_scenario("needs")))


@pytest.fixture(scope="session")
def border():
    return build_world(parse_scenario(bundled_scenario("border")))


def single_stage(acc, latency=0.0, source="HandGesture", target="Text"):
    """Catalog with one edge of accuracy ``acc`` and the one-stage plan over it."""
    from aacplan.channel import compose_plan
    cat = add_transformation(Catalog(canonical_register()), source, target, acc, latency, 0.0, id="t")
    return cat, compose_plan(["t"], None, cat)


def random_instance(seed, integer_latency=None):
    """Random catalog over <= 10 descriptors / <= 25 edges plus two profiles.

    With ``integer_latency`` the objective is latency-only over small integer
    latencies, so exact weight ties are frequent and tie-breaking is exercised.
    """
    rnd = random.Random(seed)
    if integer_latency is None:
        integer_latency = seed % 2 == 1
    reg = canonical_register()
    names = rnd.sample(reg.names(), rnd.randint(3, 10))
    cat = Catalog(reg)
    for _ in range(rnd.randint(1, 25)):
        s, t = rnd.sample(names, 2)
        acc = rnd.choice([0.0, 0.5, 0.7, 0.85, 0.9, 0.95, 0.99, 1.0]) if integer_latency else rnd.uniform(0.05, 1.0)
        lat = float(rnd.randint(1, 4)) if integer_latency else rnd.uniform(0.0, 100.0)
        cat = add_transformation(cat, s, t, acc, lat, rnd.uniform(0, 5))
    sender = UserProfile("s", set(rnd.sample(names, rnd.randint(1, 2))), set(rnd.sample(names, rnd.randint(0, 2))))
    pool = names if rnd.random() < 0.15 else [n for n in names if n not in sender.produces]
    receiver = UserProfile("r", set(rnd.sample(names, rnd.randint(0, 2))),
                           set(rnd.sample(pool, min(len(pool), rnd.randint(1, 3)))))
    if rnd.random() < 0.3 and len(cat):
        t = rnd.choice(cat.transformations)
        sender = sender.with_overrides({t.id: rnd.choice([0.0, 0.5, 0.99])})
    obj = Objective(0.0, 1.0, 0.0) if integer_latency else Objective(1.0, rnd.choice([0.0, 0.001]), rnd.choice([0.0, 0.01]))
    return cat, sender, receiver, obj
