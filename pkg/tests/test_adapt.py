import math
import random

import pytest
from hypothesis import given, strategies as st

from aacplan.adapt import (
    AdaptiveEstimate,
    AdaptMode,
    converged,
    estimate,
    half_width,
    observe,
    observe_many,
    perception_action_step,
)
from aacplan.channel import UserProfile
from aacplan.errors import InsufficientData, UnknownEstimate
from aacplan.rng import CounterStream


def online(prior=0.5, **kw):
    return AdaptiveEstimate("u", "t", AdaptMode.Online, prior, **kw)


def test_smoothed_ratio():
    e = online(successes=85, trials=100)
    assert estimate(e) == pytest.approx(86 / 102, rel=1e-15)
    assert estimate(e) == pytest.approx(0.8431, abs=5e-5)


def test_initial_estimate_is_prior():
    assert estimate(online()) == 0.5


def test_observe_counts():
    e = observe(observe(online(), True), False)
    assert (e.successes, e.trials) == (1, 2)


def test_manual_ignores_observations():
    e = AdaptiveEstimate("u", "t", AdaptMode.Manual, 0.9)
    assert observe_many(e, [False] * 50) == e
    assert estimate(e) == 0.9


@pytest.mark.parametrize("prior, bias, expected", [(0.8, -0.1, 0.7), (0.95, 0.2, 1.0), (0.05, -0.2, 0.0)])
def test_context_rule(prior, bias, expected):
    e = AdaptiveEstimate("u", "t", AdaptMode.ContextRule, prior, context_bias=bias)
    assert estimate(e) == pytest.approx(expected, abs=1e-15)
    assert observe(e, False) == e


@given(st.lists(st.booleans(), max_size=60), st.randoms())
def test_observe_order_insensitive(outcomes, rnd):
    shuffled = list(outcomes)
    rnd.shuffle(shuffled)
    assert estimate(observe_many(online(0.3), outcomes)) == estimate(observe_many(online(0.3), shuffled))


@given(st.sampled_from(list(AdaptMode)), st.floats(0, 1), st.floats(-2, 2), st.lists(st.booleans(), max_size=30))
def test_estimate_in_unit_interval(mode, prior, bias, outcomes):
    e = observe_many(AdaptiveEstimate("u", "t", mode, prior, context_bias=bias), outcomes)
    assert 0.0 <= estimate(e) <= 1.0


def test_convergence_to_true_accuracy():
    hits = 0
    for seed in range(100):
        s = CounterStream(seed, 7)
        e = observe_many(online(), (s.random() < 0.70 for _ in range(5000)))
        hits += abs(estimate(e) - 0.70) < 0.02
    assert hits >= 99


def test_half_width():
    e = online(successes=50, trials=100)
    assert half_width(e) == pytest.approx(1.959963984540054 * 0.05, rel=1e-12)
    assert half_width(e) == pytest.approx(0.098, abs=5e-4)
    wide = half_width(e)
    narrow = half_width(online(successes=200, trials=400))
    assert narrow == pytest.approx(wide / 2, rel=1e-12)
    with pytest.raises(InsufficientData):
        half_width(online())


def test_converged():
    assert not converged(online())
    assert converged(online(successes=4900, trials=10_000), tau=0.02)
    assert not converged(online(successes=49, trials=100), tau=0.02)


def test_perception_action_moves_toward_truth():
    profile = UserProfile("u", overrides={"t": 0.5})
    rnd = random.Random(1)
    batch = [("t", rnd.random() < 0.85) for _ in range(100)]
    new_profile, ests = perception_action_step(profile, {"t": online()}, batch)
    assert abs(new_profile.overrides["t"] - 0.85) < abs(profile.overrides["t"] - 0.85)
    assert ests["t"].trials == 100
    assert new_profile.overrides["t"] == estimate(ests["t"])


def test_empty_batch_is_identity():
    profile = UserProfile("u", overrides={"t": 0.7})
    new_profile, ests = perception_action_step(profile, {"t": online()}, [])
    assert new_profile == profile
    assert ests == {"t": online()}


def test_manual_entry_stays_at_prior():
    manual = AdaptiveEstimate("u", "t", AdaptMode.Manual, 0.9)
    new_profile, ests = perception_action_step(UserProfile("u"), {"t": manual}, [("t", False)] * 10)
    assert new_profile.overrides["t"] == 0.9
    assert ests["t"] == manual


def test_unknown_estimate():
    with pytest.raises(UnknownEstimate):
        perception_action_step(UserProfile("u"), {}, [("t", True)])


def test_invalid_counts():
    with pytest.raises(ValueError):
        online(successes=3, trials=2)
