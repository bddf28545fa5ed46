"""Six-point border-control pipeline with retry/alarm policy.

Each security point is a communication session over a channel plan. Attempt
``r`` (0-based) succeeds with probability ``min(1, a + r * retry_boost)``
where ``a`` is the channel accuracy; a point that fails ``max_retries + 1``
times raises an alarm and halts the traveller's run.
"""
from __future__ import annotations

import csv
import enum
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .adapt import AdaptiveEstimate, estimate
from .channel import ChannelPlan, UserProfile, channel_accuracy
from .errors import InvalidPipeline
from .transform import Catalog

DEFAULT_RETRY_BOOST = 0.05
CHUNK_TRIALS = 1 << 14


class PointName(str, enum.Enum):
    IntelligentProfiling = "IntelligentProfiling"
    AuthenticationValidation = "AuthenticationValidation"
    CarryInLuggage = "CarryInLuggage"
    CarryOutLuggage = "CarryOutLuggage"
    BodyScreening = "BodyScreening"
    Interviewing = "Interviewing"


POINT_ORDER = tuple(PointName)


@dataclass(frozen=True)
class SecurityPoint:
    index: int
    name: PointName
    plan: ChannelPlan
    max_retries: int = 0
    retry_boost: float = DEFAULT_RETRY_BOOST

    def __post_init__(self):
        object.__setattr__(self, "name", PointName(self.name))
        if not 1 <= self.index <= 6:
            raise InvalidPipeline(f"point index must be in 1..6, got {self.index}")
        if int(self.max_retries) != self.max_retries or self.max_retries < 0:
            raise InvalidPipeline(f"max_retries must be a non-negative integer, got {self.max_retries}")
        if not 0.0 <= self.retry_boost <= 1.0:
            raise InvalidPipeline(f"retry_boost must lie in [0, 1], got {self.retry_boost}")
        object.__setattr__(self, "max_retries", int(self.max_retries))
        object.__setattr__(self, "retry_boost", float(self.retry_boost))


def check_pipeline(pipeline: Sequence[SecurityPoint]) -> tuple[SecurityPoint, ...]:
    pipeline = tuple(pipeline)
    if not pipeline:
        raise InvalidPipeline("pipeline is empty")
    idx = [p.index for p in pipeline]
    if idx != sorted(set(idx)):
        raise InvalidPipeline(f"points must have unique increasing indices, got {idx}")
    return pipeline


def attempt_probability(a: float, r: int, boost: float) -> float:
    return min(1.0, a + r * boost)


def run_point(point: SecurityPoint, sender: Optional[UserProfile], catalog: Catalog, rng_stream):
    """Return (attempts, succeeded) for one session at ``point``."""
    a = channel_accuracy(point.plan, sender, catalog)
    for r in range(point.max_retries + 1):
        if rng_stream.random() < attempt_probability(a, r, point.retry_boost):
            return r + 1, True
    return point.max_retries + 1, False


@dataclass(frozen=True)
class Cleared:
    pass


@dataclass(frozen=True)
class Alarm:
    point: int


@dataclass(frozen=True)
class TravellerRun:
    attempts: dict  # point index -> attempts; points never reached are absent
    status: object
    service_time: float

    @property
    def cleared(self) -> bool:
        return isinstance(self.status, Cleared)


def run_traveller(pipeline, sender, catalog, rng_stream) -> TravellerRun:
    pipeline = check_pipeline(pipeline)
    attempts, service = {}, 0.0
    for point in pipeline:
        n, ok = run_point(point, sender, catalog, rng_stream)
        attempts[point.index] = n
        service += n * point.plan.total_latency
        if not ok:
            return TravellerRun(attempts, Alarm(point.index), service)
    return TravellerRun(attempts, Cleared(), service)


def semantic_attack_margin(point: SecurityPoint, sender, catalog) -> float:
    """Probability that every attempt at ``point`` is misrecognised."""
    a = channel_accuracy(point.plan, sender, catalog)
    fail = 1.0
    for r in range(point.max_retries + 1):
        fail *= 1.0 - attempt_probability(a, r, point.retry_boost)
    return fail


def analytic_clear_prob(pipeline, sender, catalog) -> float:
    prob = 1.0
    for point in check_pipeline(pipeline):
        prob *= 1.0 - semantic_attack_margin(point, sender, catalog)
    return prob


def preload_profile(sender: UserProfile, estimates) -> UserProfile:
    """Point I profiling: apply adaptation estimates before the run."""
    ests = estimates.values() if hasattr(estimates, "values") else estimates
    updates = {e.transformation: estimate(e) for e in ests
               if isinstance(e, AdaptiveEstimate) and e.user == sender.id}
    return sender.with_overrides(updates) if updates else sender


@dataclass(frozen=True)
class SimulationReport:
    n: int
    seed: int
    cleared: int
    alarm_by_point: dict  # point index -> alarm count
    attempts_by_point: dict  # point index -> total attempts
    service_time_by_point: dict  # point index -> total service time
    points: tuple = field(default=())  # (index, name, accuracy, max_retries, retry_boost, latency)

    @property
    def alarms(self) -> int:
        return self.n - self.cleared

    @property
    def clear_rate(self) -> float:
        return self.cleared / self.n

    @property
    def alarm_rate(self) -> float:
        return self.alarms / self.n

    @property
    def mean_attempts(self) -> float:
        return sum(self.attempts_by_point.values()) / self.n

    @property
    def mean_service_time(self) -> float:
        total = 0.0
        for k in sorted(self.service_time_by_point):
            total += self.service_time_by_point[k]
        return total / self.n

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "clear_rate": self.clear_rate,
            "alarm_rate": self.alarm_rate,
            "alarm_by_point": {str(k): v for k, v in sorted(self.alarm_by_point.items())},
            "mean_attempts": self.mean_attempts,
            "mean_service_time": self.mean_service_time,
        }

    def to_json(self, **extra) -> str:
        doc = self.to_dict()
        doc.update(extra)
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def points_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "name", "accuracy", "max_retries", "retry_boost", "latency",
                    "attempts", "alarms", "risk_empirical", "mean_attempts"])
        for idx, name, acc, retries, boost, lat in self.points:
            w.writerow([idx, name, repr(acc), retries, repr(boost), repr(lat),
                        self.attempts_by_point[idx], self.alarm_by_point[idx],
                        repr(self.alarm_by_point[idx] / self.n),
                        repr(self.attempts_by_point[idx] / self.n)])
        return buf.getvalue()


def monte_carlo(pipeline, sender, catalog, n: int, master_seed: int = 0,
                workers: int = 1, chunk: int = CHUNK_TRIALS) -> SimulationReport:
    """Simulate ``n`` travellers; trial ``t`` draws from stream ``(master_seed, t)``.

    Trials are split into fixed chunks independent of ``workers`` and only
    integer counts are merged, so the report is identical for any worker count.
    """
    pipeline = check_pipeline(pipeline)
    if n < 1:
        raise ValueError("n must be >= 1")
    acc = np.array([channel_accuracy(p.plan, sender, catalog) for p in pipeline])
    retries = np.array([p.max_retries for p in pipeline], dtype=np.int64)
    boost = np.array([p.retry_boost for p in pipeline])
    bounds = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]

    def job(b):
        return _kernels.simulate_pipeline(acc, retries, boost, master_seed, b[0], b[1])

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(job, bounds))
    else:
        results = [job(b) for b in bounds]
    cleared = sum(r[0] for r in results)
    alarms = np.sum([r[1] for r in results], axis=0)
    attempts = np.sum([r[2] for r in results], axis=0)
    idx = [p.index for p in pipeline]
    return SimulationReport(
        n=n,
        seed=master_seed,
        cleared=int(cleared),
        alarm_by_point={i: int(a) for i, a in zip(idx, alarms)},
        attempts_by_point={i: int(a) for i, a in zip(idx, attempts)},
        service_time_by_point={i: int(a) * p.plan.total_latency for i, a, p in zip(idx, attempts, pipeline)},
        points=tuple((p.index, p.name.value, float(a), p.max_retries, p.retry_boost, p.plan.total_latency)
                     for p, a in zip(pipeline, acc)),
    )
