"""Counter-based random streams.

Draw ``k`` of stream ``s`` under master seed ``m`` is a pure function
``U(m, s, k)``, so trial ``t`` of a Monte-Carlo run can be replayed in
isolation and the result never depends on how trials are scheduled.
"""
from __future__ import annotations

from ._kernels import MASK64, stream_key_py, uniform_py

DEFAULT_SEED = 0


class CounterStream:
    """Sequential view over one counter-based stream."""

    __slots__ = ("seed", "stream", "counter", "_key")

    def __init__(self, seed: int = DEFAULT_SEED, stream: int = 0):
        self.seed = int(seed) & MASK64
        self.stream = int(stream) & MASK64
        self.counter = 0
        self._key = stream_key_py(self.seed, self.stream)

    def random(self) -> float:
        u = uniform_py(self._key, self.counter)
        self.counter += 1
        return u

    def bernoulli(self, p: float) -> bool:
        return self.random() < p

    def __repr__(self):
        return f"CounterStream(seed={self.seed}, stream={self.stream}, counter={self.counter})"
