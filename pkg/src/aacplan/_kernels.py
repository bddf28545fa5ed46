"""Hot loops: counter-based uniforms, pipeline Monte-Carlo, subset enumeration.

Each kernel exists twice, a numba ``@njit`` version and a vectorised numpy
version. Both consume identical random draws and return identical results,
so the backend only changes speed. Set ``AACPLAN_DISABLE_NUMBA=1`` to force
the numpy path (numba is also skipped when it cannot be imported).
"""
from __future__ import annotations

import os

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB
_COUNTER_MUL = 0xD1B54A32D192ED03
_TO_UNIT = 2.0 ** -53


def _numba_wanted() -> bool:
    return os.environ.get("AACPLAN_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes", "on")


try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _numba_wanted()
BACKEND = "numba" if USE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# pure python reference of the counter hash (used by CounterStream)

def _mix_py(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def stream_key_py(seed: int, stream: int) -> int:
    h = _mix_py((seed + _GOLDEN) & MASK64)
    return _mix_py((h + (stream + 1) * _GOLDEN) & MASK64)


def uniform_py(key: int, counter: int) -> float:
    h = _mix_py((key + (counter + 1) * _COUNTER_MUL) & MASK64)
    return (h >> 11) * _TO_UNIT


# --------------------------------------------------------------------------
# numpy versions

def _mix_np(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
    return z ^ (z >> np.uint64(31))


def stream_keys_np(seed: int, streams) -> np.ndarray:
    streams = np.asarray(streams, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = _mix_np(np.uint64((seed + _GOLDEN) & MASK64))
        return _mix_np(h + (streams + np.uint64(1)) * np.uint64(_GOLDEN))


def uniforms_np(keys, counters) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.uint64)
    counters = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = _mix_np(keys + (counters + np.uint64(1)) * np.uint64(_COUNTER_MUL))
    return (h >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def simulate_pipeline_numpy(acc, retries, boost, seed, start, stop):
    """Run trials ``start..stop-1``; return (cleared, alarms[P], attempts[P])."""
    n_pts = acc.shape[0]
    alarms = np.zeros(n_pts, dtype=np.int64)
    attempts = np.zeros(n_pts, dtype=np.int64)
    keys = stream_keys_np(seed, np.arange(start, stop, dtype=np.uint64))
    counters = np.zeros(keys.shape[0], dtype=np.uint64)
    active = np.ones(keys.shape[0], dtype=bool)
    for p in range(n_pts):
        pending = active.copy()
        for r in range(int(retries[p]) + 1):
            idx = np.flatnonzero(pending)
            if idx.size == 0:
                break
            prob = min(1.0, acc[p] + r * boost[p])
            u = uniforms_np(keys[idx], counters[idx])
            counters[idx] += np.uint64(1)
            attempts[p] += idx.size
            pending[idx[u < prob]] = False
        alarms[p] += np.count_nonzero(pending)
        active &= ~pending
    return int(np.count_nonzero(active)), alarms, attempts


def exact_cover_numpy(col_masks, costs, need_mask):
    """Best column subset as a bitmask, or -1 when nothing covers ``need_mask``.

    Order: lowest total cost, then fewest columns, then the lexicographically
    smallest sorted index list.
    """
    m = col_masks.shape[0]
    subsets = np.arange(1 << m, dtype=np.int64)
    cover = np.zeros(subsets.shape[0], dtype=np.int64)
    total = np.zeros(subsets.shape[0], dtype=np.float64)
    size = np.zeros(subsets.shape[0], dtype=np.int64)
    for j in range(m):
        bit = ((subsets >> j) & 1).astype(bool)
        cover[bit] |= col_masks[j]
        total[bit] += costs[j]
        size += bit
    ok = (cover & need_mask) == need_mask
    if not ok.any():
        return -1
    cand = subsets[ok]
    total, size = total[ok], size[ok]
    cand = cand[total == total.min()]
    size = size[total == total.min()]
    cand = cand[size == size.min()]
    best = int(cand[0])
    for s in cand[1:]:
        best = _lex_smaller(int(s), best)
    return best


def _lex_smaller(a, b):
    diff = a ^ b
    low = diff & -diff
    return a if a & low else b


# --------------------------------------------------------------------------
# numba versions

if HAVE_NUMBA:
    _U1 = np.uint64(_MUL1)
    _U2 = np.uint64(_MUL2)
    _UG = np.uint64(_GOLDEN)
    _UC = np.uint64(_COUNTER_MUL)
    _S30 = np.uint64(30)
    _S27 = np.uint64(27)
    _S31 = np.uint64(31)
    _S11 = np.uint64(11)
    _ONE = np.uint64(1)

    @numba.njit(cache=True, nogil=True)
    def _mix_nb(z):
        z = (z ^ (z >> _S30)) * _U1
        z = (z ^ (z >> _S27)) * _U2
        return z ^ (z >> _S31)

    @numba.njit(cache=True, nogil=True)
    def _simulate_pipeline_nb(acc, retries, boost, seed_key, start, stop, alarms, attempts):
        n_pts = acc.shape[0]
        cleared = 0
        for t in range(start, stop):
            key = _mix_nb(seed_key + (np.uint64(t) + _ONE) * _UG)
            counter = np.uint64(0)
            ok = True
            for p in range(n_pts):
                success = False
                for r in range(retries[p] + 1):
                    prob = min(1.0, acc[p] + r * boost[p])
                    counter += _ONE
                    h = _mix_nb(key + counter * _UC)
                    u = np.float64(h >> _S11) * _TO_UNIT
                    attempts[p] += 1
                    if u < prob:
                        success = True
                        break
                if not success:
                    alarms[p] += 1
                    ok = False
                    break
            if ok:
                cleared += 1
        return cleared

    @numba.njit(cache=True, nogil=True)
    def _exact_cover_nb(col_masks, costs, need_mask):
        m = col_masks.shape[0]
        best = -1
        best_cost = 0.0
        best_size = 0
        for s in range(1 << m):
            cover = 0
            total = 0.0
            size = 0
            for j in range(m):
                if (s >> j) & 1:
                    cover |= col_masks[j]
                    total += costs[j]
                    size += 1
            if (cover & need_mask) != need_mask:
                continue
            if best < 0 or total < best_cost or (total == best_cost and (
                    size < best_size or (size == best_size and (s & (-(s ^ best) & (s ^ best))) != 0))):
                best, best_cost, best_size = s, total, size
        return best


def simulate_pipeline_numba(acc, retries, boost, seed, start, stop):
    n_pts = acc.shape[0]
    alarms = np.zeros(n_pts, dtype=np.int64)
    attempts = np.zeros(n_pts, dtype=np.int64)
    seed_key = np.uint64(_mix_py((seed + _GOLDEN) & MASK64))
    cleared = _simulate_pipeline_nb(acc, retries, boost, seed_key, start, stop, alarms, attempts)
    return int(cleared), alarms, attempts


def exact_cover_numba(col_masks, costs, need_mask):
    return int(_exact_cover_nb(col_masks, costs, np.int64(need_mask)))


def simulate_pipeline(acc, retries, boost, seed, start, stop):
    acc = np.ascontiguousarray(acc, dtype=np.float64)
    retries = np.ascontiguousarray(retries, dtype=np.int64)
    boost = np.ascontiguousarray(boost, dtype=np.float64)
    seed = int(seed) & MASK64
    if USE_NUMBA:
        return simulate_pipeline_numba(acc, retries, boost, seed, int(start), int(stop))
    return simulate_pipeline_numpy(acc, retries, boost, seed, int(start), int(stop))


def exact_cover(col_masks, costs, need_mask):
    col_masks = np.ascontiguousarray(col_masks, dtype=np.int64)
    costs = np.ascontiguousarray(costs, dtype=np.float64)
    if USE_NUMBA:
        return exact_cover_numba(col_masks, costs, int(need_mask))
    return exact_cover_numpy(col_masks, costs, int(need_mask))
