"""Hot loops of the swap search, in numba and in plain numpy.

Both backends produce bit-identical results: distances use the same
``sqrt(dx*dx + dy*dy)`` expression and every cost is accumulated left to
right in ascending node order (``np.cumsum`` on the numpy side).

Set ``CELLPLAN_NO_NUMBA=1`` to force the numpy path.
"""
from __future__ import annotations

import math
import os

import numpy as np

_DISABLED = os.environ.get("CELLPLAN_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

# candidate rows materialized at once by the numpy path
_CHUNK = 256

_EMPTY = np.zeros((0, 0), dtype=np.float64)


def pairwise_distances(xy: np.ndarray) -> np.ndarray:
    dx = xy[:, 0][:, None] - xy[:, 0][None, :]
    dy = xy[:, 1][:, None] - xy[:, 1][None, :]
    return np.sqrt(dx * dx + dy * dy)


def distance_rows(xy: np.ndarray, dmat: np.ndarray, rows: np.ndarray) -> np.ndarray:
    if dmat.shape[0]:
        return dmat[rows]
    dx = xy[rows, 0][:, None] - xy[:, 0][None, :]
    dy = xy[rows, 1][:, None] - xy[:, 1][None, :]
    return np.sqrt(dx * dx + dy * dy)


def sequential_sum(values: np.ndarray) -> float:
    if values.shape[0] == 0:
        return 0.0
    return float(np.cumsum(values)[-1])


# ---------------------------------------------------------------- numpy path

def nearest_two_numpy(xy, dmat, medoids):
    """Nearest medoid (lowest id on ties), its distance, and the runner-up distance."""
    n = xy.shape[0]
    d1 = np.full(n, np.inf)
    d2 = np.full(n, np.inf)
    nearest = np.full(n, -1, dtype=np.int64)
    dm = distance_rows(xy, dmat, medoids)
    for s in range(medoids.shape[0]):
        d = dm[s]
        closer = d < d1
        d2 = np.where(closer, d1, np.where(d < d2, d, d2))
        d1 = np.where(closer, d, d1)
        nearest = np.where(closer, medoids[s], nearest)
    nearest[medoids] = medoids
    return nearest, d1, d2


def swap_costs_numpy(xy, dmat, w, medoids, candidates, nearest, d1, d2):
    """Total cost after swapping medoid ``medoids[s]`` for ``candidates[c]``, as a (k, c) array."""
    k = medoids.shape[0]
    out = np.empty((k, candidates.shape[0]))
    bases = [np.where(nearest == medoids[s], d2, d1) for s in range(k)]
    for lo in range(0, candidates.shape[0], _CHUNK):
        block = candidates[lo:lo + _CHUNK]
        dh = distance_rows(xy, dmat, block)
        for s in range(k):
            nd = np.minimum(dh, bases[s])
            out[s, lo:lo + block.shape[0]] = np.cumsum(nd * w, axis=1)[:, -1]
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _dist(xy, dmat, a, b):
        if dmat.shape[0] > 0:
            return dmat[a, b]
        dx = xy[a, 0] - xy[b, 0]
        dy = xy[a, 1] - xy[b, 1]
        return math.sqrt(dx * dx + dy * dy)

    @njit(cache=True)
    def nearest_two_numba(xy, dmat, medoids):
        n = xy.shape[0]
        k = medoids.shape[0]
        nearest = np.empty(n, dtype=np.int64)
        d1 = np.empty(n)
        d2 = np.empty(n)
        for i in range(n):
            b1 = np.inf
            b2 = np.inf
            arg = -1
            for s in range(k):
                m = medoids[s]
                d = _dist(xy, dmat, m, i)
                if d < b1:
                    b2 = b1
                    b1 = d
                    arg = m
                elif d < b2:
                    b2 = d
            nearest[i] = arg
            d1[i] = b1
            d2[i] = b2
        for s in range(k):
            nearest[medoids[s]] = medoids[s]
        return nearest, d1, d2

    @njit(cache=True)
    def swap_costs_numba(xy, dmat, w, medoids, candidates, nearest, d1, d2):
        n = xy.shape[0]
        k = medoids.shape[0]
        c = candidates.shape[0]
        out = np.empty((k, c))
        base = np.empty(n)
        for s in range(k):
            m = medoids[s]
            for i in range(n):
                base[i] = d2[i] if nearest[i] == m else d1[i]
            for j in range(c):
                h = candidates[j]
                acc = 0.0
                for i in range(n):
                    dh = _dist(xy, dmat, h, i)
                    nd = dh if dh < base[i] else base[i]
                    acc += w[i] * nd
                out[s, j] = acc
        return out

else:  # pragma: no cover
    nearest_two_numba = None
    swap_costs_numba = None


if USE_NUMBA:
    nearest_two = nearest_two_numba
    swap_costs = swap_costs_numba
else:
    nearest_two = nearest_two_numpy
    swap_costs = swap_costs_numpy


def empty_matrix() -> np.ndarray:
    return _EMPTY
