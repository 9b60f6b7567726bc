"""Brute-force reference computations, independent of the package's kernels."""
import math


def dist(p, q):
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return math.sqrt(dx * dx + dy * dy)


def brute_cost(points, weights, medoids):
    """sum_i w_i * min_m dist(i, m), accumulated in ascending point order."""
    total = 0.0
    for i, p in enumerate(points):
        total += weights[i] * min(dist(p, points[m]) for m in medoids)
    return total


def brute_assign(points, medoids):
    out = []
    ms = sorted(medoids)
    for i, p in enumerate(points):
        if i in ms:
            out.append(i)
            continue
        best, arg = math.inf, None
        for m in ms:
            d = dist(p, points[m])
            if d < best:
                best, arg = d, m
        out.append(arg)
    return out


RTOL = 1e-10


def brute_best_swap(points, weights, medoids, rtol=RTOL):
    """Exhaustive (medoid_out, candidate_in, cost), or None when nothing improves.

    Costs within ``rtol * current`` count as equal: the swap must beat the
    current cost by more than that, and near-equal swaps go to the
    lexicographically smallest (medoid_out, candidate_in).
    """
    ms = sorted(medoids)
    current = brute_cost(points, weights, ms)
    tol = rtol * abs(current)
    trials = []
    for m in ms:
        for h in range(len(points)):
            if h in ms:
                continue
            trial = sorted([x for x in ms if x != m] + [h])
            trials.append((m, h, brute_cost(points, weights, trial)))
    if not trials:
        return None
    lowest = min(t[2] for t in trials)
    if not lowest < current - tol:
        return None
    return next(t for t in trials if t[2] <= lowest + tol)


def brute_feasibility(points, loads, members, medoid, cell_range, capacity):
    """(coverage_ok, capacity_ok) from first principles."""
    far = max(dist(points[m], points[medoid]) for m in members)
    return far <= cell_range, sum(loads[m] for m in members) <= capacity
