"""Slow, direct reference implementations used as test oracles.

Everything here is written from the definitions with plain Python loops and
shares no code with the package.
"""

import itertools
import math


def dist(a, b):
    return math.sqrt(sum((float(x) - float(y)) ** 2 for x, y in zip(a, b)))


def knn_bruteforce(points, i, k):
    row = sorted((dist(points[i], points[j]), j) for j in range(len(points)) if j != i)
    kdist = row[k - 1][0]
    return kdist, [j for d, j in row if d <= kdist]


def lof_naive(points, k):
    """Returns (lrd, lof) lists, with the same infinite-density conventions."""
    n = len(points)
    kdist = []
    hood = []
    for i in range(n):
        kd, nb = knn_bruteforce(points, i, k)
        kdist.append(kd)
        hood.append(nb)
    lrd = []
    for i in range(n):
        total = sum(max(kdist[j], dist(points[i], points[j])) for j in hood[i])
        lrd.append(math.inf if total == 0 else len(hood[i]) / total)
    lof = []
    for i in range(n):
        ratios = []
        for j in hood[i]:
            if math.isinf(lrd[i]):
                ratios.append(1.0 if math.isinf(lrd[j]) else 0.0)
            else:
                ratios.append(lrd[j] / lrd[i])
        lof.append(sum(ratios) / len(ratios))
    return lrd, lof


def satisfies(points, x, c, subset):
    dxc = dist(points[x], c)
    return all(dist(points[s], c) <= dxc and dist(points[x], points[s]) < dxc for s in subset)


def eligible_exhaustive(points, x, c, members, t):
    """Argmin over feasible subsets of the summed distance to x.

    Tries the largest feasible size up to t; among subsets of that size
    returns the one with the smallest total distance to x.
    """
    pool = [m for m in members if m != x]
    for size in range(min(t, len(pool)), 0, -1):
        best = None
        for subset in itertools.combinations(pool, size):
            if not satisfies(points, x, c, subset):
                continue
            cost = sum(dist(points[s], points[x]) for s in subset)
            if best is None or cost < best[0]:
                best = (cost, subset)
        if best is not None:
            return set(best[1])
    return set()


def kmeans_reference(points, init, max_iters=300):
    """Unweighted Lloyd iteration; returns [(centroids, assignments), ...].

    One entry per assignment step. Empty clusters are re-seeded at the object
    farthest from its own centroid (lowest index on ties, distinct objects in
    cluster order).
    """
    n, d = len(points), len(points[0])
    k = len(init)
    cents = [[float(v) for v in row] for row in init]

    def assign_all(cents):
        out = []
        for p in points:
            best, best_c = None, None
            for c, cen in enumerate(cents):
                sq = 0.0
                for j in range(d):
                    diff = float(p[j]) - cen[j]
                    sq += diff * diff
                if best is None or sq < best:
                    best, best_c = sq, c
            out.append(best_c)
        return out

    labels = assign_all(cents)
    history = [([row[:] for row in cents], labels[:])]
    for _ in range(max_iters):
        new_cents = [[0.0] * d for _ in range(k)]
        counts = [0] * k
        for p, c in zip(points, labels):
            counts[c] += 1
            for j in range(d):
                new_cents[c][j] += 1.0 * float(p[j])
        for c in range(k):
            if counts[c]:
                new_cents[c] = [v / float(counts[c]) for v in new_cents[c]]
        empty = [c for c in range(k) if counts[c] == 0]
        if empty:
            score = []
            for p, c in zip(points, labels):
                score.append(sum((float(p[j]) - new_cents[c][j]) ** 2 for j in range(d)))
            for c in empty:
                far = max(range(n), key=lambda i: (score[i], -i))
                new_cents[c] = [float(v) for v in points[far]]
                score[far] = -math.inf
        cents = new_cents
        new_labels = assign_all(cents)
        history.append(([row[:] for row in cents], new_labels[:]))
        if new_labels == labels:
            break
        labels = new_labels
    return history


def silhouette_naive(points, labels):
    n = len(points)
    clusters = sorted(set(labels))
    total = 0.0
    for i in range(n):
        own = [j for j in range(n) if labels[j] == labels[i] and j != i]
        if not own:
            continue
        a = sum(dist(points[i], points[j]) for j in own) / len(own)
        b = min(
            sum(dist(points[i], points[j]) for j in range(n) if labels[j] == c)
            / sum(1 for j in range(n) if labels[j] == c)
            for c in clusters if c != labels[i]
        )
        m = max(a, b)
        total += 0.0 if m == 0 else (b - a) / m
    return total / n
