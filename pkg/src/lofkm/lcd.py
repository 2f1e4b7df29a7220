"""Local connectivity disagreement (LCD) metrics.

For an object X scored against the prototype C of its cluster, the eligible
neighbors are cluster members s (other than X) with dist(s, C) <= dist(X, C)
and dist(X, s) < dist(X, C); the t of them nearest to X are kept. Each kept
neighbor contributes Dev * ND where

    Dev = (dist(C, s) + dist(s, X)) / dist(X, C) - 1
    ND  = dist(X, s) / (dist(C, s) + dist(s, X))

Object scores are summed over kept neighbors, clusters take the max over their
objects, and a clustering reports the max (MaxLCD) and mean (AvgLCD) over
clusters. Lower is better.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .data import Dataset, pairwise_distances


@dataclass(frozen=True)
class EligibleNeighborSet:
    index: int
    t: int
    members: np.ndarray  # object indices, nearest to X first
    distances: np.ndarray
    degenerate: bool = False  # X sits on the prototype

    def __len__(self):
        return len(self.members)


@dataclass
class LcdReport:
    t: int
    per_object: np.ndarray = field(repr=False)
    per_cluster: list
    max_lcd: float
    avg_lcd: float

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "per_cluster": [float(v) for v in self.per_cluster],
            "max_lcd": float(self.max_lcd),
            "avg_lcd": float(self.avg_lcd),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _norm(v) -> float:
    return float(np.linalg.norm(v))


def dev(x, c, s) -> float:
    x, c, s = (np.asarray(v, dtype=float) for v in (x, c, s))
    base = _norm(x - c)
    if base == 0:
        raise ValueError("Dev is undefined when the object coincides with the prototype")
    return max(0.0, (_norm(c - s) + _norm(s - x)) / base - 1.0)


def nd(x, c, s) -> float:
    x, c, s = (np.asarray(v, dtype=float) for v in (x, c, s))
    through = _norm(c - s) + _norm(s - x)
    if through == 0:
        raise ValueError("ND is undefined when object, neighbor and prototype coincide")
    return _norm(x - s) / through


def lcd_triple(x, c, s) -> float:
    return dev(x, c, s) * nd(x, c, s)


def eligible_neighbors(
    ds: Dataset, x: int, centroid, members: Sequence[int], t: int
) -> EligibleNeighborSet:
    """Up to ``t`` eligible cluster members nearest to object ``x``.

    Ties on dist(s, X) go to the lower object index.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    pts = ds.points
    c = np.asarray(centroid, dtype=float)
    idx = np.array(sorted(int(m) for m in members if int(m) != x), dtype=int)
    d_xc = _norm(pts[x] - c)
    empty = np.array([], dtype=int)
    if d_xc == 0 or idx.size == 0:
        return EligibleNeighborSet(x, t, empty, np.array([]), degenerate=d_xc == 0)
    d_sc = np.linalg.norm(pts[idx] - c, axis=1)
    d_xs = np.linalg.norm(pts[idx] - pts[x], axis=1)
    ok = (d_sc <= d_xc) & (d_xs < d_xc)
    idx, d_xs = idx[ok], d_xs[ok]
    order = np.argsort(d_xs, kind="stable")[:t]
    return EligibleNeighborSet(x, t, idx[order], d_xs[order])


def lcd_object(ds: Dataset, x: int, centroid, members: Sequence[int], t: int) -> float:
    nbrs = eligible_neighbors(ds, x, centroid, members, t)
    return float(sum(lcd_triple(ds.points[x], centroid, ds.points[s]) for s in nbrs.members))


def _cluster_lcds(
    pts: np.ndarray, idx: np.ndarray, centroid: np.ndarray, t: int,
    dist: Optional[np.ndarray] = None,
) -> np.ndarray:
    """LCD(X, C) for every member X of one cluster, vectorized over the cluster."""
    m = idx.size
    if m == 0:
        return np.zeros(0)
    d_c = np.linalg.norm(pts[idx] - centroid, axis=1)
    d_xs = pairwise_distances(pts[idx]) if dist is None else dist[np.ix_(idx, idx)]

    # rows are X, columns are candidate s
    eligible = (d_c[None, :] <= d_c[:, None]) & (d_xs < d_c[:, None])
    np.fill_diagonal(eligible, False)
    key = np.where(eligible, d_xs, np.inf)
    take = min(t, m)
    order = np.argsort(key, axis=1, kind="stable")[:, :take]
    rows = np.arange(m)[:, None]
    chosen = np.isfinite(key[rows, order])

    d_xs_sel = d_xs[rows, order]
    d_cs_sel = d_c[order]
    d_xc = np.broadcast_to(d_c[:, None], order.shape)
    through = d_cs_sel + d_xs_sel
    with np.errstate(divide="ignore", invalid="ignore"):
        dev_ = np.maximum((through / d_xc) - 1.0, 0.0)
        nd_ = d_xs_sel / through
        term = np.where(chosen, dev_ * nd_, 0.0)
    return term.sum(axis=1)


def lcd_cluster(ds: Dataset, centroid, members: Sequence[int], t: int) -> float:
    idx = np.array(sorted(int(m) for m in members), dtype=int)
    scores = _cluster_lcds(ds.points, idx, np.asarray(centroid, dtype=float), t)
    return float(scores.max()) if scores.size else 0.0


def lcd_dataset(
    ds: Dataset, clustering, t: int, dist: Optional[np.ndarray] = None
) -> LcdReport:
    """Score every object against its assigned cluster and aggregate.

    Empty clusters score 0 and still count toward the AvgLCD mean.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    assignments = np.asarray(clustering.assignments)
    centroids = np.asarray(clustering.centroids, dtype=float)
    k = centroids.shape[0]
    if not np.any((assignments >= 0) & (assignments < k)):
        raise ValueError("clustering has no non-empty cluster")
    per_object = np.zeros(ds.n)
    per_cluster = []
    for c in range(k):
        idx = np.flatnonzero(assignments == c)
        scores = _cluster_lcds(ds.points, idx, centroids[c], t, dist=dist)
        per_object[idx] = scores
        per_cluster.append(float(scores.max()) if scores.size else 0.0)
    return LcdReport(
        t=t,
        per_object=per_object,
        per_cluster=per_cluster,
        max_lcd=max(per_cluster),
        avg_lcd=float(np.mean(per_cluster)),
    )
