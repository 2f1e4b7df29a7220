"""Silhouette and purity."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .data import pairwise_distances


@dataclass(frozen=True)
class QualityReport:
    silhouette: float
    purity: float


def _assignments(clustering) -> np.ndarray:
    return np.asarray(getattr(clustering, "assignments", clustering))


def silhouette(ds, clustering, dist: Optional[np.ndarray] = None) -> float:
    """Mean silhouette coefficient with euclidean distance.

    Objects in singleton clusters score 0, as do objects with a = b = 0.
    """
    pts = getattr(ds, "points", ds)
    labels = _assignments(clustering)
    ids, labels = np.unique(labels, return_inverse=True)
    if ids.size < 2:
        raise ValueError("silhouette needs at least two non-empty clusters")
    D = pairwise_distances(pts) if dist is None else dist
    n = labels.size
    onehot = np.zeros((n, ids.size))
    onehot[np.arange(n), labels] = 1.0
    sizes = onehot.sum(axis=0)
    sums = D @ onehot  # sum of distances from each object to each cluster

    own = sizes[labels]
    a = sums[np.arange(n), labels] / np.maximum(own - 1, 1)
    other = sums / sizes
    other[np.arange(n), labels] = np.inf
    b = other.min(axis=1)
    denom = np.maximum(a, b)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(denom > 0, (b - a) / denom, 0.0)
    s[own == 1] = 0.0
    return float(s.mean())


def purity(clustering, labels: Optional[Sequence]) -> float:
    """Fraction of objects carrying the majority label of their cluster."""
    if labels is None:
        raise ValueError("purity needs class labels")
    a = _assignments(clustering)
    if len(labels) != a.size:
        raise ValueError(f"{len(labels)} labels for {a.size} objects")
    majority = 0
    for c in np.unique(a):
        counts = Counter(labels[i] for i in np.flatnonzero(a == c))
        majority += max(counts.values())
    return majority / a.size


def quality(ds, clustering, dist: Optional[np.ndarray] = None) -> QualityReport:
    return QualityReport(silhouette(ds, clustering, dist=dist), purity(clustering, ds.labels))
