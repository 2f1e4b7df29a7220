"""k-nearest neighborhoods and the Local Outlier Factor pipeline.

Neighborhoods follow the Breunig et al. convention: the k-distance of an object
is the distance to its k-th nearest other object, and its neighborhood is every
other object within that radius, so ties can make it larger than k.

Degenerate densities arise when an object has at least k exact duplicates: its
reachability sum is 0 and its lrd is +inf. Ratios of lrds then use
inf/inf = 1 and finite/inf = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .data import Dataset, pairwise_distances

ArrayLike = Union[Dataset, np.ndarray]


@dataclass(frozen=True)
class NeighborList:
    index: int
    k: int
    k_distance: float
    indices: np.ndarray
    distances: np.ndarray

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True)
class LOFResult:
    """Per-object outputs of the LOF pipeline for one neighborhood size."""

    k: int
    k_distance: np.ndarray
    neighbors: np.ndarray  # n x n boolean membership mask
    lrd: np.ndarray
    lof: np.ndarray


def _points(ds: ArrayLike) -> np.ndarray:
    return ds.points if isinstance(ds, Dataset) else np.asarray(ds, dtype=float)


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n - 1:
        raise ValueError(f"neighborhood size k={k} must satisfy 1 <= k <= n-1 = {n - 1}")


def _lrd_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """num / den with inf/inf = 1 and finite/inf = 0."""
    num, den = np.broadcast_arrays(num, den)
    out = np.empty(num.shape)
    den_inf = np.isinf(den)
    num_inf = np.isinf(num)
    out[den_inf & num_inf] = 1.0
    out[den_inf & ~num_inf] = 0.0
    live = ~den_inf
    with np.errstate(divide="ignore", invalid="ignore"):
        out[live] = num[live] / den[live]
    return out


def local_outlier_factor(
    ds: ArrayLike, k: int, dist: Optional[np.ndarray] = None
) -> LOFResult:
    """Run k-distance -> reachability -> lrd -> LOF for every object at once.

    ``dist`` may be a precomputed euclidean distance matrix; it is not modified.
    """
    pts = _points(ds)
    n = pts.shape[0]
    _check_k(n, k)
    D = pairwise_distances(pts) if dist is None else np.asarray(dist, dtype=float)

    off = D.copy()
    np.fill_diagonal(off, np.inf)
    kdist = np.partition(off, k - 1, axis=1)[:, k - 1]
    member = off <= kdist[:, None]

    # reach-dist_k(i, j) = max(k-distance(j), dist(i, j))
    reach = np.where(member, np.maximum(kdist[None, :], D), 0.0)
    total = reach.sum(axis=1)
    count = member.sum(axis=1)
    with np.errstate(divide="ignore"):
        lrd = np.where(total > 0, count / np.where(total > 0, total, 1.0), np.inf)

    ratios = _lrd_ratio(lrd[None, :], lrd[:, None])
    lof = np.where(member, ratios, 0.0).sum(axis=1) / count
    return LOFResult(k=k, k_distance=kdist, neighbors=member, lrd=lrd, lof=lof)


def knn(ds: ArrayLike, i: int, k: int) -> NeighborList:
    """All objects within the k-distance of object ``i``, nearest first."""
    pts = _points(ds)
    n = pts.shape[0]
    _check_k(n, k)
    row = pairwise_distances(pts[i : i + 1], pts)[0]
    row[i] = np.inf
    kdist = float(np.partition(row, k - 1)[k - 1])
    idx = np.flatnonzero(row <= kdist)
    idx = idx[np.argsort(row[idx], kind="stable")]
    return NeighborList(index=i, k=k, k_distance=kdist, indices=idx, distances=row[idx])


def lrd(ds: ArrayLike, i: int, k: int) -> float:
    return float(local_outlier_factor(ds, k).lrd[i])


def lof(ds: ArrayLike, i: int, k: int) -> float:
    return float(local_outlier_factor(ds, k).lof[i])


def weights_from_lof(lof_scores: np.ndarray) -> np.ndarray:
    """Clamp LOF scores from below at 1.0.

    An infinite score (a neighbor with duplicate-induced infinite density) is
    replaced by the largest finite weight so every weight stays usable in a
    weighted mean.
    """
    w = np.maximum(np.asarray(lof_scores, dtype=float), 1.0)
    inf = np.isinf(w)
    if inf.any():
        finite = w[~inf]
        w[inf] = finite.max() if finite.size else 1.0
    return w


def lof_weights(ds: ArrayLike, k: int, dist: Optional[np.ndarray] = None) -> np.ndarray:
    return weights_from_lof(local_outlier_factor(ds, k, dist=dist).lof)
