"""Weighted Lloyd iteration: K-Means and LOF-weighted K-Means (LOFKM).

Each object X carries a weight W(X) >= 1. The objective is

    sum_C sum_{X in C} W(X) * ||X - C||^2

Assignment is plain nearest-centroid (a per-object constant weight cannot
change the argmin); the centroid step is the W-weighted mean of the members.
Uniform weights give classical K-Means.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional

import numpy as np

from .data import Dataset
from .neighbors import lof_weights


@dataclass
class Clustering:
    assignments: np.ndarray
    centroids: np.ndarray
    iterations_run: int = 0
    converged: bool = False
    history: Optional[List["Snapshot"]] = field(default=None, repr=False, compare=False)

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == c)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "assignments": [int(a) for a in self.assignments],
            "centroids": [[float(v) for v in row] for row in self.centroids],
            "iterations_run": self.iterations_run,
            "converged": self.converged,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: Mapping) -> "Clustering":
        return cls(
            assignments=np.asarray(d["assignments"], dtype=int),
            centroids=np.asarray(d["centroids"], dtype=float).reshape(d["k"], -1),
            iterations_run=int(d["iterations_run"]),
            converged=bool(d["converged"]),
        )


@dataclass(frozen=True)
class Snapshot:
    """State after one assign step: the centroids used and the resulting labels."""

    centroids: np.ndarray
    assignments: np.ndarray
    objective: float


@dataclass(frozen=True)
class LloydParams:
    k: int
    max_iters: int = 300
    stability_threshold: float = 0.0
    seed: int = 42
    restarts: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not 0.0 <= self.stability_threshold < 1.0:
            raise ValueError("stability_threshold must lie in [0, 1)")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")


def _pts(ds) -> np.ndarray:
    return ds.points if isinstance(ds, Dataset) else np.asarray(ds, dtype=float)


def _sq_dists(pts: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    out = np.zeros((pts.shape[0], centroids.shape[0]))
    for j in range(pts.shape[1]):
        diff = pts[:, j, None] - centroids[None, :, j]
        out += diff * diff
    return out


def objective(ds, clustering: Clustering, w=None) -> float:
    pts = _pts(ds)
    a = np.asarray(clustering.assignments)
    resid = np.sum((pts - np.asarray(clustering.centroids)[a]) ** 2, axis=1)
    if w is None:
        return float(resid.sum())
    return float(np.dot(np.asarray(w, dtype=float), resid))


def assign(ds, centroids) -> np.ndarray:
    """Nearest centroid by squared euclidean distance; ties go to the lower index."""
    return np.argmin(_sq_dists(_pts(ds), np.asarray(centroids, dtype=float)), axis=1)


def update_centroids(ds, assignments, w, k: int) -> np.ndarray:
    """Weighted mean of each cluster's members.

    An empty cluster is re-seeded at the object with the largest weighted
    squared distance to its own (already updated) centroid; several empty
    clusters take distinct objects in cluster-index order.
    """
    pts = _pts(ds)
    a = np.asarray(assignments)
    w = np.ones(pts.shape[0]) if w is None else np.asarray(w, dtype=float)
    sums = np.zeros((k, pts.shape[1]))
    np.add.at(sums, a, w[:, None] * pts)
    mass = np.bincount(a, weights=w, minlength=k)
    centroids = np.zeros_like(sums)
    full = mass > 0
    centroids[full] = sums[full] / mass[full, None]

    empty = np.flatnonzero(~full)
    if empty.size:
        score = w * np.sum((pts - centroids[a]) ** 2, axis=1)
        for c in empty:
            far = int(np.argmax(score))
            centroids[c] = pts[far]
            score[far] = -np.inf
    return centroids


def forgy_init(ds, k: int, rng: np.random.Generator) -> np.ndarray:
    pts = _pts(ds)
    if k > pts.shape[0]:
        raise ValueError(f"k={k} exceeds the number of objects n={pts.shape[0]}")
    return pts[rng.choice(pts.shape[0], size=k, replace=False)].copy()


def run_lloyd(
    ds,
    w,
    params: LloydParams,
    init: Optional[np.ndarray] = None,
    record: bool = False,
) -> Clustering:
    """Alternate assignment and weighted centroid steps until memberships settle.

    Stops once the fraction of objects that changed cluster is at most
    ``params.stability_threshold`` or after ``params.max_iters`` centroid
    updates. ``record=True`` keeps a Snapshot per assignment step.
    """
    pts = _pts(ds)
    n = pts.shape[0]
    if params.k > n:
        raise ValueError(f"k={params.k} exceeds the number of objects n={n}")
    w = np.ones(n) if w is None else np.asarray(w, dtype=float)
    if init is None:
        init = forgy_init(pts, params.k, np.random.default_rng(params.seed))
    centroids = np.asarray(init, dtype=float).copy()

    labels = assign(pts, centroids)
    history = [] if record else None
    if record:
        history.append(Snapshot(centroids.copy(), labels.copy(),
                                objective(pts, Clustering(labels, centroids), w)))
    converged = False
    it = 0
    while it < params.max_iters:
        it += 1
        centroids = update_centroids(pts, labels, w, params.k)
        new = assign(pts, centroids)
        changed = np.count_nonzero(new != labels) / n
        labels = new
        if record:
            history.append(Snapshot(centroids.copy(), labels.copy(),
                                    objective(pts, Clustering(labels, centroids), w)))
        if changed <= params.stability_threshold:
            converged = True
            break
    # leave centroids consistent with the final memberships
    centroids = update_centroids(pts, labels, w, params.k)
    return Clustering(labels, centroids, iterations_run=it, converged=converged, history=history)


def run_kmeans(ds, params: LloydParams, **kwargs) -> Clustering:
    return run_lloyd(ds, None, params, **kwargs)


def run_lofkm(ds, t: int, params: LloydParams, weights=None, **kwargs) -> Clustering:
    """LOF weights with neighborhood size ``t``, then weighted Lloyd iteration."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if weights is None:
        weights = lof_weights(ds, t)
    return run_lloyd(ds, weights, params, **kwargs)


def restart_seed(master_seed: int, restart: int) -> int:
    """Independent per-restart seed derived from (master seed, restart index)."""
    return int(np.random.SeedSequence([master_seed, restart]).generate_state(1)[0])


def multi_restart(
    ds,
    method: str,
    params: LloydParams,
    metric_hooks: Mapping[str, Callable[[Clustering], float]],
    t: Optional[int] = None,
    weights=None,
) -> Dict[str, float]:
    """Mean of each metric over ``params.restarts`` seeded runs.

    Restart r uses ``restart_seed(params.seed, r)`` whatever the method, so
    K-Means and LOFKM runs with the same master seed start from the same
    centroids.
    """
    if method == "lofkm":
        if weights is None:
            if t is None:
                raise ValueError("lofkm needs t or precomputed weights")
            weights = lof_weights(ds, t)
    elif method == "km":
        weights = None
    else:
        raise ValueError(f"unknown method {method!r}")
    values: Dict[str, List[float]] = {name: [] for name in metric_hooks}
    for r in range(params.restarts):
        p = LloydParams(params.k, params.max_iters, params.stability_threshold,
                        restart_seed(params.seed, r), 1)
        result = run_lloyd(ds, weights, p)
        for name, hook in metric_hooks.items():
            values[name].append(float(hook(result)))
    return {name: math.fsum(v) / len(v) for name, v in values.items()}
