"""Dataset container, CSV ingestion, feature normalization and distances."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

EUCLIDEAN = "euclidean"
SQUARED_EUCLIDEAN = "squared_euclidean"
NORMALIZE_MODES = ("none", "zscore", "minmax")


class DataError(ValueError):
    """Raised when input data cannot be turned into a valid Dataset."""


@dataclass(frozen=True, eq=False)
class Dataset:
    """An immutable n x d matrix of finite reals with optional class labels."""

    points: np.ndarray
    labels: Optional[tuple] = None
    attribute_names: Optional[tuple] = None
    name: str = "dataset"

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DataError(f"points must be a non-empty n x d matrix, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DataError("points contain NaN or infinite values")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != pts.shape[0]:
                raise DataError(f"{len(labels)} labels for {pts.shape[0]} points")
            object.__setattr__(self, "labels", labels)
        if self.attribute_names is not None:
            names = tuple(self.attribute_names)
            if len(names) != pts.shape[1]:
                raise DataError(f"{len(names)} attribute names for {pts.shape[1]} attributes")
            object.__setattr__(self, "attribute_names", names)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def n_classes(self) -> int:
        if self.labels is None:
            raise DataError("dataset has no labels")
        return len(set(self.labels))

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            np.array_equal(self.points, other.points)
            and self.labels == other.labels
            and self.attribute_names == other.attribute_names
        )

    __hash__ = None


def _is_number(text: str) -> bool:
    try:
        return math.isfinite(float(text))
    except ValueError:
        return False


def load_csv(
    path,
    label_column: Union[int, str, None] = -1,
    name: Optional[str] = None,
) -> Dataset:
    """Read a comma-separated file into a Dataset.

    A header row is assumed iff the first row has a non-numeric field outside
    the label column. ``label_column`` is an index (negative counts from the
    end), a header name, or None for an unlabeled file.

    Errors name the 1-based data row and column that failed.
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{path}: empty file")
    rows = [[c.strip() for c in r] for r in rows]

    width = len(rows[0])
    label_idx = None
    if label_column is not None and not isinstance(label_column, str):
        label_idx = label_column if label_column >= 0 else width + label_column
        if not 0 <= label_idx < width:
            raise DataError(f"{path}: label column {label_column} out of range for {width} columns")

    first = rows[0]
    has_header = isinstance(label_column, str) or any(
        not _is_number(c) for j, c in enumerate(first) if j != label_idx
    )
    header = None
    if has_header:
        header, rows = first, rows[1:]
        if isinstance(label_column, str):
            if label_column not in header:
                raise DataError(f"{path}: no column named {label_column!r}")
            label_idx = header.index(label_column)
    if not rows:
        raise DataError(f"{path}: no data rows")

    feat_idx = [j for j in range(width) if j != label_idx]
    if not feat_idx:
        raise DataError(f"{path}: no feature columns")
    points = np.empty((len(rows), len(feat_idx)))
    labels = [] if label_idx is not None else None
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise DataError(f"{path}: row {i} has {len(row)} fields, expected {width}")
        for out_j, j in enumerate(feat_idx):
            try:
                value = float(row[j])
            except ValueError:
                value = math.nan
            if not math.isfinite(value):
                raise DataError(f"{path}: row {i}, column {j + 1}: cannot parse {row[j]!r} as a finite number")
            points[i - 1, out_j] = value
        if labels is not None:
            labels.append(row[label_idx])

    names = [header[j] for j in feat_idx] if header else None
    if name is None:
        name = str(path).replace("\\", "/").rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return Dataset(points, labels=labels, attribute_names=names, name=name)


def write_csv(ds: Dataset, path) -> None:
    """Write ``ds`` so that ``load_csv(path)`` returns an equal Dataset.

    Floats are written with ``repr`` so they round-trip exactly. The label,
    when present, is the last column.
    """
    names = list(ds.attribute_names or [f"x{j}" for j in range(ds.d)])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names + (["label"] if ds.labels is not None else []))
        for i in range(ds.n):
            row = [repr(float(v)) for v in ds.points[i]]
            if ds.labels is not None:
                row.append(str(ds.labels[i]))
            w.writerow(row)


def normalize(ds: Dataset, mode: str = "none") -> Dataset:
    """Rescale attributes. Constant attributes pass through for zscore and map to 0 for minmax."""
    if mode == "none":
        return ds
    pts = ds.points.copy()
    if mode == "zscore":
        mean = pts.mean(axis=0)
        std = pts.std(axis=0)
        live = std > 0
        pts[:, live] = (pts[:, live] - mean[live]) / std[live]
    elif mode == "minmax":
        lo = pts.min(axis=0)
        span = pts.max(axis=0) - lo
        live = span > 0
        pts[:, live] = (pts[:, live] - lo[live]) / span[live]
        pts[:, ~live] = 0.0
    else:
        raise ValueError(f"unknown normalization mode {mode!r}; expected one of {NORMALIZE_MODES}")
    return Dataset(pts, labels=ds.labels, attribute_names=ds.attribute_names, name=ds.name)


def distance(a: Sequence[float], b: Sequence[float], metric: str = EUCLIDEAN) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    sq = float(np.sum((a - b) ** 2))
    if metric == SQUARED_EUCLIDEAN:
        return sq
    if metric == EUCLIDEAN:
        return math.sqrt(sq)
    raise ValueError(f"unknown metric {metric!r}")


def pairwise_distances(points: np.ndarray, other: Optional[np.ndarray] = None) -> np.ndarray:
    """Euclidean distance matrix between the rows of ``points`` and ``other``.

    Computed from coordinate differences rather than the Gram expansion so that
    identical rows give exactly 0.
    """
    x = np.asarray(points, dtype=float)
    y = x if other is None else np.asarray(other, dtype=float)
    out = np.zeros((x.shape[0], y.shape[0]))
    for j in range(x.shape[1]):
        diff = x[:, j, None] - y[None, :, j]
        out += diff * diff
    np.sqrt(out, out=out)
    return out
