"""Experiment harness: K-Means vs LOFKM over paired random restarts.

For every restart r both methods start from the same Forgy centroids (seeded by
``restart_seed(seed, r)``). K-Means does not depend on t, so it is run once per
restart; its silhouette and purity are shared across t while its LCD metrics
are evaluated for each t. LOFKM is run once per (restart, t) with LOF
neighborhood size equal to t.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .cluster import LloydParams, run_lloyd, restart_seed
from .data import Dataset, load_csv, normalize, pairwise_distances
from .lcd import lcd_dataset
from .neighbors import lof_weights
from .quality import purity, silhouette

METRICS = ("avg_lcd", "max_lcd", "silhouette", "purity")
LOWER_IS_BETTER = {"avg_lcd": True, "max_lcd": True, "silhouette": False, "purity": False}
METHODS = ("km", "lofkm")
DECIMALS = 4


@dataclass(frozen=True)
class ExperimentConfig:
    data_path: Optional[str] = None
    label_column: Union[int, str, None] = -1
    normalize: str = "none"
    k: Optional[int] = None
    t_values: Tuple[int, ...] = (3, 4, 5)
    restarts: int = 100
    seed: int = 42
    methods: Tuple[str, ...] = METHODS
    max_iters: int = 300
    stability_threshold: float = 0.0
    workers: int = 1

    def __post_init__(self):
        if any(t < 1 for t in self.t_values):
            raise ValueError("t values must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be >= 1")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")


@dataclass
class MetricMeans:
    avg_lcd: float
    max_lcd: float
    silhouette: float
    purity: float


@dataclass
class ExperimentReport:
    dataset: str
    n: int
    d: int
    k: int
    restarts: int
    seed: int
    normalize: str
    t_values: List[int]
    methods: List[str]
    results: Dict[str, Dict[int, MetricMeans]] = field(default_factory=dict)

    def mean(self, method: str, t: int, metric: str) -> float:
        return round(getattr(self.results[method][t], metric), DECIMALS)

    def change_pct(self, t: int, metric: str) -> float:
        """LOFKM change over KM in percent, positive meaning better.

        Uses the emitted (rounded) means so the percentages can be re-derived
        from the report itself.
        """
        km = self.mean("km", t, metric)
        lof = self.mean("lofkm", t, metric)
        if km == 0:
            return math.nan
        diff = km - lof if LOWER_IS_BETTER[metric] else lof - km
        return diff / km * 100.0

    @property
    def paired(self) -> bool:
        return all(m in self.results for m in METHODS)

    def to_dict(self) -> dict:
        out = {
            "dataset": self.dataset,
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "restarts": self.restarts,
            "seed": self.seed,
            "normalize": self.normalize,
            "t_values": list(self.t_values),
            "methods": list(self.methods),
            "results": [
                {"method": m, "t": t, **{k: _r(v) for k, v in asdict(self.results[m][t]).items()}}
                for m in self.methods for t in self.t_values
            ],
        }
        if self.paired:
            out["change_pct"] = [
                {"t": t, **{metric: _r(self.change_pct(t, metric)) for metric in METRICS}}
                for t in self.t_values
            ]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        results: Dict[str, Dict[int, MetricMeans]] = {}
        for row in d["results"]:
            results.setdefault(row["method"], {})[int(row["t"])] = MetricMeans(
                *(row[m] for m in METRICS)
            )
        return cls(
            dataset=d["dataset"], n=d["n"], d=d["d"], k=d["k"], restarts=d["restarts"],
            seed=d["seed"], normalize=d["normalize"], t_values=list(d["t_values"]),
            methods=list(d["methods"]), results=results,
        )


def _r(x: float):
    return None if x is None or math.isnan(x) else round(float(x), DECIMALS)


def _fmt(x) -> str:
    return "nan" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.{DECIMALS}f}"


def emit_report(report: ExperimentReport, fmt: str = "tsv") -> str:
    """Serialize as a method-by-metric TSV or as JSON."""
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if fmt != "tsv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(["dataset", "method"] + [f"{m}@t={t}" for m in METRICS for t in report.t_values])
    for method in report.methods:
        w.writerow([report.dataset, method] + [
            _fmt(report.mean(method, t, m)) for m in METRICS for t in report.t_values
        ])
    if report.paired:
        w.writerow([report.dataset, "change_pct"] + [
            _fmt(report.change_pct(t, m)) for m in METRICS for t in report.t_values
        ])
    return buf.getvalue()


def parse_tsv(text: str) -> List[dict]:
    rows = list(csv.DictReader(io.StringIO(text), delimiter="\t"))
    return rows


# state shared with worker processes, set once per experiment
_STATE: dict = {}


def _init_state(state: dict) -> None:
    _STATE.clear()
    _STATE.update(state)


def _one_restart(r: int) -> Dict[Tuple[str, int, str], float]:
    s = _STATE
    ds: Dataset = s["ds"]
    D = s["dist"]
    params = LloydParams(s["k"], s["max_iters"], s["threshold"], restart_seed(s["seed"], r))
    out: Dict[Tuple[str, int, str], float] = {}

    def quality(cl):
        sil = silhouette(ds, cl, dist=D) if np.unique(cl.assignments).size > 1 else 0.0
        pur = purity(cl, ds.labels) if ds.labels is not None else math.nan
        return sil, pur

    if "km" in s["methods"]:
        cl = run_lloyd(ds, None, params)
        sil, pur = quality(cl)
        for t in s["t_values"]:
            rep = lcd_dataset(ds, cl, t, dist=D)
            out.update({("km", t, "avg_lcd"): rep.avg_lcd, ("km", t, "max_lcd"): rep.max_lcd,
                        ("km", t, "silhouette"): sil, ("km", t, "purity"): pur})
    if "lofkm" in s["methods"]:
        for t in s["t_values"]:
            cl = run_lloyd(ds, s["weights"][t], params)
            sil, pur = quality(cl)
            rep = lcd_dataset(ds, cl, t, dist=D)
            out.update({("lofkm", t, "avg_lcd"): rep.avg_lcd, ("lofkm", t, "max_lcd"): rep.max_lcd,
                        ("lofkm", t, "silhouette"): sil, ("lofkm", t, "purity"): pur})
    return out


def run_experiment(config: ExperimentConfig, ds: Optional[Dataset] = None) -> ExperimentReport:
    if ds is None:
        if config.data_path is None:
            raise ValueError("config has no data path")
        ds = load_csv(config.data_path, label_column=config.label_column)
    ds = normalize(ds, config.normalize)
    k = config.k if config.k is not None else ds.n_classes
    if k > ds.n:
        raise ValueError(f"k={k} exceeds the number of objects n={ds.n}")
    dist = pairwise_distances(ds.points)
    t_values = tuple(config.t_values)
    weights = {}
    if "lofkm" in config.methods:
        weights = {t: lof_weights(ds, t, dist=dist) for t in t_values}
    state = dict(ds=ds, dist=dist, k=k, max_iters=config.max_iters,
                 threshold=config.stability_threshold, seed=config.seed,
                 t_values=t_values, methods=tuple(config.methods), weights=weights)

    restarts = range(config.restarts)
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers, initializer=_init_state, initargs=(state,)) as ex:
            runs = list(ex.map(_one_restart, restarts))
    else:
        _init_state(state)
        runs = [_one_restart(r) for r in restarts]
        _STATE.clear()

    # aggregate in restart order so the result does not depend on scheduling
    results: Dict[str, Dict[int, MetricMeans]] = {}
    for method in config.methods:
        results[method] = {}
        for t in t_values:
            means = [math.fsum(run[(method, t, m)] for run in runs) / len(runs) for m in METRICS]
            results[method][t] = MetricMeans(*means)
    return ExperimentReport(
        dataset=ds.name, n=ds.n, d=ds.d, k=k, restarts=config.restarts, seed=config.seed,
        normalize=config.normalize, t_values=list(t_values), methods=list(config.methods),
        results=results,
    )
