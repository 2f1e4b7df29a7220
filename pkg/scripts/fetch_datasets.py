#!/usr/bin/env python
"""Fetch the benchmark datasets into ``data/`` as CSV files.

Sources, tried in order:

yeast     UCI ``yeast/yeast.data`` (sequence-name column dropped).
          Fallback: rebuilt from the KEEL binary splits shipped inside the
          ``keel-ds`` wheel on PyPI. Those splits hold the same 1484 UCI rows;
          the ten class labels are recovered by intersecting the one-vs-rest and
          pairwise files (every feature vector maps to a single class, so the
          rebuild is exact up to row order).
wireless  UCI ``00422/wifi_localization.txt`` (Wireless Indoor Localization,
          2000 rows, 7 signal strengths, room 1-4). No fallback.
avila     UCI ``00459/avila.zip`` (train + test concatenated). No fallback.

Usage: python scripts/fetch_datasets.py [--out data] [--only yeast,wireless]
"""

import argparse
import collections
import csv
import glob
import io
import os
import subprocess
import sys
import tempfile
import urllib.request
import zipfile

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases/"
YEAST_COLS = ["mcg", "gvh", "alm", "mit", "erl", "pox", "vac", "nuc"]
WIFI_COLS = [f"wifi{i}" for i in range(1, 8)]
AVILA_COLS = [f"f{i}" for i in range(1, 11)]


def _get(url, timeout=30):
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read()


def _write(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def yeast_from_uci():
    text = _get(UCI + "yeast/yeast.data").decode()
    rows = []
    for line in text.splitlines():
        parts = line.split()
        if parts:
            rows.append(parts[1:])
    return rows


def _keel_counts(root, name):
    pos, neg = collections.Counter(), collections.Counter()
    order = []
    with open(os.path.join(root, name + ".dat")) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("@"):
                continue
            parts = [p.strip() for p in line.split(",")]
            vec = tuple(f"{float(x):.2f}" for x in parts[:-1])
            (pos if parts[-1] == "positive" else neg)[vec] += 1
            order.append(vec)
    return pos, neg, order


def yeast_from_keel():
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q",
             "keel-ds==0.2.5", "-d", tmp],
            check=True,
        )
        wheel = glob.glob(os.path.join(tmp, "keel_ds-*.whl"))[0]
        with zipfile.ZipFile(wheel) as zf:
            zf.extractall(tmp)
        root = os.path.join(tmp, "keel_ds", "data", "imbalanced", "raw")

        # KEEL numbering: 0 MIT, 1 NUC, 2 CYT, 3 ME1, 4 ME2, 5 ME3, 6 EXC,
        # 7 VAC, 8 POX, 9 ERL; "positive" is the right-hand side of "_vs_".
        nuc_pos, nuc_neg, order = _keel_counts(root, "yeast1")
        total = nuc_pos + nuc_neg
        counts = {
            "NUC": nuc_pos,
            "ME3": _keel_counts(root, "yeast3")[0],
            "ME2": _keel_counts(root, "yeast4")[0],
            "ME1": _keel_counts(root, "yeast5")[0],
            "EXC": _keel_counts(root, "yeast6")[0],
            "CYT": _keel_counts(root, "yeast-2_vs_4")[1],
            "VAC": _keel_counts(root, "yeast-1-2-8-9_vs_7")[0],
            "POX": _keel_counts(root, "yeast-2_vs_8")[0],
        }
        pos, _, _ = _keel_counts(root, "yeast-0-2-5-6_vs_3-7-8-9")
        erl = pos.copy()
        for c in ("ME1", "VAC", "POX"):
            erl.subtract(counts[c])
        counts["ERL"] = +erl
        mit = total.copy()
        for c in counts.values():
            mit.subtract(c)
        if min(mit.values()) < 0:
            raise RuntimeError("KEEL splits are inconsistent")
        counts["MIT"] = +mit

    label_of = {}
    for label, cnt in counts.items():
        for vec in cnt:
            if vec in label_of and label_of[vec] != label:
                raise RuntimeError(f"feature vector {vec} has two classes")
            label_of[vec] = label
    return [list(vec) + [label_of[vec]] for vec in order]


def wireless_from_uci():
    text = _get(UCI + "00422/wifi_localization.txt").decode()
    return [line.split() for line in text.splitlines() if line.strip()]


def avila_from_uci():
    buf = io.BytesIO(_get(UCI + "00459/avila.zip", timeout=120))
    rows = []
    with zipfile.ZipFile(buf) as zf:
        for name in zf.namelist():
            if name.endswith(("avila-tr.txt", "avila-ts.txt")):
                for line in zf.read(name).decode().splitlines():
                    if line.strip():
                        rows.append([p.strip() for p in line.split(",")])
    return rows


SOURCES = {
    "yeast": (YEAST_COLS, [yeast_from_uci, yeast_from_keel]),
    "wireless": (WIFI_COLS, [wireless_from_uci]),
    "avila": (AVILA_COLS, [avila_from_uci]),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="data")
    ap.add_argument("--only", default="yeast,wireless,avila")
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    failed = []
    for name in args.only.split(","):
        cols, fetchers = SOURCES[name]
        for fetch in fetchers:
            try:
                rows = fetch()
            except Exception as exc:  # network or archive errors: try next source
                print(f"{name}: {fetch.__name__} failed: {exc}", file=sys.stderr)
                continue
            _write(os.path.join(args.out, f"{name}.csv"), cols + ["class"], rows)
            break
        else:
            failed.append(name)
    if failed:
        print("could not fetch: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
