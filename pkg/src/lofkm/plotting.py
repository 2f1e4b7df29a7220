"""Figures for experiment reports."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bench import METRICS, ExperimentReport  # noqa: E402

LABELS = {
    "avg_lcd": "AvgLCD (lower is better)",
    "max_lcd": "MaxLCD (lower is better)",
    "silhouette": "Silhouette (higher is better)",
    "purity": "Purity (higher is better)",
}
COLORS = {"km": "#4c72b0", "lofkm": "#dd8452"}
STYLE = {
    "font.size": 9,
    "axes.titlesize": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    # fixed metadata keeps repeated renders byte-identical
    "svg.hashsalt": "lofkm",
}


def plot_report(report: ExperimentReport, path) -> None:
    """Grouped bars of each metric mean per t, one panel per metric."""
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(2, 2, figsize=(7.0, 5.0))
        ts = report.t_values
        x = np.arange(len(ts))
        width = 0.8 / max(len(report.methods), 1)
        for ax, metric in zip(axes.flat, METRICS):
            for j, method in enumerate(report.methods):
                vals = [report.mean(method, t, metric) for t in ts]
                ax.bar(x + (j - (len(report.methods) - 1) / 2) * width, vals, width,
                       label=method.upper(), color=COLORS.get(method))
            ax.set_xticks(x)
            ax.set_xticklabels([f"t={t}" for t in ts])
            ax.set_title(LABELS[metric])
        axes.flat[0].legend(frameon=False)
        fig.suptitle(f"{report.dataset}: K={report.k}, {report.restarts} restarts")
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
        plt.close(fig)
