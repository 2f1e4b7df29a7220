"""Local connectivity metrics and LOF-weighted K-Means."""

from .cluster import (
    Clustering,
    LloydParams,
    assign,
    multi_restart,
    objective,
    run_kmeans,
    run_lloyd,
    run_lofkm,
    update_centroids,
)
from .data import Dataset, DataError, distance, load_csv, normalize, write_csv
from .lcd import (
    LcdReport,
    dev,
    eligible_neighbors,
    lcd_cluster,
    lcd_dataset,
    lcd_object,
    lcd_triple,
    nd,
)
from .neighbors import knn, lof, lof_weights, local_outlier_factor, lrd
from .quality import purity, silhouette

__version__ = "0.1.0"
