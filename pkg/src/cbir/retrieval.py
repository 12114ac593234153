"""Distance metrics and exact brute-force top-k retrieval."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import DimensionError, InvalidParameter
from .store import FeatureIndex, NormStats

DEFAULT_K = 10


@dataclass(frozen=True)
class Metric:
    """p-norm for finite p >= 1, or the infinity norm."""

    kind: str = "p"  # "p" | "inf"
    p: float = 1.0

    def __post_init__(self):
        if self.kind not in ("p", "inf"):
            raise InvalidParameter(f"unknown metric kind {self.kind!r}")
        if self.kind == "p" and self.p < 1:
            raise InvalidParameter("p must be >= 1 for a valid metric")


L1 = Metric("p", 1.0)
L2 = Metric("p", 2.0)
LINF = Metric("inf")


def parse_metric(text: str) -> Metric:
    """Parse CLI metric names: l1, l2, linf/inf, or p<value> (e.g. p2.5)."""
    t = text.strip().lower()
    if t in ("l1", "manhattan"):
        return L1
    if t in ("l2", "euclidean"):
        return L2
    if t in ("linf", "inf", "chebyshev"):
        return LINF
    if t.startswith("p"):
        try:
            return Metric("p", float(t[1:]))
        except ValueError:
            pass
    raise InvalidParameter(f"unknown metric {text!r}")


@dataclass(frozen=True)
class RankedResult:
    id: int
    label: str
    distance: float


def p_norm_distance(x: np.ndarray, y: np.ndarray, p: float) -> float:
    """(sum |x_i - y_i|^p)^(1/p)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    if p < 1:
        raise InvalidParameter("p must be >= 1")
    return float(np.sum(np.abs(x - y) ** p) ** (1.0 / p))


def infinity_norm_distance(x: np.ndarray, y: np.ndarray) -> float:
    """max_i |x_i - y_i|."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    return float(np.max(np.abs(x - y)))


def naive_knn_scan(query: np.ndarray, index: FeatureIndex) -> np.ndarray:
    """Reference L1 scan with explicit loops; kept as the testing oracle
    for the vectorized path."""
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (index.dim,):
        raise DimensionError(f"query dim {query.shape} vs index dim {index.dim}")
    out = np.empty(len(index))
    for rec in range(len(index)):
        row = index.features[rec]
        total = 0.0
        for col in range(index.dim):
            total += abs(query[col] - float(row[col]))
        out[rec] = total
    return out


def batch_distances(
    query: np.ndarray, index: FeatureIndex, metric: Metric = L1
) -> np.ndarray:
    """Vectorized single-pass distances from the query to every record."""
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (index.dim,):
        raise DimensionError(f"query dim {query.shape} vs index dim {index.dim}")
    diffs = np.abs(index.features.astype(np.float64) - query)
    if metric.kind == "inf":
        return diffs.max(axis=1)
    if metric.p == 1.0:
        return diffs.sum(axis=1)
    return np.power(diffs, metric.p).sum(axis=1) ** (1.0 / metric.p)


def top_k(
    distances: np.ndarray, k: int, labels: Sequence[str] | None = None
) -> list[RankedResult]:
    """min(k, N) results in ascending distance; ties break on ascending id."""
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    distances = np.asarray(distances, dtype=np.float64)
    order = np.argsort(distances, kind="stable")[: min(k, len(distances))]
    return [
        RankedResult(
            id=int(i),
            label=labels[int(i)] if labels is not None else "",
            distance=float(distances[i]),
        )
        for i in order
    ]


def normalize_features(index: FeatureIndex) -> FeatureIndex:
    """Z-score every dimension using the index's own statistics.

    Zero-variance dimensions pass through unscaled. The statistics are
    stored on the returned index so queries can be transformed identically.
    """
    X = index.features.astype(np.float64)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    constant = std == 0
    mean = np.where(constant, 0.0, mean)
    std = np.where(constant, 1.0, std)
    stats = NormStats(mean=mean, std=std)
    normalized = ((X - mean) / std).astype(np.float32)
    return replace(index, features=normalized, norm_stats=stats)


def prepare_query(index: FeatureIndex, descriptor: np.ndarray) -> np.ndarray:
    """Quantize a fresh descriptor to index precision and apply stored stats.

    Mirrors what ingestion did to the stored records, so querying with an
    indexed image reproduces its row exactly.
    """
    q = np.asarray(descriptor, dtype=np.float32).astype(np.float64)
    if index.norm_stats is not None:
        q = (q - index.norm_stats.mean) / index.norm_stats.std
        q = q.astype(np.float32).astype(np.float64)
    return q


def search(
    index: FeatureIndex,
    descriptor: np.ndarray,
    k: int = DEFAULT_K,
    metric: Metric = L1,
) -> list[RankedResult]:
    """Top-k records for a raw (un-normalized) descriptor."""
    q = prepare_query(index, descriptor)
    return top_k(batch_distances(q, index, metric), k, labels=index.labels)


def rerank_by_class(
    results: list[RankedResult], preferred_label: str
) -> list[RankedResult]:
    """Stable partition: results matching the preferred class first.

    Hybrid retrieval hook (off by default): instead of restricting retrieval
    to the predicted class, rank globally by distance and promote the
    predicted class, so a wrong class prediction demotes rather than
    discards the true matches.
    """
    hits = [r for r in results if r.label == preferred_label]
    rest = [r for r in results if r.label != preferred_label]
    return hits + rest
