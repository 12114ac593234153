"""Train/test splitting and retrieval/classification quality reports."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter
from .retrieval import Metric, L1, batch_distances, prepare_query, top_k
from .store import FeatureIndex
from .svm.multiclass import MulticlassModel, OneVsRestModel, predict_class


def stratified_split(
    index: FeatureIndex, train_fraction: float = 0.8, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic per-class shuffle into (train_rows, test_rows).

    Every class keeps at least one training record; a class contributes test
    records only when it has more than one member.
    """
    if not 0.0 < train_fraction < 1.0:
        raise InvalidParameter("train fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    labels = np.asarray(index.labels)
    train: list[int] = []
    test: list[int] = []
    for name in sorted(set(labels)):
        rows = np.flatnonzero(labels == name)
        rows = rows[rng.permutation(len(rows))]
        n_train = min(max(1, round(train_fraction * len(rows))), len(rows))
        if n_train == len(rows) and len(rows) > 1:
            n_train -= 1
        train.extend(rows[:n_train])
        test.extend(rows[n_train:])
    return np.sort(np.array(train, dtype=np.int64)), np.sort(np.array(test, dtype=np.int64))


@dataclass
class EvalReport:
    """Quality summary for either retrieval (precision@k) or classification."""

    mode: str
    classes: list[str]
    precision_at_k: dict[int, float] = field(default_factory=dict)
    accuracy: float | None = None
    confusion: np.ndarray | None = None  # rows = true class, cols = predicted
    per_class_accuracy: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"mode": self.mode, "classes": self.classes}
        if self.precision_at_k:
            out["precision_at_k"] = {str(k): v for k, v in self.precision_at_k.items()}
        if self.accuracy is not None:
            out["accuracy"] = self.accuracy
            out["confusion"] = self.confusion.tolist()
            out["per_class_accuracy"] = self.per_class_accuracy
        return out


def evaluate_knn(
    train_index: FeatureIndex,
    test_index: FeatureIndex,
    ks: tuple[int, ...] = (1, 5, 10),
    metric: Metric = L1,
) -> EvalReport:
    """Mean precision@k over the test queries against the train index."""
    labels = train_index.labels
    max_k = max(ks)
    per_k_hits = {k: [] for k in ks}
    for row in range(len(test_index)):
        q = prepare_query(train_index, test_index.descriptor(row))
        results = top_k(batch_distances(q, train_index, metric), max_k, labels=labels)
        truth = test_index.label_of(row)
        flags = [r.label == truth for r in results]
        for k in ks:
            take = flags[: min(k, len(flags))]
            per_k_hits[k].append(sum(take) / len(take))
    classes = sorted(set(labels))
    return EvalReport(
        mode="knn",
        classes=classes,
        precision_at_k={k: float(np.mean(v)) for k, v in per_k_hits.items()},
    )


def evaluate_svm(
    model: MulticlassModel | OneVsRestModel, test_index: FeatureIndex
) -> EvalReport:
    """Accuracy, confusion matrix, and per-class accuracy on the test set."""
    classes = list(model.classes)
    pos = {c: i for i, c in enumerate(classes)}
    confusion = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for row in range(len(test_index)):
        predicted, _ = predict_class(model, test_index.descriptor(row))
        confusion[pos[test_index.label_of(row)], pos[predicted]] += 1
    totals = confusion.sum(axis=1)
    per_class = [
        float(confusion[i, i] / totals[i]) if totals[i] else 0.0
        for i in range(len(classes))
    ]
    accuracy = float(confusion.trace() / confusion.sum()) if confusion.sum() else 0.0
    return EvalReport(
        mode="svm",
        classes=classes,
        accuracy=accuracy,
        confusion=confusion,
        per_class_accuracy=per_class,
    )
