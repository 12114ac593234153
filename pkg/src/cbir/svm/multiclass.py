"""One-vs-one multiclass voting (default) and one-vs-rest scoring."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from ..errors import DegenerateLabels
from .kernels import KernelSpec
from .smo import BinarySvmModel, decision_function, train_binary_smo

if TYPE_CHECKING:
    from ..store import FeatureIndex


@dataclass(frozen=True)
class MulticlassModel:
    """C(k,2) pairwise binary models; pair (i, j) treats class i as +1."""

    classes: tuple[str, ...]
    pairs: tuple[tuple[int, int], ...]
    models: tuple[BinarySvmModel, ...]

    @property
    def strategy(self) -> str:
        return "one-vs-one"


@dataclass(frozen=True)
class OneVsRestModel:
    """One binary model per class (class i as +1, all others as -1)."""

    classes: tuple[str, ...]
    models: tuple[BinarySvmModel, ...]

    @property
    def strategy(self) -> str:
        return "one-vs-rest"


def _class_rows(index: "FeatureIndex") -> tuple[tuple[str, ...], dict[str, np.ndarray]]:
    classes = tuple(sorted(set(index.labels)))
    if len(classes) < 2:
        raise DegenerateLabels(f"need at least 2 classes, got {len(classes)}")
    labels = np.asarray(index.labels)
    return classes, {c: np.flatnonzero(labels == c) for c in classes}


def train_one_vs_one(
    index: "FeatureIndex",
    spec: KernelSpec = KernelSpec("linear"),
    C: float = 10.0,
    kkt_tol: float = 1e-3,
    seed: int = 0,
) -> MulticlassModel:
    """Train k(k-1)/2 pairwise models over the index, in fixed pair order."""
    classes, rows = _class_rows(index)
    X = index.features.astype(np.float64)
    pairs = []
    models = []
    for a in range(len(classes)):
        for b in range(a + 1, len(classes)):
            ra, rb = rows[classes[a]], rows[classes[b]]
            sub = np.concatenate([ra, rb])
            y = np.concatenate([np.ones(len(ra)), -np.ones(len(rb))])
            models.append(
                train_binary_smo(
                    X[sub], y, spec, C=C, kkt_tol=kkt_tol, seed=seed + len(pairs)
                )
            )
            pairs.append((a, b))
    return MulticlassModel(classes=classes, pairs=tuple(pairs), models=tuple(models))


def train_one_vs_rest(
    index: "FeatureIndex",
    spec: KernelSpec = KernelSpec("linear"),
    C: float = 10.0,
    kkt_tol: float = 1e-3,
    seed: int = 0,
) -> OneVsRestModel:
    """Train one model per class against the union of all other classes."""
    classes, rows = _class_rows(index)
    X = index.features.astype(np.float64)
    labels = np.asarray(index.labels)
    models = []
    for a, name in enumerate(classes):
        y = np.where(labels == name, 1.0, -1.0)
        models.append(train_binary_smo(X, y, spec, C=C, kkt_tol=kkt_tol, seed=seed + a))
    return OneVsRestModel(classes=classes, models=tuple(models))


def tally_votes(
    n_classes: int,
    pairs: Sequence[tuple[int, int]],
    decisions: Sequence[float],
) -> tuple[int, np.ndarray]:
    """Resolve pairwise decision values into a winning class index.

    Each pair (i, j) votes for i when its decision value is >= 0, else for
    j. Ties on vote count are broken by the larger sum of |decision value|
    over the tied class's pairwise models, then by class order.
    """
    votes = np.zeros(n_classes, dtype=np.int64)
    strength = np.zeros(n_classes)
    for (i, j), f in zip(pairs, decisions):
        votes[i if f >= 0 else j] += 1
        strength[i] += abs(f)
        strength[j] += abs(f)
    best = votes.max()
    tied = np.flatnonzero(votes == best)
    if len(tied) == 1:
        return int(tied[0]), votes
    return int(tied[np.argmax(strength[tied])]), votes


def predict_class(
    model: MulticlassModel | OneVsRestModel, x: np.ndarray
) -> tuple[str, dict[str, int]]:
    """Predict the class of a raw descriptor; returns (label, votes per class).

    For one-vs-rest the argmax decision value wins and the vote map is 1 for
    the winner, 0 elsewhere.
    """
    if isinstance(model, OneVsRestModel):
        scores = np.array([decision_function(m, x) for m in model.models])
        winner = int(np.argmax(scores))
        votes = {c: int(i == winner) for i, c in enumerate(model.classes)}
        return model.classes[winner], votes
    decisions = [decision_function(m, x) for m in model.models]
    winner, votes = tally_votes(len(model.classes), model.pairs, decisions)
    return model.classes[winner], {c: int(v) for c, v in zip(model.classes, votes)}
