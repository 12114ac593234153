"""Kernel SVM trained on the dual problem, with one-vs-one multiclass voting."""

from .kernels import (
    KernelSpec,
    MercerResult,
    kernel_eval,
    kernel_matrix,
    mercer_check,
    phi_poly2,
)
from .multiclass import (
    MulticlassModel,
    OneVsRestModel,
    predict_class,
    tally_votes,
    train_one_vs_one,
    train_one_vs_rest,
)
from .smo import (
    BinarySvmModel,
    decision_function,
    functional_margin,
    geometric_margin,
    intercept_from_hyperplane,
    train_binary_smo,
)

__all__ = [
    "BinarySvmModel",
    "KernelSpec",
    "MercerResult",
    "MulticlassModel",
    "OneVsRestModel",
    "decision_function",
    "functional_margin",
    "geometric_margin",
    "intercept_from_hyperplane",
    "kernel_eval",
    "kernel_matrix",
    "mercer_check",
    "phi_poly2",
    "predict_class",
    "tally_votes",
    "train_binary_smo",
    "train_one_vs_one",
    "train_one_vs_rest",
]
