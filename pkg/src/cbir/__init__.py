"""Content-based image retrieval: descriptors, exact kNN, and kernel SVM."""

from .features import DESCRIPTOR_DIM, LAYOUT, compose_descriptor
from .image import ImageRaster, load_image, preprocess, rgb_to_hsv
from .retrieval import Metric, RankedResult, normalize_features, search, top_k
from .store import (
    FeatureIndex,
    build_index,
    ingest_dataset,
    load_index,
    load_model,
    save_index,
    save_model,
)
from .svm import (
    KernelSpec,
    MulticlassModel,
    predict_class,
    train_binary_smo,
    train_one_vs_one,
)

__version__ = "0.1.0"

__all__ = [
    "DESCRIPTOR_DIM",
    "LAYOUT",
    "FeatureIndex",
    "ImageRaster",
    "KernelSpec",
    "Metric",
    "MulticlassModel",
    "RankedResult",
    "build_index",
    "compose_descriptor",
    "ingest_dataset",
    "load_image",
    "load_index",
    "load_model",
    "normalize_features",
    "predict_class",
    "preprocess",
    "rgb_to_hsv",
    "save_index",
    "save_model",
    "search",
    "top_k",
    "train_binary_smo",
    "train_one_vs_one",
]
