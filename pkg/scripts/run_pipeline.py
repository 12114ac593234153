#!/usr/bin/env python3
"""End-to-end experiment: corpus -> index -> kNN and SVM evaluation.

Reproduces the desk-scale retrieval numbers from a single seeded run and
prints stage timings.
"""

import argparse
import tempfile
import time
from pathlib import Path

import numpy as np

from cbir.evaluation import evaluate_knn, evaluate_svm, stratified_split
from cbir.retrieval import normalize_features
from cbir.store import ingest_dataset, save_index, save_model
from cbir.svm.kernels import KernelSpec
from cbir.svm.multiclass import train_one_vs_one
from cbir.synthetic import generate_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default=None, help="default: a fresh temp dir")
    parser.add_argument("--classes", type=int, default=10)
    parser.add_argument("--per-class", type=int, default=20)
    parser.add_argument("--seed", type=int, default=20240501)
    parser.add_argument("--kernel", default="gaussian", choices=("linear", "gaussian"))
    parser.add_argument("--C", type=float, default=10.0)
    parser.add_argument("--normalize", action="store_true", help="z-score the kNN index")
    args = parser.parse_args()

    workdir = Path(args.workdir) if args.workdir else Path(tempfile.mkdtemp(prefix="cbir_"))
    workdir.mkdir(parents=True, exist_ok=True)
    print(f"workdir: {workdir}")

    t0 = time.perf_counter()
    corpus = generate_corpus(
        workdir / "corpus", n_classes=args.classes, per_class=args.per_class, seed=args.seed
    )
    t1 = time.perf_counter()
    print(f"[corpus]  {args.classes * args.per_class} images in {t1 - t0:.1f}s")

    index = ingest_dataset(corpus)
    save_index(index, workdir / "index.bin")
    t2 = time.perf_counter()
    print(f"[ingest]  {len(index)} descriptors in {t2 - t1:.1f}s")

    train_rows, test_rows = stratified_split(index, 0.8, seed=args.seed)
    train_index, test_index = index.subset(train_rows), index.subset(test_rows)
    knn_index = normalize_features(train_index) if args.normalize else train_index
    knn = evaluate_knn(knn_index, test_index, ks=(1, 5, 10))
    t3 = time.perf_counter()
    print(f"[knn]     precision@k over {len(test_index)} queries in {t3 - t2:.1f}s")
    for k, p in sorted(knn.precision_at_k.items()):
        print(f"          precision@{k:<3} {p:.3f}")

    model = train_one_vs_one(train_index, KernelSpec(args.kernel), C=args.C, seed=args.seed)
    save_model(model, workdir / "model.bin")
    svm = evaluate_svm(model, test_index)
    t4 = time.perf_counter()
    print(f"[svm]     {len(model.models)} pairwise models in {t4 - t3:.1f}s")
    print(f"          accuracy {svm.accuracy:.3f}")
    worst = int(np.argmin(svm.per_class_accuracy))
    print(f"          weakest class: {svm.classes[worst]} ({svm.per_class_accuracy[worst]:.3f})")
    print(f"[total]   {t4 - t0:.1f}s")


if __name__ == "__main__":
    main()
