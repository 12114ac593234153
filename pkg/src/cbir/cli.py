"""Command-line driver: index, query, train, classify, retrieve, eval, serve.

Exit codes: 0 success, 1 usage error, 2 data error. Every command accepts
--json PATH for a machine-readable report; index and train additionally
write a sidecar next to their output file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .errors import CbirError
from .evaluation import evaluate_knn, evaluate_svm, stratified_split
from .features import compose_descriptor
from .image import load_image
from .retrieval import (
    batch_distances,
    normalize_features,
    parse_metric,
    prepare_query,
    rerank_by_class,
    top_k,
)
from .store import FeatureIndex, ingest_dataset, load_index, load_model, save_index, save_model
from .svm.kernels import KernelSpec
from .svm.multiclass import predict_class, train_one_vs_one, train_one_vs_rest


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; we reserve 2 for
    data errors, so remap usage problems to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _write_json(path: str | None, payload: dict) -> None:
    if path:
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _kernel_from_args(args) -> KernelSpec:
    name = args.kernel.lower()
    if name in ("linear",):
        return KernelSpec("linear")
    if name in ("poly", "polynomial"):
        return KernelSpec("polynomial", c=args.coef0, degree=args.degree)
    if name in ("gaussian", "rbf"):
        return KernelSpec("gaussian", sigma=args.sigma)
    raise CbirError(f"unknown kernel {args.kernel!r}")


def _load_index_for_query(path: str, normalize: bool) -> FeatureIndex:
    index = load_index(path)
    if normalize and index.norm_stats is None:
        index = normalize_features(index)
    return index


def _print_results(results, paths) -> None:
    print(f"{'rank':>4}  {'id':>6}  {'distance':>12}  {'label':<20}  path")
    for rank, r in enumerate(results, start=1):
        print(f"{rank:>4}  {r.id:>6}  {r.distance:>12.6f}  {r.label:<20}  {paths[r.id]}")


def cmd_index(args) -> int:
    skipped = []
    started = time.perf_counter()
    index = ingest_dataset(args.root, workers=args.workers, on_skip=lambda p, e: skipped.append(str(p)))
    if args.normalize:
        index = normalize_features(index)
    save_index(index, args.out)
    elapsed = time.perf_counter() - started
    classes = sorted(set(index.labels))
    print(
        f"Indexed {len(index)} records, {len(classes)} classes in {elapsed:.1f}s "
        f"(skipped {len(skipped)}) -> {args.out}"
    )
    report = {
        "records": len(index),
        "classes": classes,
        "skipped": skipped,
        "normalized": args.normalize,
        "elapsed_s": elapsed,
        "out": str(args.out),
    }
    _write_json(str(args.out) + ".json", report)
    _write_json(args.json, report)
    return 0


def cmd_query(args) -> int:
    index = _load_index_for_query(args.index, args.normalize)
    descriptor = compose_descriptor(load_image(args.image))
    q = prepare_query(index, descriptor)
    results = top_k(batch_distances(q, index, parse_metric(args.metric)), args.k, labels=index.labels)
    _print_results(results, index.paths)
    _write_json(
        args.json,
        {
            "query": str(args.image),
            "metric": args.metric,
            "k": args.k,
            "results": [vars(r) for r in results],
        },
    )
    return 0


def cmd_train(args) -> int:
    index = load_index(args.index)
    spec = _kernel_from_args(args)
    started = time.perf_counter()
    if args.strategy == "ovo":
        model = train_one_vs_one(index, spec, C=args.C, kkt_tol=args.kkt_tol, seed=args.seed)
        n_models = len(model.models)
    else:
        model = train_one_vs_rest(index, spec, C=args.C, kkt_tol=args.kkt_tol, seed=args.seed)
        n_models = len(model.models)
    save_model(model, args.out)
    elapsed = time.perf_counter() - started
    print(
        f"Trained {n_models} binary models over {len(model.classes)} classes "
        f"({args.strategy}, {spec.kind} kernel) in {elapsed:.1f}s -> {args.out}"
    )
    report = {
        "classes": list(model.classes),
        "strategy": args.strategy,
        "kernel": spec.kind,
        "C": args.C,
        "seed": args.seed,
        "n_models": n_models,
        "all_converged": all(m.converged for m in model.models),
        "elapsed_s": elapsed,
        "out": str(args.out),
    }
    _write_json(str(args.out) + ".json", report)
    _write_json(args.json, report)
    return 0


def cmd_classify(args) -> int:
    model = load_model(args.model)
    descriptor = compose_descriptor(load_image(args.image))
    q = np.asarray(descriptor, dtype=np.float32).astype(np.float64)
    label, votes = predict_class(model, q)
    print(f"predicted class: {label}")
    for name in model.classes:
        print(f"  {name:<20} {votes[name]:>3} votes")
    _write_json(args.json, {"image": str(args.image), "predicted_class": label, "votes": votes})
    return 0


def cmd_retrieve(args) -> int:
    model = load_model(args.model)
    index = load_index(args.index)
    descriptor = compose_descriptor(load_image(args.image))
    q = prepare_query(index, descriptor)
    label, _ = predict_class(model, q)
    metric = parse_metric(args.metric)
    if args.hybrid:
        # global ranking with the predicted class promoted, instead of a
        # hard class restriction
        ranked = rerank_by_class(
            top_k(batch_distances(q, index, metric), args.k, labels=index.labels),
            label,
        )
        results = [{"id": r.id, "label": r.label, "distance": r.distance} for r in ranked]
    else:
        labels = np.asarray(index.labels)
        rows = np.flatnonzero(labels == label)
        if rows.size == 0:
            raise CbirError(f"predicted class {label!r} has no records in the index")
        sub = index.subset(rows)
        ranked = top_k(batch_distances(q, sub, metric), args.k)
        results = [
            {"id": int(rows[r.id]), "label": label, "distance": r.distance}
            for r in ranked
        ]
    print(f"predicted class: {label}")
    print(f"{'rank':>4}  {'id':>6}  {'distance':>12}  {'label':<20}  path")
    for rank, row in enumerate(results, start=1):
        print(
            f"{rank:>4}  {row['id']:>6}  {row['distance']:>12.6f}  "
            f"{row['label']:<20}  {index.paths[row['id']]}"
        )
    _write_json(
        args.json,
        {"image": str(args.image), "predicted_class": label, "results": results},
    )
    return 0


def cmd_eval(args) -> int:
    index = load_index(args.index)
    train_rows, test_rows = stratified_split(index, args.split, seed=args.seed)
    train_index = index.subset(train_rows)
    test_index = index.subset(test_rows)
    if args.mode == "knn":
        if args.normalize:
            train_index = normalize_features(train_index)
        ks = tuple(sorted({1, 5, args.k}))
        report = evaluate_knn(train_index, test_index, ks=ks, metric=parse_metric(args.metric))
        print(f"kNN evaluation on {len(test_index)} held-out queries:")
        for k, p in sorted(report.precision_at_k.items()):
            print(f"  precision@{k:<3} {p:.3f}")
    else:
        spec = _kernel_from_args(args)
        model = train_one_vs_one(train_index, spec, C=args.C, kkt_tol=args.kkt_tol, seed=args.seed)
        report = evaluate_svm(model, test_index)
        print(f"SVM evaluation on {len(test_index)} held-out images:")
        print(f"  accuracy {report.accuracy:.3f}")
        for name, acc in zip(report.classes, report.per_class_accuracy):
            print(f"  {name:<22} {acc:.3f}")
    payload = report.to_dict()
    payload.update({"split": args.split, "seed": args.seed, "train": len(train_index), "test": len(test_index)})
    _write_json(args.json, payload)
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    index = load_index(args.index)
    model = load_model(args.model) if args.model else None
    serve(index, model, static_dir=args.static_dir, host=args.host, port=args.port)
    return 0


def _add_kernel_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kernel", default="linear", help="linear, poly, or gaussian")
    p.add_argument("--C", type=float, default=10.0, help="soft-margin box constraint")
    p.add_argument("--degree", type=int, default=2, help="polynomial degree")
    p.add_argument("--coef0", type=float, default=0.0, help="polynomial offset c")
    p.add_argument("--sigma", type=float, default=None, help="gaussian width (default: median heuristic)")
    p.add_argument("--kkt-tol", type=float, default=1e-3, dest="kkt_tol")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> _Parser:
    parser = _Parser(prog="cbir", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="extract descriptors for a directory-per-class tree")
    p.add_argument("root")
    p.add_argument("out")
    p.add_argument("--normalize", action="store_true", help="store z-scored features")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_index)

    p = sub.add_parser("query", help="top-k nearest records for an image")
    p.add_argument("index")
    p.add_argument("image")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--metric", default="l1", help="l1, l2, linf, or p<value>")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_query)

    p = sub.add_parser("train", help="train a multiclass SVM over an index")
    p.add_argument("index")
    p.add_argument("out")
    _add_kernel_flags(p)
    p.add_argument("--strategy", choices=("ovo", "ova"), default="ovo")
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("classify", help="predict the class of an image")
    p.add_argument("model")
    p.add_argument("image")
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("retrieve", help="classify, then rank within the predicted class")
    p.add_argument("model")
    p.add_argument("index")
    p.add_argument("image")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--metric", default="l1")
    p.add_argument(
        "--hybrid",
        action="store_true",
        help="rank globally and promote the predicted class instead of "
        "restricting to it",
    )
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_retrieve)

    p = sub.add_parser("eval", help="hold-out evaluation of knn or svm retrieval")
    p.add_argument("index")
    p.add_argument("--mode", choices=("knn", "svm"), default="knn")
    p.add_argument("--split", type=float, default=0.8, help="train fraction")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--metric", default="l1")
    p.add_argument("--normalize", action="store_true")
    _add_kernel_flags(p)
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP query service")
    p.add_argument("--index", required=True)
    p.add_argument("--model", default=None)
    p.add_argument("--static-dir", default=None, dest="static_dir")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CbirError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
