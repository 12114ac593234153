import struct

import numpy as np
import pytest

from cbir.errors import BadMagic, EmptyDataset, TruncatedFile, UnsupportedVersion
from cbir.retrieval import normalize_features
from cbir.store import (
    build_index,
    ingest_dataset,
    load_index,
    load_model,
    save_index,
    save_model,
)
from cbir.svm.kernels import KernelSpec
from cbir.svm.multiclass import train_one_vs_one, train_one_vs_rest
from cbir.svm.smo import decision_function


def _toy_index(rng, n=12, dim=7, classes=3):
    X = rng.normal(size=(n, dim)).astype(np.float32)
    labels = [f"class{i % classes}" for i in range(n)]
    paths = [f"/data/img_{i}.png" for i in range(n)]
    return build_index(X, labels, paths)


# --- ingestion -------------------------------------------------------------


def test_ingest_counts_and_labels(small_corpus):
    index = ingest_dataset(small_corpus)
    assert len(index) == 20
    assert len(set(index.labels)) == 4
    assert index.dim == 190
    assert list(index.ids) == list(range(20))


def test_ingest_is_deterministic(small_corpus):
    a = ingest_dataset(small_corpus)
    b = ingest_dataset(small_corpus)
    assert np.array_equal(a.features, b.features)
    assert a.paths == b.paths
    assert a.labels == b.labels


def test_parallel_ingest_matches_sequential(small_corpus):
    seq = ingest_dataset(small_corpus, workers=1)
    par = ingest_dataset(small_corpus, workers=2)
    assert np.array_equal(seq.features, par.features)
    assert seq.labels == par.labels
    assert seq.paths == par.paths


def test_ingest_skips_corrupt_files(small_corpus, tmp_path):
    import shutil

    root = tmp_path / "tree"
    shutil.copytree(small_corpus, root)
    bad = root / sorted(p.name for p in root.iterdir())[0] / "corrupt.png"
    bad.write_bytes(b"this is not a png")
    skipped = []
    index = ingest_dataset(root, on_skip=lambda p, e: skipped.append(p))
    assert len(index) == 20
    assert len(skipped) == 1
    assert skipped[0].name == "corrupt.png"


def test_ingest_empty_root_rejected(tmp_path):
    with pytest.raises(EmptyDataset):
        ingest_dataset(tmp_path)
    (tmp_path / "klass").mkdir()
    (tmp_path / "klass" / "junk.png").write_bytes(b"junk")
    with pytest.raises(EmptyDataset):
        ingest_dataset(tmp_path)


# --- index files -------------------------------------------------------------


def test_index_round_trip_is_bitwise(rng, tmp_path):
    index = _toy_index(rng)
    path = tmp_path / "idx.bin"
    save_index(index, path)
    loaded = load_index(path)
    assert np.array_equal(loaded.features, index.features)
    assert loaded.features.dtype == np.float32
    assert loaded.labels == index.labels
    assert loaded.paths == index.paths
    assert loaded.norm_stats is None


def test_normalized_index_round_trip(rng, tmp_path):
    index = normalize_features(_toy_index(rng))
    path = tmp_path / "idx.bin"
    save_index(index, path)
    loaded = load_index(path)
    assert np.array_equal(loaded.features, index.features)
    assert np.array_equal(loaded.norm_stats.mean, index.norm_stats.mean)
    assert np.array_equal(loaded.norm_stats.std, index.norm_stats.std)


def test_save_is_byte_stable(rng, tmp_path):
    index = _toy_index(rng)
    save_index(index, tmp_path / "a.bin")
    save_index(index, tmp_path / "b.bin")
    assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()


def test_wrong_magic_rejected(rng, tmp_path):
    path = tmp_path / "idx.bin"
    save_index(_toy_index(rng), path)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"NOPE"
    path.write_bytes(bytes(raw))
    with pytest.raises(BadMagic):
        load_index(path)


def test_unsupported_version_rejected(rng, tmp_path):
    path = tmp_path / "idx.bin"
    save_index(_toy_index(rng), path)
    raw = bytearray(path.read_bytes())
    raw[4:6] = struct.pack("<H", 99)
    path.write_bytes(bytes(raw))
    with pytest.raises(UnsupportedVersion):
        load_index(path)


def test_truncated_file_rejected(rng, tmp_path):
    path = tmp_path / "idx.bin"
    save_index(_toy_index(rng), path)
    raw = path.read_bytes()
    path.write_bytes(raw[: len(raw) // 2])
    with pytest.raises(TruncatedFile):
        load_index(path)


def test_model_file_magic_is_distinct(rng, tmp_path):
    # an index file handed to load_model must be refused, and vice versa
    index = _toy_index(rng)
    save_index(index, tmp_path / "idx.bin")
    with pytest.raises(BadMagic):
        load_model(tmp_path / "idx.bin")


# --- model files -------------------------------------------------------------


def test_model_round_trip_reproduces_predictions(rng, tmp_path):
    index = _toy_index(rng, n=18, dim=5)
    model = train_one_vs_one(index, KernelSpec("gaussian"), C=4.0, seed=2)
    path = tmp_path / "model.bin"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.classes == model.classes
    assert loaded.pairs == model.pairs
    probes = rng.normal(size=(100, 5))
    for a, b in zip(model.models, loaded.models):
        assert a.kernel == b.kernel  # sigma preserved exactly
        fa = np.asarray(decision_function(a, probes))
        fb = np.asarray(decision_function(b, probes))
        assert np.array_equal(fa, fb)


def test_one_vs_rest_round_trip(rng, tmp_path):
    index = _toy_index(rng, n=18, dim=5)
    model = train_one_vs_rest(index, KernelSpec("linear"), C=4.0, seed=2)
    path = tmp_path / "model.bin"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.strategy == "one-vs-rest"
    probes = rng.normal(size=(20, 5))
    for a, b in zip(model.models, loaded.models):
        assert np.array_equal(
            np.asarray(decision_function(a, probes)),
            np.asarray(decision_function(b, probes)),
        )


def test_corrupted_model_payload_rejected(rng, tmp_path):
    index = _toy_index(rng, n=18, dim=5)
    model = train_one_vs_one(index, KernelSpec("linear"), C=4.0)
    path = tmp_path / "model.bin"
    save_model(model, path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-40])  # chop into the final sv/alpha block
    with pytest.raises(TruncatedFile):
        load_model(path)


# --- subset -------------------------------------------------------------------


def test_subset_redensifies_ids(rng):
    index = _toy_index(rng)
    sub = index.subset([3, 5, 9])
    assert len(sub) == 3
    assert list(sub.ids) == [0, 1, 2]
    assert sub.labels == [index.labels[3], index.labels[5], index.labels[9]]
    assert np.array_equal(sub.features[1], index.features[5])
