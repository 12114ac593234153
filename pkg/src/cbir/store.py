"""Dataset ingestion, the binary feature index format, and model files.

Index file layout (all little-endian):

    magic  b"CBIR" | version u16 | record count u64 | dim u16 | flags u16
    [flags bit 0] normalization stats: mean f64*dim, std f64*dim
    per record: id u64 | label-id u16 | dim * f32
    label table: count u16, then per label u16 length + UTF-8 bytes
    path manifest: per record u32 length + UTF-8 bytes

Model files share the same framing with magic b"CBIM"; all model floats are
stored as f64 so a reloaded model reproduces predictions bit for bit.
"""

from __future__ import annotations

import logging
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import BinaryIO, Callable, Sequence

import numpy as np

from .errors import (
    BadMagic,
    EmptyDataset,
    InvalidImage,
    TruncatedFile,
    UnsupportedVersion,
)
from .features import compose_descriptor
from .image import load_image
from .svm.kernels import KernelSpec
from .svm.multiclass import MulticlassModel, OneVsRestModel
from .svm.smo import BinarySvmModel

logger = logging.getLogger(__name__)

INDEX_MAGIC = b"CBIR"
MODEL_MAGIC = b"CBIM"
FORMAT_VERSION = 1
FLAG_NORMALIZED = 1

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp"}


@dataclass(frozen=True)
class NormStats:
    """Per-dimension affine transform applied before distance computations."""

    mean: np.ndarray
    std: np.ndarray


@dataclass(frozen=True)
class FeatureIndex:
    """Immutable collection of (id, label, descriptor) records.

    Descriptors are kept as float32 (the on-disk precision); ids are dense
    from 0 in record order.
    """

    features: np.ndarray  # (N, dim) float32
    label_ids: np.ndarray  # (N,) uint16
    label_table: tuple[str, ...]
    paths: tuple[str, ...]
    norm_stats: NormStats | None = None

    def __post_init__(self):
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-D array")
        if len(self.label_ids) != len(self.features) or len(self.paths) != len(self.features):
            raise ValueError("records, labels, and paths must align")

    def __len__(self) -> int:
        return len(self.features)

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def ids(self) -> np.ndarray:
        return np.arange(len(self), dtype=np.uint64)

    def label_of(self, record_id: int) -> str:
        return self.label_table[self.label_ids[record_id]]

    @property
    def labels(self) -> list[str]:
        return [self.label_table[i] for i in self.label_ids]

    def descriptor(self, record_id: int) -> np.ndarray:
        return self.features[record_id].astype(np.float64)

    def subset(self, row_ids: Sequence[int]) -> "FeatureIndex":
        """New index from the selected rows; ids are re-densified."""
        rows = np.asarray(row_ids, dtype=np.int64)
        return replace(
            self,
            features=self.features[rows].copy(),
            label_ids=self.label_ids[rows].copy(),
            paths=tuple(self.paths[i] for i in rows),
        )


def build_index(
    features: np.ndarray,
    labels: Sequence[str],
    paths: Sequence[str] | None = None,
    norm_stats: NormStats | None = None,
) -> FeatureIndex:
    """Assemble an index from in-memory descriptors and label strings."""
    table = tuple(dict.fromkeys(labels))
    lookup = {name: i for i, name in enumerate(table)}
    label_ids = np.array([lookup[l] for l in labels], dtype=np.uint16)
    if paths is None:
        paths = tuple("" for _ in labels)
    return FeatureIndex(
        features=np.ascontiguousarray(features, dtype=np.float32),
        label_ids=label_ids,
        label_table=table,
        paths=tuple(paths),
        norm_stats=norm_stats,
    )


def _extract_one(path_str: str) -> np.ndarray:
    return compose_descriptor(load_image(path_str))


def ingest_dataset(
    root: str | Path,
    workers: int = 1,
    on_skip: Callable[[Path, Exception], None] | None = None,
) -> FeatureIndex:
    """Extract descriptors for every decodable image under root.

    Each immediate subdirectory of root is one class; the label is the
    directory name. Files are processed in lexicographic path order so
    ingestion is deterministic; undecodable files are skipped with a
    warning.
    """
    root = Path(root)
    class_dirs = sorted(p for p in root.iterdir() if p.is_dir()) if root.is_dir() else []
    if not class_dirs:
        raise EmptyDataset(f"no class subdirectories under {root}")

    files: list[tuple[Path, str]] = []
    for class_dir in class_dirs:
        for f in sorted(class_dir.rglob("*")):
            if f.is_file() and f.suffix.lower() in IMAGE_SUFFIXES:
                files.append((f, class_dir.name))

    rows: list[np.ndarray] = []
    labels: list[str] = []
    paths: list[str] = []

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_try_extract, [str(f) for f, _ in files])
            for (f, label), desc in zip(files, results):
                if desc is None:
                    logger.warning("skipping undecodable file %s", f)
                    if on_skip:
                        on_skip(f, InvalidImage("undecodable"))
                    continue
                rows.append(desc)
                labels.append(label)
                paths.append(str(f))
    else:
        for f, label in files:
            try:
                rows.append(_extract_one(str(f)))
            except InvalidImage as exc:
                logger.warning("skipping undecodable file %s: %s", f, exc)
                if on_skip:
                    on_skip(f, exc)
                continue
            labels.append(label)
            paths.append(str(f))

    if not rows:
        raise EmptyDataset(f"no decodable images under {root}")
    return build_index(np.vstack(rows), labels, paths)


def _try_extract(path_str: str) -> np.ndarray | None:
    try:
        return _extract_one(path_str)
    except InvalidImage:
        return None


# --- binary IO helpers -------------------------------------------------------


def _read_exact(fh: BinaryIO, n: int) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise TruncatedFile(f"wanted {n} bytes, got {len(data)}")
    return data


def _write_str(fh: BinaryIO, text: str, fmt: str = "<H") -> None:
    raw = text.encode("utf-8")
    fh.write(struct.pack(fmt, len(raw)))
    fh.write(raw)


def _read_str(fh: BinaryIO, fmt: str = "<H") -> str:
    (n,) = struct.unpack(fmt, _read_exact(fh, struct.calcsize(fmt)))
    return _read_exact(fh, n).decode("utf-8")


def _read_array(fh: BinaryIO, dtype: str, count: int) -> np.ndarray:
    raw = _read_exact(fh, np.dtype(dtype).itemsize * count)
    return np.frombuffer(raw, dtype=dtype).copy()


def _check_header(fh: BinaryIO, magic: bytes) -> None:
    got = _read_exact(fh, 4)
    if got != magic:
        raise BadMagic(f"expected {magic!r}, got {got!r}")
    (version,) = struct.unpack("<H", _read_exact(fh, 2))
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"format version {version} not supported")


def _atomic_write(path: str | Path, writer: Callable[[BinaryIO], None]) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        writer(fh)
    tmp.replace(path)


# --- index persistence -------------------------------------------------------


def save_index(index: FeatureIndex, path: str | Path) -> None:
    """Write the index in the binary format described in the module docstring."""

    def writer(fh: BinaryIO) -> None:
        flags = FLAG_NORMALIZED if index.norm_stats is not None else 0
        fh.write(INDEX_MAGIC)
        fh.write(struct.pack("<HQHH", FORMAT_VERSION, len(index), index.dim, flags))
        if index.norm_stats is not None:
            fh.write(index.norm_stats.mean.astype("<f8").tobytes())
            fh.write(index.norm_stats.std.astype("<f8").tobytes())
        feats = index.features.astype("<f4")
        for i in range(len(index)):
            fh.write(struct.pack("<QH", i, int(index.label_ids[i])))
            fh.write(feats[i].tobytes())
        fh.write(struct.pack("<H", len(index.label_table)))
        for name in index.label_table:
            _write_str(fh, name)
        for p in index.paths:
            _write_str(fh, p, "<I")

    _atomic_write(path, writer)


def load_index(path: str | Path) -> FeatureIndex:
    """Read an index file; the float payload round-trips bit for bit."""
    with open(path, "rb") as fh:
        _check_header(fh, INDEX_MAGIC)
        count, dim, flags = struct.unpack("<QHH", _read_exact(fh, 12))
        norm_stats = None
        if flags & FLAG_NORMALIZED:
            mean = _read_array(fh, "<f8", dim)
            std = _read_array(fh, "<f8", dim)
            norm_stats = NormStats(mean=mean, std=std)
        features = np.empty((count, dim), dtype=np.float32)
        label_ids = np.empty(count, dtype=np.uint16)
        for i in range(count):
            rec_id, label_id = struct.unpack("<QH", _read_exact(fh, 10))
            if rec_id != i:
                raise TruncatedFile(f"record id {rec_id} out of order at row {i}")
            label_ids[i] = label_id
            features[i] = _read_array(fh, "<f4", dim)
        (n_labels,) = struct.unpack("<H", _read_exact(fh, 2))
        table = tuple(_read_str(fh) for _ in range(n_labels))
        paths = tuple(_read_str(fh, "<I") for _ in range(count))
    return FeatureIndex(
        features=features,
        label_ids=label_ids,
        label_table=table,
        paths=paths,
        norm_stats=norm_stats,
    )


# --- model persistence -------------------------------------------------------

_KERNEL_CODES = {"linear": 0, "polynomial": 1, "gaussian": 2}
_KERNEL_NAMES = {v: k for k, v in _KERNEL_CODES.items()}


def _write_kernel(fh: BinaryIO, spec: KernelSpec) -> None:
    fh.write(struct.pack("<B", _KERNEL_CODES[spec.kind]))
    fh.write(struct.pack("<dI", spec.c, spec.degree))
    sigma = spec.sigma if spec.sigma is not None else float("nan")
    fh.write(struct.pack("<d", sigma))


def _read_kernel(fh: BinaryIO) -> KernelSpec:
    (code,) = struct.unpack("<B", _read_exact(fh, 1))
    c, degree = struct.unpack("<dI", _read_exact(fh, 12))
    (sigma,) = struct.unpack("<d", _read_exact(fh, 8))
    return KernelSpec(
        kind=_KERNEL_NAMES[code],
        c=c,
        degree=degree,
        sigma=None if np.isnan(sigma) else sigma,
    )


def _write_binary_model(fh: BinaryIO, model: BinarySvmModel) -> None:
    n_sv, dim = model.support_vectors.shape
    _write_kernel(fh, model.kernel)
    fh.write(struct.pack("<dBIH", model.C, int(model.converged), n_sv, dim))
    fh.write(model.scale_mean.astype("<f8").tobytes())
    fh.write(model.scale_std.astype("<f8").tobytes())
    fh.write(model.alphas.astype("<f8").tobytes())
    fh.write(model.sv_labels.astype("<i1").tobytes())
    fh.write(struct.pack("<d", model.b))
    fh.write(model.support_vectors.astype("<f8").tobytes())


def _read_binary_model(fh: BinaryIO) -> BinarySvmModel:
    kernel = _read_kernel(fh)
    C, converged, n_sv, dim = struct.unpack("<dBIH", _read_exact(fh, 15))
    scale_mean = _read_array(fh, "<f8", dim)
    scale_std = _read_array(fh, "<f8", dim)
    alphas = _read_array(fh, "<f8", n_sv)
    sv_labels = _read_array(fh, "<i1", n_sv).astype(np.int8)
    (b,) = struct.unpack("<d", _read_exact(fh, 8))
    svs = _read_array(fh, "<f8", n_sv * dim).reshape(n_sv, dim)
    return BinarySvmModel(
        support_vectors=svs,
        sv_labels=sv_labels,
        alphas=alphas,
        b=b,
        kernel=kernel,
        C=C,
        scale_mean=scale_mean,
        scale_std=scale_std,
        converged=bool(converged),
    )


def save_model(model: MulticlassModel | OneVsRestModel, path: str | Path) -> None:
    """Serialize a multiclass model (either strategy) with f64 payloads."""

    def writer(fh: BinaryIO) -> None:
        fh.write(MODEL_MAGIC)
        strategy = 0 if isinstance(model, MulticlassModel) else 1
        fh.write(struct.pack("<HB", FORMAT_VERSION, strategy))
        fh.write(struct.pack("<H", len(model.classes)))
        for name in model.classes:
            _write_str(fh, name)
        if isinstance(model, MulticlassModel):
            fh.write(struct.pack("<I", len(model.models)))
            for (i, j), binary in zip(model.pairs, model.models):
                fh.write(struct.pack("<HH", i, j))
                _write_binary_model(fh, binary)
        else:
            fh.write(struct.pack("<I", len(model.models)))
            for binary in model.models:
                _write_binary_model(fh, binary)

    _atomic_write(path, writer)


def load_model(path: str | Path) -> MulticlassModel | OneVsRestModel:
    """Read a model file written by save_model."""
    with open(path, "rb") as fh:
        _check_header(fh, MODEL_MAGIC)
        (strategy,) = struct.unpack("<B", _read_exact(fh, 1))
        (n_classes,) = struct.unpack("<H", _read_exact(fh, 2))
        classes = tuple(_read_str(fh) for _ in range(n_classes))
        (n_models,) = struct.unpack("<I", _read_exact(fh, 4))
        if strategy == 0:
            pairs = []
            models = []
            for _ in range(n_models):
                i, j = struct.unpack("<HH", _read_exact(fh, 4))
                pairs.append((i, j))
                models.append(_read_binary_model(fh))
            return MulticlassModel(classes=classes, pairs=tuple(pairs), models=tuple(models))
        models = tuple(_read_binary_model(fh) for _ in range(n_models))
        return OneVsRestModel(classes=classes, models=models)
