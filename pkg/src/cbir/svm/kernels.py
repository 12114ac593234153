"""Kernel functions, Gram matrices, and the Mercer PSD check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..errors import DimensionError, InvalidParameter, ShapeError

KernelKind = Literal["linear", "polynomial", "gaussian"]


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus parameters.

    polynomial: (x.z + c)^degree with c >= 0, degree >= 1.
    gaussian:   exp(-|x-z|^2 / (2 sigma^2)); sigma=None defers to the
                median-pairwise-distance heuristic at training time.
    """

    kind: KernelKind = "linear"
    c: float = 0.0
    degree: int = 2
    sigma: float | None = None

    def __post_init__(self):
        if self.kind not in ("linear", "polynomial", "gaussian"):
            raise InvalidParameter(f"unknown kernel kind {self.kind!r}")
        if self.kind == "polynomial":
            if self.c < 0:
                raise InvalidParameter("polynomial offset c must be >= 0")
            if self.degree < 1:
                raise InvalidParameter("polynomial degree must be >= 1")
        if self.kind == "gaussian" and self.sigma is not None and self.sigma <= 0:
            raise InvalidParameter("gaussian sigma must be > 0")


@dataclass(frozen=True)
class MercerResult:
    valid: bool
    reason: str | None = None


def kernel_eval(spec: KernelSpec, x: np.ndarray, z: np.ndarray) -> float:
    """Evaluate the kernel on a single pair of equal-length vectors."""
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if x.shape != z.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {z.shape}")
    if spec.kind == "linear":
        return float(x @ z)
    if spec.kind == "polynomial":
        return float((x @ z + spec.c) ** spec.degree)
    diff = x - z
    return float(np.exp(-(diff @ diff) / (2.0 * spec.sigma**2)))


def kernel_rows(spec: KernelSpec, X: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Kernel between each row of X and the vector z."""
    X = np.asarray(X, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if X.shape[1] != z.shape[0]:
        raise DimensionError(f"dim mismatch {X.shape[1]} vs {z.shape[0]}")
    if spec.kind == "linear":
        return X @ z
    if spec.kind == "polynomial":
        return (X @ z + spec.c) ** spec.degree
    diff = X - z
    return np.exp(-np.einsum("ij,ij->i", diff, diff) / (2.0 * spec.sigma**2))


def kernel_matrix(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    """N x N Gram matrix; upper triangle computed then mirrored, so the
    result is exactly symmetric."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or len(X) == 0:
        raise ShapeError("X must be a nonempty 2-D array")
    if spec.kind in ("linear", "polynomial"):
        gram = X @ X.T
        if spec.kind == "polynomial":
            gram = (gram + spec.c) ** spec.degree
    else:
        sq = np.einsum("ij,ij->i", X, X)
        d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (X @ X.T), 0.0)
        gram = np.exp(-d2 / (2.0 * spec.sigma**2))
    upper = np.triu(gram)
    return upper + np.triu(gram, k=1).T


def phi_poly2(x: np.ndarray) -> np.ndarray:
    """Explicit feature map of the degree-2 monomial kernel for 3-vectors.

    Returns (x1x1, x1x2, x1x3, x2x1, ..., x3x3) so that
    phi(x).phi(z) == (x.z)^2.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (3,):
        raise DimensionError(f"phi_poly2 requires a 3-vector, got shape {x.shape}")
    return np.outer(x, x).ravel()


def mercer_check(K: np.ndarray, tol: float = 1e-8) -> MercerResult:
    """Validate a kernel matrix: symmetric and positive semi-definite.

    PSD is accepted when the minimum eigenvalue is >= -tol * max(1, |max
    eigenvalue|), using a symmetric eigensolver.
    """
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ShapeError(f"kernel matrix must be square, got {K.shape}")
    asym = float(np.abs(K - K.T).max()) if K.size else 0.0
    if asym > tol:
        return MercerResult(False, f"not symmetric (max deviation {asym:.3e})")
    eigs = np.linalg.eigvalsh((K + K.T) / 2.0)
    floor = -tol * max(1.0, abs(float(eigs[-1])))
    if eigs[0] < floor:
        return MercerResult(False, f"negative eigenvalue {eigs[0]:.6g}")
    return MercerResult(True)
