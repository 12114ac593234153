"""Binary soft-margin SVM trained by sequential two-multiplier optimization.

The dual problem

    max_a  W(a) = sum_i a_i - 1/2 sum_ij y_i y_j a_i a_j K(x_i, x_j)
    s.t.   0 <= a_i <= C,  sum_i a_i y_i = 0

is solved by repeatedly picking the maximal-violating pair, maximizing the
two-variable restriction in closed form, and clipping to the box. The
equality constraint is preserved by every update, so dual feasibility holds
throughout and the objective never decreases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import (
    DegenerateHyperplane,
    DegenerateLabels,
    DegenerateModel,
    DimensionError,
    InvalidParameter,
)
from .kernels import KernelSpec, kernel_matrix, kernel_rows

SV_EPS = 1e-8  # alpha above this counts as a support vector


@dataclass(frozen=True)
class BinarySvmModel:
    """Trained two-class model; support vectors are stored in scaled space."""

    support_vectors: np.ndarray  # (n_sv, d) float64
    sv_labels: np.ndarray  # (n_sv,) int8, each -1 or +1
    alphas: np.ndarray  # (n_sv,) float64
    b: float
    kernel: KernelSpec
    C: float
    scale_mean: np.ndarray  # (d,) float64, applied to queries before kernels
    scale_std: np.ndarray  # (d,) float64
    converged: bool = True
    iterations: int = 0
    objective_trace: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.scale_mean) / self.scale_std

    def linear_hyperplane(self) -> tuple[np.ndarray, float]:
        """(w, b) in the original input space; linear kernels only."""
        if self.kernel.kind != "linear":
            raise InvalidParameter("explicit hyperplane exists only for linear kernels")
        w_scaled = (self.alphas * self.sv_labels) @ self.support_vectors
        w = w_scaled / self.scale_std
        b = self.b - float(w_scaled @ (self.scale_mean / self.scale_std))
        return w, b


def decision_function(model: BinarySvmModel, x: np.ndarray) -> float | np.ndarray:
    """f(x) = sum_i a_i y_i K(x_i, x) + b over the support vectors."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    if pts.shape[1] != model.support_vectors.shape[1]:
        raise DimensionError(
            f"expected dim {model.support_vectors.shape[1]}, got {pts.shape[1]}"
        )
    coef = model.alphas * model.sv_labels
    scaled = (pts - model.scale_mean) / model.scale_std
    out = np.array(
        [float(coef @ kernel_rows(model.kernel, model.support_vectors, p)) + model.b
         for p in scaled]
    )
    return float(out[0]) if single else out


def functional_margin(w: np.ndarray, b: float, x: np.ndarray, y: int) -> float:
    """y * (w.x + b): scale-dependent confidence of the prediction."""
    w = np.asarray(w, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if w.shape != x.shape:
        raise DimensionError(f"shape mismatch {w.shape} vs {x.shape}")
    return float(y * (w @ x + b))


def geometric_margin(w: np.ndarray, b: float, x: np.ndarray, y: int) -> float:
    """Functional margin normalized by |w|: signed distance to the hyperplane."""
    w = np.asarray(w, dtype=np.float64)
    norm = float(np.linalg.norm(w))
    if norm == 0.0:
        raise DegenerateHyperplane("zero weight vector")
    return functional_margin(w, b, x, y) / norm


def intercept_from_hyperplane(w: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    """Hard-margin intercept from the two closest class hulls:

    b = -(max_{y=-1} w.x + min_{y=+1} w.x) / 2
    """
    w = np.asarray(w, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if not ((y == 1).any() and (y == -1).any()):
        raise DegenerateLabels("need both classes")
    proj = X @ w
    return -(proj[y == -1].max() + proj[y == 1].min()) / 2.0


def dual_objective(alphas: np.ndarray, y: np.ndarray, K: np.ndarray) -> float:
    """W(a) = sum a - 1/2 (a*y)' K (a*y)."""
    ay = alphas * y
    return float(alphas.sum() - 0.5 * ay @ K @ ay)


def median_pairwise_distance(X: np.ndarray) -> float:
    """Default gaussian length scale; falls back to 1.0 on degenerate data."""
    X = np.asarray(X, dtype=np.float64)
    sq = np.einsum("ij,ij->i", X, X)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (X @ X.T), 0.0)
    dists = np.sqrt(d2[np.triu_indices(len(X), k=1)])
    med = float(np.median(dists)) if dists.size else 0.0
    return med if med > 0 else 1.0


def _resolve_sigma(spec: KernelSpec, X_scaled: np.ndarray) -> KernelSpec:
    if spec.kind == "gaussian" and spec.sigma is None:
        return KernelSpec(kind="gaussian", sigma=median_pairwise_distance(X_scaled))
    return spec


def train_binary_smo(
    X: np.ndarray,
    y: np.ndarray,
    spec: KernelSpec = KernelSpec("linear"),
    C: float = 10.0,
    kkt_tol: float = 1e-3,
    seed: int = 0,
    max_iter: int = 1_000_000,
    scale: bool = True,
) -> BinarySvmModel:
    """Train a binary SVM on labels in {-1, +1}.

    Features are z-scored with training-set statistics (constant dimensions
    pass through); the statistics are stored in the model and applied to
    every query. Optimization stops when no pair violates the KKT
    conditions beyond kkt_tol, or at max_iter with converged=False. The
    seed only breaks exact ties in pair selection, so retraining is
    bit-reproducible.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or len(X) != len(y):
        raise DimensionError("X must be (n, d) with one label per row")
    if not set(np.unique(y)) <= {-1.0, 1.0}:
        raise InvalidParameter("labels must be -1 or +1")
    if not ((y == 1).any() and (y == -1).any()):
        raise DegenerateLabels("training set must contain both classes")
    if C <= 0:
        raise InvalidParameter("C must be positive")

    n = len(X)
    if scale:
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        constant = std == 0
        mean = np.where(constant, 0.0, mean)
        std = np.where(constant, 1.0, std)
    else:
        mean = np.zeros(X.shape[1])
        std = np.ones(X.shape[1])
    Xs = (X - mean) / std

    spec = _resolve_sigma(spec, Xs)
    K = kernel_matrix(spec, Xs)
    diag = np.diag(K)

    rng = np.random.default_rng(seed)
    bound_eps = 1e-12 * max(1.0, C)
    alphas = np.zeros(n)
    g = np.zeros(n)  # g_i = sum_j a_j y_j K_ij
    trace = [0.0]
    pos = y > 0

    converged = False
    stalls = 0
    it = 0
    while it < max_iter:
        v = y - g
        in_up = (pos & (alphas < C - bound_eps)) | (~pos & (alphas > bound_eps))
        in_low = (~pos & (alphas < C - bound_eps)) | (pos & (alphas > bound_eps))

        v_up = np.where(in_up, v, -np.inf)
        v_low = np.where(in_low, v, np.inf)
        m_val = v_up.max()
        M_val = v_low.min()
        if m_val - M_val <= kkt_tol:
            converged = True
            break

        i = _pick(v_up, m_val, rng)
        j = _pick(-v_low, -M_val, rng)

        if y[i] != y[j]:
            lo = max(0.0, alphas[j] - alphas[i])
            hi = min(C, C + alphas[j] - alphas[i])
        else:
            lo = max(0.0, alphas[i] + alphas[j] - C)
            hi = min(C, alphas[i] + alphas[j])

        eta = diag[i] + diag[j] - 2.0 * K[i, j]
        quad = max(eta, 1e-12)
        # E_i - E_j = (g_i - y_i) - (g_j - y_j) = v_j - v_i
        a_j_new = np.clip(alphas[j] + y[j] * (v[j] - v[i]) / quad, lo, hi)
        delta_j = a_j_new - alphas[j]
        if abs(delta_j) < 1e-14 * max(1.0, C):
            stalls += 1
            if stalls >= 2:
                break
            it += 1
            continue
        stalls = 0
        delta_i = -y[i] * y[j] * delta_j
        alphas[i] += delta_i
        alphas[j] = a_j_new
        g += (y[i] * delta_i) * K[i] + (y[j] * delta_j) * K[j]
        trace.append(float(alphas.sum() - 0.5 * (alphas * y) @ g))
        it += 1

    np.clip(alphas, 0.0, C, out=alphas)

    free = (alphas > SV_EPS) & (alphas < C - SV_EPS)
    v = y - g
    if free.any():
        b = float(v[free].mean())
    else:
        in_up = (pos & (alphas < C - bound_eps)) | (~pos & (alphas > bound_eps))
        in_low = (~pos & (alphas < C - bound_eps)) | (pos & (alphas > bound_eps))
        b = float((np.where(in_up, v, -np.inf).max() + np.where(in_low, v, np.inf).min()) / 2.0)

    sv_mask = alphas > SV_EPS
    if not sv_mask.any():
        raise DegenerateModel("training produced no support vectors")

    return BinarySvmModel(
        support_vectors=Xs[sv_mask].copy(),
        sv_labels=y[sv_mask].astype(np.int8),
        alphas=alphas[sv_mask].copy(),
        b=b,
        kernel=spec,
        C=C,
        scale_mean=mean,
        scale_std=std,
        converged=converged,
        iterations=it,
        objective_trace=np.asarray(trace),
    )


def _pick(scores: np.ndarray, best: float, rng: np.random.Generator) -> int:
    """Index attaining `best`; exact ties broken by the seeded generator."""
    candidates = np.flatnonzero(scores == best)
    if len(candidates) == 1:
        return int(candidates[0])
    return int(rng.choice(candidates))
