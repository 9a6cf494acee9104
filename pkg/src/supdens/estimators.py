"""One-dimensional kernel estimators of a density f and its CDF F.

Three estimators are provided, all evaluable at arbitrary points:

naive
    pdf(x) = (1/(nh)) sum K((x - X_i)/h),  cdf(x) = (1/n) sum W((x - X_i)/h).

reflection
    Kernel mass falling outside a known/estimated support [l, u] is mirrored
    back across each endpoint.  The CDF uses the compact four-term form
    F(x) - F(2u - x) - F(2l - x) + F(2u - l) built from the naive CDF; terms
    are grouped per observation so that cdf(l) is exactly 0 and, for a compact
    kernel with h <= u - l, cdf(u) is exactly 1 in floating point.

boundary_kernel
    The CDF rescales the kernel argument by the distance to the endpoint
    inside each boundary region: (1/n) sum W((x - X_i)/(x - l)) on [l, l+h),
    the naive CDF on [l+h, u-h), and 1 - (1/n) sum W((X_i - x)/(u - x)) on
    [u-h, u); 0 below l and 1 at or above u.  The pdf is the exact analytic
    derivative of each piece.  Note the pdf has bona fide jumps at the seams
    l+h and u-h (the CDF is continuous but only piecewise C^1 there).

Every estimator is a frozen dataclass; evaluation is pure and thread-safe.
The per-observation term functions (`cdf_terms`, `pdf_terms`) return the
(m, n) matrices whose row means are cdf/pdf values; the multivariate
product-form estimator combines them across coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .kernels import KernelSpec

__all__ = [
    "Sample",
    "SupportInterval",
    "FittedEstimator",
    "fit_naive",
    "fit_reflection",
    "fit_boundary_kernel",
    "evaluate_grid",
    "cdf_terms",
    "pdf_terms",
]

NAIVE = "naive"
REFLECTION = "reflection"
BOUNDARY_KERNEL = "boundary_kernel"
METHODS = (NAIVE, REFLECTION, BOUNDARY_KERNEL)


@dataclass(frozen=True)
class Sample:
    """A sorted array of finite observations with cached extremes."""

    values: np.ndarray

    def __init__(self, values) -> None:
        arr = np.sort(np.asarray(values, dtype=float).ravel())
        if arr.size < 1:
            raise DataError("sample must contain at least one observation")
        if not np.all(np.isfinite(arr)):
            raise DataError("sample values must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def min(self) -> float:
        return float(self.values[0])

    @property
    def max(self) -> float:
        return float(self.values[-1])

    def std(self) -> float:
        return float(np.std(self.values, ddof=1)) if self.n > 1 else 0.0


@dataclass(frozen=True)
class SupportInterval:
    """An interval (lower, upper), either bound possibly infinite."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.lower < self.upper:
            raise ConfigError(f"support requires lower < upper, got ({self.lower}, {self.upper})")

    @property
    def bounded(self) -> bool:
        return np.isfinite(self.lower) and np.isfinite(self.upper)

    @property
    def length(self) -> float:
        return self.upper - self.lower


def _check_corrected(sample: Sample, h: float, support: SupportInterval) -> None:
    if h <= 0:
        raise ConfigError("bandwidth must be positive")
    if not support.bounded:
        raise ConfigError("boundary-corrected estimators need a bounded support")
    if sample.min < support.lower or sample.max > support.upper:
        raise DataError(
            f"sample range [{sample.min}, {sample.max}] not contained in "
            f"support [{support.lower}, {support.upper}]"
        )
    if h > support.length / 2.0:
        raise ConfigError(
            f"bandwidth {h} exceeds half the support length {support.length / 2.0}; "
            "boundary regions would overlap"
        )


@dataclass(frozen=True)
class FittedEstimator:
    """A fitted kernel estimator: method + sample + bandwidth + support + kernel.

    Immutable; pdf/cdf evaluation is safe from any number of threads.
    """

    method: str
    sample: Sample
    h: float
    support: SupportInterval
    kernel: KernelSpec

    def pdf(self, x) -> float | np.ndarray:
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = pdf_terms(self, arr).mean(axis=1)
        return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out

    def cdf(self, x) -> float | np.ndarray:
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = cdf_terms(self, arr).mean(axis=1)
        return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out


def fit_naive(sample: Sample, h: float, kernel: KernelSpec) -> FittedEstimator:
    """Plain kernel density/CDF estimator on an unbounded support."""
    if h <= 0:
        raise ConfigError("bandwidth must be positive")
    return FittedEstimator(NAIVE, sample, float(h), SupportInterval(-np.inf, np.inf), kernel)


def fit_reflection(sample: Sample, h: float, kernel: KernelSpec, support: SupportInterval) -> FittedEstimator:
    """Reflection-corrected estimator on a bounded support containing the sample."""
    _check_corrected(sample, h, support)
    return FittedEstimator(REFLECTION, sample, float(h), support, kernel)


def fit_boundary_kernel(
    sample: Sample, h: float, kernel: KernelSpec, support: SupportInterval
) -> FittedEstimator:
    """Boundary-kernel-corrected estimator; requires a compact kernel."""
    if not kernel.compact:
        raise ConfigError("the boundary-kernel method requires a compact kernel")
    _check_corrected(sample, h, support)
    return FittedEstimator(BOUNDARY_KERNEL, sample, float(h), support, kernel)


def evaluate_grid(est: FittedEstimator, grid) -> np.ndarray:
    """Evaluate pdf and cdf on a sorted grid; returns an (m, 3) array (x, pdf, cdf)."""
    xs = np.asarray(grid, dtype=float).ravel()
    if xs.size == 0:
        return np.empty((0, 3))
    if not np.all(np.isfinite(xs)):
        raise DataError("grid points must be finite")
    out = np.empty((xs.size, 3))
    out[:, 0] = xs
    out[:, 1] = pdf_terms(est, xs).mean(axis=1)
    out[:, 2] = cdf_terms(est, xs).mean(axis=1)
    return out


# ---------------------------------------------------------------------------
# Per-observation terms.  cdf_terms(e, x)[k, i] is the contribution of
# observation i at x[k]; the row mean is the estimator value.  For the
# corrected methods each term saturates to exactly 0 below the support and
# exactly 1 at/above the upper endpoint, which makes the multivariate
# marginalization identities exact.
# ---------------------------------------------------------------------------


def cdf_terms(est: FittedEstimator, x: np.ndarray) -> np.ndarray:
    xs = np.asarray(x, dtype=float).reshape(-1, 1)
    data = est.sample.values
    h = est.h
    W = est.kernel.cdf
    if est.method == NAIVE:
        return W((xs - data) / h)
    if est.method == REFLECTION:
        return _reflection_cdf_terms(xs, data, h, est.kernel, est.support.lower, est.support.upper)
    if est.method == BOUNDARY_KERNEL:
        return _bk_cdf_terms(xs, data, h, est.kernel, est.support.lower, est.support.upper)
    raise ConfigError(f"unknown method {est.method!r}")


def pdf_terms(est: FittedEstimator, x: np.ndarray) -> np.ndarray:
    xs = np.asarray(x, dtype=float).reshape(-1, 1)
    data = est.sample.values
    h = est.h
    K = est.kernel.pdf
    if est.method == NAIVE:
        return K((xs - data) / h) / h
    if est.method == REFLECTION:
        l, u = est.support.lower, est.support.upper
        inside = (xs >= l) & (xs <= u)
        t = (K((xs - data) / h) + K((xs + data - 2.0 * u) / h) + K((xs + data - 2.0 * l) / h)) / h
        return np.where(inside, t, 0.0)
    if est.method == BOUNDARY_KERNEL:
        return _bk_pdf_terms(xs, data, h, est.kernel, est.support.lower, est.support.upper)
    raise ConfigError(f"unknown method {est.method!r}")


def _reflection_cdf_terms(
    xs: np.ndarray, data: np.ndarray, h: float, kernel: KernelSpec, l: float, u: float
) -> np.ndarray:
    W = kernel.cdf
    # Grouping (W(a1)-W(a3)) + (W(a4)-W(a2)) cancels bitwise at x = l (a3 == a1,
    # a2 == a4 because fl(2l - l) == l and fl(2u - l) is shared) and saturates to
    # exactly 1 per observation at x = u for a compact kernel with h <= u - l.
    xl = 2.0 * l - xs
    xu = 2.0 * u - xs
    ref = 2.0 * u - l
    t = (W((xs - data) / h) - W((xl - data) / h)) + (W((ref - data) / h) - W((xu - data) / h))
    # The four-term expression applies on [l, u] inclusive; outside it clamps.
    return np.where(xs < l, 0.0, np.where(xs > u, 1.0, t))


def _bk_cdf_terms(
    xs: np.ndarray, data: np.ndarray, h: float, kernel: KernelSpec, l: float, u: float
) -> np.ndarray:
    W = kernel.cdf
    flat = xs.ravel()
    out = np.empty((flat.size, data.size))
    left = (flat > l) & (flat < l + h)
    mid = (flat >= l + h) & (flat < u - h)
    right = (flat >= u - h) & (flat < u)
    out[flat <= l, :] = 0.0
    out[flat >= u, :] = 1.0
    if left.any():
        xl = flat[left].reshape(-1, 1)
        out[left, :] = W((xl - data) / (xl - l))
    if mid.any():
        xm = flat[mid].reshape(-1, 1)
        out[mid, :] = W((xm - data) / h)
    if right.any():
        xr = flat[right].reshape(-1, 1)
        out[right, :] = 1.0 - W((data - xr) / (u - xr))
    return out


def _bk_pdf_terms(
    xs: np.ndarray, data: np.ndarray, h: float, kernel: KernelSpec, l: float, u: float
) -> np.ndarray:
    K = kernel.pdf
    flat = xs.ravel()
    out = np.zeros((flat.size, data.size))
    # x == l and x == u take the right/left limits of the adjacent pieces,
    # which are 0 for observations strictly inside the support.
    left = (flat > l) & (flat < l + h)
    mid = (flat >= l + h) & (flat < u - h)
    right = (flat >= u - h) & (flat < u)
    if left.any():
        xl = flat[left].reshape(-1, 1)
        d = xl - l
        out[left, :] = K((xl - data) / d) * (data - l) / (d * d)
    if mid.any():
        xm = flat[mid].reshape(-1, 1)
        out[mid, :] = K((xm - data) / h) / h
    if right.any():
        xr = flat[right].reshape(-1, 1)
        d = u - xr
        out[right, :] = K((data - xr) / d) * (u - data) / (d * d)
    return out
