"""Support-endpoint estimation by solving the order-statistic matching equations.

Writing Fhat_u for the boundary-corrected CDF estimator built on a candidate
support, the endpoints (l, u) are chosen so that

    Fhat_(l,u)(X_(1)) = 1/(n+1)      and      Fhat_(l,u)(X_(n)) = n/(n+1),

the expected CDF values of the sample minimum and maximum.  Plugging the
extremes themselves in instead corresponds to targets (0, 1).

For the boundary-kernel method the two equations decouple exactly: the right
objective  g(u) = 1 - (1/n) sum W((X_i - X_(n)) / (u - X_(n)))  is strictly
decreasing from 1 - 1/(2n) (as u tends to X_(n), with the tied-maximum terms
contributing W(0) = 1/2 each) down to 1/2 (as u grows), so for n >= 2 and an
untied maximum a unique root exists and bisection with a sign-checked,
range-doubling bracket finds it.  The left equation mirrors this with target
1/(n+1).

For the reflection method the right objective is the reflection CDF at X_(n)
with the lower endpoint held fixed; it is nonincreasing in u and constant
beyond X_(n) + h for a compact kernel, so the bracket is [X_(n), X_(n) + h].
When the target is not straddled the solver falls back to the extreme itself
and sets a flag.  The residual two-sided coupling is resolved by alternating
one-dimensional solves until both endpoints stop moving.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import ConfigError, NumericError
from .estimators import (
    BOUNDARY_KERNEL,
    NAIVE,
    REFLECTION,
    FittedEstimator,
    Sample,
    SupportInterval,
    fit_boundary_kernel,
    fit_naive,
    fit_reflection,
)
from .kernels import KernelSpec

__all__ = ["SupportMode", "SolveReport", "solve_support", "fit"]

MAX_BISECT = 200
MAX_SWEEPS = 100
MOVE_TOL = 1e-10


@dataclass(frozen=True)
class SupportMode:
    """How the support is resolved: known, solved, extremes, or one-sided.

    kind is one of "known", "proposed", "extremes", "half_known_lower",
    "half_known_upper"; the lower/upper fields carry the known endpoints.
    """

    kind: str
    lower: Optional[float] = None
    upper: Optional[float] = None

    @classmethod
    def known(cls, lower: float, upper: float) -> "SupportMode":
        return cls("known", float(lower), float(upper))

    @classmethod
    def proposed(cls) -> "SupportMode":
        return cls("proposed")

    @classmethod
    def extremes(cls) -> "SupportMode":
        return cls("extremes")

    @classmethod
    def half_known_lower(cls, lower: float) -> "SupportMode":
        return cls("half_known_lower", lower=float(lower))

    @classmethod
    def half_known_upper(cls, upper: float) -> "SupportMode":
        return cls("half_known_upper", upper=float(upper))

    def __post_init__(self) -> None:
        if self.kind not in ("known", "proposed", "extremes", "half_known_lower", "half_known_upper"):
            raise ConfigError(f"unknown support mode {self.kind!r}")
        for name, v in (("lower", self.lower), ("upper", self.upper)):
            if v is not None and not np.isfinite(v):
                raise ConfigError(f"{name} endpoint must be finite")
        if self.kind == "known" and (self.lower is None or self.upper is None):
            raise ConfigError("known mode needs both endpoints")
        if self.kind == "half_known_lower" and self.lower is None:
            raise ConfigError("half_known_lower needs the lower endpoint")
        if self.kind == "half_known_upper" and self.upper is None:
            raise ConfigError("half_known_upper needs the upper endpoint")


@dataclass(frozen=True)
class SolveReport:
    """Solved endpoints with residuals, brackets, iteration counts, and flags."""

    l_hat: float
    u_hat: float
    residual_left: float
    residual_right: float
    iterations_left: int
    iterations_right: int
    bracket_left: Tuple[float, float]
    bracket_right: Tuple[float, float]
    fallback_left: bool = False
    fallback_right: bool = False
    outer_sweeps: int = 0

    def to_dict(self) -> dict:
        return {
            "l_hat": self.l_hat,
            "u_hat": self.u_hat,
            "residual_left": self.residual_left,
            "residual_right": self.residual_right,
            "iterations_left": self.iterations_left,
            "iterations_right": self.iterations_right,
            "bracket_left": list(self.bracket_left),
            "bracket_right": list(self.bracket_right),
            "fallback_left": self.fallback_left,
            "fallback_right": self.fallback_right,
            "outer_sweeps": self.outer_sweeps,
        }


def _bisect(
    f: Callable[[float], float], lo: float, hi: float, flo: float, fhi: float, tol: float,
    max_iter: int = MAX_BISECT,
) -> Tuple[float, float, int]:
    """Bisection for f = 0 given a sign change on [lo, hi]; returns (root, residual, iters)."""
    best_x, best_f = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) < abs(best_f):
            best_x, best_f = mid, fm
        if abs(fm) < tol:
            return mid, fm, it
        if (flo <= 0.0) == (fm <= 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    raise NumericError(
        f"bisection did not reach tolerance {tol} in {max_iter} iterations "
        f"(best residual {best_f:.3e} at {best_x!r}, bracket [{lo!r}, {hi!r}])"
    )


# -- boundary-kernel objectives ------------------------------------------------


def _bk_right_objective(data: np.ndarray, kernel: KernelSpec, u: float) -> float:
    xn = data[-1]
    return 1.0 - float(np.mean(kernel.cdf((data - xn) / (u - xn))))


def _bk_left_objective(data: np.ndarray, kernel: KernelSpec, l: float) -> float:
    x1 = data[0]
    return float(np.mean(kernel.cdf((x1 - data) / (x1 - l))))


def _bk_limit_right(data: np.ndarray) -> float:
    # limit of the right objective as u decreases to X_(n): 1 - (#ties)/(2n)
    ties = int(np.count_nonzero(data == data[-1]))
    return 1.0 - ties / (2.0 * data.size)


def _bk_limit_left(data: np.ndarray) -> float:
    ties = int(np.count_nonzero(data == data[0]))
    return ties / (2.0 * data.size)


def _solve_bk_right(data: np.ndarray, kernel: KernelSpec, h: float, tol: float, max_iter: int):
    n = data.size
    xn = float(data[-1])
    target = n / (n + 1.0)
    lo = xn + abs(xn) * 1e-12 + 1e-300
    if _bk_limit_right(data) <= target:
        # tied maxima push the upper limit below the target: no root beyond X_(n)
        return xn, _bk_limit_right(data) - 1.0, 0, (xn, xn), True
    f = lambda u: _bk_right_objective(data, kernel, u) - target
    span = h
    hi = xn + span
    flo = f(lo)
    if flo <= 0.0:
        raise NumericError(
            f"right objective already below target {target} at the bracket start {lo!r}; "
            "data scale defeats the near-maximum offset"
        )
    fhi = f(hi)
    while fhi > 0.0:
        span *= 2.0
        hi = xn + span
        fhi = f(hi)
        if not np.isfinite(hi):
            raise NumericError("right bracket expansion overflowed")
    root, res, it = _bisect(f, lo, hi, flo, fhi, tol, max_iter)
    return root, res, it, (lo, hi), False


def _solve_bk_left(data: np.ndarray, kernel: KernelSpec, h: float, tol: float, max_iter: int):
    n = data.size
    x1 = float(data[0])
    target = 1.0 / (n + 1.0)
    hi = x1 - (abs(x1) * 1e-12 + 1e-300)
    if _bk_limit_left(data) >= target:
        return x1, _bk_limit_left(data) - 0.0, 0, (x1, x1), True
    f = lambda l: _bk_left_objective(data, kernel, l) - target
    span = h
    lo = x1 - span
    fhi = f(hi)
    if fhi >= 0.0:
        raise NumericError(
            f"left objective already above target {target} at the bracket start {hi!r}; "
            "data scale defeats the near-minimum offset"
        )
    flo = f(lo)
    while flo < 0.0:
        span *= 2.0
        lo = x1 - span
        flo = f(lo)
        if not np.isfinite(lo):
            raise NumericError("left bracket expansion overflowed")
    root, res, it = _bisect(f, lo, hi, flo, fhi, tol, max_iter)
    return root, res, it, (lo, hi), False


# -- reflection objectives -----------------------------------------------------


def _reflection_cdf_value(
    x: float, data: np.ndarray, kernel: KernelSpec, h: float, l: float, u: float
) -> float:
    W = kernel.cdf
    t = (W((x - data) / h) - W(((2.0 * l - x) - data) / h)) + (
        W(((2.0 * u - l) - data) / h) - W(((2.0 * u - x) - data) / h)
    )
    return float(np.mean(t))


def _solve_reflection_side(
    data: np.ndarray, kernel: KernelSpec, h: float, tol: float, side: str, l: float, u: float,
    max_iter: int = MAX_BISECT,
):
    """One-dimensional reflection solve for one endpoint, the other held fixed."""
    n = data.size
    if side == "right":
        xn = float(data[-1])
        target = n / (n + 1.0)
        f = lambda uu: _reflection_cdf_value(xn, data, kernel, h, l, uu) - target
        lo, hi = xn, xn + h
        f_at, f_far = f(lo), f(hi)
        # objective decreases in u from f_at to f_far
        if not (f_far < 0.0 < f_at):
            return xn, f_at if abs(f_at) < abs(f_far) else f_far, 0, (lo, hi), True
        root, res, it = _bisect(f, lo, hi, f_at, f_far, tol, max_iter)
        return root, res, it, (lo, hi), False
    x1 = float(data[0])
    target = 1.0 / (n + 1.0)
    f = lambda ll: _reflection_cdf_value(x1, data, kernel, h, ll, u) - target
    lo, hi = x1 - h, x1
    f_far, f_at = f(lo), f(hi)
    # objective increases as l moves away from X_(1): f_at <= target <= f_far
    if not (f_at < 0.0 < f_far):
        return x1, f_at if abs(f_at) < abs(f_far) else f_far, 0, (lo, hi), True
    root, res, it = _bisect(f, lo, hi, f_far, f_at, tol, max_iter)
    return root, res, it, (lo, hi), False


# -- public entry points ---------------------------------------------------------


def solve_support(
    sample: Sample,
    h: float,
    kernel: KernelSpec,
    method: str,
    mode: SupportMode,
    tol: float = 1e-10,
    max_iter: int = MAX_BISECT,
) -> SolveReport:
    """Estimate support endpoints for the given correction method and mode.

    mode "proposed" solves both endpoints, "extremes" returns the sample
    extremes with residuals against targets (0, 1), and the half-known modes
    solve only the unknown side.
    """
    if mode.kind == "known":
        raise ConfigError("solve_support needs an unknown endpoint; mode 'known' has none")
    if method not in (REFLECTION, BOUNDARY_KERNEL):
        raise ConfigError(f"solve_support supports reflection/boundary_kernel, got {method!r}")
    if method == BOUNDARY_KERNEL and not kernel.compact:
        raise ConfigError("the boundary-kernel solve requires a compact kernel")
    if h <= 0:
        raise ConfigError("bandwidth must be positive")
    data = sample.values
    n = sample.n
    if n < 2:
        raise ConfigError("support solving needs at least two observations")
    x1, xn = sample.min, sample.max
    if h > (xn - x1) / 2.0:
        raise ConfigError(f"bandwidth {h} exceeds half the sample range {(xn - x1) / 2.0}")
    if tol <= 0:
        raise ConfigError("tolerance must be positive")
    if max_iter < 1:
        raise ConfigError("max_iter must be at least 1")

    if mode.kind == "extremes":
        return _extremes_report(data, kernel, h, method)

    if method == BOUNDARY_KERNEL:
        if mode.kind in ("proposed", "half_known_lower"):
            u_hat, res_r, it_r, br_r, fb_r = _solve_bk_right(data, kernel, h, tol, max_iter)
        else:
            u_hat, res_r, it_r, br_r, fb_r = float(mode.upper), 0.0, 0, (mode.upper, mode.upper), False
        if mode.kind in ("proposed", "half_known_upper"):
            l_hat, res_l, it_l, br_l, fb_l = _solve_bk_left(data, kernel, h, tol, max_iter)
        else:
            l_hat, res_l, it_l, br_l, fb_l = float(mode.lower), 0.0, 0, (mode.lower, mode.lower), False
        return SolveReport(l_hat, u_hat, res_l, res_r, it_l, it_r, br_l, br_r, fb_l, fb_r, 0)

    # reflection: alternate one-dimensional solves until both endpoints settle
    solve_right = mode.kind in ("proposed", "half_known_lower")
    solve_left = mode.kind in ("proposed", "half_known_upper")
    l_hat = float(mode.lower) if mode.lower is not None else x1
    u_hat = float(mode.upper) if mode.upper is not None else xn
    res_l = res_r = 0.0
    it_l = it_r = 0
    br_l = (l_hat, l_hat)
    br_r = (u_hat, u_hat)
    fb_l = fb_r = False
    sweeps = 0
    for sweeps in range(1, MAX_SWEEPS + 1):
        moved = 0.0
        if solve_right:
            new_u, res_r, it_r, br_r, fb_r = _solve_reflection_side(
                data, kernel, h, tol, "right", l_hat, u_hat, max_iter
            )
            moved = max(moved, abs(new_u - u_hat))
            u_hat = new_u
        if solve_left:
            new_l, res_l, it_l, br_l, fb_l = _solve_reflection_side(
                data, kernel, h, tol, "left", l_hat, u_hat, max_iter
            )
            moved = max(moved, abs(new_l - l_hat))
            l_hat = new_l
        if moved < MOVE_TOL:
            break
    return SolveReport(l_hat, u_hat, res_l, res_r, it_l, it_r, br_l, br_r, fb_l, fb_r, sweeps)


def _extremes_report(data: np.ndarray, kernel: KernelSpec, h: float, method: str) -> SolveReport:
    x1, xn = float(data[0]), float(data[-1])
    if method == BOUNDARY_KERNEL:
        res_l = _bk_limit_left(data) - 0.0
        res_r = _bk_limit_right(data) - 1.0
    else:
        res_l = _reflection_cdf_value(x1, data, kernel, h, x1, xn) - 0.0
        res_r = _reflection_cdf_value(xn, data, kernel, h, x1, xn) - 1.0
    return SolveReport(x1, xn, res_l, res_r, 0, 0, (x1, x1), (xn, xn), False, False, 0)


def fit(
    sample: Sample,
    h: float,
    kernel: KernelSpec,
    method: str,
    mode: Optional[SupportMode] = None,
    tol: float = 1e-10,
    max_iter: int = MAX_BISECT,
) -> Tuple[FittedEstimator, Optional[SolveReport]]:
    """Resolve the support (solving if needed) and build the fitted estimator.

    The naive method takes no mode and gets an unbounded support; corrected
    methods require a mode.  Returns (estimator, report); the report is None
    when nothing was solved (naive or known support).
    """
    if method == NAIVE:
        if mode is not None:
            raise ConfigError("the naive method takes no support mode")
        return fit_naive(sample, h, kernel), None
    if method not in (REFLECTION, BOUNDARY_KERNEL):
        raise ConfigError(f"unknown method {method!r}")
    if mode is None:
        raise ConfigError(f"method {method!r} requires a support mode")
    if mode.kind == "known":
        support = SupportInterval(mode.lower, mode.upper)
        report = None
    else:
        report = solve_support(sample, h, kernel, method, mode, tol=tol, max_iter=max_iter)
        support = SupportInterval(report.l_hat, report.u_hat)
    if method == REFLECTION:
        return fit_reflection(sample, h, kernel, support), report
    return fit_boundary_kernel(sample, h, kernel, support), report
