"""Independent brute-force verifiers for the closed forms.

None of these routines uses the closed-form minimiser or maximiser of the
quantity it checks.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._backend import kernels
from .channel import BisoChannel
from .core import (
    AlphaLike,
    as_alpha,
    as_dist,
    as_kernel,
    conditional_renyi_divergence,
    k_inverse_array,
    k_range,
    product_kernel,
)
from .errors import DomainError, UnsupportedAlphaError
from .measures import alpha_capacity, sibson_mi_curve, sibson_mi_general

VARIATIONAL_TOL = 1e-7
PROBE_SCALE = 1e-4


@dataclass(frozen=True)
class OracleResult:
    value: float
    resolution: float
    gap_to_closed_form: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "resolution": self.resolution,
            "gap_to_closed_form": self.gap_to_closed_form,
            "passed": self.passed,
            **self.details,
        }


# ------------------------------------------------------- variational Sibson


def _objective_values(weights: np.ndarray, qs: np.ndarray, al: float) -> np.ndarray:
    # D(P_{Y|X} || Q_Y | P_X) restricted to the support of ``weights``; rows of qs
    s = (weights * qs ** (1.0 - al)).sum(axis=-1)
    return np.log(s) / (al - 1.0)


def variational_sibson(kernel, input_dist, alpha: AlphaLike, steps: int = 5000,
                       tol: float = VARIATIONAL_TOL, probes: int = 1000,
                       seed: int = 0) -> OracleResult:
    """Minimise D_a(P_{Y|X} || Q_Y | P_X) over output distributions Q_Y.

    Pairwise coordinate descent from the uniform distribution, followed by a
    probe of ``probes`` random feasible directions of size 1e-4 around the
    candidate minimiser. ``passed`` requires agreement with the closed form
    within ``tol`` and no probe improving on the candidate by more than ``tol``.
    """
    k = as_kernel(kernel)
    px = as_dist(input_dist, "input")
    a = as_alpha(alpha)
    if a.is_unit:
        raise UnsupportedAlphaError("the variational oracle covers alpha != 1 only")
    if k.shape[1] > 16:
        raise DomainError("output alphabet larger than 16 is outside the oracle's scope")
    al = a.value
    weights = (px[:, None] * k ** al).sum(axis=0)
    support = weights > 0.0
    w = weights[support]
    q_s, used, spread = kernels.pair_descent(w, al, steps, 1e-13)
    q_full = np.zeros(k.shape[1])
    q_full[support] = q_s
    q_full /= math.fsum(q_full)
    value = conditional_renyi_divergence(k, product_kernel(q_full, k.shape[0]), px, a)

    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((probes, w.size))
    dirs -= dirs.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(dirs, axis=1, keepdims=True)
    dirs = np.divide(dirs, norms, out=np.zeros_like(dirs), where=norms > 0)
    cand = q_s[None, :] + PROBE_SCALE * dirs
    cand = np.clip(cand, 1e-300, None)
    cand /= cand.sum(axis=1, keepdims=True)
    probe_vals = _objective_values(w, cand, al)
    best_probe = float(probe_vals.min()) if probes else math.inf

    closed = sibson_mi_general(k, px, a).value
    gap = value - closed
    passed = abs(gap) <= tol and value - best_probe <= tol
    return OracleResult(
        value, float(max(spread, np.finfo(float).eps)), gap, passed,
        {"steps": int(used), "best_probe": best_probe, "minimizer": q_full.tolist()},
    )


def variational_sibson_biso(ch: BisoChannel, x: float, alpha: AlphaLike, **kw) -> OracleResult:
    return variational_sibson(ch.kernel(), [x, 1.0 - x], alpha, **kw)


# ----------------------------------------------------------- convexity scan


class Curvature(str, enum.Enum):
    CONVEX = "convex"
    CONCAVE = "concave"
    LINEAR = "linear"


def expected_curvature(alpha: AlphaLike) -> Curvature:
    """Curvature of k_a(k_a^{-1}(x) * k_a^{-1}(y)) in each argument."""
    v = as_alpha(alpha).value
    if abs(v - 2.0) < 1e-12 or abs(v - 3.0) < 1e-12:
        return Curvature.LINEAR
    if v < 1.0 or 2.0 < v < 3.0:
        return Curvature.CONVEX
    return Curvature.CONCAVE


def combine_k(x, y, alpha: AlphaLike) -> np.ndarray:
    """k_a(k_a^{-1}(x) * k_a^{-1}(y)) elementwise."""
    a = as_alpha(alpha).value
    p = k_inverse_array(x, a)
    q = k_inverse_array(y, a)
    c = p * (1.0 - q) + (1.0 - p) * q
    return c ** a + (1.0 - c) ** a


@dataclass(frozen=True)
class ConvexityReport:
    alpha: float
    expected: Curvature
    second_diff_range: dict  # variable -> (min, max)
    max_violation: float
    tolerance: float
    skipped: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "expected": self.expected.value,
            "second_diff_range": {k: list(v) for k, v in self.second_diff_range.items()},
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "skipped": self.skipped,
            "passed": self.passed,
        }


def convexity_scan(alpha: AlphaLike, grid_points: int = 41, h: float = 1e-4,
                   tol: Optional[float] = None) -> ConvexityReport:
    """Centred second differences of :func:`combine_k` along each argument.

    The grid is clipped 2h inside the k-range. Violations are measured against
    the expected curvature; the default tolerance is 1e-6 at the linear orders
    and 1e-8 elsewhere.
    """
    a = as_alpha(alpha)
    if abs(a.value - 1.0) < 1e-3:
        raise DomainError("the scan excludes a 1e-3 neighbourhood of alpha = 1")
    if not (1e-5 <= h <= 1e-3):
        raise DomainError("h must lie in [1e-5, 1e-3]")
    expected = expected_curvature(a)
    if tol is None:
        tol = 1e-6 if expected is Curvature.LINEAR else 1e-8
    lo, hi = k_range(a)
    grid = np.linspace(lo + 2 * h, hi - 2 * h, grid_points)
    skipped = 0
    if grid[0] >= grid[-1]:
        skipped = grid_points * grid_points
        grid = grid[:0]
    X, Y = np.meshgrid(grid, grid, indexing="ij")
    centre = combine_k(X, Y, a)
    d2 = {
        "x": combine_k(X + h, Y, a) - 2 * centre + combine_k(X - h, Y, a),
        "y": combine_k(X, Y + h, a) - 2 * centre + combine_k(X, Y - h, a),
    }
    worst = 0.0
    for v in d2.values():
        if v.size == 0:
            continue
        if expected is Curvature.CONVEX:
            viol = np.max(-v)
        elif expected is Curvature.CONCAVE:
            viol = np.max(v)
        else:
            viol = np.max(np.abs(v))
        worst = max(worst, float(viol))
    ranges = {k: ((float(v.min()), float(v.max())) if v.size else (0.0, 0.0)) for k, v in d2.items()}
    return ConvexityReport(a.value, expected, ranges, worst, tol, skipped,
                           worst <= tol and skipped == 0)


# ------------------------------------------------------- Hajek inequality


class HajekOutcome(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    PREMISE_NOT_MET = "premise_not_met"


PREMISE_TOL = 1e-12
CONCLUSION_TOL = 1e-10


def hajek_premise(x_seq, y_seq, xi) -> bool:
    """Nondecreasing sequences with tail sums of xi*x dominating those of xi*y,
    with equality for the full sum."""
    x = np.asarray(x_seq, dtype=np.float64)
    y = np.asarray(y_seq, dtype=np.float64)
    w = np.asarray(xi, dtype=np.float64)
    if not (x.shape == y.shape == w.shape) or x.ndim != 1 or x.size == 0:
        return False
    if np.any(np.diff(x) < -PREMISE_TOL) or np.any(np.diff(y) < -PREMISE_TOL):
        return False
    tx = np.array([math.fsum(w[k:] * x[k:]) for k in range(x.size)])
    ty = np.array([math.fsum(w[k:] * y[k:]) for k in range(y.size)])
    if abs(tx[0] - ty[0]) > PREMISE_TOL:
        return False
    return bool(np.all(tx >= ty - PREMISE_TOL))


def hajek_check(x_seq, y_seq, xi, lam: Callable) -> HajekOutcome:
    """Check sum xi Lam(x) >= sum xi Lam(y) for a convex ``lam``, given the premise."""
    if not hajek_premise(x_seq, y_seq, xi):
        return HajekOutcome.PREMISE_NOT_MET
    w = np.asarray(xi, dtype=np.float64)
    lhs = math.fsum(w * np.asarray(lam(np.asarray(x_seq, dtype=np.float64))))
    rhs = math.fsum(w * np.asarray(lam(np.asarray(y_seq, dtype=np.float64))))
    return HajekOutcome.HOLDS if lhs >= rhs - CONCLUSION_TOL else HajekOutcome.FAILS


def random_convex_function(rng: np.random.Generator) -> Callable:
    """Maximum of 3 to 8 random affine functions."""
    m = int(rng.integers(3, 9))
    slopes = rng.normal(size=m)
    offsets = rng.normal(size=m)

    def lam(t):
        t = np.asarray(t, dtype=np.float64)
        return np.max(slopes[:, None] * t.ravel()[None, :] + offsets[:, None], axis=0).reshape(t.shape)

    return lam


def random_hajek_instance(rng: np.random.Generator, length: Optional[int] = None):
    """A random triple (x, y, xi) satisfying the premise by construction.

    ``x`` is sorted and ``y`` is obtained from it by repeatedly replacing a
    block of consecutive entries with their xi-weighted mean, which keeps the
    sequence sorted and can only lower the tail sums.
    """
    n = int(length or rng.integers(2, 10))
    xi = rng.uniform(0.1, 1.0, n)
    x = np.sort(rng.normal(size=n))
    y = x.copy()
    for _ in range(int(rng.integers(1, 4))):
        i = int(rng.integers(0, n - 1))
        j = int(rng.integers(i + 2, n + 1))
        y[i:j] = np.dot(xi[i:j], y[i:j]) / xi[i:j].sum()
    return x, y, xi


def corrupt_hajek_instance(rng: np.random.Generator, x, y, xi):
    """Break the premise of a valid instance (swap roles, unsort, or shift)."""
    kind = int(rng.integers(0, 3))
    x = np.array(x, dtype=np.float64)
    y = np.array(y, dtype=np.float64)
    if kind == 0 and np.max(np.abs(x - y)) > 1e-6:
        return y, x, xi
    if kind == 1 and x.size >= 2:
        x = x.copy()
        x[0], x[-1] = x[-1] + 1.0, x[0] - 1.0
        return x, y, xi
    return x + 1e-3, y, xi


# ------------------------------------------------------ capacity argmax scan


def capacity_argmax_scan(ch: BisoChannel, alpha: AlphaLike, grid_points: int = 1001,
                         tol: float = 1e-9) -> OracleResult:
    """Grid-maximise the mutual information over x in [0, 1]."""
    if grid_points < 101 or grid_points % 2 == 0:
        raise DomainError("grid_points must be odd and >= 101")
    a = as_alpha(alpha)
    xs = np.linspace(0.0, 1.0, grid_points)
    vals = sibson_mi_curve(ch, xs, a)
    best = float(vals.max())
    half = grid_points // 2
    # among near-ties prefer the grid point closest to 1/2
    ties = np.flatnonzero(vals >= best - 1e-15)
    argmax = float(xs[ties[np.argmin(np.abs(ties - half))]])
    cap = alpha_capacity(ch, a).c_alpha
    gap = best - cap
    passed = vals[half] >= best - 1e-12 and abs(gap) <= tol
    return OracleResult(best, 1.0 / (grid_points - 1), gap, bool(passed), {"argmax": argmax})
