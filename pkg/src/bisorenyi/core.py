"""Scalar Renyi primitives: binary entropy, the k-transform, binary
convolution and Renyi divergence between finite distributions.

All logarithms are natural; values are in nats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from ._backend import kernels
from .errors import DomainError, UnsupportedAlphaError, UsageError, ValidationError

UNIT_TOL = 1e-12
DIST_TOL = 1e-12
K_RANGE_SLACK = 1e-9


@dataclass(frozen=True)
class AlphaParam:
    """A validated Renyi order.

    ``is_unit`` marks the Shannon branch; it is set whenever the value lies
    within 1e-12 of one.
    """

    value: float
    is_unit: bool = field(init=False)

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v) or v <= 0.0:
            raise DomainError(f"alpha must be finite and > 0, got {self.value!r}")
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "is_unit", abs(v - 1.0) < UNIT_TOL)

    def __float__(self):
        return self.value

    @property
    def conjugate(self) -> "AlphaParam":
        """The order 1/alpha, used as the k-transform parameter."""
        return AlphaParam(1.0 / self.value)


AlphaLike = Union[AlphaParam, float, int]


def as_alpha(alpha: AlphaLike) -> AlphaParam:
    return alpha if isinstance(alpha, AlphaParam) else AlphaParam(alpha)


def as_dist(p, name: str = "distribution") -> np.ndarray:
    """Validate a finite probability vector and return it as a float array."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError(f"{name} must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValidationError(f"{name} entries must lie in [0, 1]")
    total = math.fsum(arr)
    if abs(total - 1.0) > DIST_TOL:
        raise ValidationError(f"{name} must sum to 1 (got {total!r})")
    return arr


def as_kernel(rows, name: str = "kernel") -> np.ndarray:
    """Validate a row-stochastic matrix (one row per input symbol)."""
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValidationError(f"{name} must be a non-empty 2-d array")
    for i, row in enumerate(arr):
        as_dist(row, f"{name} row {i}")
    return arr


def _check_prob(p: float, name: str = "p") -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def shannon_binary_entropy(p: float) -> float:
    p = _check_prob(p)
    return -sum(t * math.log(t) for t in (p, 1.0 - p) if t > 0.0)


def binary_entropy_alpha(p: float, alpha: AlphaLike) -> float:
    """Binary Renyi entropy h_alpha(p) in nats.

    For alpha == 1 this is the Shannon binary entropy.

    >>> round(binary_entropy_alpha(0.1, 2.0), 6)
    0.198451
    """
    a = as_alpha(alpha)
    p = _check_prob(p)
    if a.is_unit:
        return shannon_binary_entropy(p)
    return math.log(p ** a.value + (1.0 - p) ** a.value) / (1.0 - a.value)


def k_fn(p: float, alpha: AlphaLike) -> float:
    """k_alpha(p) = exp((1-alpha) h_alpha(p)) = p**alpha + (1-p)**alpha."""
    a = as_alpha(alpha)
    if a.is_unit:
        raise UnsupportedAlphaError("k_1 is identically 1; use the Shannon branch")
    p = _check_prob(p)
    return p ** a.value + (1.0 - p) ** a.value


def k_range(alpha: AlphaLike) -> tuple[float, float]:
    """Closed interval of values taken by k_alpha on [0, 1/2], as (low, high)."""
    a = as_alpha(alpha)
    half = 2.0 ** (1.0 - a.value)
    return (min(1.0, half), max(1.0, half))


def k_inverse(v: float, alpha: AlphaLike) -> float:
    """Return the unique p in [0, 1/2] with k_alpha(p) == v.

    Found by bisection to full double precision in p; k_alpha is strictly
    monotone on [0, 1/2] for alpha != 1 (decreasing when alpha > 1).
    """
    a = as_alpha(alpha)
    if a.is_unit:
        raise UnsupportedAlphaError("k_1 is not invertible")
    lo, hi = k_range(a)
    v = float(v)
    if not (lo - K_RANGE_SLACK <= v <= hi + K_RANGE_SLACK):
        raise DomainError(f"value {v!r} outside the range [{lo!r}, {hi!r}] of k_{a.value}")
    return kernels.k_inverse_scalar(v, a.value)


def k_inverse_array(v, alpha: AlphaLike) -> np.ndarray:
    """Vectorised :func:`k_inverse` (same range rules)."""
    a = as_alpha(alpha)
    if a.is_unit:
        raise UnsupportedAlphaError("k_1 is not invertible")
    lo, hi = k_range(a)
    arr = np.asarray(v, dtype=np.float64)
    if np.any(arr < lo - K_RANGE_SLACK) or np.any(arr > hi + K_RANGE_SLACK):
        raise DomainError(f"values outside the range [{lo!r}, {hi!r}] of k_{a.value}")
    return kernels.k_inverse_array(arr.ravel(), a.value).reshape(arr.shape)


def binary_convolve(a: float, b: float) -> float:
    """a * b = a(1-b) + (1-a)b."""
    a = _check_prob(a, "a")
    b = _check_prob(b, "b")
    return a * (1.0 - b) + (1.0 - a) * b


def kl_divergence(p, q) -> float:
    p = as_dist(p, "p")
    q = as_dist(q, "q")
    if p.shape != q.shape:
        raise UsageError("distributions live on different alphabets")
    terms = []
    for pa, qa in zip(p, q):
        if pa == 0.0:
            continue
        if qa == 0.0:
            return math.inf
        terms.append(pa * math.log(pa / qa))
    return max(math.fsum(terms), 0.0)


def renyi_divergence(p, q, alpha: AlphaLike) -> float:
    """Renyi divergence D_alpha(P || Q) in nats, possibly ``math.inf``.

    Terms with P(a) = 0 contribute nothing. For alpha > 1 any Q(a) = 0 with
    P(a) > 0 gives infinity; for alpha < 1 only the common support counts,
    and an empty common support gives infinity. alpha == 1 is KL divergence.
    """
    a = as_alpha(alpha)
    if a.is_unit:
        return kl_divergence(p, q)
    p = as_dist(p, "p")
    q = as_dist(q, "q")
    if p.shape != q.shape:
        raise UsageError("distributions live on different alphabets")
    al = a.value
    terms = []
    for pa, qa in zip(p, q):
        if pa == 0.0:
            continue
        if qa == 0.0:
            if al > 1.0:
                return math.inf
            continue
        terms.append(pa ** al * qa ** (1.0 - al))
    if not terms:
        return math.inf
    s = math.fsum(terms)
    if s <= 0.0:
        return math.inf
    return max(math.log(s) / (al - 1.0), 0.0)


def conditional_renyi_divergence(kernel_p, kernel_q, input_dist, alpha: AlphaLike) -> float:
    """D_alpha(P_{Y|X} || Q_{Y|X} | P_X) = D_alpha(P_{Y|X} P_X || Q_{Y|X} P_X)."""
    kp = as_kernel(kernel_p, "kernel_p")
    kq = as_kernel(kernel_q, "kernel_q")
    px = as_dist(input_dist, "input")
    if kp.shape != kq.shape:
        raise UsageError(f"kernel shapes differ: {kp.shape} vs {kq.shape}")
    if px.shape[0] != kp.shape[0]:
        raise UsageError("input distribution does not match the kernel's input alphabet")
    joint_p = (px[:, None] * kp).ravel()
    joint_q = (px[:, None] * kq).ravel()
    return renyi_divergence(_renormalised(joint_p), _renormalised(joint_q), alpha)


def _renormalised(joint: np.ndarray) -> np.ndarray:
    # products of validated distributions can drift by a few ulps
    return joint / math.fsum(joint)


def product_kernel(q_y: Sequence[float], n_inputs: int) -> np.ndarray:
    """Kernel whose every row is ``q_y`` (an output reference distribution)."""
    q = as_dist(q_y, "q_y")
    return np.tile(q, (n_inputs, 1))
