"""Sibson and Arimoto Renyi mutual information and the alpha-capacity.

Throughout, ``x`` is the input probability P(X = 0) and values are in nats.
alpha == 1 always takes an explicit Shannon branch.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._backend import kernels
from .channel import BisoChannel
from .core import (
    AlphaLike,
    AlphaParam,
    _check_prob,
    as_alpha,
    as_dist,
    as_kernel,
    binary_entropy_alpha,
    shannon_binary_entropy,
)
from .errors import DomainError

LN2 = math.log(2.0)


class Variant(str, enum.Enum):
    SIBSON = "sibson"
    ARIMOTO = "arimoto"
    SHANNON = "shannon"


@dataclass(frozen=True)
class MiValue:
    value: float
    alpha: AlphaParam
    input_x: float
    variant: Variant

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class CapacityValue:
    c_alpha: float
    d_c: Optional[float]
    alpha: AlphaParam


def pair_statistics(ch: BisoChannel, alpha: AlphaLike) -> tuple[np.ndarray, np.ndarray]:
    """Per-pair mass (p_y^a + p_-y^a)^(1/a) and tilted parameter q_y.

    q_y = p_y^a / (p_y^a + p_-y^a), with 0^a = 0 so a pair (p, 0) has q_y = 1.
    """
    mass, q, _ = pair_statistics_full(ch, alpha)
    return mass, q


def pair_statistics_full(ch: BisoChannel, alpha: AlphaLike):
    """Like :func:`pair_statistics` but also returns 1 - q_y, computed as
    p_-y^a / (p_y^a + p_-y^a) rather than by subtraction."""
    a = as_alpha(alpha).value
    pa = ch.plus ** a
    ma = ch.minus ** a
    s = pa + ma
    return s ** (1.0 / a), pa / s, ma / s


def _biso_total(ch: BisoChannel, al: float, x: float, xbar: float) -> float:
    # sum_y N_y k_{1/a}(x * q_y), both convolution outputs formed without cancellation
    mass, q, qbar = pair_statistics_full(ch, al)
    conv = x * qbar + xbar * q
    cbar = x * q + xbar * qbar
    beta = 1.0 / al
    return math.fsum(mass * (conv ** beta + cbar ** beta))


def d_c(ch: BisoChannel, alpha: AlphaLike) -> float:
    """sum_y (p_y^a + p_-y^a)^(1/a)."""
    mass, _ = pair_statistics(ch, alpha)
    return math.fsum(mass)


# ---------------------------------------------------------------- Shannon


def _shannon_mi_kernel(kernel: np.ndarray, px: np.ndarray) -> float:
    joint = px[:, None] * kernel
    py = joint.sum(axis=0)
    terms = []
    for i in range(kernel.shape[0]):
        for j in range(kernel.shape[1]):
            if joint[i, j] > 0.0:
                terms.append(joint[i, j] * math.log(kernel[i, j] / py[j]))
    return math.fsum(terms)


def shannon_mi(ch: BisoChannel, x: float) -> MiValue:
    x = _check_prob(x, "x")
    val = _shannon_mi_kernel(ch.kernel(), np.array([x, 1.0 - x]))
    return MiValue(val, AlphaParam(1.0), x, Variant.SHANNON)


def shannon_mi_curve(ch: BisoChannel, xs) -> np.ndarray:
    """Vectorised Shannon mutual information over an array of inputs."""
    xs = np.asarray(xs, dtype=np.float64)
    k = ch.kernel()
    px = np.stack([xs, 1.0 - xs], axis=-1)
    joint = px[..., :, None] * k
    py = joint.sum(axis=-2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(joint > 0.0, k / py[..., None, :], 1.0)
        terms = np.where(joint > 0.0, joint * np.log(ratio), 0.0)
    return terms.sum(axis=(-2, -1))


# ----------------------------------------------------------------- Sibson


def sibson_mi_general(kernel, input_dist, alpha: AlphaLike) -> MiValue:
    """Sibson mutual information for an arbitrary finite kernel.

    (a/(a-1)) log sum_y (sum_x P_X(x) P(y|x)^a)^(1/a)
    """
    k = as_kernel(kernel)
    px = as_dist(input_dist, "input")
    a = as_alpha(alpha)
    if px.shape[0] != k.shape[0]:
        raise DomainError("input distribution does not match the kernel")
    if a.is_unit:
        return MiValue(_shannon_mi_kernel(k, px), a, float(px[0]), Variant.SHANNON)
    al = a.value
    inner = (px[:, None] * k ** al).sum(axis=0)
    total = math.fsum(inner ** (1.0 / al))
    return MiValue(al / (al - 1.0) * math.log(total), a, float(px[0]), Variant.SIBSON)


def _biso_log_arg(ch: BisoChannel, xs, al: float, xbar=None) -> np.ndarray:
    mass, q, qbar = pair_statistics_full(ch, al)
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    xbar = 1.0 - xs if xbar is None else np.atleast_1d(np.asarray(xbar, dtype=np.float64))
    return kernels.biso_sum_grid(mass, q, qbar, xs, xbar, 1.0 / al)


def sibson_mi_curve(ch: BisoChannel, xs, alpha: AlphaLike, xbar=None) -> np.ndarray:
    """Sibson mutual information of ``ch`` at every input in ``xs``.

    ``xbar`` optionally supplies 1 - xs when it is known more accurately.
    """
    a = as_alpha(alpha)
    xs = np.asarray(xs, dtype=np.float64)
    if a.is_unit:
        return shannon_mi_curve(ch, xs)
    al = a.value
    xb = None if xbar is None else np.asarray(xbar, dtype=np.float64).ravel()
    return al / (al - 1.0) * np.log(_biso_log_arg(ch, xs.ravel(), al, xb)).reshape(xs.shape)


def sibson_mi_biso(ch: BisoChannel, x: float, alpha: AlphaLike) -> MiValue:
    """Closed-form Sibson mutual information for a BISO channel.

    (a/(a-1)) log sum_y (p_y^a + p_-y^a)^(1/a) k_{1/a}(x * q_y)
    """
    a = as_alpha(alpha)
    x = _check_prob(x, "x")
    if a.is_unit:
        return shannon_mi(ch, x)
    al = a.value
    total = _biso_total(ch, al, x, 1.0 - x)
    return MiValue(al / (al - 1.0) * math.log(total), a, x, Variant.SIBSON)


# ---------------------------------------------------------------- Arimoto


def tilt(x: float, alpha: AlphaLike) -> float:
    """x_a = x^a / (x^a + (1-x)^a)."""
    return _tilt_pair(_check_prob(x, "x"), as_alpha(alpha).value)[0]


def _tilt_pair(x, a):
    # (x_a, 1 - x_a), the complement taken from (1-x)^a directly
    xa = x ** a
    xb = (1.0 - x) ** a
    return xa / (xa + xb), xb / (xa + xb)


def arimoto_mi_biso(ch: BisoChannel, x: float, alpha: AlphaLike) -> MiValue:
    """Arimoto mutual information: the Sibson closed form at the tilted input."""
    a = as_alpha(alpha)
    x = _check_prob(x, "x")
    if a.is_unit:
        return shannon_mi(ch, x)
    al = a.value
    xt, xtb = _tilt_pair(x, al)
    total = _biso_total(ch, al, xt, xtb)
    return MiValue(al / (al - 1.0) * math.log(total), a, x, Variant.ARIMOTO)


def arimoto_mi_curve(ch: BisoChannel, xs, alpha: AlphaLike) -> np.ndarray:
    a = as_alpha(alpha)
    xs = np.asarray(xs, dtype=np.float64)
    if a.is_unit:
        return shannon_mi_curve(ch, xs)
    xt, xtb = _tilt_pair(xs, a.value)
    return sibson_mi_curve(ch, xt, a, xbar=xtb)


def arimoto_cond_entropy(ch: BisoChannel, x: float, alpha: AlphaLike) -> float:
    """Arimoto conditional entropy H^A_a(X|Y), evaluated from the joint law.

    (a/(1-a)) log sum_y (sum_x P(x, y)^a)^(1/a); Shannon H(X|Y) at a = 1.
    """
    a = as_alpha(alpha)
    x = _check_prob(x, "x")
    joint = np.array([x, 1.0 - x])[:, None] * ch.kernel()
    if a.is_unit:
        return shannon_binary_entropy(x) - shannon_mi(ch, x).value
    al = a.value
    inner = (joint ** al).sum(axis=0)
    return al / (1.0 - al) * math.log(math.fsum(inner ** (1.0 / al)))


def renyi_input_entropy(x: float, alpha: AlphaLike) -> float:
    return binary_entropy_alpha(x, alpha)


# ---------------------------------------------------------------- capacity


def _half_is_grid_max(ch: BisoChannel, a: AlphaParam, c: float) -> bool:
    vals = sibson_mi_curve(ch, np.linspace(0.0, 1.0, 21), a)
    return bool(vals.max() <= c + 1e-9)


def alpha_capacity(ch: BisoChannel, alpha: AlphaLike) -> CapacityValue:
    """alpha-capacity of a BISO channel, attained at the uniform input.

    For alpha != 1 this is log 2 + (a/(a-1)) log d_C. alpha == 1 gives the
    Shannon capacity and leaves ``d_c`` unset.
    """
    a = as_alpha(alpha)
    if a.is_unit:
        return CapacityValue(shannon_mi(ch, 0.5).value, None, a)
    al = a.value
    dc = d_c(ch, a)
    if ch.is_useless:
        c = 0.0
    else:
        c = LN2 + al / (al - 1.0) * math.log(dc)
        if __debug__:
            direct = sibson_mi_biso(ch, 0.5, a).value
            assert abs(direct - c) <= 1e-12, (direct, c)
            assert _half_is_grid_max(ch, a, c)
    return CapacityValue(c, dc, a)


def capacity_value(ch: BisoChannel, alpha: AlphaLike) -> float:
    return alpha_capacity(ch, alpha).c_alpha


# ------------------------------------------------------------ special orders

SPECIAL_ALPHAS = {"1/3": 1.0 / 3.0, "1/2": 0.5}


def special_mi(ch: BisoChannel, x: float, which) -> MiValue:
    """Mutual information at alpha in {1/3, 1/2} through its capacity-only form.

    ``which`` is ``"1/3"``, ``"1/2"`` or the corresponding float.
    """
    x = _check_prob(x, "x")
    if isinstance(which, str):
        if which not in SPECIAL_ALPHAS:
            raise DomainError(f"special order must be 1/3 or 1/2, got {which!r}")
        al = SPECIAL_ALPHAS[which]
    else:
        al = float(which)
        matches = [v for v in SPECIAL_ALPHAS.values() if abs(v - al) < 1e-12]
        if not matches:
            raise DomainError(f"special order must be 1/3 or 1/2, got {which!r}")
        al = matches[0]
    d = d_c(ch, al)
    xx = x * (1.0 - x)
    if al == 0.5:
        val = -math.log(1.0 - 2.0 * xx * (2.0 - d))
    else:
        val = -0.5 * math.log(1.0 - xx * (4.0 - d))
    return MiValue(val, AlphaParam(al), x, Variant.SIBSON)
