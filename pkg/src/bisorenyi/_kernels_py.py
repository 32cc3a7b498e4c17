"""Pure-Python/numpy implementations of the hot kernels.

This module mirrors ``_kernels.pyx`` function for function; it is selected at
import time when the compiled extension is unavailable.
"""
import math

import numpy as np

MAX_BISECTION_ITER = 200


def _k(p, a):
    return p ** a + (1.0 - p) ** a


def k_inverse_scalar(v, alpha):
    """Bisection for the p in [0, 1/2] with p**alpha + (1-p)**alpha == v.

    The caller is responsible for range validation; values beyond either end
    are clamped to the corresponding endpoint.
    """
    increasing = alpha < 1.0
    k_half = _k(0.5, alpha)
    if increasing:
        if v <= 1.0:
            return 0.0
        if v >= k_half:
            return 0.5
    else:
        if v >= 1.0:
            return 0.0
        if v <= k_half:
            return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(MAX_BISECTION_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if (_k(mid, alpha) < v) == increasing:
            lo = mid
        else:
            hi = mid
    if abs(_k(lo, alpha) - v) <= abs(_k(hi, alpha) - v):
        return lo
    return hi


def k_inverse_array(v, alpha):
    """Vectorised :func:`k_inverse_scalar` over a float array."""
    v = np.ascontiguousarray(v, dtype=np.float64)
    increasing = alpha < 1.0
    k_half = _k(0.5, alpha)
    lo = np.zeros_like(v)
    hi = np.full_like(v, 0.5)
    for _ in range(MAX_BISECTION_ITER):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        go_up = (_k(mid, alpha) < v) == increasing
        lo = np.where(active & go_up, mid, lo)
        hi = np.where(active & ~go_up, mid, hi)
    out = np.where(np.abs(_k(lo, alpha) - v) <= np.abs(_k(hi, alpha) - v), lo, hi)
    if increasing:
        out = np.where(v <= 1.0, 0.0, np.where(v >= k_half, 0.5, out))
    else:
        out = np.where(v >= 1.0, 0.0, np.where(v <= k_half, 0.5, out))
    return out


def _solve_transfer(log_ai, log_aj, qi, qj, alpha):
    # root of  log a_i - alpha log(q_i + d) - log a_j + alpha log(q_j - d)  on (0, q_j)
    lo, hi = 0.0, qj
    d = 0.5 * qj
    for _ in range(100):
        phi = log_ai - alpha * math.log(qi + d) - log_aj + alpha * math.log(qj - d)
        if phi > 0.0:
            lo = d
        else:
            hi = d
        if phi == 0.0 or hi - lo <= 1e-17 * qj:
            break
        dphi = -alpha / (qi + d) - alpha / (qj - d)
        step = d - phi / dphi
        d = step if lo < step < hi else 0.5 * (lo + hi)
    return d


def pair_descent(weights, alpha, max_steps, rtol):
    """Pairwise coordinate descent on the probability simplex.

    Minimises ``sign(alpha-1) * sum_y w_y * Q_y**(1-alpha)`` starting from the
    uniform distribution. Each step picks the two coordinates whose marginal
    values ``w_y * Q_y**(-alpha)`` are furthest apart and moves mass between
    them until the marginals agree (one-dimensional Newton/bisection).

    Returns ``(Q, steps_used, log_spread)`` where ``log_spread`` is the final
    gap between the largest and smallest log-marginal.
    """
    w = np.ascontiguousarray(weights, dtype=np.float64)
    n = w.shape[0]
    q = [1.0 / n] * n
    log_w = [math.log(x) for x in w]
    spread = 0.0
    steps = 0
    if n == 1:
        return np.ones(1), 0, 0.0
    for steps in range(1, max_steps + 1):
        r = [log_w[y] - alpha * math.log(q[y]) for y in range(n)]
        i = max(range(n), key=r.__getitem__)
        j = min(range(n), key=r.__getitem__)
        spread = r[i] - r[j]
        if spread <= rtol:
            steps -= 1
            break
        d = _solve_transfer(log_w[i], log_w[j], q[i], q[j], alpha)
        q[i] += d
        q[j] -= d
    else:
        r = [log_w[y] - alpha * math.log(q[y]) for y in range(n)]
        spread = max(r) - min(r)
    return np.array(q), steps, spread


def biso_sum_grid(mass, q, qbar, xs, xbar, beta):
    """``sum_y mass_y * k_beta(x * q_y)`` for every x in ``xs``.

    The complements ``qbar = 1 - q`` and ``xbar = 1 - x`` are passed in so
    callers can supply them without cancellation.
    """
    mass = np.asarray(mass, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)[None, :]
    qbar = np.asarray(qbar, dtype=np.float64)[None, :]
    xs = np.asarray(xs, dtype=np.float64)[:, None]
    xbar = np.asarray(xbar, dtype=np.float64)[:, None]
    conv = xs * qbar + xbar * q
    cbar = xs * q + xbar * qbar
    terms = mass[None, :] * (conv ** beta + cbar ** beta)
    return np.sort(terms, axis=1).sum(axis=1)
