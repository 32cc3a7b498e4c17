# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np

from libc.math cimport fabs, log, pow

DEF MAX_BISECTION_ITER = 200


cdef inline double _k(double p, double a) nogil:
    return pow(p, a) + pow(1.0 - p, a)


cdef double _k_inverse(double v, double alpha) nogil:
    cdef bint increasing = alpha < 1.0
    cdef double k_half = _k(0.5, alpha)
    cdef double lo = 0.0, hi = 0.5, mid
    cdef int it
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
    for it in range(MAX_BISECTION_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if (_k(mid, alpha) < v) == increasing:
            lo = mid
        else:
            hi = mid
    if fabs(_k(lo, alpha) - v) <= fabs(_k(hi, alpha) - v):
        return lo
    return hi


def k_inverse_scalar(double v, double alpha):
    return _k_inverse(v, alpha)


def k_inverse_array(v, double alpha):
    cdef double[::1] vin = np.ascontiguousarray(v, dtype=np.float64)
    out = np.empty(vin.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(vin.shape[0]):
            o[i] = _k_inverse(vin[i], alpha)
    return out


cdef double _solve_transfer(double log_ai, double log_aj, double qi, double qj,
                            double alpha) nogil:
    cdef double lo = 0.0, hi = qj, d = 0.5 * qj
    cdef double phi, dphi, step
    cdef int it
    for it in range(100):
        phi = log_ai - alpha * log(qi + d) - log_aj + alpha * log(qj - d)
        if phi > 0.0:
            lo = d
        else:
            hi = d
        if phi == 0.0 or hi - lo <= 1e-17 * qj:
            break
        dphi = -alpha / (qi + d) - alpha / (qj - d)
        step = d - phi / dphi
        if lo < step < hi:
            d = step
        else:
            d = 0.5 * (lo + hi)
    return d


def pair_descent(weights, double alpha, Py_ssize_t max_steps, double rtol):
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = w.shape[0]
    q_arr = np.full(n, 1.0 / n)
    cdef double[::1] q = q_arr
    lw_arr = np.log(np.asarray(w))
    cdef double[::1] lw = lw_arr
    cdef Py_ssize_t step = 0, y, i, j
    cdef double r, rmax, rmin, spread = 0.0, d
    cdef bint converged = False
    if n == 1:
        return np.ones(1), 0, 0.0
    with nogil:
        while step < max_steps:
            step += 1
            i = 0
            j = 0
            rmax = lw[0] - alpha * log(q[0])
            rmin = rmax
            for y in range(1, n):
                r = lw[y] - alpha * log(q[y])
                if r > rmax:
                    rmax = r
                    i = y
                if r < rmin:
                    rmin = r
                    j = y
            spread = rmax - rmin
            if spread <= rtol:
                step -= 1
                converged = True
                break
            d = _solve_transfer(lw[i], lw[j], q[i], q[j], alpha)
            q[i] += d
            q[j] -= d
        if not converged:
            rmax = lw[0] - alpha * log(q[0])
            rmin = rmax
            for y in range(1, n):
                r = lw[y] - alpha * log(q[y])
                if r > rmax:
                    rmax = r
                if r < rmin:
                    rmin = r
            spread = rmax - rmin
    return q_arr, int(step), spread


def biso_sum_grid(mass, q, qbar, xs, xbar, double beta):
    cdef double[::1] m = np.ascontiguousarray(mass, dtype=np.float64)
    cdef double[::1] qq = np.ascontiguousarray(q, dtype=np.float64)
    cdef double[::1] qb = np.ascontiguousarray(qbar, dtype=np.float64)
    cdef double[::1] xb = np.ascontiguousarray(xbar, dtype=np.float64)
    cdef double[::1] x = np.ascontiguousarray(xs, dtype=np.float64)
    out = np.empty(x.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t a, b
    cdef double s, c, t, term, conv, cbar
    with nogil:
        for a in range(x.shape[0]):
            # Neumaier compensated summation
            s = 0.0
            c = 0.0
            for b in range(m.shape[0]):
                conv = x[a] * qb[b] + xb[a] * qq[b]
                cbar = x[a] * qq[b] + xb[a] * qb[b]
                term = m[b] * (pow(conv, beta) + pow(cbar, beta))
                t = s + term
                if fabs(s) >= fabs(term):
                    c += (s - t) + term
                else:
                    c += (term - t) + s
                s = t
            o[a] = s + c
    return out
