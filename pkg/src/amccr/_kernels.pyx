# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_fallback``.

Same signatures and the same floating-point operation order, so results are
bit-identical to the numpy path.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, INFINITY

cnp.import_array()

NAME = "cython"


def best_per_h(beta_in, double slack, double eps):
    cdef double[::1] beta = np.ascontiguousarray(beta_in, dtype=np.float64)
    cdef Py_ssize_t k = beta.shape[0]
    masks_arr = np.full(k, -1, dtype=np.int64)
    xis_arr = np.zeros(k, dtype=np.float64)
    found_arr = np.zeros(k, dtype=np.uint8)
    cdef long long[::1] masks = masks_arr
    cdef double[::1] xis = xis_arr
    cdef unsigned char[::1] found = found_arr

    cdef Py_ssize_t n_free = k - 2
    cdef Py_ssize_t size_max = (<Py_ssize_t>1) << n_free
    buf_arr = np.empty(size_max, dtype=np.float64)
    cdef double[::1] buf = buf_arr
    others_arr = np.empty(k - 1, dtype=np.intp)
    cdef Py_ssize_t[::1] others = others_arr

    cdef Py_ssize_t h, i, j, p, size, c
    cdef double b, v, a, amax, bound, top
    cdef bint any_feas

    for h in range(k):
        j = 0
        for i in range(k):
            if i != h:
                others[j] = i
                j += 1
        buf[0] = 0.0
        size = 1
        for p in range(n_free):
            b = beta[others[p]]
            for i in range(size):
                v = buf[i]
                buf[i] = v + b
                buf[i + size] = v - b
            size *= 2
        top = beta[others[k - 2]]
        for i in range(size):
            buf[i] = buf[i] + top

        bound = beta[h] + slack
        any_feas = False
        amax = 0.0
        for i in range(size):
            a = fabs(buf[i])
            if a <= bound:
                if not any_feas or a > amax:
                    amax = a
                any_feas = True
        if not any_feas:
            continue
        for i in range(size):
            a = fabs(buf[i])
            if a <= bound and a >= amax - eps:
                masks[h] = i
                xis[h] = buf[i]
                found[h] = 1
                break
    return masks_arr, xis_arr, found_arr.astype(bool)


cdef inline double _pair_best(double s, double ra, double rb, double ba, double bb,
                              double slack) nogil:
    cdef double lo = s - bb
    cdef double hi = s + bb
    cdef double best = -INFINITY
    cdef double xa, xb, g
    cdef int e
    if lo < -ba:
        lo = -ba
    if hi > ba:
        hi = ba
    if not (lo <= hi + slack):
        return -INFINITY
    if hi < lo:
        hi = lo
    for e in range(2):
        xa = lo if e == 0 else hi
        if xa < -ba:
            xa = -ba
        elif xa > ba:
            xa = ba
        xb = s - xa
        if xb < -bb:
            xb = -bb
        elif xb > bb:
            xb = bb
        g = sqrt(ra + xa * xa) + sqrt(rb + xb * xb)
        if g > best:
            best = g
    return best


def grid_values(r_in, beta_in, coords_in, double slack):
    cdef double[::1] r = np.ascontiguousarray(r_in, dtype=np.float64)
    cdef double[::1] beta = np.ascontiguousarray(beta_in, dtype=np.float64)
    cdef Py_ssize_t k = r.shape[0]
    cdef Py_ssize_t n_axes = k - 2
    cdef Py_ssize_t a_idx = k - 2, b_idx = k - 1
    cdef double ra = r[a_idx], rb = r[b_idx], ba = beta[a_idx], bb = beta[b_idx]
    cdef double pb

    if n_axes == 0:
        pb = _pair_best(-0.0, ra, rb, ba, bb, slack)
        return np.array([(0.0 + pb) / k if pb != -INFINITY else -INFINITY])

    cdef double[:, ::1] coords = np.ascontiguousarray(coords_in, dtype=np.float64)
    cdef Py_ssize_t res = coords.shape[1]
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t ax
    for ax in range(n_axes):
        total *= res
    out_arr = np.empty(total, dtype=np.float64)
    cdef double[::1] out = out_arr

    digits_arr = np.zeros(n_axes, dtype=np.intp)
    cdef Py_ssize_t[::1] digits = digits_arr
    # prefix sums: level L holds the running values after axis L
    ps_arr = np.zeros(n_axes, dtype=np.float64)
    pg_arr = np.zeros(n_axes, dtype=np.float64)
    cdef double[::1] ps = ps_arr
    cdef double[::1] pg = pg_arr

    cdef Py_ssize_t flat, L, start
    cdef double x, s0, g0
    start = 0
    for flat in range(total):
        for L in range(start, n_axes):
            x = coords[L, digits[L]]
            if L == 0:
                s0 = 0.0
                g0 = 0.0
            else:
                s0 = ps[L - 1]
                g0 = pg[L - 1]
            ps[L] = s0 + x
            pg[L] = g0 + sqrt(r[L] + x * x)
        pb = _pair_best(-ps[n_axes - 1], ra, rb, ba, bb, slack)
        if pb == -INFINITY:
            out[flat] = -INFINITY
        else:
            out[flat] = (pg[n_axes - 1] + pb) / k
        # odometer increment, last axis fastest
        L = n_axes - 1
        while L >= 0:
            digits[L] += 1
            if digits[L] < res:
                break
            digits[L] = 0
            L -= 1
        start = L if L >= 0 else 0
    return out_arr
