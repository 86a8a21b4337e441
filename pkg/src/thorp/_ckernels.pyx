# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference versions."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


cdef inline i64 _rank(const i64* p, Py_ssize_t n, const i64* fact) noexcept nogil:
    cdef i64 r = 0
    cdef Py_ssize_t i, j
    cdef i64 smaller
    for i in range(n - 1):
        smaller = 0
        for j in range(i + 1, n):
            if p[j] < p[i]:
                smaller += 1
        r += smaller * fact[i]
    return r


cdef cnp.ndarray _fact(Py_ssize_t n):
    cdef cnp.ndarray[i64, ndim=1] f = np.ones(n, dtype=np.int64)
    cdef Py_ssize_t i
    for i in range(n - 2, -1, -1):
        f[i] = f[i + 1] * (n - 1 - i)
    return f


def rank_rows(perms):
    cdef const i64[:, ::1] P = np.ascontiguousarray(perms, dtype=np.int64)
    cdef Py_ssize_t m = P.shape[0], n = P.shape[1], k
    cdef i64[::1] fact = _fact(n)
    out = np.empty(m, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        for k in range(m):
            o[k] = _rank(&P[k, 0], n, &fact[0])
    return out


def compose_rank(nu, perms):
    cdef const i64[::1] v = np.ascontiguousarray(nu, dtype=np.int64)
    cdef const i64[:, ::1] P = np.ascontiguousarray(perms, dtype=np.int64)
    cdef Py_ssize_t m = P.shape[0], n = P.shape[1], k, i
    cdef i64[::1] fact = _fact(n)
    cdef i64 buf[64]
    if n > 64:
        raise ValueError("deck too large for compiled kernel")
    out = np.empty(m, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        for k in range(m):
            for i in range(n):
                buf[i] = v[P[k, i]]
            o[k] = _rank(buf, n, &fact[0])
    return out


def step(probs, perms, nus):
    cdef const double[::1] src = np.ascontiguousarray(probs, dtype=np.float64)
    cdef const i64[:, ::1] P = np.ascontiguousarray(perms, dtype=np.int64)
    cdef const i64[:, ::1] V = np.ascontiguousarray(nus, dtype=np.int64)
    cdef Py_ssize_t m = P.shape[0], n = P.shape[1], K = V.shape[0], k, r, i
    cdef i64[::1] fact = _fact(n)
    cdef i64 buf[64]
    cdef double w = 1.0 / K
    if n > 64:
        raise ValueError("deck too large for compiled kernel")
    out = np.zeros(m, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        # same accumulation order as the numpy kernel: pattern-major
        for k in range(K):
            for r in range(m):
                for i in range(n):
                    buf[i] = V[k, P[r, i]]
                o[_rank(buf, n, &fact[0])] += src[r] * w
    return out


def convolve(x_perms, x_w, mu_perms, mu_w, Py_ssize_t size):
    cdef const i64[:, ::1] X = np.ascontiguousarray(x_perms, dtype=np.int64)
    cdef const double[::1] xw = np.ascontiguousarray(x_w, dtype=np.float64)
    cdef const i64[:, ::1] M = np.ascontiguousarray(mu_perms, dtype=np.int64)
    cdef const double[::1] mw = np.ascontiguousarray(mu_w, dtype=np.float64)
    cdef Py_ssize_t a = X.shape[0], n = X.shape[1], b = M.shape[0]
    cdef Py_ssize_t ia, ib, i
    cdef i64[::1] fact = _fact(n)
    cdef i64 buf[64]
    if n > 64:
        raise ValueError("deck too large for compiled kernel")
    out = np.zeros(size, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for ib in range(b):
            for ia in range(a):
                for i in range(n):
                    buf[i] = X[ia, M[ib, i]]
                o[_rank(buf, n, &fact[0])] += xw[ia] * mw[ib]
    return out
