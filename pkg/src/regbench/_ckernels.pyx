# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled dense kernels. See ``_pykernels`` for the reference semantics."""

import numpy as np
from libc.math cimport sqrt, fabs


def householder_qr(A, b):
    cdef double[:, ::1] a = np.array(A, dtype=np.float64, order="C", copy=True)
    cdef double[::1] rhs = np.array(b, dtype=np.float64, copy=True)
    cdef Py_ssize_t n = a.shape[0], k = a.shape[1]
    cdef Py_ssize_t i, j, c
    cdef double norm, alpha, vv, scale, dot
    cdef double[::1] v = np.empty(n, dtype=np.float64)
    with nogil:
        for j in range(k):
            norm = 0.0
            for i in range(j, n):
                norm += a[i, j] * a[i, j]
            norm = sqrt(norm)
            if norm == 0.0:
                continue
            alpha = -norm if a[j, j] >= 0.0 else norm
            for i in range(j, n):
                v[i] = a[i, j]
            v[j] -= alpha
            vv = 0.0
            for i in range(j, n):
                vv += v[i] * v[i]
            if vv == 0.0:
                continue
            scale = 2.0 / vv
            for c in range(j + 1, k):
                dot = 0.0
                for i in range(j, n):
                    dot += v[i] * a[i, c]
                dot *= scale
                for i in range(j, n):
                    a[i, c] -= dot * v[i]
            dot = 0.0
            for i in range(j, n):
                dot += v[i] * rhs[i]
            dot *= scale
            for i in range(j, n):
                rhs[i] -= dot * v[i]
            a[j, j] = alpha
            for i in range(j + 1, n):
                a[i, j] = 0.0
    R = np.triu(np.asarray(a)[:k, :k])
    return R, np.asarray(rhs)[:k].copy()


def jacobi_eigh(S, double tol, int max_sweeps):
    cdef double[:, ::1] a = np.array(S, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t p = a.shape[0]
    cdef double[:, ::1] v = np.eye(p)
    cdef Py_ssize_t i, j, r
    cdef int sweep, done = -1
    cdef double total = 0.0, off, target, aij, tau, t, c, s, x, y
    for i in range(p):
        for j in range(p):
            total += a[i, j] * a[i, j]
    target = tol * sqrt(total)
    with nogil:
        for sweep in range(max_sweeps + 1):
            off = 0.0
            for i in range(p):
                for j in range(p):
                    if i != j:
                        off += a[i, j] * a[i, j]
            if not sqrt(off) > target:
                done = sweep
                break
            if sweep == max_sweeps:
                break
            for i in range(p - 1):
                for j in range(i + 1, p):
                    aij = a[i, j]
                    if aij == 0.0:
                        continue
                    tau = (a[j, j] - a[i, i]) / (2.0 * aij)
                    t = (1.0 if tau >= 0.0 else -1.0) / (fabs(tau) + sqrt(1.0 + tau * tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for r in range(p):
                        x = a[r, i]
                        y = a[r, j]
                        a[r, i] = c * x - s * y
                        a[r, j] = s * x + c * y
                    for r in range(p):
                        x = a[i, r]
                        y = a[j, r]
                        a[i, r] = c * x - s * y
                        a[j, r] = s * x + c * y
                    a[i, j] = 0.0
                    a[j, i] = 0.0
                    for r in range(p):
                        x = v[r, i]
                        y = v[r, j]
                        v[r, i] = c * x - s * y
                        v[r, j] = s * x + c * y
    w = np.array([a[i, i] for i in range(p)], dtype=np.float64)
    return w, np.asarray(v), done
