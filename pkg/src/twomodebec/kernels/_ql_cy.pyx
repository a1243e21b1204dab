# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implicit-shift QL kernel for symmetric tridiagonal matrices.

Same algorithm as kernels/ql.py; the rotation loop nest runs in C.
"""

import numpy as np

from libc.math cimport fabs, hypot, copysign

DEF MAX_SWEEPS = 50


class ConvergenceError(RuntimeError):
    """QL iteration failed to isolate an eigenvalue within the sweep bound."""


def ql_decompose(diag, offdiag):
    """Eigendecomposition of a symmetric tridiagonal matrix.

    Returns (w, V): unsorted eigenvalues and orthonormal eigenvector columns.
    """
    d_arr = np.array(diag, dtype=np.float64)
    cdef Py_ssize_t n = d_arr.shape[0]
    e_arr = np.zeros(n, dtype=np.float64)
    if n > 1:
        e_arr[: n - 1] = offdiag
    V_arr = np.eye(n, dtype=np.float64)
    if n == 1:
        return d_arr, V_arr

    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    cdef double[:, ::1] V = V_arr
    cdef double eps = np.finfo(np.float64).eps
    cdef Py_ssize_t l, m, i, k, sweeps
    cdef double dd, g, r, s, c, p, f, b, vki
    cdef bint underflow

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps == MAX_SWEEPS:
                raise ConvergenceError(
                    "QL sweep bound exceeded at index %d (n=%d)" % (l, n)
                )
            sweeps += 1

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    vki = V[k, i]
                    V[k, i] = c * vki - s * V[k, i + 1]
                    V[k, i + 1] = s * vki + c * V[k, i + 1]
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d_arr, V_arr
