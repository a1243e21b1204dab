"""Pure-Python implicit-shift QL eigensolver for symmetric tridiagonal matrices.

Reference implementation of the same algorithm as the compiled kernel
(`_ql_cy.pyx`).  The Givens rotations are applied to eigenvector columns
with numpy, so the cost is one small vector operation per rotation; the
compiled kernel runs the whole loop nest in C.
"""

import math

import numpy as np

# Relative machine threshold below which a subdiagonal element is treated
# as zero, splitting the matrix.
_EPS = np.finfo(np.float64).eps
_MAX_SWEEPS = 50


class ConvergenceError(RuntimeError):
    """QL iteration failed to isolate an eigenvalue within the sweep bound."""


def ql_decompose(diag, offdiag):
    """Eigendecomposition of the symmetric tridiagonal matrix (diag, offdiag).

    Parameters
    ----------
    diag : (n,) float array, main diagonal.
    offdiag : (n-1,) float array, sub/superdiagonal.

    Returns
    -------
    (w, V) with unsorted eigenvalues w and orthonormal eigenvectors in the
    columns of V (V[:, i] belongs to w[i]).
    """
    d = np.asarray(diag, dtype=np.float64).copy()
    n = d.shape[0]
    e = np.zeros(n, dtype=np.float64)
    if n > 1:
        e[: n - 1] = offdiag
    V = np.eye(n, dtype=np.float64)
    if n == 1:
        return d, V

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps == _MAX_SWEEPS:
                raise ConvergenceError(
                    f"QL sweep bound exceeded at index {l} (n={n})"
                )
            sweeps += 1

            # implicit shift from the leading 2x2
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # rotation annihilated; split and restart this l
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
                vi = V[:, i].copy()
                V[:, i] = c * vi - s * V[:, i + 1]
                V[:, i + 1] = s * vi + c * V[:, i + 1]
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, V
