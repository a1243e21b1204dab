"""Hot numerical kernels with backend selection at import.

`tridiag_eigh` prefers the compiled Cython kernel and falls back to the
pure-Python implementation of the same implicit-QL algorithm when the
extension is not built.  `BACKEND` records which one is active.  Both
backends are deterministic; `benchmarks/bench_kernels.py` compares them.
"""

import numpy as np

from .ql import ConvergenceError

try:  # pragma: no cover - exercised indirectly via BACKEND
    from ._ql_cy import ql_decompose as _ql_decompose
    from ._ql_cy import ConvergenceError as _CyConvergenceError

    BACKEND = "compiled"
except ImportError:  # pragma: no cover
    from .ql import ql_decompose as _ql_decompose

    _CyConvergenceError = ConvergenceError
    BACKEND = "python"

__all__ = ["tridiag_eigh", "BACKEND", "ConvergenceError"]


def tridiag_eigh(diag, offdiag):
    """Full eigendecomposition of a real symmetric tridiagonal matrix.

    Parameters
    ----------
    diag : (n,) main diagonal.
    offdiag : (n-1,) sub/superdiagonal.

    Returns
    -------
    w : (n,) eigenvalues in ascending order.
    V : (n, n) orthonormal eigenvectors in columns, V[:, i] for w[i], with
        the first nonzero component of each eigenvector made positive so
        output files are reproducible across runs and backends.

    Raises
    ------
    ConvergenceError if the QL iteration does not converge (not expected
    for the well-conditioned matrices arising here).
    """
    try:
        w, V = _ql_decompose(np.asarray(diag, dtype=np.float64),
                             np.asarray(offdiag, dtype=np.float64))
    except _CyConvergenceError as exc:  # normalize backend exception type
        raise ConvergenceError(str(exc)) from None
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    for i in range(V.shape[1]):
        col = V[:, i]
        nz = np.nonzero(col)[0]
        if nz.size and col[nz[0]] < 0.0:
            np.negative(col, out=col)
    return w, V
