"""Reduced single-mode states and the scalar diagnostics built from them.

The diagnostics follow the usual quantum-optics set: mode population and
its variance, the annihilation-operator variance <b+b> - <b+><b> (zero
exactly on a coherent state), Mandel Q = (var(n) - <n>)/<n> (zero for
Poisson, -1 for a Fock state), purity and linear entropy 1 - Tr[rho^2].
In the equal-scattering regime u_aa = u_bb = u_ab = U everything reduces
to closed forms in the rotated amplitude beta(t), which serve as oracles
for the numeric path.
"""

import math
from dataclasses import dataclass

import numpy as np

from .analytic import amplitudes_at
from .model import CoherentPair, ModelParams, TwoModeState, derive_params

__all__ = ["SingleModeDensity", "ModeDiagnostics", "ClosedFormRecord",
           "reduce_mode_b", "reduce_mode_a", "diagnostics",
           "closed_form_record"]

# Mean occupation below which Mandel Q is reported as undefined rather
# than as a 0/0 artifact.
_VACUUM_MEAN = 1e-14


@dataclass(frozen=True)
class SingleModeDensity:
    """Hermitian single-mode density matrix on Fock levels 0..cutoff.

    The trace equals the norm of whatever produced it (reduction keeps
    the source state's small truncation deficit); moments taken from it
    are normalized by the trace.
    """

    rho: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.rho, dtype=np.complex128).copy()
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("rho must be square")
        arr.flags.writeable = False
        object.__setattr__(self, "rho", arr)

    @property
    def cutoff(self) -> int:
        return self.rho.shape[0] - 1

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    @classmethod
    def from_pure(cls, amplitudes: np.ndarray) -> "SingleModeDensity":
        v = np.asarray(amplitudes, dtype=np.complex128)
        return cls(rho=np.outer(v, v.conj()))

    def padded(self, cutoff: int) -> "SingleModeDensity":
        """Zero-padded copy on Fock levels 0..cutoff (exact for a state
        that is already truncated); used to satisfy phase-space window
        checks that need headroom above the occupied levels."""
        if cutoff < self.cutoff:
            raise ValueError("padded cutoff must not shrink the matrix")
        dim = cutoff + 1
        rho = np.zeros((dim, dim), dtype=np.complex128)
        rho[: self.rho.shape[0], : self.rho.shape[1]] = self.rho
        return SingleModeDensity(rho=rho)

    def purity(self) -> float:
        """Tr[rho^2] of the trace-normalized matrix, computed in the
        numerically stable Frobenius form sum |rho_nm|^2."""
        tr = self.trace
        return float(np.sum(np.abs(self.rho) ** 2) / tr ** 2)

    def pure_state_fidelity(self, amplitudes: np.ndarray) -> float:
        """<phi|rho|phi> against a pure reference."""
        m = min(self.rho.shape[0], len(amplitudes))
        v = np.asarray(amplitudes[:m], dtype=np.complex128)
        return float(np.real(v.conj() @ self.rho[:m, :m] @ v))


@dataclass(frozen=True)
class ModeDiagnostics:
    """Scalar diagnostics of one mode; mandel_q is None at numerical
    vacuum where the ratio is undefined."""

    n_mean: float
    var_n: float
    var_b: float
    mandel_q: float | None
    purity: float
    linear_entropy: float


def reduce_mode_b(state: TwoModeState) -> SingleModeDensity:
    """Partial trace over mode a: rho_b[m, m'] = sum_n c*_{n,m'} c_{n,m}.

    Uses the dense (n_a, n_b) table to map the block layout onto the
    double sum; the returned trace equals the state's norm.
    """
    table = state.dense_table()
    rho = table.T @ table.conj()
    return SingleModeDensity(rho=rho)


def reduce_mode_a(state: TwoModeState) -> SingleModeDensity:
    """Partial trace over mode b."""
    table = state.dense_table()
    rho = table @ table.conj().T
    return SingleModeDensity(rho=rho)


def diagnostics(density: SingleModeDensity) -> ModeDiagnostics:
    """All scalar diagnostics of a single-mode density matrix."""
    rho = density.rho
    tr = density.trace
    n = np.arange(rho.shape[0], dtype=np.float64)
    populations = np.diag(rho).real / tr
    n_mean = float(populations @ n)
    n_sq = float(populations @ n ** 2)
    var_n = n_sq - n_mean ** 2
    # <b> = sum_n sqrt(n) rho[n, n-1] / tr
    b_mean = complex(np.sum(np.sqrt(n[1:]) * np.diag(rho, -1))) / tr
    var_b = n_mean - abs(b_mean) ** 2
    if n_mean > _VACUUM_MEAN:
        mandel_q = (var_n - n_mean) / n_mean
    else:
        mandel_q = None
    purity = density.purity()
    return ModeDiagnostics(n_mean=n_mean, var_n=var_n, var_b=var_b,
                           mandel_q=mandel_q, purity=purity,
                           linear_entropy=1.0 - purity)


@dataclass(frozen=True)
class ClosedFormRecord:
    """Equal-scattering closed forms at one instant."""

    t: float
    n_mean: float
    var_n: float
    var_b: float
    mandel_q: float


def closed_form_record(pair: CoherentPair, p: ModelParams, t: float) -> ClosedFormRecord:
    """Mode-b diagnostics in the equal-scattering regime u_aa = u_bb = u_ab.

    <n_b> = var(n_b) = |beta(t)|^2, Q = 0 (Poisson throughout) and
    var_b = |beta(t)|^2 (1 - e^{-2N[1 - cos(2Ut)]}), which vanishes at
    t = pi/U where mode b returns to a coherent state.
    """
    if not (p.u_aa == p.u_bb == p.u_ab):
        raise ValueError("closed-form record requires u_aa = u_bb = u_ab")
    d = derive_params(p, pair.n_mean)
    beta_t = amplitudes_at(pair, d, p, t).beta_t
    pop = abs(beta_t) ** 2
    u = p.u_ab
    n_total = pair.n_mean
    var_b = pop * (1.0 - math.exp(-2.0 * n_total * (1.0 - math.cos(2.0 * u * t))))
    return ClosedFormRecord(t=t, n_mean=pop, var_n=pop, var_b=var_b, mandel_q=0.0)
