"""Closed-form propagator for the balanced-collision regime.

When u_aa + u_bb = 2 u_ab the Hamiltonian splits into commuting pieces
omega_0 N + u_ab N^2 + omega_1 dn - lam (a+b + ab+), and a beamsplitter
rotation diagonalizes the one-particle part.  A product of coherent
states then stays a coherent product with rotated amplitudes alpha(t),
beta(t), dressed by the collision phase on the total number:

    c_{n,m}(t) = e^{-N/2} alpha(t)^n beta(t)^m / sqrt(n! m!)
                 * exp(-i t u_ab (n+m)^2) * exp(-i omega_0 t (n+m))

This module is both the fast path and the oracle for the block-diagonal
numeric evolution.  For u_aa != u_bb the detuning omega_1 uses the scalar
mean number while the exact dynamics carries it per block, so the closed
form is exact only for u_aa = u_bb; callers wanting the residual gap can
measure fidelity against `evolution.evolve`.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .kernels import tridiag_eigh
from .model import (CoherentPair, DerivedParams, ModelParams, TwoModeState,
                    _per_block_coherent, derive_params, log_factorials,
                    poisson_cutoff)

__all__ = ["AnalyticAmplitudes", "amplitudes_at", "evolved_state_analytic",
           "transformed_hamiltonian_check"]


@dataclass(frozen=True)
class AnalyticAmplitudes:
    """Rotated coherent amplitudes at one instant; |alpha_t|^2 + |beta_t|^2
    equals the conserved mean total number."""

    alpha_t: complex
    beta_t: complex
    valid_at: float


def _sinc_lambda(lambda_1: float, t: float) -> float:
    """sin(lambda_1 t)/lambda_1 with its t limit at lambda_1 = 0."""
    if lambda_1 == 0.0:
        return t
    return math.sin(lambda_1 * t) / lambda_1


def amplitudes_at(pair: CoherentPair, d: DerivedParams, p: ModelParams,
                  t: float) -> AnalyticAmplitudes:
    """Coherent amplitudes of the rotated product at time t."""
    c = math.cos(d.lambda_1 * t)
    s = _sinc_lambda(d.lambda_1, t)
    alpha_t = pair.alpha_a * c + 1j * s * (p.lam * pair.alpha_b - d.omega_1 * pair.alpha_a)
    beta_t = pair.alpha_b * c + 1j * s * (p.lam * pair.alpha_a + d.omega_1 * pair.alpha_b)
    return AnalyticAmplitudes(alpha_t=alpha_t, beta_t=beta_t, valid_at=t)


def evolved_state_analytic(pair: CoherentPair, p: ModelParams, t: float,
                           tail_tol: float) -> TwoModeState:
    """Closed-form evolved state from a coherent product.

    Requires p.analytic_valid; truncation follows the same Poisson-tail
    policy as `coherent_product` (the total-number distribution is
    conserved, so one cutoff serves all t).
    """
    if not p.analytic_valid:
        raise ValueError(
            "closed form requires u_aa + u_bb = 2 u_ab; "
            "use evolution.evolve for this parameter set"
        )
    d = derive_params(p, pair.n_mean)
    amps = amplitudes_at(pair, d, p, t)
    n_max = poisson_cutoff(pair.n_mean, tail_tol)
    lf = log_factorials(n_max)
    blocks = []
    for n in range(n_max + 1):
        block = _per_block_coherent(amps.alpha_t, amps.beta_t, n, lf)
        block *= cmath.exp(-1j * t * (p.u_ab * n * n + d.omega_0 * n))
        blocks.append(block)
    return TwoModeState(blocks=tuple(blocks), tail_tol=tail_tol)


def _beamsplitter_block(gamma: float, n_total: int) -> np.ndarray:
    """exp(gamma/2 (a+b - ab+)) restricted to total number n_total.

    The generator is real antisymmetric tridiagonal; the diagonal phase
    similarity diag(i^k) maps it to -i times a real symmetric tridiagonal
    matrix, which the QL kernel diagonalizes.
    """
    n = n_total
    k = np.arange(n, dtype=np.float64)
    c = np.sqrt((n - k) * (k + 1.0))  # coupling between k and k+1
    w, v = tridiag_eigh(np.zeros(n + 1), c)
    phase = 1j ** np.arange(n + 1)
    inner = (v * np.exp(-1j * 0.5 * gamma * w)) @ v.T
    return (phase.conj()[:, None] * inner) * phase[None, :]


def transformed_hamiltonian_check(p: ModelParams, n_block: int) -> float:
    """Residual of the beamsplitter conjugation identity on one block.

    Rotating the block Hamiltonian by gamma = arccos(omega_1/lambda_1)
    must leave the diagonal matrix omega_0 N + u_ab N^2 + lambda_1 (n_a -
    n_b), with omega_1 evaluated at the block's own total number.  Returns
    max |V^dag H V - diagonal|; a structural test, not a hot path.
    """
    if not p.analytic_valid:
        raise ValueError("conjugation identity requires u_aa + u_bb = 2 u_ab")
    if n_block < 0:
        raise ValueError("n_block must be nonnegative")
    from .evolution import build_block

    d = derive_params(p, float(n_block))
    h = build_block(p, n_block).dense().astype(np.complex128)
    if d.lambda_1 == 0.0:
        v = np.eye(n_block + 1, dtype=np.complex128)
    else:
        gamma = math.acos(d.omega_1 / d.lambda_1)
        v = _beamsplitter_block(gamma, n_block)
    transformed = v.conj().T @ h @ v
    k = np.arange(n_block + 1, dtype=np.float64)
    delta_n = (n_block - k) - k
    expected = np.diag(d.omega_0 * n_block + p.u_ab * n_block ** 2
                       + d.lambda_1 * delta_n)
    return float(np.max(np.abs(transformed - expected)))
