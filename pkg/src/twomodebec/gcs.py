"""Kerr-phased coherent states and their finite cat decompositions.

A mode left alone at a purification time carries Poisson amplitudes with a
quadratic phase: g_n ~ gamma^n e^{-i c n^2}/sqrt(n!).  When c/pi is a
rational r/s the phase sequence is periodic and the state is a finite
superposition of l coherent states equally spaced on a circle, with l
fixed by the parity of (r, s).  The coefficients come from a discrete
Fourier transform of the phase sequence.

Conventions: the quadratic phase enters with a minus sign (as produced by
the dynamics) and the rational snap is c = pi * r / s.  State equality is
always judged by fidelity, never amplitude by amplitude.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import (DerivedParams, ModelParams, ResourceLimitError,
                    log_factorials, poisson_cutoff)

__all__ = ["RationalPhase", "GcsState", "CatDecomposition",
           "purification_initial_condition", "purification_times",
           "gcs_from_vacuum_start", "detect_rational_phase", "cat_size",
           "cat_coefficients", "cat_reconstruct", "coherent_amplitudes"]

# Defaults for snapping a floating quadratic-phase coefficient to pi*r/s.
RATIONAL_TOL_DEFAULT = 1e-9
MAX_DENOMINATOR_DEFAULT = 64

# Degeneracy guard for the purification condition near tan/cot poles.
_POLE_TOL = 1e-12


@dataclass(frozen=True)
class RationalPhase:
    """Reduced fraction r/s encoding the quadratic phase pi*(r/s)*n^2."""

    r: int
    s: int

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if self.r < 0:
            raise ValueError("r must be nonnegative")
        if math.gcd(self.r, self.s) != 1:
            raise ValueError(f"{self.r}/{self.s} is not reduced")


@dataclass(frozen=True)
class CatDecomposition:
    """Finite superposition sum_m coeffs[m] |beta e^{-2 pi i m / l}>."""

    l: int
    coeffs: np.ndarray
    beta: complex

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128).copy()
        if arr.shape != (self.l,):
            raise ValueError("coeffs must have length l")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)


def coherent_amplitudes(gamma: complex, cutoff: int) -> np.ndarray:
    """Fock amplitudes of |gamma> up to cutoff, evaluated in log space."""
    lf = log_factorials(cutoff)
    n = np.arange(cutoff + 1)
    if gamma == 0:
        out = np.zeros(cutoff + 1, dtype=np.complex128)
        out[0] = 1.0
        return out
    log_mag = -0.5 * abs(gamma) ** 2 + n * math.log(abs(gamma)) - 0.5 * lf
    return np.exp(log_mag + 1j * n * cmath.phase(gamma))


@dataclass(frozen=True)
class GcsState:
    """Single-mode state g_n = e^{-|gamma|^2/2} gamma^n e^{-i kerr n^2}/sqrt(n!).

    The number distribution is Poisson with mean |gamma|^2 whatever the
    phases, so mean and variance coincide and Mandel Q vanishes.
    """

    gamma: complex
    kerr: float
    amplitudes: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amplitudes, dtype=np.complex128).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "amplitudes", arr)

    @classmethod
    def from_quadratic_phase(cls, gamma: complex, kerr: float,
                             tail_tol: float = 1e-12) -> "GcsState":
        cutoff = poisson_cutoff(abs(gamma) ** 2, tail_tol)
        n = np.arange(cutoff + 1)
        amps = coherent_amplitudes(gamma, cutoff) * np.exp(-1j * kerr * n.astype(float) ** 2)
        return cls(gamma=gamma, kerr=kerr, amplitudes=amps)

    @property
    def cutoff(self) -> int:
        return len(self.amplitudes) - 1

    def fidelity(self, other: np.ndarray) -> float:
        m = min(len(self.amplitudes), len(other))
        return abs(np.vdot(self.amplitudes[:m], other[:m])) ** 2


def purification_initial_condition(alpha_known: complex, which_mode: str,
                                   d: DerivedParams, p: ModelParams,
                                   t_e: float) -> complex:
    """Partner amplitude that empties the designated mode at time t_e.

    `which_mode` names the mode whose rotated amplitude must vanish;
    `alpha_known` is that mode's initial amplitude and the returned value
    is the other mode's.  Requiring alpha(t_e) = 0 (or beta(t_e) = 0 for
    mode b) gives

        partner = alpha_known * (+/- omega_1 + i lambda_1 cot(lambda_1 t_e)) / lam

    with + for mode a and - for mode b.
    """
    if p.lam <= 0.0:
        raise ValueError("modes are decoupled at lam = 0; no purification")
    if which_mode not in ("a", "b"):
        raise ValueError("which_mode must be 'a' or 'b'")
    x = d.lambda_1 * t_e
    if abs(math.cos(x)) <= _POLE_TOL:
        raise ValueError("lambda_1 * t_e sits at a tan pole; no finite solution")
    if abs(math.sin(x)) <= _POLE_TOL:
        raise ValueError("lambda_1 * t_e is a multiple of pi; partner diverges")
    cot = math.cos(x) / math.sin(x)
    sign = 1.0 if which_mode == "a" else -1.0
    return alpha_known * (sign * d.omega_1 + 1j * d.lambda_1 * cot) / p.lam


def purification_times(d: DerivedParams, kind: str, count: int) -> list[float]:
    """The first `count` times with a vanishing rotated amplitude.

    kind='quarter': t_p = (2p+1) pi / (4 lambda_1), the equal-split family.
    kind='full':    t_k = k pi / lambda_1, k >= 1, the vacuum-start family.
    """
    if d.lambda_1 <= 0.0:
        raise ValueError("lambda_1 must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    if kind == "quarter":
        return [(2 * i + 1) * math.pi / (4.0 * d.lambda_1) for i in range(count)]
    if kind == "full":
        return [(i + 1) * math.pi / d.lambda_1 for i in range(count)]
    raise ValueError("kind must be 'quarter' or 'full'")


def gcs_from_vacuum_start(n_total: float, d: DerivedParams, p: ModelParams,
                          k: int, tail_tol: float = 1e-12) -> GcsState:
    """Mode-a state after evolving |sqrt(N)> x |0> to t_k = k pi / lambda_1.

    All population returns to mode a carrying the quadratic collision
    phase: amplitude sqrt(N) e^{-i k pi (omega_0 + lambda_1)/lambda_1}
    (the cos(k pi) swap sign folded into the phase) and Kerr coefficient
    k pi u_ab / lambda_1.  Matches full evolution of the product state
    projected on the mode-b vacuum.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if d.lambda_1 <= 0.0:
        raise ValueError("lambda_1 must be positive")
    gamma = math.sqrt(n_total) * cmath.exp(
        -1j * k * math.pi * (d.omega_0 + d.lambda_1) / d.lambda_1)
    kerr = k * math.pi * p.u_ab / d.lambda_1
    return GcsState.from_quadratic_phase(gamma, kerr, tail_tol)


def detect_rational_phase(u_ab: float, t_e: float, tol: float = RATIONAL_TOL_DEFAULT,
                          max_denominator: int = MAX_DENOMINATOR_DEFAULT):
    """Snap the quadratic-phase coefficient u_ab * t_e to pi * r/s.

    Continued-fraction expansion (Fraction.limit_denominator) restricted
    to s <= max_denominator; returns None when no fraction lies within
    tol.  None is a value, not an error: irrational ratios simply admit
    no finite cat decomposition.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    x = u_ab * t_e / math.pi
    if x < 0.0:
        return None
    frac = Fraction(x).limit_denominator(max_denominator)
    if abs(x - float(frac)) > tol:
        return None
    return RationalPhase(r=frac.numerator, s=frac.denominator)


def cat_size(rp: RationalPhase) -> int:
    """Packet count: the period of the phase sequence e^{-i pi (r/s) n^2},
    which is 2s when r and s are both odd and s otherwise."""
    if rp.r % 2 == 1 and rp.s % 2 == 1:
        return 2 * rp.s
    return rp.s


def cat_coefficients(rp: RationalPhase) -> np.ndarray:
    """DFT coefficients a_m = (1/l) sum_k e^{-i pi (r/s) k^2 + 2 pi i m k / l}."""
    l = cat_size(rp)
    k = np.arange(l)
    phase_seq = np.exp(-1j * math.pi * (rp.r / rp.s) * k.astype(float) ** 2)
    m = np.arange(l)
    dft = np.exp(2j * math.pi * np.outer(m, k) / l)
    return (dft @ phase_seq) / l


def cat_reconstruct(dec: CatDecomposition, cutoff: int) -> np.ndarray:
    """Fock amplitudes of sum_m a_m |beta e^{-2 pi i m / l}> up to cutoff.

    Raises when the cutoff leaves more than 1e-12 of a single packet's
    Poisson weight outside the basis (a norm deficit would otherwise leak
    into fidelity checks).
    """
    mean = abs(dec.beta) ** 2
    if mean > 0.0:
        try:
            poisson_cutoff(mean, 1e-12, hard_cap=cutoff)
        except ResourceLimitError:
            raise ValueError(
                f"cutoff {cutoff} leaves a packet tail above 1e-12"
            ) from None
    out = np.zeros(cutoff + 1, dtype=np.complex128)
    for m in range(dec.l):
        packet = dec.beta * cmath.exp(-2j * math.pi * m / dec.l)
        out += dec.coeffs[m] * coherent_amplitudes(packet, cutoff)
    return out
