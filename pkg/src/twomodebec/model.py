"""Domain types and initial-state construction for two Josephson-coupled modes.

The model is two bosonic modes a, b with intra/inter-mode collision
strengths and a hopping (Josephson) coupling:

    H = omega_a n_a + omega_b n_b + u_aa a+a+aa + u_bb b+b+bb
        + 2 u_ab n_a n_b - lam (a+b + ab+)          (hbar = 1)

Total number N = n_a + n_b is conserved, so states are stored block by
block in N; within block N the index k = n_b runs 0..N (n_a = N - k).
All types are immutable after construction and all operations are pure,
so everything here is safe to evaluate concurrently.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

# Poisson truncation defaults: tail below TAIL_TOL_DEFAULT is dropped and
# the block count never exceeds HARD_CAP (keeps block dimension <= 513).
TAIL_TOL_DEFAULT = 1e-12
HARD_CAP = 512

# Relative tolerance for the closed-form-propagator validity condition
# u_aa + u_bb = 2 u_ab.
ANALYTIC_VALID_RTOL = 1e-12


class ResourceLimitError(RuntimeError):
    """Requested truncation would exceed the configured block cap."""


def log_factorials(n_max: int) -> np.ndarray:
    """Cumulative table ln(0!), ln(1!), ..., ln(n_max!).

    Built by summing logs so amplitude ratios stay exact in log space well
    beyond the n ~ 170 float overflow of the plain factorial.
    """
    out = np.zeros(n_max + 1)
    if n_max > 0:
        out[1:] = np.cumsum(np.log(np.arange(1, n_max + 1, dtype=np.float64)))
    return out


def normalize_phase(phi: float) -> float:
    """Map an angle to the (-pi, pi] convention used for stored phases."""
    out = math.remainder(phi, 2.0 * math.pi)
    if out == -math.pi:
        out = math.pi
    return out


def poisson_cutoff(mean: float, tail_tol: float, hard_cap: int = HARD_CAP) -> int:
    """Smallest M with sum_{N>M} e^-mean mean^N/N! < tail_tol.

    The tail is accumulated backwards over the term series (small terms
    first), so tolerances far below machine epsilon of the cumulative sum
    stay meaningful.  Raises ResourceLimitError if M would exceed hard_cap.
    """
    if not 0.0 < tail_tol < 1.0:
        raise ValueError(f"tail_tol must lie in (0, 1), got {tail_tol}")
    if mean < 0.0:
        raise ValueError("mean must be nonnegative")
    if mean == 0.0:
        return 0
    if mean > hard_cap:  # the cutoff sits above the mode, so above the cap
        raise ResourceLimitError(
            f"Poisson(mean={mean}) needs more than {hard_cap} blocks "
            f"for tail {tail_tol}"
        )
    # extend far enough that the remainder beyond the table is negligible
    n_hi = hard_cap + 1 + max(32, int(4.0 * math.sqrt(mean)))
    log_terms = -mean + np.arange(n_hi + 1) * math.log(mean) - log_factorials(n_hi)
    terms = np.exp(log_terms)
    tail_after = np.cumsum(terms[::-1])[::-1]  # tail_after[m] = sum_{n >= m}
    small = np.nonzero(tail_after[1:] < tail_tol)[0]
    if small.size == 0 or small[0] > hard_cap:
        raise ResourceLimitError(
            f"Poisson(mean={mean}) needs more than {hard_cap} blocks "
            f"for tail {tail_tol}"
        )
    return int(small[0])


@dataclass(frozen=True)
class ModelParams:
    """The six couplings of the two-mode Hamiltonian, all in rad/s.

    lam is the Josephson coupling; a negative value is a phase convention
    this package does not adopt and is rejected.
    """

    omega_a: float
    omega_b: float
    u_aa: float
    u_bb: float
    u_ab: float
    lam: float

    def __post_init__(self):
        for name in ("omega_a", "omega_b", "u_aa", "u_bb", "u_ab", "lam"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        if self.lam < 0.0:
            raise ValueError("lam must be nonnegative (absorb sign into a phase)")

    @property
    def analytic_valid(self) -> bool:
        """True iff u_aa + u_bb = 2 u_ab within roundoff, the regime where
        the closed-form propagator applies exactly."""
        scale = max(abs(self.u_aa), abs(self.u_bb), abs(self.u_ab), 1.0)
        return abs(self.u_aa + self.u_bb - 2.0 * self.u_ab) <= ANALYTIC_VALID_RTOL * scale


@dataclass(frozen=True)
class DerivedParams:
    """Rotating-frame parameters derived from the couplings at a given
    mean total number: omega_0, the detuning omega_1 (which carries the
    (n_mean - 1) collision imbalance) and the effective Rabi frequency
    lambda_1 = sqrt(lam^2 + omega_1^2)."""

    omega_0: float
    omega_1: float
    lambda_1: float
    n_mean: float


def derive_params(p: ModelParams, n_mean: float) -> DerivedParams:
    """Effective frame parameters for mean total excitation n_mean."""
    if n_mean < 0.0:
        raise ValueError("n_mean must be nonnegative")
    omega_0 = 0.5 * (p.omega_a + p.omega_b - 2.0 * p.u_ab)
    omega_1 = 0.5 * (p.omega_a - p.omega_b + (p.u_aa - p.u_bb) * (n_mean - 1.0))
    lambda_1 = math.hypot(p.lam, omega_1)
    return DerivedParams(omega_0=omega_0, omega_1=omega_1,
                         lambda_1=lambda_1, n_mean=n_mean)


@dataclass(frozen=True)
class CoherentPair:
    """Amplitudes of a product of coherent states |alpha_a> x |alpha_b>."""

    alpha_a: complex
    alpha_b: complex

    @property
    def n_mean(self) -> float:
        return abs(self.alpha_a) ** 2 + abs(self.alpha_b) ** 2

    @property
    def phases(self) -> tuple[float, float]:
        """Mode phases in (-pi, pi]."""
        return (normalize_phase(cmath.phase(self.alpha_a)),
                normalize_phase(cmath.phase(self.alpha_b)))

    @classmethod
    def from_split(cls, n_total: float, delta_phi: float) -> "CoherentPair":
        """Equal-population pair |alpha_a| = |alpha_b| = sqrt(n_total/2)
        with relative phase delta_phi = phi_a - phi_b (phi_b = 0)."""
        if n_total < 0.0:
            raise ValueError("n_total must be nonnegative")
        mag = math.sqrt(0.5 * n_total)
        return cls(alpha_a=cmath.rect(mag, normalize_phase(delta_phi)),
                   alpha_b=complex(mag, 0.0))


@dataclass(frozen=True)
class TwoModeState:
    """Complex amplitudes over the truncated two-mode Fock basis, stored
    per total-number block: blocks[N][k] multiplies |n_a=N-k, n_b=k>.

    The block layout makes number conservation structural: evolution acts
    block by block and never mixes different N.  Block arrays are frozen
    (non-writeable) after construction.
    """

    blocks: tuple
    tail_tol: float = TAIL_TOL_DEFAULT

    def __post_init__(self):
        frozen = []
        for n, block in enumerate(self.blocks):
            arr = np.asarray(block, dtype=np.complex128)
            if arr.shape != (n + 1,):
                raise ValueError(f"block {n} must have length {n + 1}")
            arr = arr.copy()
            arr.flags.writeable = False
            frozen.append(arr)
        object.__setattr__(self, "blocks", tuple(frozen))

    @property
    def n_max(self) -> int:
        return len(self.blocks) - 1

    def norm_sq(self) -> float:
        return float(sum(np.vdot(b, b).real for b in self.blocks))

    def total_number_mean(self) -> float:
        """<N> normalized by the (possibly slightly deficient) norm."""
        weighted = sum(n * np.vdot(b, b).real for n, b in enumerate(self.blocks))
        return float(weighted / self.norm_sq())

    def dense_table(self) -> np.ndarray:
        """(n_max+1, n_max+1) table C[n_a, n_b]; entries with
        n_a + n_b > n_max are zero."""
        size = self.n_max + 1
        table = np.zeros((size, size), dtype=np.complex128)
        for n, block in enumerate(self.blocks):
            k = np.arange(n + 1)
            table[n - k, k] = block
        return table

    def overlap(self, other: "TwoModeState") -> complex:
        """<self|other> over the common blocks."""
        acc = 0.0 + 0.0j
        for mine, theirs in zip(self.blocks, other.blocks):
            acc += np.vdot(mine, theirs)
        return complex(acc)

    def fidelity(self, other: "TwoModeState") -> float:
        """|<self|other>|^2; global phase drops out."""
        return abs(self.overlap(other)) ** 2


def _per_block_coherent(alpha_a: complex, alpha_b: complex, n: int,
                        lf: np.ndarray) -> np.ndarray:
    """Block-N amplitudes of e^{-n_mean/2} alpha_a^{N-k} alpha_b^k
    / sqrt((N-k)! k!), evaluated in log space."""
    n_mean = abs(alpha_a) ** 2 + abs(alpha_b) ** 2
    k = np.arange(n + 1)
    log_mag = np.full(n + 1, -0.5 * n_mean)
    phase = np.zeros(n + 1)
    if alpha_a == 0:
        log_mag[: n] = -np.inf  # only k = n survives (alpha_a^0)
    else:
        log_mag += (n - k) * math.log(abs(alpha_a))
        phase += (n - k) * cmath.phase(alpha_a)
    if alpha_b == 0:
        log_mag[1:] = -np.inf
    else:
        log_mag += k * math.log(abs(alpha_b))
        phase += k * cmath.phase(alpha_b)
    log_mag -= 0.5 * (lf[n - k] + lf[k])
    return np.exp(log_mag + 1j * phase)


def coherent_product(pair: CoherentPair, tail_tol: float = TAIL_TOL_DEFAULT) -> TwoModeState:
    """Truncated Fock expansion of |alpha_a> x |alpha_b>.

    The block cutoff is the smallest N_max whose Poisson tail (total
    number is Poisson with mean |alpha_a|^2 + |alpha_b|^2) stays below
    tail_tol, so the returned norm is >= 1 - tail_tol.
    """
    n_max = poisson_cutoff(pair.n_mean, tail_tol)
    lf = log_factorials(n_max)
    blocks = [_per_block_coherent(pair.alpha_a, pair.alpha_b, n, lf)
              for n in range(n_max + 1)]
    return TwoModeState(blocks=tuple(blocks), tail_tol=tail_tol)


def estimate_formation_time(omega: float, mass: float, rabi_frequency: float) -> float:
    """Order-of-magnitude formation time pi / lambda_1 for identical
    unit-normalized overlapping spatial modes.

    Identical modes give unit overlap integral, so lam = rabi_frequency/2
    and omega_1 = 0; the trap frequency and mass then cancel and are only
    validated for sign.
    """
    if omega <= 0.0 or mass <= 0.0 or rabi_frequency <= 0.0:
        raise ValueError("omega, mass and rabi_frequency must all be positive")
    lam = 0.5 * rabi_frequency
    return math.pi / lam
