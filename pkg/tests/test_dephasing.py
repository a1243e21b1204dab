import math

import numpy as np
import pytest

from twomodebec.dephasing import (DampingParams, kerr_drifted_gcs, phase_damp,
                                  purity_series)
from twomodebec.gcs import GcsState, coherent_amplitudes, gcs_from_vacuum_start
from twomodebec.model import ModelParams, derive_params
from twomodebec.observables import SingleModeDensity, diagnostics


def coherent_density(mean, cutoff_tol=1e-13):
    from twomodebec.model import poisson_cutoff

    cutoff = poisson_cutoff(mean, cutoff_tol)
    return SingleModeDensity.from_pure(coherent_amplitudes(math.sqrt(mean), cutoff))


def test_kappa_zero_is_pure_rotation():
    rho0 = coherent_density(4.0)
    dp = DampingParams(omega_a=0.9, u_aa=0.0, kappa=0.0)
    rho_t = phase_damp(rho0, dp, 2.3)
    assert np.allclose(np.abs(rho_t.rho), np.abs(rho0.rho), atol=1e-15)
    assert rho_t.purity() == pytest.approx(rho0.purity(), abs=1e-14)


def test_offdiagonal_damping_factor():
    # |n - m| = 2 at kappa t = 0.5 damps by e^-2
    rho0 = SingleModeDensity(rho=np.full((4, 4), 0.25, dtype=complex))
    dp = DampingParams(omega_a=0.0, u_aa=0.0, kappa=0.5)
    rho_t = phase_damp(rho0, dp, 1.0)
    assert abs(rho_t.rho[2, 0]) == pytest.approx(0.25 * math.exp(-2.0), rel=1e-14)
    assert abs(rho_t.rho[3, 3]) == pytest.approx(0.25, rel=1e-15)


def test_exact_structural_preservation():
    rng = np.random.default_rng(13)
    a = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    rho = a @ a.conj().T
    rho = 0.5 * (rho + rho.conj().T)  # bitwise Hermitian input
    rho /= np.trace(rho).real
    rho0 = SingleModeDensity(rho=rho)
    dp = DampingParams(omega_a=0.7, u_aa=0.3, kappa=0.2)
    rho_t = phase_damp(rho0, dp, 1.7)
    # trace, Hermiticity and populations are preserved bitwise
    assert np.array_equal(np.diag(rho_t.rho), np.diag(rho0.rho))
    assert np.array_equal(rho_t.rho, rho_t.rho.conj().T)
    # positivity within numerical floor
    assert np.linalg.eigvalsh(rho_t.rho).min() >= -1e-10


def test_semigroup_identity():
    rho0 = coherent_density(6.0)
    dp = DampingParams(omega_a=0.4, u_aa=0.8, kappa=0.15)
    t1, t2 = 0.6, 1.1
    once = phase_damp(rho0, dp, t1 + t2).rho
    twice = phase_damp(phase_damp(rho0, dp, t1), dp, t2).rho
    assert np.max(np.abs(once - twice)) <= 1e-12 * np.max(np.abs(once))


def test_phase_damp_rejects_negative_time():
    with pytest.raises(ValueError):
        phase_damp(coherent_density(1.0), DampingParams(0.0, 0.0, 0.1), -0.5)
    with pytest.raises(ValueError):
        DampingParams(0.0, 0.0, -0.1)


def test_gcs_projector_stays_pure_and_drifts():
    # kappa = 0: the channel maps the vacuum-start state onto the drifted
    # one exactly
    n_total = 16.0
    p = ModelParams(0.8, 0.3, 1.2, 1.2, 1.2, 1.1)
    d = derive_params(p, n_total)
    g0 = gcs_from_vacuum_start(n_total, d, p, 1, 1e-14)
    rho0 = SingleModeDensity.from_pure(g0.amplitudes)
    dp = DampingParams(omega_a=p.omega_a, u_aa=p.u_aa, kappa=0.0)
    for t in (0.0, 0.4, 2.9):
        rho_t = phase_damp(rho0, dp, t)
        drifted = kerr_drifted_gcs(n_total, d, p, t, 1e-14)
        assert rho_t.purity() == pytest.approx(1.0, abs=1e-12)
        fid = rho_t.pure_state_fidelity(drifted.amplitudes)
        assert fid >= 1.0 - 1e-12


def test_kerr_drift_reduces_to_vacuum_start_at_zero():
    p = ModelParams(0.2, 0.9, 0.7, 0.7, 0.7, 1.3)
    d = derive_params(p, 9.0)
    g0 = gcs_from_vacuum_start(9.0, d, p, 1, 1e-13)
    gt = kerr_drifted_gcs(9.0, d, p, 0.0, 1e-13)
    assert gt.gamma == pytest.approx(g0.gamma, rel=1e-14)
    assert gt.kerr == pytest.approx(g0.kerr, rel=1e-14)
    assert np.allclose(gt.amplitudes, g0.amplitudes, atol=1e-14)


def test_kerr_drift_frozen_without_collisions():
    p = ModelParams(0.5, 0.5, 0.0, 0.0, 0.0, 1.0)
    d = derive_params(p, 9.0)
    for t in (0.0, 1.0, 5.0):
        gt = kerr_drifted_gcs(9.0, d, p, t, 1e-13)
        assert gt.kerr == 0.0
        assert abs(gt.gamma) == pytest.approx(3.0, rel=1e-14)


def test_purity_series_flat_without_damping():
    rho0 = coherent_density(50.0)
    dp = DampingParams(omega_a=1.0, u_aa=1.0, kappa=0.0)
    series = purity_series(rho0, dp, np.linspace(0.0, 1.0, 11))
    values = [v for _, v in series]
    assert all(v == values[0] for v in values)  # bitwise flat
    assert values[0] == pytest.approx(1.0, abs=1e-13)


def test_purity_series_orderings():
    # larger kappa and larger N both decay faster at every t > 0
    u = 1.0
    times = np.linspace(0.0, 1.0, 21)
    rho50 = coherent_density(50.0)
    rho100 = coherent_density(100.0)
    fast = purity_series(rho50, DampingParams(0.0, u, 0.1 * u), times)
    slow = purity_series(rho50, DampingParams(0.0, u, 0.01 * u), times)
    big = purity_series(rho100, DampingParams(0.0, u, 0.01 * u), times)
    for (t, pf), (_, ps), (_, pb) in zip(fast, slow, big):
        if t == 0.0:
            assert pf == pytest.approx(1.0, abs=1e-13)
        else:
            assert pf < ps
            assert pb < ps


def test_purity_series_monotone_and_limit():
    rho0 = coherent_density(20.0)
    dp = DampingParams(omega_a=0.3, u_aa=0.5, kappa=0.4)
    series = purity_series(rho0, dp, np.linspace(0.0, 30.0, 16))
    values = [v for _, v in series]
    assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))
    populations = np.diag(rho0.rho).real / rho0.trace
    assert values[-1] == pytest.approx(float(np.sum(populations ** 2)), rel=1e-6)


def test_purity_series_input_validation():
    rho0 = coherent_density(1.0)
    dp = DampingParams(0.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        purity_series(rho0, dp, [-1.0, 0.0])
    with pytest.raises(ValueError):
        purity_series(rho0, dp, [1.0, 0.5])


def test_purity_decay_independent_of_kerr_phases():
    # any quadratic-phase state with the same |gamma| dephases identically
    mean = 30.0
    plain = coherent_density(mean, 1e-14)
    g = GcsState.from_quadratic_phase(math.sqrt(mean), 0.77 * math.pi, 1e-14)
    phased = SingleModeDensity.from_pure(g.amplitudes)
    dp = DampingParams(0.2, 0.9, 0.05)
    times = np.linspace(0.0, 2.0, 9)
    for (_, a), (_, b) in zip(purity_series(plain, dp, times),
                              purity_series(phased, dp, times)):
        assert a == pytest.approx(b, rel=1e-12)
