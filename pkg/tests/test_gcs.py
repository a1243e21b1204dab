import cmath
import math

import numpy as np
import pytest

from twomodebec.analytic import amplitudes_at, evolved_state_analytic
from twomodebec.evolution import evolve
from twomodebec.gcs import (CatDecomposition, GcsState, RationalPhase,
                            cat_coefficients, cat_reconstruct, cat_size,
                            coherent_amplitudes, detect_rational_phase,
                            gcs_from_vacuum_start,
                            purification_initial_condition,
                            purification_times)
from twomodebec.model import (CoherentPair, ModelParams, coherent_product,
                              derive_params)
from twomodebec.observables import SingleModeDensity, diagnostics, reduce_mode_a

from oracles import best_rational_exhaustive, cat_period_bruteforce


def test_purification_symmetric_quarter_time():
    p = ModelParams(0.0, 0.0, 1.0, 1.0, 1.0, 1.3)
    d = derive_params(p, 25.0)
    t_e = math.pi / (4.0 * d.lambda_1)
    alpha_a = 1.7 - 0.4j
    alpha_b = purification_initial_condition(alpha_a, "a", d, p, t_e)
    assert alpha_b == pytest.approx(1j * alpha_a, abs=1e-14)


def test_purification_round_trip_random_params():
    # the designated amplitude must actually vanish at t_e
    rng = np.random.default_rng(31)
    for _ in range(30):
        u_aa, u_bb = rng.uniform(0.2, 1.5, size=2)
        u_ab = 0.5 * (u_aa + u_bb)
        p = ModelParams(rng.normal(), rng.normal(), u_aa, u_bb, u_ab,
                        rng.uniform(0.3, 2.0))
        alpha_known = complex(*rng.normal(size=2))
        which = "a" if rng.uniform() < 0.5 else "b"
        n_guess = 2.0 * abs(alpha_known) ** 2
        d = derive_params(p, n_guess)
        t_e = rng.uniform(0.05, 0.7) * math.pi / d.lambda_1
        x = d.lambda_1 * t_e
        if min(abs(math.cos(x)), abs(math.sin(x))) < 1e-3:
            continue
        partner = purification_initial_condition(alpha_known, which, d, p, t_e)
        pair = (CoherentPair(alpha_known, partner) if which == "a"
                else CoherentPair(partner, alpha_known))
        amps = amplitudes_at(pair, d, p, t_e)
        vanishing = amps.alpha_t if which == "a" else amps.beta_t
        assert abs(vanishing) <= 1e-10 * math.sqrt(pair.n_mean)


def test_purification_figure_input_case():
    n_total = 25.0
    p = ModelParams(0.0, 0.0, 8.0 / 3.0, 8.0 / 3.0, 8.0 / 3.0, 1.0)
    d = derive_params(p, n_total)
    alpha_a = math.sqrt(n_total) * (1 + 1j) / 2
    t_e = math.pi / (4.0 * d.lambda_1)
    alpha_b = purification_initial_condition(alpha_a, "a", d, p, t_e)
    pair = CoherentPair(alpha_a, alpha_b)
    assert pair.n_mean == pytest.approx(n_total, rel=1e-12)
    amps = amplitudes_at(pair, d, p, t_e)
    assert abs(amps.alpha_t) <= 1e-12
    assert abs(amps.beta_t) ** 2 == pytest.approx(n_total, rel=1e-12)


def test_purification_errors():
    p = ModelParams(0.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    d = derive_params(p, 4.0)
    with pytest.raises(ValueError):  # tan pole
        purification_initial_condition(1.0, "a", d, p, math.pi / 2.0)
    with pytest.raises(ValueError):  # cot pole: partner would diverge
        purification_initial_condition(1.0, "a", d, p, math.pi)
    decoupled = ModelParams(0.0, 0.0, 1.0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        purification_initial_condition(1.0, "a", derive_params(decoupled, 4.0),
                                       decoupled, 0.3)
    with pytest.raises(ValueError):
        purification_initial_condition(1.0, "c", d, p, 0.3)


def test_purification_times_families():
    p = ModelParams(0.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    d = derive_params(p, 1.0)
    assert purification_times(d, "quarter", 2) == pytest.approx(
        [math.pi / 4.0, 3.0 * math.pi / 4.0], rel=1e-15)
    d_pi = derive_params(ModelParams(0, 0, 1.0, 1.0, 1.0, math.pi), 1.0)
    assert purification_times(d_pi, "full", 1) == pytest.approx([1.0], rel=1e-15)
    with pytest.raises(ValueError):
        purification_times(derive_params(ModelParams(0, 0, 1, 1, 1, 0), 1.0),
                           "quarter", 1)
    with pytest.raises(ValueError):
        purification_times(d, "half", 1)


def test_purification_times_rubidium_scale():
    # lam = Omega/2 for identical modes; the first equal-split time is
    # within the millisecond decade
    lam = 0.5 * 2 * math.pi * 600.0
    d = derive_params(ModelParams(0, 0, 0, 0, 0, lam), 25.0)
    first = purification_times(d, "quarter", 1)[0]
    assert 1e-4 <= first <= 1e-2


def test_vacuum_start_without_collisions_is_coherent():
    p = ModelParams(0.4, 0.4, 0.0, 0.0, 0.0, 1.1)
    d = derive_params(p, 9.0)
    g = gcs_from_vacuum_start(9.0, d, p, 1)
    gamma = 3.0 * cmath.exp(-1j * math.pi * (d.omega_0 + d.lambda_1) / d.lambda_1)
    ref = coherent_amplitudes(gamma, g.cutoff)
    assert g.kerr == 0.0
    assert np.allclose(g.amplitudes, ref, atol=1e-14)


def test_vacuum_start_matches_full_evolution():
    n_total = 25.0
    p = ModelParams(0.7, 0.9, 1.1, 1.1, 1.1, 1.4)
    d = derive_params(p, n_total)
    for k in (1, 2):
        t_k = k * math.pi / d.lambda_1
        g = gcs_from_vacuum_start(n_total, d, p, k, 1e-14)
        pair = CoherentPair(math.sqrt(n_total), 0.0)
        evolved = evolved_state_analytic(pair, p, t_k, 1e-14)
        # mode b must be empty; cross-check with the block-diagonal engine
        numeric = evolve(coherent_product(pair, 1e-12), p, t_k)
        table = numeric.dense_table()
        nb = float(np.sum(np.abs(table) ** 2 * np.arange(table.shape[1])[None, :]))
        assert nb <= 1e-8 * n_total
        psi_a = evolved.dense_table()[:, 0]
        fid = abs(np.vdot(g.amplitudes[: len(psi_a)], psi_a)) ** 2
        assert fid >= 1.0 - 1e-8


def test_vacuum_start_poisson_statistics():
    p = ModelParams(0.0, 0.0, 2.0, 2.0, 2.0, 1.0)
    d = derive_params(p, 25.0)
    g = gcs_from_vacuum_start(25.0, d, p, 1, 1e-16)
    di = diagnostics(SingleModeDensity.from_pure(g.amplitudes))
    assert di.n_mean == pytest.approx(25.0, abs=1e-10)
    assert di.var_n == pytest.approx(25.0, abs=1e-10)
    assert abs(di.mandel_q) <= 1e-12


def test_detect_rational_phase_examples():
    # u_ab * t_e = 2 pi / 3 ->, pi/8 ->, and the snapped near-rational case
    assert detect_rational_phase(2.0 / 3.0, math.pi) == RationalPhase(2, 3)
    assert detect_rational_phase(1.0, math.pi / 8.0) == RationalPhase(1, 8)
    x = 0.70000000049
    got = detect_rational_phase(x * math.pi, 1.0, tol=1e-6, max_denominator=50)
    assert (got.r, got.s) == (7, 10)
    r, s, err = best_rational_exhaustive(x, 50)
    assert (r, s) == (7, 10) and err <= 1e-6


def test_detect_rational_phase_none_cases():
    # irrational within a tight tolerance finds nothing
    assert detect_rational_phase(math.sqrt(0.5), 1.0, tol=1e-12,
                                 max_denominator=64) is None
    assert detect_rational_phase(1.0, -1.0) is None
    assert detect_rational_phase(0.0, 1.0) == RationalPhase(0, 1)
    with pytest.raises(ValueError):
        detect_rational_phase(1.0, 1.0, max_denominator=0)


def test_cat_size_examples():
    assert cat_size(RationalPhase(1, 1)) == 2
    assert cat_size(RationalPhase(2, 3)) == 3
    assert cat_size(RationalPhase(1, 8)) == 8
    assert cat_size(RationalPhase(2, 9)) == 9
    assert cat_size(RationalPhase(2, 5)) == 5
    assert cat_size(RationalPhase(0, 1)) == 1


def test_cat_size_matches_bruteforce_period():
    rng = np.random.default_rng(61)
    checked = 0
    while checked < 300:
        r = int(rng.integers(0, 40))
        s = int(rng.integers(1, 40))
        if math.gcd(r, s) != 1:
            continue
        assert cat_size(RationalPhase(r, s)) == cat_period_bruteforce(r, s)
        checked += 1


def test_rational_phase_validation():
    with pytest.raises(ValueError):
        RationalPhase(2, 4)
    with pytest.raises(ValueError):
        RationalPhase(1, 0)
    with pytest.raises(ValueError):
        RationalPhase(-1, 2)


def test_cat_coefficients_sign_flip_cat():
    # (1,1): e^{-i pi n^2} = (-1)^n maps |beta> to |-beta>
    coeffs = cat_coefficients(RationalPhase(1, 1))
    assert coeffs == pytest.approx([0.0, 1.0], abs=1e-14)
    rec = cat_reconstruct(CatDecomposition(l=2, coeffs=coeffs, beta=1.2), 25)
    assert np.allclose(rec, coherent_amplitudes(-1.2, 25), atol=1e-14)


def test_cat_coefficients_two_packet_balance():
    coeffs = cat_coefficients(RationalPhase(1, 2))
    assert np.abs(coeffs) == pytest.approx([2 ** -0.5, 2 ** -0.5], abs=1e-14)


def test_cat_coefficients_inverse_dft_identity():
    rng = np.random.default_rng(77)
    for _ in range(20):
        r = int(rng.integers(0, 20))
        s = int(rng.integers(1, 20))
        if math.gcd(r, s) != 1:
            continue
        rp = RationalPhase(r, s)
        l = cat_size(rp)
        coeffs = cat_coefficients(rp)
        for k in range(l):
            back = np.sum(coeffs * np.exp(-2j * math.pi * np.arange(l) * k / l))
            assert back == pytest.approx(
                cmath.exp(-1j * math.pi * (r / s) * k * k), abs=1e-12)


def test_cat_reconstruct_degenerate_amplitude():
    coeffs = cat_coefficients(RationalPhase(2, 3))
    rec = cat_reconstruct(CatDecomposition(l=3, coeffs=coeffs, beta=0.0), 10)
    assert abs(np.linalg.norm(rec) - abs(np.sum(coeffs))) <= 1e-14
    assert np.all(rec[1:] == 0.0)


def test_cat_reconstruct_insufficient_cutoff():
    coeffs = cat_coefficients(RationalPhase(1, 2))
    with pytest.raises(ValueError):
        cat_reconstruct(CatDecomposition(l=2, coeffs=coeffs, beta=5.0), 10)


def test_cat_round_trip_all_small_denominators():
    # full pipeline property: for every reduced r/s with s <= 12 the DFT
    # decomposition rebuilds the Kerr-phased state at |beta|^2 <= 30
    beta = math.sqrt(30.0) * cmath.exp(0.3j)
    cutoff = 90
    for s in range(1, 13):
        for r in range(0, 2 * s):
            if math.gcd(r, s) != 1:
                continue
            rp = RationalPhase(r, s)
            g = GcsState.from_quadratic_phase(beta, math.pi * r / s, 1e-14)
            dec = CatDecomposition(l=cat_size(rp), coeffs=cat_coefficients(rp),
                                   beta=beta)
            rec = cat_reconstruct(dec, cutoff)
            assert g.fidelity(rec) >= 1.0 - 1e-10, (r, s)


def test_gcs_mandel_q_vanishes_regardless_of_phases():
    rng = np.random.default_rng(19)
    for _ in range(10):
        gamma = complex(*rng.normal(size=2)) * 2.0
        kerr = rng.uniform(0, math.pi)
        g = GcsState.from_quadratic_phase(gamma, kerr, 1e-15)
        di = diagnostics(SingleModeDensity.from_pure(g.amplitudes))
        if di.mandel_q is not None:
            assert abs(di.mandel_q) <= 1e-12


def test_vacuum_start_requires_valid_k():
    p = ModelParams(0.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    d = derive_params(p, 4.0)
    with pytest.raises(ValueError):
        gcs_from_vacuum_start(4.0, d, p, 0)
