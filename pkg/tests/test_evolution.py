import numpy as np
import pytest

from twomodebec.analytic import evolved_state_analytic
from twomodebec.evolution import (block_spectrum, build_block,
                                  diagonalize_block, evolve)
from twomodebec.model import CoherentPair, ModelParams, coherent_product

from oracles import dense_two_mode_hamiltonian, jacobi_eigvals


def block_indices(n_total, dim):
    """Flat indices of |n_a=N-k, n_b=k> inside the dense product space."""
    return [(n_total - k) * dim + k for k in range(n_total + 1)]


def test_build_block_zero_couplings():
    h = build_block(ModelParams(0, 0, 0, 0, 0, 0), 3)
    assert np.all(h.dense() == 0.0)
    assert h.dense().shape == (4, 4)


def test_build_block_pure_hopping_two_levels():
    h = build_block(ModelParams(0, 0, 0, 0, 0, 1.0), 1)
    assert np.array_equal(h.diag, [0.0, 0.0])
    assert np.array_equal(h.offdiag, [-1.0])
    spec = diagonalize_block(h)
    assert spec.eigenvalues == pytest.approx([-1.0, 1.0], abs=1e-15)


def test_build_block_equal_collisions_identity_shift():
    # n_a(n_a-1) + n_b(n_b-1) + 2 n_a n_b = N(N-1) makes the diagonal flat
    u = 0.7
    for n in (2, 5, 9):
        h = build_block(ModelParams(0, 0, u, u, u, 1.3), n)
        assert np.allclose(h.diag, u * n * (n - 1), atol=1e-13 * n * n)


def test_build_block_against_dense_kronecker():
    rng = np.random.default_rng(3)
    for _ in range(5):
        p = ModelParams(*rng.normal(size=5), abs(rng.normal()))
        n_total = int(rng.integers(1, 12))
        dense = dense_two_mode_hamiltonian(p, n_total + 1)
        idx = block_indices(n_total, n_total + 1)
        sub = dense[np.ix_(idx, idx)]
        h = build_block(p, n_total).dense()
        assert np.allclose(h, sub, atol=1e-12 * max(1.0, np.abs(sub).max()))


def test_diagonalize_frozen_spectrum():
    # frozen output of the cyclic Jacobi oracle for N=10, lam=1, U=2, U_ab=1.5
    expected = [
        146.4572268772391, 151.1771984692472, 155.49140816206437,
        159.36666149707247, 162.61946519359134, 165.8726996605945,
        166.82775783762685, 172.47056753130133, 172.4912216640581,
        181.11287284178445, 181.1129202654199,
    ]
    h = build_block(ModelParams(0, 0, 2.0, 2.0, 1.5, 1.0), 10)
    spec = diagonalize_block(h)
    assert np.allclose(spec.eigenvalues, expected, atol=1e-10)
    # and the frozen values themselves come straight from the oracle
    assert np.allclose(jacobi_eigvals(h.dense()), expected, atol=1e-10)


def test_diagonalize_reconstruction_invariant():
    rng = np.random.default_rng(17)
    p = ModelParams(*rng.normal(size=5), abs(rng.normal()))
    for n in (0, 1, 4, 23):
        h = build_block(p, n)
        spec = diagonalize_block(h)
        dense = h.dense()
        rebuilt = spec.vectors.T @ np.diag(spec.eigenvalues) @ spec.vectors
        assert np.max(np.abs(rebuilt - dense)) <= 1e-10 * max(1.0, np.abs(dense).max())
        assert np.all(np.diff(spec.eigenvalues) >= 0.0)


def test_evolve_identity_at_t_zero():
    state = coherent_product(CoherentPair(1.0, 0.5j), 1e-12)
    p = ModelParams(0.3, 0.1, 0.2, 0.4, 0.3, 0.9)
    out = evolve(state, p, 0.0)
    for b0, b1 in zip(state.blocks, out.blocks):
        assert np.allclose(b0, b1, atol=1e-14)


def test_evolve_diagonal_hamiltonian_phases():
    # lam = 0 and no collisions: c_{n,m}(t) = e^{-i omega (n+m) t} c_{n,m}(0)
    omega, t = 0.83, 1.7
    p = ModelParams(omega, omega, 0.0, 0.0, 0.0, 0.0)
    state = coherent_product(CoherentPair(1.1, -0.7j), 1e-12)
    out = evolve(state, p, t)
    for n, (b0, b1) in enumerate(zip(state.blocks, out.blocks)):
        assert np.allclose(b1, np.exp(-1j * omega * n * t) * b0, atol=1e-12)
    # coherent input stays coherent with a rotated amplitude
    pair_t = CoherentPair(1.1 * np.exp(-1j * omega * t), -0.7j * np.exp(-1j * omega * t))
    ref = coherent_product(pair_t, 1e-12)
    assert out.fidelity(ref) >= 1.0 - 1e-12


def test_evolve_matches_analytic_oracle():
    pair = CoherentPair(2.0, 2.0j)
    p = ModelParams(1.0, 1.0, 1.0, 1.0, 1.0, 2.0)
    state = coherent_product(pair, 1e-12)
    for t in (0.37, 1.9, -0.6):
        numeric = evolve(state, p, t)
        analytic = evolved_state_analytic(pair, p, t, 1e-12)
        assert numeric.fidelity(analytic) >= 1.0 - 1e-10


def test_evolve_norm_and_energy_conservation():
    rng = np.random.default_rng(23)
    pair = CoherentPair(1.4, 0.8 - 0.3j)
    p = ModelParams(0.2, 0.5, 1.1, 0.9, 0.4, 1.2)
    state = coherent_product(pair, 1e-12)

    def energy(s):
        total = 0.0
        for n, block in enumerate(s.blocks):
            h = build_block(p, n)
            hb = h.diag * block
            if n > 0:
                hb[:-1] += h.offdiag * block[1:]
                hb[1:] += h.offdiag * block[:-1]
            total += np.vdot(block, hb).real
        return total

    e0 = energy(state)
    n0 = np.sqrt(state.norm_sq())
    for _ in range(10):
        t = rng.uniform(-5.0, 5.0)
        out = evolve(state, p, t)
        assert abs(np.sqrt(out.norm_sq()) - n0) < 1e-12
        assert abs(energy(out) - e0) <= 1e-10 * abs(e0)


def test_evolve_composition():
    pair = CoherentPair(1.0, 1.0j)
    p = ModelParams(0.0, 0.3, 0.8, 0.8, 0.2, 1.0)
    state = coherent_product(pair, 1e-12)
    two_step = evolve(evolve(state, p, 0.7), p, 0.9)
    one_step = evolve(state, p, 1.6)
    assert two_step.fidelity(one_step) >= 1.0 - 1e-10


def test_evolve_time_reversal():
    pair = CoherentPair(1.0, -0.5)
    p = ModelParams(0.1, 0.0, 0.5, 0.7, 0.6, 0.8)
    state = coherent_product(pair, 1e-12)
    back = evolve(evolve(state, p, 2.3), p, -2.3)
    assert back.fidelity(state) >= 1.0 - 1e-10


def test_evolve_block_independence():
    pair = CoherentPair(1.2, 0.9)
    p = ModelParams(0.0, 0.0, 1.0, 1.0, 0.4, 1.0)
    state = coherent_product(pair, 1e-12)
    zeroed = [b.copy() for b in state.blocks]
    zeroed[3] = np.zeros_like(zeroed[3])
    from twomodebec.model import TwoModeState

    masked = TwoModeState(blocks=tuple(zeroed), tail_tol=state.tail_tol)
    full = evolve(state, p, 1.1)
    part = evolve(masked, p, 1.1)
    for n in range(state.n_max + 1):
        if n == 3:
            assert np.all(part.blocks[n] == 0.0)
        else:
            assert np.array_equal(full.blocks[n], part.blocks[n])


def test_spectrum_cache_rebuilds_on_parameter_change():
    p1 = ModelParams(0.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    p2 = ModelParams(0.0, 0.0, 1.0, 1.0, 0.5, 1.0)
    s1 = block_spectrum(p1, 5)
    s1_again = block_spectrum(p1, 5)
    s2 = block_spectrum(p2, 5)
    assert s1 is s1_again  # cache hit on identical params
    assert not np.array_equal(s1.eigenvalues, s2.eigenvalues)


def test_evolve_rejects_nonfinite_time():
    state = coherent_product(CoherentPair(0.5, 0.0), 1e-10)
    p = ModelParams(0, 0, 0, 0, 0, 1.0)
    with pytest.raises(ValueError):
        evolve(state, p, np.inf)
