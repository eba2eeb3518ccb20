"""Unit tests for the free-fermion chain: spectra, block energies, oracle."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ergochain import freefermion as ff
from ergochain.errors import InputError, SizeError

SQRT5 = math.sqrt(5.0)

# Frozen reference values for the four-site chain split in half, computed
# independently from the 2x2 corner of the exact correlation matrix
# (occupations 1/2 +- 1/sqrt(5)).
FF4_ENTROPY = 0.413278627769967
FF4_BOUND = 0.10557280900008414  # 1 - 2/sqrt(5)
FF4_BLOCK_ENERGY = -0.8944271909999159  # -2/sqrt(5)


# ---------------------------------------------------------------------------
# configuration and single-body layer
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 3},
        {"n": 0},
        {"n": 4, "ell": 0},
        {"n": 4, "ell": 4},
        {"n": 4, "hopping": 0.0},
        {"n": 4, "hopping": -1.0},
    ],
)
def test_chain_spec_validation(kwargs):
    with pytest.raises(InputError):
        ff.ChainSpec(**kwargs)


def test_chain_spec_default_block_is_half():
    assert ff.ChainSpec(10).ell == 5
    assert ff.ChainSpec(10, 3).ell == 3


def test_hopping_matrix_structure():
    # Positive adjacency-style amplitudes; the single-particle Hamiltonian
    # is -J, as exposed by single_body_modes.
    h = ff.hopping_matrix(4, 0.5)
    assert np.array_equal(h, h.T)
    assert h[0, 1] == 0.5 and h[1, 2] == 0.5
    assert h[0, 2] == 0.0 and np.all(np.diag(h) == 0.0)
    modes = ff.single_body_modes(ff.ChainSpec(4))
    expected = [-2.0 * math.cos(k * math.pi / 5.0) for k in (1, 2, 3, 4)]
    assert np.allclose(modes.values, sorted(expected), atol=1e-12)


def test_block_mode_energies_exact_antisymmetry():
    for ell in (1, 2, 5, 8, 13):
        eps = ff.block_mode_energies(ell)
        # Mirror antisymmetry must hold bitwise, middle mode exactly zero.
        assert np.array_equal(eps, -eps[::-1])
        if ell % 2 == 1:
            assert eps[ell // 2] == 0.0
        assert np.all(np.diff(eps) > 0)
    assert np.allclose(ff.block_mode_energies(2), [-1.0, 1.0], atol=1e-15)


# ---------------------------------------------------------------------------
# ground state and correlations
# ---------------------------------------------------------------------------


def test_ground_energy_small_chains():
    assert abs(ff.ground_energy(ff.ChainSpec(2)) - (-1.0)) <= 1e-14
    assert abs(ff.ground_energy(ff.ChainSpec(4)) - (-SQRT5)) <= 1e-12


def test_correlation_matrix_two_sites():
    c = ff.correlation_matrix(ff.ChainSpec(2))
    assert np.allclose(c, 0.5 * np.ones((2, 2)), atol=1e-14)


def test_correlation_matrix_four_sites():
    c = ff.correlation_matrix(ff.ChainSpec(4))
    assert abs(c[0, 1] - 1.0 / SQRT5) <= 1e-12
    assert np.allclose(np.diag(c), 0.5, atol=1e-12)
    assert np.array_equal(c, c.T)


@pytest.mark.parametrize("n", [2, 8, 30])
def test_correlation_matrix_half_filling(n):
    c = ff.correlation_matrix(ff.ChainSpec(n))
    assert abs(np.trace(c) - n / 2.0) <= 1e-9
    assert np.allclose(np.diag(c), 0.5, atol=1e-8)


# ---------------------------------------------------------------------------
# block spectra
# ---------------------------------------------------------------------------


def test_block_spectral_single_site(ff_cache):
    sd = ff.block_spectral(ff_cache.matrix(2), 1)
    assert np.allclose(sd.occupations, [0.5], atol=1e-14)
    assert abs(sd.entropy - math.log(2.0)) <= 1e-12


def test_block_spectral_four_sites(ff_cache):
    sd = ff.block_spectral(ff_cache.matrix(4), 2)
    expected = np.array([0.5 + 1.0 / SQRT5, 0.5 - 1.0 / SQRT5])
    assert np.allclose(sd.occupations, expected, atol=1e-12)
    assert abs(sd.entropy - FF4_ENTROPY) <= 1e-12 * FF4_ENTROPY
    # Two symmetric occupations contribute equal binary entropies.
    assert abs(sd.entropy - 2.0 * 0.206639313884984) <= 1e-12


def test_block_spectral_particle_hole_pairing(ff_cache):
    sd = ff.block_spectral(ff_cache.matrix(16), 8)
    assert np.allclose(sd.occupations + sd.occupations[::-1], 1.0, atol=1e-8)
    # The log map amplifies round-off near saturated occupations, so only
    # the central entanglement energies mirror tightly.
    mid = sd.ent_energies[2:-2]
    assert np.allclose(mid + mid[::-1], 0.0, atol=1e-8)
    assert np.allclose(sd.ent_energies + sd.ent_energies[::-1], 0.0, atol=1e-3)


def test_block_entropy_symmetric_under_complement(ff_cache):
    c = ff_cache.matrix(12)
    assert abs(ff.block_spectral(c, 3).entropy - ff.block_spectral(c, 9).entropy) <= 1e-10


def test_block_spectral_rejects_bad_block(ff_cache):
    with pytest.raises(InputError):
        ff.block_spectral(ff_cache.matrix(4), 0)
    with pytest.raises(InputError):
        ff.block_spectral(ff_cache.matrix(4), 5)


# ---------------------------------------------------------------------------
# energy decomposition
# ---------------------------------------------------------------------------


def test_single_site_block_has_no_energy_scales(ff_cache):
    dec = ff_cache.decomposition(2, 1)
    assert dec.e_a == 0.0
    assert abs(dec.e_tilde) <= 1e-14
    assert abs(dec.e_a0) <= 1e-14
    assert dec.zero_modes == 1
    assert dec.w_frac == 0.0 and dec.q_frac == 0.0


def test_four_site_decomposition_frozen_values(ff_cache):
    dec = ff_cache.decomposition(4, 2)
    assert abs(dec.e_a - FF4_BLOCK_ENERGY) <= 1e-12
    assert abs(dec.e_tilde - FF4_BLOCK_ENERGY) <= 1e-12
    assert abs(dec.e_a0 - (-1.0)) <= 1e-12
    assert abs(dec.w) <= 1e-12
    assert abs(dec.q - FF4_BOUND) <= 1e-10
    assert dec.delta_e == dec.w + dec.q
    assert abs(dec.s - FF4_ENTROPY) <= 1e-12


def test_decompose_is_one_call_pipeline():
    dec = ff.decompose(ff.ChainSpec(8))
    assert dec.n == 8 and dec.ell == 4
    # Passivization can only lower the energy, never below the block ground.
    assert dec.e_a0 < dec.e_tilde < dec.e_a < 0.0


@given(
    n_half=st.integers(min_value=2, max_value=12),
    ell_seed=st.integers(min_value=0, max_value=10**6),
)
def test_decomposition_invariants(n_half, ell_seed):
    n = 2 * n_half
    ell = 1 + ell_seed % (n - 1)
    dec = ff.decompose(ff.ChainSpec(n, ell))
    sd = dec.spectral
    assert np.all(sd.occupations >= 0.0) and np.all(sd.occupations <= 1.0)
    assert np.all(np.diff(sd.occupations) <= 1e-15)
    assert np.all(np.diff(sd.ent_energies) >= -1e-10)
    assert dec.e_a0 - 1e-10 <= dec.e_tilde <= dec.e_a + 1e-10
    assert dec.w >= -1e-10 and dec.q >= -1e-10
    assert dec.delta_e == dec.w + dec.q
    assert dec.s >= -1e-12
    if dec.delta_e > 1e-12:
        assert abs(dec.w_frac + dec.q_frac - 1.0) <= 1e-9


def test_block_energies_rejects_corrupted_matrix():
    spec = ff.ChainSpec(8)
    c = ff.correlation_matrix(spec)
    bad = c.copy()
    bad[0, 0] += 1e-3  # breaks the particle-number trace
    with pytest.raises(InputError):
        ff.block_energies(spec, bad)
    with pytest.raises(InputError):
        ff.block_energies(spec, c[:4, :4])


# ---------------------------------------------------------------------------
# exact many-body passivity oracle
# ---------------------------------------------------------------------------


def test_oracle_single_zero_mode_site(ff_cache):
    sd = ff.block_spectral(ff_cache.matrix(2), 1)
    eps = ff.block_mode_energies(1)
    assert abs(ff.manybody_passive_oracle(sd, eps)) <= 1e-15


def test_oracle_matches_gaussian_passive_state(ff_cache):
    # For the half-split four-site chain the Gaussian passive energy is
    # already optimal, so the exact oracle reproduces it to round-off.
    dec = ff_cache.decomposition(4, 2)
    oracle = ff.manybody_passive_oracle(dec.spectral, ff.block_mode_energies(2))
    assert abs(oracle - dec.e_tilde) <= 1e-12


def test_oracle_never_above_gaussian_small_chains():
    worst = -np.inf
    for n in (6, 10, 14):
        c = ff.correlation_matrix(ff.ChainSpec(n))
        for ell in range(1, min(10, n - 1) + 1):
            sd = ff.block_spectral(c, ell)
            oracle = ff.manybody_passive_oracle(sd, ff.block_mode_energies(ell))
            gaussian = sd.occupations @ ff.block_mode_energies(ell)
            worst = max(worst, oracle - gaussian)
    assert worst <= 1e-12


def test_oracle_rejects_oversized_blocks(ff_cache):
    c = ff.correlation_matrix(ff.ChainSpec(32))
    sd = ff.block_spectral(c, 15)
    with pytest.raises(SizeError):
        ff.manybody_passive_oracle(sd, ff.block_mode_energies(15))


def test_oracle_rejects_mismatched_modes(ff_cache):
    sd = ff.block_spectral(ff_cache.matrix(4), 2)
    with pytest.raises(InputError):
        ff.manybody_passive_oracle(sd, ff.block_mode_energies(3))


# ---------------------------------------------------------------------------
# closed-system evolution of a detached block
# ---------------------------------------------------------------------------


def test_evolve_block_zero_time_is_identity(ff_cache):
    block = ff_cache.matrix(8)[:4, :4]
    evolved = ff.evolve_block(block, 0.0)
    assert np.allclose(evolved, block, atol=1e-14)


def test_evolution_preserves_spectrum_energy_and_ergotropy(ff_cache):
    n, ell = 16, 8
    block = ff_cache.matrix(n)[:ell, :ell]
    dec = ff_cache.decomposition(n, ell)
    eps = ff.block_mode_energies(ell)
    for t in (0.3, 3.7, 12.0):
        evolved = ff.evolve_block(block, t)
        sd = ff.block_spectral(evolved, ell)
        assert np.allclose(sd.occupations, dec.spectral.occupations, atol=1e-10)
        e_a = ff.block_energy_of(evolved)
        assert abs(e_a - dec.e_a) <= 1e-9
        w = e_a - sd.occupations @ eps
        assert abs(w - dec.w) <= 1e-9


def test_evolve_block_rejects_bad_input(ff_cache):
    block = ff_cache.matrix(8)[:4, :4]
    with pytest.raises(InputError):
        ff.evolve_block(block, math.nan)
    skewed = block.copy()
    skewed[0, 1] += 1e-3
    with pytest.raises(InputError):
        ff.evolve_block(skewed, 1.0)
