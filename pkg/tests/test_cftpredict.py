"""Tests for the closed-form finite-size predictions against exact chains."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ergochain import cftpredict as cp
from ergochain.errors import InputError

# Frozen reference values, computed independently from the closed forms.
E0_1000 = -636.2566539393367
Q_100 = 0.02529575524003454

EVEN_N = st.integers(min_value=2, max_value=4096).map(lambda k: 2 * k)


# ---------------------------------------------------------------------------
# constants container
# ---------------------------------------------------------------------------


def test_default_constants():
    k = cp.DEFAULT
    assert abs(k.c0 - 2.0 / math.pi) <= 1e-15
    assert abs(k.cb - (4.0 / math.pi - 1.0)) <= 1e-15
    assert k.c == 1.0 and k.v_fermi == 2.0
    assert k.log_gamma == 2.3 and k.c_prime == 0.0


def test_constants_reject_unphysical_values():
    with pytest.raises(InputError):
        cp.CftConstants(c=-1.0)
    with pytest.raises(InputError):
        cp.CftConstants(v_fermi=0.0)


def test_slope_constant_value():
    assert abs(cp.SQ_SLOPE - 6.0 / math.pi) <= 1e-15
    assert abs(cp.GAP_ENTROPY_CONST - math.pi**2 / 3.0) <= 1e-15


# ---------------------------------------------------------------------------
# ground-state energies
# ---------------------------------------------------------------------------


def test_predict_e0_frozen_value():
    assert abs(cp.predict_e0(1000) - E0_1000) <= 1e-12 * abs(E0_1000)


def test_predict_e0_matches_exact_chain(ff_cache):
    assert abs(ff_cache.energy(1000) - cp.predict_e0(1000)) <= 1e-4


def test_predict_e0_bulk_slope():
    n = 10**6
    slope = (cp.predict_e0(2 * n) - cp.predict_e0(n)) / n
    assert abs(slope - (-2.0 / math.pi)) <= 1e-12


def test_predict_e0_rejects_tiny_chain():
    with pytest.raises(InputError):
        cp.predict_e0(1)


# ---------------------------------------------------------------------------
# half-block energy decomposition
# ---------------------------------------------------------------------------


def test_predict_q_frozen_value():
    assert abs(cp.predict_q(100) - Q_100) <= 1e-12 * Q_100


@given(n=EVEN_N)
def test_prediction_identities(n):
    # The five block quantities are one family: W + Q = deltaE and
    # E_A - E_tilde = W, to round-off.
    assert abs(cp.predict_delta_e(n) - cp.predict_w(n) - cp.predict_q(n)) <= 1e-15
    assert abs(cp.predict_e_a(n) - cp.predict_e_tilde(n) - cp.predict_w(n)) <= 1e-12
    # e_tilde - e_a0 cancels an O(N) quantity, so scale the tolerance.
    scale = max(1.0, abs(cp.predict_e_a0(n)))
    assert abs(cp.predict_e_tilde(n) - cp.predict_e_a0(n) - cp.predict_q(n)) <= 1e-15 * scale
    assert cp.predict_q(n) >= 0.0


def test_bound_prediction_decreases_with_size():
    qs = [cp.predict_q(n) for n in (16, 64, 256, 1024, 4096)]
    assert all(a > b for a, b in zip(qs, qs[1:]))


def test_excess_energy_approaches_half_boundary_term():
    # deltaE -> cb/2 and W -> cb/2 as N grows (bound energy vanishes).
    half_cb = (4.0 / math.pi - 1.0) / 2.0
    assert abs(cp.predict_delta_e(10**8) - half_cb) <= 1e-6
    assert abs(cp.predict_w(10**8) - half_cb) <= 1e-5


def test_predict_e_a_matches_exact_chain(ff_cache):
    dec = ff_cache.decomposition(2048)
    assert abs(cp.predict_e_a(2048) - dec.e_a) <= 5e-4
    assert abs(cp.predict_e_tilde(2048) - dec.e_tilde) <= 2e-3
    assert abs(cp.predict_e_a0(2048) - dec.e_a0) <= 5e-4


def test_block_predictions_reject_odd_or_tiny_chains():
    for fn in (cp.predict_e_a, cp.predict_e_tilde, cp.predict_q, cp.predict_w):
        with pytest.raises(InputError):
            fn(7)
        with pytest.raises(InputError):
            fn(2)


# ---------------------------------------------------------------------------
# entanglement entropy and gap
# ---------------------------------------------------------------------------


def test_predict_entropy_half_block():
    n = 1024
    expected = math.log(n / math.pi) / 6.0
    assert abs(cp.predict_entropy(n, n // 2) - expected) <= 1e-14


def test_predict_entropy_complement_symmetry():
    for ell in (1, 100, 300):
        a = cp.predict_entropy(1024, ell)
        b = cp.predict_entropy(1024, 1024 - ell)
        assert abs(a - b) <= 1e-12


def test_predict_entropy_offset_constant():
    k = cp.CftConstants(c_prime=0.25)
    assert abs(cp.predict_entropy(64, 32, k) - cp.predict_entropy(64, 32) - 0.25) <= 1e-14


def test_predict_entropy_rejects_bad_block():
    with pytest.raises(InputError):
        cp.predict_entropy(64, 0)
    with pytest.raises(InputError):
        cp.predict_entropy(64, 64)


def test_predict_gap_closed_form():
    # Choose constants so log(gamma * N) = 10 exactly: gap = 2 pi^2 / 10.
    k = cp.CftConstants(log_gamma=10.0 - math.log(1000.0))
    expected = 2.0 * math.pi**2 / 10.0
    assert abs(cp.predict_gap(1000, k) - expected) <= 1e-12 * expected
    assert expected == pytest.approx(1.9739208802178716, rel=1e-15)


def test_predict_gap_decreases_with_size():
    gaps = [cp.predict_gap(n) for n in (16, 64, 256, 1024)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_gap_entropy_product_is_plain_product():
    assert cp.gap_entropy_product(2.0, 1.5) == 3.0
    with pytest.raises(InputError):
        cp.gap_entropy_product(math.nan, 1.0)


# ---------------------------------------------------------------------------
# entropy -> bound-energy bridge
# ---------------------------------------------------------------------------


def test_bound_from_entropy_zero():
    assert cp.bound_from_entropy(0.0, 128) == 0.0


@given(n=EVEN_N)
def test_bound_from_entropy_consistent_with_prediction(n):
    # Feeding the thermal entropy pi^2/(3 beta) back through the quadratic
    # entropy-to-bound map must reproduce the bound-energy prediction.
    s_star = math.pi**2 / (3.0 * cp.predict_gap(n))
    q = cp.bound_from_entropy(s_star, n)
    assert abs(q - cp.predict_q(n)) <= 1e-12 * max(cp.predict_q(n), 1e-30)


def test_bound_from_entropy_rejects_negative_entropy():
    with pytest.raises(InputError):
        cp.bound_from_entropy(-0.1, 128)


# ---------------------------------------------------------------------------
# central-link correlation
# ---------------------------------------------------------------------------


def test_central_link_magnitude_matches_exact_chain(ff_cache):
    c = ff_cache.matrix(1024)
    for site in (512, 513):  # both bond parities around the centre
        exact = c[site - 1, site]
        pred = cp.predict_central_link(site, 1024)
        assert abs(abs(pred) - abs(exact)) <= 1e-4


def test_central_link_alternates_with_bond_parity():
    vals = [cp.predict_central_link(site, 256) for site in (126, 127, 128, 129)]
    # Even bonds get the positive correction, so values zig-zag.
    assert vals[0] > vals[1] and vals[2] > vals[1] and vals[2] > vals[3]


def test_central_link_rejects_bad_bond():
    with pytest.raises(InputError):
        cp.predict_central_link(0, 64)
    with pytest.raises(InputError):
        cp.predict_central_link(64, 64)
