import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isac_amc.modem import ModScheme, ber, ber_awgn, constellation, demodulate, hard_decision, modulate, qfunc

SCHEMES = list(ModScheme)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_unit_average_power(scheme):
    c = constellation(scheme)
    assert c.size == scheme.order
    assert np.mean(np.abs(c) ** 2) == pytest.approx(1.0, abs=1e-15)
    assert np.unique(np.round(c, 12)).size == scheme.order


@pytest.mark.parametrize("scheme", SCHEMES)
def test_gray_neighbours_differ_by_one_bit(scheme):
    c = constellation(scheme)
    d = np.abs(c[:, None] - c[None, :])
    np.fill_diagonal(d, np.inf)
    dmin = d.min()
    for i in range(c.size):
        for j in np.flatnonzero(np.isclose(d[i], dmin)):
            assert bin(i ^ j).count("1") == 1


def test_bpsk_mapping():
    assert modulate([0, 1], ModScheme.BPSK).tolist() == [1, -1]


def test_qpsk_zero_label():
    assert modulate([0, 0], ModScheme.QPSK)[0] == pytest.approx((1 + 1j) / math.sqrt(2))


def test_qam64_scale():
    raw = constellation(ModScheme.QAM64) * math.sqrt(42)
    assert np.allclose(raw.real, np.round(raw.real)) and np.all(np.round(raw.real) % 2 == 1)
    assert np.mean(np.abs(raw) ** 2) == pytest.approx(42)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SCHEMES), st.integers(1, 200), st.integers(0, 2**32 - 1))
def test_round_trip(scheme, n_sym, seed):
    bits = np.random.default_rng(seed).integers(0, 2, n_sym * scheme.bits_per_symbol)
    assert np.array_equal(demodulate(modulate(bits, scheme), scheme), bits)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SCHEMES), st.integers(0, 2**32 - 1))
def test_min_distance_slicing(scheme, seed):
    r = np.random.default_rng(seed)
    y = r.standard_normal(50) + 1j * r.standard_normal(50)
    c = constellation(scheme)
    nearest = c[np.argmin(np.abs(y[:, None] - c[None, :]), axis=1)]
    np.testing.assert_allclose(hard_decision(y, scheme), nearest, atol=1e-12)


def test_indivisible_bits():
    with pytest.raises(ValueError):
        modulate([0, 1, 1], ModScheme.QPSK)


def test_parse():
    assert ModScheme.parse("16qam") is ModScheme.QAM16
    assert ModScheme.parse("QAM-64") is ModScheme.QAM64
    assert ModScheme.parse("bpsk") is ModScheme.BPSK
    with pytest.raises(ValueError):
        ModScheme.parse("8psk")


def test_ber():
    a = np.zeros(1000, int)
    assert ber(a, a) == 0.0
    assert ber(a, 1 - a) == 1.0
    b = a.copy()
    b[17] = 1
    assert ber(a, b) == 0.001
    with pytest.raises(ValueError):
        ber(a, a[:-1])
    with pytest.raises(ValueError):
        ber([], [])


def test_analytic_references():
    # BPSK at Eb/N0 = 9.59 dB is the textbook 1e-5 point
    assert ber_awgn(ModScheme.BPSK, 9.59) == pytest.approx(1e-5, rel=0.05)
    # QPSK at Es/N0 has the BPSK curve at Eb/N0 = Es/N0 - 3 dB
    assert ber_awgn(ModScheme.QPSK, 10.0) == pytest.approx(ber_awgn(ModScheme.BPSK, 10 - 10 * math.log10(2)))
    assert qfunc(0.0) == 0.5
    for s in SCHEMES:
        curve = ber_awgn(s, np.arange(0, 20, 0.5))
        assert np.all(np.diff(curve) < 0)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_symbol_level_awgn_matches_reference(scheme):
    r = np.random.default_rng(7)
    es_n0_db = {ModScheme.BPSK: 6.0, ModScheme.QPSK: 9.0, ModScheme.QAM16: 15.0, ModScheme.QAM64: 21.0}[scheme]
    n_bits = 240_000
    bits = r.integers(0, 2, n_bits)
    sigma = math.sqrt(10 ** (-es_n0_db / 10) / 2)
    y = modulate(bits, scheme) + sigma * (r.standard_normal(n_bits // scheme.bits_per_symbol)
                                          + 1j * r.standard_normal(n_bits // scheme.bits_per_symbol))
    if scheme is ModScheme.BPSK:
        y = y.real + 0j  # real signalling only sees the in-phase noise
    measured = ber(bits, demodulate(y, scheme))
    assert measured == pytest.approx(float(ber_awgn(scheme, es_n0_db)), rel=0.15)
