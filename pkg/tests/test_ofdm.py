import math

import numpy as np
import pytest

from isac_amc.channel import apply_comm_channel, matched_link
from isac_amc.modem import ModScheme, ber, modulate
from isac_amc.ofdm import (
    OfdmConfig,
    build_frame,
    coarse_cfo,
    ofdm_receive,
    ofdm_transmit,
    timing_sync,
    training_symbol,
)

CFG = OfdmConfig()
SCHEMES = list(ModScheme)


def frame_for(scheme, seed):
    bits = np.random.default_rng(seed).integers(0, 2, CFG.bits_per_frame(scheme), dtype=np.int8)
    return bits, build_frame(modulate(bits, scheme), CFG)


def awgn_link(snr_db, seed, doppler=0.0, range_m=10.0):
    return matched_link(range_m, 0.0, 0.0, snr_db, rng_seed=seed, n_bs=1, n_mu=1, doppler_one_way=doppler)


def test_config_numerology():
    assert CFG.symbol_len == 640
    assert CFG.overhead == 0.6
    assert CFG.data_bins[0] == 64 and CFG.data_bins[-1] == 447
    assert CFG.bits_per_frame(ModScheme.QAM64) == 16 * 384 * 6
    with pytest.raises(ValueError):
        OfdmConfig(n_data=380)


def test_zero_symbols_give_zero_samples():
    assert not np.any(ofdm_transmit(np.zeros(384), CFG))


def test_single_subcarrier_is_sinusoid_with_cp():
    sym = np.zeros(384, complex)
    sym[100] = 1.0  # natural-order bin 164
    x = ofdm_transmit(sym, CFG, normalize=False)
    n = np.arange(512)
    body = np.exp(2j * np.pi * 164 * n / 512) / math.sqrt(512)
    np.testing.assert_allclose(x[128:], body, atol=1e-12)
    np.testing.assert_allclose(x[:128], body[-128:], atol=1e-12)


def test_parseval_and_unit_power(rng):
    sym = modulate(rng.integers(0, 2, 384 * 4 * 8), ModScheme.QAM16)
    x = ofdm_transmit(sym, CFG, normalize=False).reshape(-1, 640)[:, 128:]
    assert np.sum(np.abs(x) ** 2) == pytest.approx(np.sum(np.abs(sym) ** 2), rel=1e-9)
    y = ofdm_transmit(sym, CFG)
    assert np.mean(np.abs(y.reshape(-1, 640)[:, 128:]) ** 2) == pytest.approx(1.0, rel=0.02)


def test_training_symbol_halves_repeat():
    t = training_symbol(CFG)[128:]
    np.testing.assert_allclose(t[:256], t[256:], atol=1e-12)


def test_symbol_count_validation():
    with pytest.raises(ValueError):
        ofdm_transmit(np.zeros(100), CFG)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_noiseless_round_trip_many_frames(scheme):
    for seed in range(100):
        bits, tx = frame_for(scheme, seed)
        res = ofdm_receive(tx, CFG, scheme)
        assert not res.erased and res.timing == 0
        assert np.array_equal(res.bits, bits)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_noiseless_through_matched_beams(scheme):
    bits, tx = frame_for(scheme, 1)
    p = matched_link(25.0, 0.4, 0.4, 20.0, rng_seed=None, doppler_one_way=2e3)
    res = ofdm_receive(apply_comm_channel(tx, p), CFG, scheme)
    assert res.timing == p.delay_samples
    assert np.array_equal(res.bits, bits)


def test_timing_sync_finds_delay():
    _, tx = frame_for(ModScheme.QPSK, 2)
    for delay in (0, 3, 57, 154):
        rx = np.concatenate([np.zeros(delay), tx, np.zeros(200)])
        start, metric = timing_sync(rx, CFG)
        assert start == delay and metric == pytest.approx(1.0)


def test_noise_only_is_erased():
    rx = apply_comm_channel(np.zeros(17 * 640), awgn_link(10.0, 5))
    res = ofdm_receive(rx, CFG, ModScheme.BPSK)
    assert res.erased and res.bits is None and res.sync_metric < 0.2


def test_coarse_cfo_estimate():
    _, tx = frame_for(ModScheme.BPSK, 3)
    f = 1e-4
    rx = tx * np.exp(2j * np.pi * f * np.arange(tx.size))
    assert coarse_cfo(rx, CFG) == pytest.approx(f, rel=1e-6)


def test_cfo_3khz_residual_and_ber_penalty():
    """3 kHz one-way Doppler: residual < 1% of the spacing, BER penalty < 0.1 dB."""
    scheme = ModScheme.QAM16
    f = 3e3
    spacing = CFG.subcarrier_spacing / CFG.sample_rate  # cycles/sample
    snr = 12.0
    errs = {"cfo": 0, "ref": 0, "ref_minus": 0}
    total = 0
    for seed in range(24):
        bits, tx = frame_for(scheme, 100 + seed)
        res = ofdm_receive(apply_comm_channel(tx, awgn_link(snr, seed, doppler=f)), CFG, scheme)
        assert abs(res.cfo + f / CFG.sample_rate) < 0.01 * spacing
        errs["cfo"] += np.count_nonzero(res.bits != bits)
        res0 = ofdm_receive(apply_comm_channel(tx, awgn_link(snr, seed)), CFG, scheme)
        errs["ref"] += np.count_nonzero(res0.bits != bits)
        res1 = ofdm_receive(apply_comm_channel(tx, awgn_link(snr - 0.1, seed)), CFG, scheme)
        errs["ref_minus"] += np.count_nonzero(res1.bits != bits)
        total += bits.size
    assert errs["ref"] > 1000  # operating point has enough errors to resolve 0.1 dB
    assert errs["cfo"] <= errs["ref_minus"]


@pytest.mark.parametrize("scheme", SCHEMES)
def test_ber_monotone_in_snr(scheme):
    snrs = np.arange(0.0, 21.0, 4.0)
    bers = []
    for snr in snrs:
        e = n = 0
        for seed in range(3):
            bits, tx = frame_for(scheme, seed)
            res = ofdm_receive(apply_comm_channel(tx, awgn_link(snr, 1000 + seed)), CFG, scheme)
            e += 0.5 * bits.size if res.erased else np.count_nonzero(res.bits != bits)
            n += bits.size
        bers.append(e / n)
    for lo, hi in zip(bers, bers[1:]):
        sd = math.sqrt(max(lo, 1.0 / n) / n)
        assert hi <= lo + sd


def test_receiver_reports_equalized_symbols():
    bits, tx = frame_for(ModScheme.QPSK, 9)
    res = ofdm_receive(tx, CFG, ModScheme.QPSK)
    np.testing.assert_allclose(res.equalized.reshape(-1), modulate(bits, ModScheme.QPSK), atol=1e-9)
    assert ber(bits, res.bits) == 0.0
