import math

import numpy as np
import pytest

from isac_amc.channel import (
    CommChannelParams,
    apply_comm_channel,
    beamforming_gain,
    conjugate_beam,
    matched_link,
    steering_vector,
)
from isac_amc.modem import ModScheme, modulate
from isac_amc.ofdm import OfdmConfig, build_frame, ofdm_receive
from isac_amc.scene import C

LAM = C / 60e9
D = LAM / 2


def test_steering_boresight_all_ones():
    np.testing.assert_allclose(steering_vector(0.0, 16, D, LAM), np.ones(16))


def test_steering_phase_at_30_degrees():
    u = steering_vector(math.radians(30), 4, D, LAM)
    assert np.angle(u[1]) == pytest.approx(-math.pi / 2)
    assert np.allclose(np.abs(u), 1.0)


@pytest.mark.parametrize("n", [1, 4, 16])
def test_conjugate_beam_gain(n):
    az = math.radians(-23)
    w = conjugate_beam(az, n, D, LAM)
    assert np.linalg.norm(w) == pytest.approx(1.0)
    assert steering_vector(az, n, D, LAM) @ w == pytest.approx(math.sqrt(n))


def test_matched_gain_and_noiseless_delay():
    p = matched_link(10.0, 0.0, 0.0, 10.0, rng_seed=None)
    assert abs(p.gain) == pytest.approx(8.0)  # sqrt(16 * 4)
    tx = np.random.default_rng(0).standard_normal(300) + 0j
    rx = apply_comm_channel(tx, p)
    d = p.delay_samples
    assert d == round(10.0 / C * 2.64e9)
    np.testing.assert_allclose(rx[d:d + 300], p.gain * tx, atol=1e-12)
    assert not np.any(rx[:d]) and not np.any(rx[d + 300:])


def test_mu_beam_off_target_loses_gain():
    matched = matched_link(10.0, 0.0, 0.0, 10.0)
    w_mu = steering_vector(math.radians(90), 4, D, LAM) / 2.0
    g = beamforming_gain(matched.bs_weights, matched.bs_steering, w_mu, matched.mu_steering)
    assert abs(g) < 0.1 * abs(matched.gain)


def test_bs_pointing_error_loses_gain():
    good = matched_link(10.0, 0.3, 0.3, 10.0)
    bad = matched_link(10.0, 0.3, 0.3 + math.radians(10), 10.0)
    assert abs(bad.gain) < abs(good.gain)


def test_unit_norm_validation():
    p = matched_link(10.0, 0.0, 0.0, 10.0)
    with pytest.raises(ValueError):
        CommChannelParams(10.0, 0.0, 2 * p.bs_weights, p.mu_weights, p.bs_steering, p.mu_steering, 10.0)


def test_zero_tx_gives_configured_noise():
    p = matched_link(10.0, 0.0, 0.0, 6.0, rng_seed=3)
    rx = apply_comm_channel(np.zeros(200_000), p)
    assert np.mean(np.abs(rx) ** 2) == pytest.approx(p.noise_variance, rel=0.01)
    assert p.noise_variance == pytest.approx(64 / 10**0.6)


def test_matched_link_snr_is_per_sample_snr():
    p = matched_link(10.0, 0.0, 0.0, 7.8, rng_seed=None)
    assert 10 * math.log10(abs(p.gain) ** 2 / p.noise_variance) == pytest.approx(7.8)


def test_doppler_rotation():
    p = matched_link(0.0, 0.0, 0.0, 10.0, n_bs=1, n_mu=1, doppler_one_way=1e6)
    rx = apply_comm_channel(np.ones(100), p)
    np.testing.assert_allclose(rx[:100], np.exp(-2j * np.pi * 1e6 / 2.64e9 * np.arange(100)))


def test_delay_guard():
    with pytest.raises(ValueError):
        apply_comm_channel(np.ones(4), matched_link(60.0, 0.0, 0.0, 10.0))


def test_noise_deterministic_per_seed():
    p = matched_link(5.0, 0.0, 0.0, 10.0, rng_seed=(1, 2, 3))
    a = apply_comm_channel(np.ones(64), p)
    b = apply_comm_channel(np.ones(64), p)
    assert np.array_equal(a, b)


def _post_detection_snr_db(n_bs, n_mu, noise_power, seeds):
    cfg = OfdmConfig()
    num = den = 0.0
    for seed in seeds:
        bits = np.random.default_rng(seed).integers(0, 2, cfg.bits_per_frame(ModScheme.QPSK))
        sym = modulate(bits, ModScheme.QPSK)
        p = matched_link(12.0, 0.35, 0.35, 0.0, rng_seed=seed, n_bs=n_bs, n_mu=n_mu,
                         noise_power=noise_power)
        res = ofdm_receive(apply_comm_channel(build_frame(sym, cfg), p), cfg, ModScheme.QPSK)
        z = res.equalized.reshape(-1)
        num += np.sum(np.abs(sym) ** 2)
        den += np.sum(np.abs(z - sym) ** 2)
    return 10 * math.log10(num / den)


def test_array_gain_18_db():
    """Conjugate beams at both ends buy 10 log10(16 * 4) dB at fixed noise power."""
    noise_power = 10 ** (-5 / 10)  # single-antenna SNR of 5 dB, array case 23 dB
    single = _post_detection_snr_db(1, 1, noise_power, range(6))
    array = _post_detection_snr_db(16, 4, noise_power, range(6))
    assert array - single == pytest.approx(10 * math.log10(64), abs=0.3)
