"""The per-frame sense -> adapt -> communicate loop.

Stage I synthesizes a radar cube for the MU and extracts range, velocity
and azimuth. Stage II picks the modulation from the sensed range, steers
the BS beam to the sensed azimuth, and pushes one OFDM frame through the
physical channel defined by the true geometry.

Sensing is identical for every arm of a comparison, so it is computed once
and shared. Channel noise is keyed by (seed, frame) only, giving common
random numbers across arms; payload bits are keyed by the arm as well.
"""

import math
from dataclasses import dataclass

import numpy as np

from isac_amc.channel import apply_comm_channel, matched_link
from isac_amc.golay import default_preamble
from isac_amc.link import select_mcs, snr_at_range
from isac_amc.metrics import ARMS, FrameRecord, TrajectoryReport, aggregate, compare, frame_success, frame_throughput
from isac_amc.modem import ModScheme, ber, modulate
from isac_amc.ofdm import build_frame, ofdm_receive
from isac_amc.radar import detect_targets, select_user, synthesize_datacube
from isac_amc.scene import sample_trajectory
from isac_amc.seeding import COMM_STREAM, RADAR_STREAM, arm_stream, generator, substream

ERASED_BER = 0.5


@dataclass(frozen=True)
class SensingEstimate:
    """What Stage II is allowed to know about the MU in one frame."""

    range_m: float
    azimuth: float
    detected: bool


def sense_trajectory(states, cfg, progress=None):
    """Run Stage I for every frame; misses hold the previous estimate."""
    radar = cfg.radar
    waveform = default_preamble(radar.duty_cycle, radar.sample_rate)
    buf = np.empty(radar.shape, np.complex64)
    estimates = []
    last = SensingEstimate(math.nan, 0.0, False)
    for i, state in enumerate(states):
        cube = synthesize_datacube(radar, [state], waveform,
                                   rng_seed=substream(cfg.seed, i, RADAR_STREAM), out=buf)
        det = select_user(detect_targets(cube, waveform))
        if det is not None:
            last = SensingEstimate(det.range_hat, det.azimuth_hat, True)
        else:
            last = SensingEstimate(last.range_m, last.azimuth, False)
        estimates.append(last)
        if progress:
            progress(i + 1, len(states))
    return estimates


def decide(estimate, arm, policy):
    """Stage II controller: (scheme, BS beam azimuth) from the sensed estimate only."""
    if arm != "adaptive":
        scheme = ModScheme.parse(arm)
    elif math.isnan(estimate.range_m):
        scheme = ModScheme.BPSK
    else:
        scheme = select_mcs(policy, estimate.range_m)
    return scheme, estimate.azimuth


def communicate_frame(index, state, estimate, arm, cfg, policy, budget):
    scheme, beam_az = decide(estimate, arm, policy)
    snr_db = snr_at_range(budget, state.range_m)
    n_bits = cfg.ofdm.bits_per_frame(scheme)
    bits = generator(substream(cfg.seed, index, arm_stream(arm))).integers(0, 2, n_bits, dtype=np.int8)
    tx = build_frame(modulate(bits, scheme), cfg.ofdm)
    params = matched_link(state.range_m, state.azimuth, beam_az, snr_db,
                          rng_seed=substream(cfg.seed, index, COMM_STREAM),
                          n_bs=cfg.radar.num_rx, wavelength=cfg.radar.wavelength,
                          doppler_one_way=state.radial_velocity / cfg.radar.wavelength,
                          sample_rate=cfg.ofdm.sample_rate)
    result = ofdm_receive(apply_comm_channel(tx, params), cfg.ofdm, scheme)
    frame_ber = ERASED_BER if result.erased else ber(bits, result.bits)
    return FrameRecord(
        time=state.time,
        true_range=state.range_m,
        est_range=estimate.range_m,
        true_azimuth=state.azimuth,
        est_azimuth=estimate.azimuth,
        snr_db=snr_db,
        scheme=scheme,
        frame_ber=frame_ber,
        success=frame_success(frame_ber),
        throughput=frame_throughput(scheme, frame_ber, cfg.ofdm.sample_rate, cfg.ofdm.overhead),
    )


def run_arm(states, estimates, arm, cfg):
    policy = cfg.mcs_policy()
    budget = policy.budget
    return [communicate_frame(i, s, e, arm, cfg, policy, budget)
            for i, (s, e) in enumerate(zip(states, estimates))]


def validate(cfg):
    """Cheap checks before any simulation work; returns the trajectory states."""
    states = sample_trajectory(cfg.trajectory, cfg.scene)
    r_max = max(s.range_m for s in states)
    if r_max >= cfg.radar.max_unambiguous_range:
        raise ValueError(f"trajectory reaches {r_max:.2f} m, beyond the radar's "
                         f"{cfg.radar.max_unambiguous_range:.2f} m unambiguous range")
    if cfg.radar.fast_time_len < 768:
        raise ValueError("PRI too short for the 768-sample preamble")
    return states


def run_simulation(cfg, estimates=None, progress=None):
    """One arm (``cfg.policy``) over the configured trajectory."""
    states = validate(cfg)
    if estimates is None:
        estimates = sense_trajectory(states, cfg, progress)
    records = run_arm(states, estimates, cfg.policy, cfg)
    thr, avg_ber = aggregate(records)
    return records, TrajectoryReport(cfg.trajectory, thr, avg_ber, {}, cfg.policy)


def compare_arms(cfg, arms=ARMS, progress=None):
    """Adaptive plus fixed arms with shared sensing and channel noise.

    Returns ``{arm: (records, report)}``; the adaptive report carries the
    improvement over each fixed arm.
    """
    states = validate(cfg)
    estimates = sense_trajectory(states, cfg, progress)
    results = {}
    for arm in arms:
        records = run_arm(states, estimates, arm, cfg)
        thr, avg_ber = aggregate(records)
        results[arm] = (records, TrajectoryReport(cfg.trajectory, thr, avg_ber, {}, arm))
    if "adaptive" in results:
        fixed = {a: results[a][0] for a in arms if a != "adaptive"}
        report = compare(results["adaptive"][0], fixed, cfg.trajectory)
        report.arm = "adaptive"
        results["adaptive"] = (results["adaptive"][0], report)
    return results
