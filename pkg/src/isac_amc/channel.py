"""Beamformed single-tap line-of-sight downlink channel.

    rx[t] = g * tx[t - D] * exp(-j 2 pi (f_D / 2) t / Fs) + zeta[t]

with ``D = round(range / c * Fs)`` and the scalar beamforming gain
``g = (w_MU^H u_MU) (u_BS^T w_BS)``. The noise power is set so that a
perfectly steered link (``|g|^2 = N M``) sees exactly ``snr_db``; any
pointing error therefore shows up as an SNR loss.
"""

import math
from dataclasses import dataclass

import numpy as np

from isac_amc.scene import C
from isac_amc.seeding import generator

MAX_RANGE_M = 43.5


def steering_vector(angle, n_elements, spacing, wavelength):
    """Element k = exp(-j k (2 pi / lambda) spacing sin(angle))."""
    if n_elements < 1:
        raise ValueError("n_elements must be >= 1")
    k = np.arange(n_elements)
    return np.exp(-1j * k * (2 * np.pi / wavelength) * spacing * math.sin(angle))


def conjugate_beam(angle, n_elements, spacing, wavelength):
    """Unit-norm weights w with u^T w = sqrt(n) at ``angle``."""
    return np.conj(steering_vector(angle, n_elements, spacing, wavelength)) / math.sqrt(n_elements)


def beamforming_gain(bs_weights, bs_steering, mu_weights, mu_steering):
    return complex(np.vdot(mu_weights, mu_steering) * (bs_steering @ bs_weights))


@dataclass
class CommChannelParams:
    range: float
    doppler_one_way: float
    bs_weights: np.ndarray
    mu_weights: np.ndarray
    bs_steering: np.ndarray
    mu_steering: np.ndarray
    snr_db: float
    rng_seed: object = None
    sample_rate: float = 2.64e9
    noise_power: float = None
    max_delay: int = None

    def __post_init__(self):
        for name in ("bs_weights", "mu_weights"):
            w = np.asarray(getattr(self, name))
            if not math.isclose(np.linalg.norm(w), 1.0, rel_tol=1e-9):
                raise ValueError(f"{name} must have unit norm")
        if self.max_delay is None:
            self.max_delay = int(math.ceil(MAX_RANGE_M / C * self.sample_rate))

    @property
    def delay_samples(self):
        return int(round(self.range / C * self.sample_rate))

    @property
    def gain(self):
        return beamforming_gain(self.bs_weights, self.bs_steering, self.mu_weights, self.mu_steering)

    @property
    def noise_variance(self):
        if self.noise_power is not None:
            return float(self.noise_power)
        n_bs = len(self.bs_steering)
        n_mu = len(self.mu_steering)
        return n_bs * n_mu / 10.0 ** (self.snr_db / 10.0)


def matched_link(range_m, azimuth, azimuth_hat, snr_db, rng_seed=None, n_bs=16, n_mu=4,
                 wavelength=C / 60e9, doppler_one_way=0.0, **kwargs):
    """Params for a BS beam steered to ``azimuth_hat`` and an MU facing the BS."""
    d = wavelength / 2
    return CommChannelParams(
        range=range_m,
        doppler_one_way=doppler_one_way,
        bs_weights=conjugate_beam(azimuth_hat, n_bs, d, wavelength),
        mu_weights=steering_vector(0.0, n_mu, d, wavelength) / math.sqrt(n_mu),
        bs_steering=steering_vector(azimuth, n_bs, d, wavelength),
        mu_steering=steering_vector(0.0, n_mu, d, wavelength),
        snr_db=snr_db,
        rng_seed=rng_seed,
        **kwargs,
    )


def apply_comm_channel(tx, params):
    tx = np.asarray(tx, dtype=np.complex128)
    delay = params.delay_samples
    if delay > params.max_delay:
        raise ValueError(f"delay of {delay} samples exceeds the {params.max_delay}-sample guard")
    n = tx.size + params.max_delay
    rx = np.zeros(n, np.complex128)
    rx[delay:delay + tx.size] = params.gain * tx
    if params.doppler_one_way:
        rx *= np.exp(-2j * np.pi * params.doppler_one_way / params.sample_rate * np.arange(n))
    if params.rng_seed is not None:
        rng = generator(params.rng_seed)
        sigma = math.sqrt(params.noise_variance / 2.0)
        noise = rng.standard_normal((2, n))
        rx += sigma * (noise[0] + 1j * noise[1])
    return rx
