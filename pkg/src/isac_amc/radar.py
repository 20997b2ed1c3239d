"""Stage I: radar data cube synthesis and range/Doppler/azimuth estimation.

The cube is indexed ``[antenna n, pulse p, fast-time tau]``. Each target adds

    a * x[tau - round(2 r Fs / c)] * exp(-j 2 pi f_D p T_PRI) * exp(-j n pi sin(phi))

with ``f_D = 2 v / lambda`` and half-wavelength element spacing, plus
circular complex Gaussian noise of the configured power.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from isac_amc import kernels
from isac_amc.golay import autocorrelation, matched_filter
from isac_amc.scene import C
from isac_amc.seeding import radar_noise_key

DETECTION_MARGIN_DB = 13.0
# float32 cubes keep ~70 dB of dynamic range; anything 60 dB under the
# strongest return is treated as numerical residue, not a target
DYNAMIC_RANGE_DB = 60.0


@dataclass(frozen=True)
class RadarConfig:
    carrier_freq: float = 60e9
    sample_rate: float = 2.64e9
    pri: float = 0.58e-6
    duty_cycle: float = 0.5
    num_pulses: int = 512
    num_rx: int = 16
    spacing_wavelengths: float = 0.5
    noise_power: float = 1e-11
    angle_oversample: int = 16

    def __post_init__(self):
        if self.num_pulses < 1 or self.num_rx < 2:
            raise ValueError("need at least one pulse and two receive antennas")
        if not 0.0 < self.duty_cycle < 1.0:
            raise ValueError("duty_cycle must lie in (0, 1)")
        if self.noise_power < 0:
            raise ValueError("noise_power must be non-negative")

    @property
    def wavelength(self):
        return C / self.carrier_freq

    @property
    def element_spacing(self):
        return self.spacing_wavelengths * self.wavelength

    @property
    def fast_time_len(self):
        return int(round(self.sample_rate * self.pri))

    @property
    def max_unambiguous_range(self):
        return (1.0 - self.duty_cycle) * self.pri * C / 2.0

    @property
    def range_bin(self):
        return C / (2.0 * self.sample_rate)

    @property
    def num_range_bins(self):
        """Lags 0..K-1 covering the listening window."""
        return int(math.ceil(self.max_unambiguous_range / self.range_bin)) + 1

    @property
    def velocity_bin(self):
        return self.wavelength / (2.0 * self.num_pulses * self.pri)

    @property
    def sin_bin(self):
        return 1.0 / (self.spacing_wavelengths * self.num_rx)

    @property
    def shape(self):
        return (self.num_rx, self.num_pulses, self.fast_time_len)


@dataclass
class DataCube:
    samples: np.ndarray
    config: RadarConfig

    def __post_init__(self):
        if self.samples.shape != self.config.shape:
            raise ValueError(f"cube shape {self.samples.shape} != config {self.config.shape}")

    @property
    def records(self):
        """(N*P, Q) view: one fast-time record per antenna and pulse."""
        n, p, q = self.samples.shape
        return self.samples.reshape(n * p, q)


@dataclass(frozen=True)
class Detection:
    range_hat: float
    velocity_hat: float
    azimuth_hat: float
    peak_power: float
    range_index: int = 0
    moving: bool = False


@dataclass
class RangeProfile:
    """Matched-filter output per record plus the power summed over records."""

    mf: np.ndarray
    power: np.ndarray
    range_bin: float

    @property
    def peak_index(self):
        return int(np.argmax(self.power))

    @property
    def per_record_power(self):
        return np.abs(self.mf) ** 2

    def range_of(self, index):
        return index * self.range_bin


def doppler_frequency(v, wavelength):
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    return 2.0 * v / wavelength


def range_to_delay(range_m, cfg):
    return int(round(2.0 * range_m / C * cfg.sample_rate))


def synthesize_datacube(cfg, targets, waveform, rng_seed=None, out=None):
    """Build the Eq.-style data cube for ``targets``.

    ``rng_seed`` of ``None`` gives a noiseless cube; otherwise it is an int,
    a tuple of ints, or a ``SeedSequence`` fanned out to the noise stream.
    ``out`` may be a preallocated complex64 array of the cube shape.
    """
    if out is None:
        out = np.empty(cfg.shape, dtype=np.complex64)
    elif out.shape != cfg.shape or out.dtype != np.complex64:
        raise ValueError("out must be a complex64 array of the cube shape")

    if rng_seed is None or cfg.noise_power == 0:
        out[...] = 0
    else:
        scale = math.sqrt(cfg.noise_power / 2.0)
        kernels.complex_normal_fill(out, radar_noise_key(rng_seed), 0, scale)

    wave = waveform.samples.astype(np.float32)
    p = np.arange(cfg.num_pulses)
    n = np.arange(cfg.num_rx)
    for tgt in targets:
        if tgt.range_m >= cfg.max_unambiguous_range:
            raise ValueError(f"target at {tgt.range_m:.2f} m is beyond the "
                             f"{cfg.max_unambiguous_range:.2f} m unambiguous range")
        fd = doppler_frequency(tgt.radial_velocity, cfg.wavelength)
        pulse_coef = np.exp(-2j * np.pi * fd * p * cfg.pri)
        spatial = 2 * np.pi * cfg.spacing_wavelengths * math.sin(tgt.azimuth)
        ant_coef = tgt.reflectivity * np.exp(-1j * n * spatial)
        kernels.add_echo(out, wave, range_to_delay(tgt.range_m, cfg),
                         ant_coef.astype(np.complex64), pulse_coef.astype(np.complex64))
    return DataCube(out, cfg)


def range_profile(cube, waveform):
    cfg = cube.config
    mf, power = matched_filter(cube.records, waveform, cfg.num_range_bins)
    return RangeProfile(mf, power, cfg.range_bin)


def slow_time_matrix(cube, waveform, range_index):
    """Matched-filter output at one lag for every (antenna, pulse): (N, P)."""
    q = cube.config.fast_time_len
    L = waveform.samples.size
    stop = min(q, range_index + L)
    seg = cube.records[:, range_index:stop]
    x = seg @ waveform.samples[:stop - range_index].astype(np.complex64)
    return x.reshape(cube.config.num_rx, cube.config.num_pulses)


def _signed_peak(spectrum):
    n = spectrum.size
    k = int(np.argmax(spectrum))
    return k - n if k >= (n + 1) // 2 else k


def doppler_power(x):
    """Pulse-axis spectrum summed over antennas, bin k <-> f = k / (P T_PRI)."""
    return (np.abs(np.fft.ifft(x, axis=-1, norm="forward")) ** 2).reshape(-1, x.shape[-1]).sum(0)


def angle_power(x, oversample=1):
    """Antenna-axis spectrum summed over pulses, bin k <-> sin(phi) = k / (d N')."""
    n_fft = x.shape[0] * oversample
    return (np.abs(np.fft.ifft(x, n=n_fft, axis=0, norm="forward")) ** 2).sum(axis=1)


def velocity_from_slow_time(x, cfg):
    k = _signed_peak(doppler_power(x))
    f_hat = k / (cfg.num_pulses * cfg.pri)
    return f_hat * cfg.wavelength / 2.0


def azimuth_from_snapshot(x, cfg, oversample=1):
    spec = angle_power(x, oversample)
    k = _signed_peak(spec)
    sin_phi = k / (cfg.spacing_wavelengths * spec.size)
    return math.asin(max(-1.0, min(1.0, sin_phi)))


def doppler_spectrum(cube, range_index, waveform):
    """Velocity estimate (m/s) from the Doppler peak at one range bin."""
    if not 0 <= range_index < cube.config.fast_time_len:
        raise ValueError("range_index outside the fast-time axis")
    return velocity_from_slow_time(slow_time_matrix(cube, waveform, range_index), cube.config)


def angle_spectrum(cube, range_index, waveform, pulse_slice=slice(None), oversample=1):
    """Azimuth estimate (rad) from the spatial peak at one range bin."""
    if not 0 <= range_index < cube.config.fast_time_len:
        raise ValueError("range_index outside the fast-time axis")
    x = slow_time_matrix(cube, waveform, range_index)[:, pulse_slice]
    return azimuth_from_snapshot(x, cube.config, oversample)


@dataclass
class _SidelobeModel:
    """Normalized power autocorrelation of the preamble, lags -(L-1)..L-1."""

    pattern: np.ndarray = field(repr=False)

    @classmethod
    def of(cls, waveform):
        r = autocorrelation(waveform.samples).astype(np.float64)
        r2 = (r / r[0]) ** 2
        return cls(np.concatenate([r2[:0:-1], r2]))

    def at(self, peak, n_bins):
        L = (self.pattern.size + 1) // 2
        lags = np.arange(n_bins) - peak
        out = np.zeros(n_bins)
        ok = np.abs(lags) < L
        out[ok] = self.pattern[lags[ok] + L - 1]
        return out


def pick_peaks(power, waveform, margin_db=DETECTION_MARGIN_DB, max_targets=8):
    """Range bins that clear the noise floor after sidelobe cancellation.

    The 768-sample preamble is not a perfect sequence: its autocorrelation
    has sidelobes 9.5 dB below the peak. Peaks are therefore extracted one
    at a time, strongest first, and the predicted sidelobe pattern of each
    accepted peak is subtracted from the residual before the next search.
    """
    power = np.asarray(power, np.float64)
    floor = float(np.median(power))
    threshold = max(floor * 10 ** (margin_db / 10),
                    power.max() * 10 ** (-DYNAMIC_RANGE_DB / 10))
    model = _SidelobeModel.of(waveform)
    residual = power.copy()
    peaks = []
    for _ in range(max_targets):
        k = int(np.argmax(residual))
        if residual[k] <= threshold:
            break
        peaks.append((k, float(power[k])))
        cancel = (residual[k] - floor) * model.at(k, residual.size)
        residual = residual - cancel
        residual[k] = floor
    return peaks, floor, threshold


def detect_targets(cube, waveform, cfg=None):
    """Detections ordered by matched-filter peak power (strongest first).

    Only the summed power profile is formed over all lags; the per-record
    matched filter is then evaluated at the detected lags alone.
    """
    cfg = cfg or cube.config
    _, power = matched_filter(cube.records, waveform, cfg.num_range_bins, with_output=False)
    peaks, _, _ = pick_peaks(power, waveform)
    detections = []
    for k, pw in peaks:
        x = slow_time_matrix(cube, waveform, k)
        v_hat = velocity_from_slow_time(x, cfg)
        az_hat = azimuth_from_snapshot(x, cfg, cfg.angle_oversample)
        detections.append(Detection(k * cfg.range_bin, v_hat, az_hat, pw, k,
                                    abs(v_hat) > 0.5 * cfg.velocity_bin))
    return detections


def select_user(detections):
    """The MU is the strongest moving return, else the strongest return."""
    if not detections:
        return None
    for det in detections:
        if det.moving:
            return det
    return detections[0]
