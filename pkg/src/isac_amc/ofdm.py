"""OFDM framing and the Stage-II receiver chain.

A frame is one training symbol followed by ``symbols_per_frame`` data
symbols, each ``n_fft + n_cp`` samples. Data occupy natural-order bins
``n_null .. n_fft - n_null - 1``; the training symbol carries known BPSK on
the even data bins only, so its time-domain body is two identical halves.
Transforms are orthonormal and the transmit samples are scaled by
``sqrt(n_fft / n_data)`` so the mean sample power is one.
"""

from dataclasses import dataclass

import numpy as np

from isac_amc.modem import demodulate, hard_decision

TRAINING_SEED = 0x5EED
SYNC_THRESHOLD = 0.2
SMOOTHING_BINS = 17


@dataclass(frozen=True)
class OfdmConfig:
    n_fft: int = 512
    n_cp: int = 128
    n_data: int = 384
    n_null_each_side: int = 64
    symbols_per_frame: int = 16
    sample_rate: float = 2.64e9

    def __post_init__(self):
        if 2 * self.n_null_each_side + self.n_data != self.n_fft:
            raise ValueError("2 * n_null_each_side + n_data must equal n_fft")
        if not 0 < self.n_cp <= self.n_fft:
            raise ValueError("n_cp must lie in (0, n_fft]")
        if self.n_fft % 4 or self.n_null_each_side % 2:
            raise ValueError("n_fft must be a multiple of 4 and n_null_each_side even")
        if self.symbols_per_frame < 1:
            raise ValueError("need at least one data symbol per frame")

    @property
    def symbol_len(self):
        return self.n_fft + self.n_cp

    @property
    def overhead(self):
        return self.n_data / self.symbol_len

    @property
    def data_bins(self):
        return np.arange(self.n_null_each_side, self.n_null_each_side + self.n_data)

    @property
    def tx_gain(self):
        return float(np.sqrt(self.n_fft / self.n_data))

    @property
    def frame_len(self):
        return (self.symbols_per_frame + 1) * self.symbol_len

    @property
    def subcarrier_spacing(self):
        return self.sample_rate / self.n_fft

    def bits_per_frame(self, scheme):
        return self.symbols_per_frame * self.n_data * scheme.bits_per_symbol


def _modulate_grid(grid, cfg):
    """(n_sym, n_fft) frequency grids -> CP-prefixed time samples."""
    body = np.fft.ifft(grid, axis=-1, norm="ortho")
    with_cp = np.concatenate([body[:, -cfg.n_cp:], body], axis=-1)
    return with_cp.reshape(-1)


def ofdm_transmit(symbols, cfg, normalize=True):
    """Map data symbols onto OFDM symbols (no training prefix)."""
    symbols = np.asarray(symbols, dtype=np.complex128)
    if symbols.size % cfg.n_data:
        raise ValueError(f"{symbols.size} symbols is not a multiple of {cfg.n_data}")
    n_sym = symbols.size // cfg.n_data
    grid = np.zeros((n_sym, cfg.n_fft), np.complex128)
    grid[:, cfg.data_bins] = symbols.reshape(n_sym, cfg.n_data)
    out = _modulate_grid(grid, cfg)
    return out * cfg.tx_gain if normalize else out


def training_grid(cfg):
    """Known training symbol: unit-power BPSK on even data bins, scaled by sqrt(2)."""
    rng = np.random.default_rng(TRAINING_SEED)
    grid = np.zeros(cfg.n_fft, np.complex128)
    even = cfg.data_bins[::2]
    grid[even] = np.sqrt(2.0) * (1.0 - 2.0 * rng.integers(0, 2, even.size))
    return grid


def training_symbol(cfg):
    return _modulate_grid(training_grid(cfg)[None, :], cfg) * cfg.tx_gain


def build_frame(symbols, cfg):
    """Training symbol followed by the data symbols, as transmit samples."""
    return np.concatenate([training_symbol(cfg), ofdm_transmit(symbols, cfg)])


@dataclass
class ReceiveResult:
    bits: np.ndarray
    erased: bool
    timing: int
    sync_metric: float
    cfo: float
    equalized: np.ndarray = None


def timing_sync(rx, cfg, search=None):
    """Normalized correlation of rx against the training body.

    Returns (start of the training CP, peak metric in [0, 1]).
    """
    ref = training_symbol(cfg)[cfg.n_cp:]
    n = ref.size
    last = rx.size - cfg.frame_len + cfg.n_cp
    if search is not None:
        last = min(last, search + cfg.n_cp)
    last = max(last, cfg.n_cp)
    seg_len = last + n
    seg = rx[:seg_len]
    corr = np.correlate(seg, ref, mode="valid")
    energy = np.convolve(np.abs(seg) ** 2, np.ones(n), mode="valid")
    metric = np.abs(corr) / np.sqrt(np.maximum(energy, 1e-300) * np.sum(np.abs(ref) ** 2))
    metric[:cfg.n_cp] = 0.0
    k = int(np.argmax(metric))
    return k - cfg.n_cp, float(metric[k])


def coarse_cfo(frame, cfg):
    """CFO in cycles/sample from the two identical training halves."""
    half = cfg.n_fft // 2
    body = frame[cfg.n_cp:cfg.symbol_len]
    return np.angle(np.vdot(body[:half], body[half:])) / (2 * np.pi * half)


def fine_cfo(frame, cfg):
    """Residual CFO from the cyclic prefixes of every symbol in the frame."""
    sym = frame.reshape(-1, cfg.symbol_len)
    acc = np.vdot(sym[:, :cfg.n_cp].reshape(-1), sym[:, cfg.n_fft:].reshape(-1))
    return np.angle(acc) / (2 * np.pi * cfg.n_fft)


def _derotate(x, cfo):
    return x * np.exp(-2j * np.pi * cfo * np.arange(x.size))


def _moving_average(x, width):
    kernel = np.ones(width)
    num = np.convolve(x, kernel, mode="same")
    den = np.convolve(np.ones(x.size), kernel, mode="same")
    return num / den


def estimate_channel(train_freq, cfg, smoothing=SMOOTHING_BINS):
    """LS estimate on the even data bins, smoothed and interpolated to all data bins."""
    known = training_grid(cfg)
    even = cfg.data_bins[::2]
    h_even = train_freq[even] / known[even]
    if smoothing > 1:
        h_even = _moving_average(h_even, smoothing)
    bins = cfg.data_bins
    return (np.interp(bins, even, h_even.real) + 1j * np.interp(bins, even, h_even.imag))


def track_common_phase(z, scheme):
    """Decision-directed common-phase-error correction, symbol by symbol.

    Each symbol is first derotated by the previous symbol's phase, then the
    mean rotation against its own hard decisions updates the estimate.
    """
    out = np.empty_like(z)
    phase = 0.0
    for i, row in enumerate(z):
        pre = row * np.exp(-1j * phase)
        phase += np.angle(np.vdot(hard_decision(pre, scheme), pre))
        out[i] = row * np.exp(-1j * phase)
    return out


def ofdm_receive(rx, cfg, scheme, timing=None, cfo_correction=True):
    """Full receiver: sync, CFO, CP removal, FFT, LS + one-tap ZF, CPE, demap.

    At one sample per symbol the matched-filter and downsampling steps are
    identities. A sync metric below ``SYNC_THRESHOLD`` erases the frame.
    ``timing`` (start of the training CP) bypasses the synchronizer.
    """
    rx = np.asarray(rx, dtype=np.complex128)
    if timing is None:
        timing, metric = timing_sync(rx, cfg)
        if metric < SYNC_THRESHOLD:
            return ReceiveResult(None, True, timing, metric, 0.0)
    else:
        metric = 1.0
    frame = rx[timing:timing + cfg.frame_len]
    if frame.size < cfg.frame_len:
        return ReceiveResult(None, True, timing, metric, 0.0)

    cfo = 0.0
    if cfo_correction:
        cfo = coarse_cfo(frame, cfg)
        frame = _derotate(frame, cfo)
        residual = fine_cfo(frame, cfg)
        frame = _derotate(frame, residual)
        cfo += residual

    sym = frame.reshape(-1, cfg.symbol_len)[:, cfg.n_cp:]
    freq = np.fft.fft(sym, axis=-1, norm="ortho") / cfg.tx_gain
    h = estimate_channel(freq[0], cfg)
    z = freq[1:, cfg.data_bins] / h
    z = track_common_phase(z, scheme)
    bits = demodulate(z.reshape(-1), scheme)
    return ReceiveResult(bits, False, timing, metric, cfo, z)
