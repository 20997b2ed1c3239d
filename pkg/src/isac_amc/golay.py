"""Golay complementary pairs and the 768-sample radar preamble.

The preamble is the 802.11ad channel-estimation prefix ``Gu512 || Gv256``
built from blocks of a length-128 pair::

    Gu512 = [-b, -a, b, -a]      Gv256 = [-b, a]

A pair (a, b) is complementary when the sum of the two aperiodic
autocorrelations is ``2L`` at lag zero and zero at every other lag.
"""

from dataclasses import dataclass

import numpy as np

from isac_amc import kernels

PREAMBLE_LENGTH = 768

# (+1 -> a, +2 -> b, sign = block polarity), in transmit order
PREAMBLE_BLOCKS = (-2, -1, 2, -1, -2, 1)


@dataclass(frozen=True)
class GolayPair:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.int8)
        b = np.asarray(self.b, dtype=np.int8)
        if a.ndim != 1 or a.shape != b.shape:
            raise ValueError("Golay pair sequences must be 1-D and of equal length")
        if not _is_power_of_two(a.size) or a.size < 2:
            raise ValueError(f"Golay pair length must be a power of two >= 2, got {a.size}")
        if not (np.all(np.abs(a) == 1) and np.all(np.abs(b) == 1)):
            raise ValueError("Golay pair entries must be +1 or -1")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self):
        return int(self.a.size)

    @property
    def log2_length(self):
        return self.length.bit_length() - 1


@dataclass(frozen=True)
class PreambleWaveform:
    samples: np.ndarray
    duty_cycle: float = 0.5
    sample_rate: float = 2.64e9
    pair: GolayPair = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.int8)
        if s.shape != (PREAMBLE_LENGTH,):
            raise ValueError(f"preamble must have {PREAMBLE_LENGTH} samples, got {s.shape}")
        if not np.all(np.abs(s) == 1):
            raise ValueError("preamble entries must be +1 or -1")
        if not 0.0 < self.duty_cycle <= 1.0:
            raise ValueError("duty_cycle must lie in (0, 1]")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def energy(self):
        return float(self.samples.size)

    @property
    def duration(self):
        return self.samples.size / self.sample_rate


def _is_power_of_two(n):
    return n > 0 and (n & (n - 1)) == 0


def generate_golay_pair(length):
    """Recursive construction a' = a || b, b' = a || -b from a = b = [1]."""
    length = int(length)
    if length < 2 or not _is_power_of_two(length):
        raise ValueError(f"length must be a power of two >= 2, got {length}")
    a = np.ones(1, dtype=np.int8)
    b = np.ones(1, dtype=np.int8)
    while a.size < length:
        a, b = np.concatenate([a, b]), np.concatenate([a, -b])
    return GolayPair(a, b)


def autocorrelation(x):
    """Aperiodic autocorrelation at lags 0..len(x)-1, exact integers."""
    x = np.asarray(x, dtype=np.int64)
    full = np.correlate(x, x, mode="full")
    return full[x.size - 1:]


def correlate(rx, code):
    """Cross-correlation c[k] = sum_i rx[i + k] * code[i] for k = 0..len(rx)-1.

    Samples past the end of ``rx`` are treated as zero, so an echo delayed
    by k0 samples produces its peak at lag k0.
    """
    rx = np.asarray(rx)
    code = np.asarray(code)
    padded = np.concatenate([rx, np.zeros(code.size - 1, dtype=rx.dtype)])
    return np.correlate(padded, code.astype(rx.dtype), mode="valid")


def complementary_correlate(pair, rx_a, rx_b):
    """Ideal complementary correlator: corr(rx_a, a) + corr(rx_b, b).

    For noiseless echoes of the pair delayed by k0 samples the output is
    ``2L * amplitude`` at lag k0 and exactly zero elsewhere.
    """
    rx_a = np.asarray(rx_a)
    rx_b = np.asarray(rx_b)
    if rx_a.shape != rx_b.shape:
        raise ValueError(f"rx_a and rx_b differ in length: {rx_a.shape} vs {rx_b.shape}")
    if rx_a.ndim != 1 or rx_a.size < pair.length:
        raise ValueError(f"received sequences must be 1-D with at least {pair.length} samples")
    return correlate(rx_a, pair.a) + correlate(rx_b, pair.b)


def build_preamble(pair_128, duty_cycle=0.5, sample_rate=2.64e9):
    if pair_128.length != 128:
        raise ValueError(f"preamble blocks must have length 128, got {pair_128.length}")
    parts = []
    for code in PREAMBLE_BLOCKS:
        block = pair_128.a if abs(code) == 1 else pair_128.b
        parts.append(np.sign(code) * block.astype(np.int8))
    return PreambleWaveform(np.concatenate(parts), duty_cycle, sample_rate, pair_128)


def default_preamble(duty_cycle=0.5, sample_rate=2.64e9):
    return build_preamble(generate_golay_pair(128), duty_cycle, sample_rate)


def peak_to_sidelobe_db(samples):
    """Peak-to-maximum-sidelobe ratio of the full aperiodic autocorrelation."""
    r = np.abs(autocorrelation(samples)).astype(np.float64)
    return 20.0 * np.log10(r[0] / r[1:].max())


def matched_filter(records, waveform, n_lags, with_power=True, with_output=True):
    """Correlate fast-time records against the full 768-sample preamble.

    ``records`` has shape (R, Q). Returns the complex matched-filter output
    of shape (R, n_lags) (``None`` when ``with_output`` is false) and,
    optionally, the power summed over records.
    The block structure of the preamble lets the kernel run as a log2(L)
    stage butterfly instead of a 768-tap FIR.
    """
    pair = waveform.pair
    if pair is None or not np.array_equal(build_preamble(pair).samples, waveform.samples):
        raise ValueError("matched_filter needs a preamble built from a Golay pair")
    return kernels.golay_correlate(records, np.asarray(PREAMBLE_BLOCKS, np.int8),
                                   pair.log2_length, int(n_lags), with_power, with_output)
