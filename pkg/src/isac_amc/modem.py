"""Gray-mapped BPSK / QPSK / square-QAM alphabets and AWGN BER references."""

import enum
import math

import numpy as np
from scipy.special import erfc


class ModScheme(enum.Enum):
    BPSK = 1
    QPSK = 2
    QAM16 = 4
    QAM64 = 6

    @property
    def bits_per_symbol(self):
        return self.value

    @property
    def order(self):
        return 1 << self.value

    @property
    def label(self):
        return {"BPSK": "bpsk", "QPSK": "qpsk", "QAM16": "qam16", "QAM64": "qam64"}[self.name]

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("-", "").replace("_", "")
        for scheme in cls:
            if key in (scheme.label, scheme.name.lower(), f"{scheme.order}qam"):
                return scheme
        raise ValueError(f"unknown modulation scheme: {text!r}")

    @property
    def constellation(self):
        return constellation(self)


def _gray_decode(g):
    b = g.copy()
    shift = g >> 1
    while np.any(shift):
        b ^= shift
        shift >>= 1
    return b


def _pam_levels(bits_per_dim):
    """Amplitude for each Gray label of an L-PAM axis, label 0 -> +(L-1)."""
    L = 1 << bits_per_dim
    return (L - 1) - 2 * _gray_decode(np.arange(L))


def _scale(scheme):
    # mean |x|^2 of the unnormalized grid: 1 for BPSK, 2 (L^2 - 1)/3 otherwise
    if scheme is ModScheme.BPSK:
        return 1.0
    L = 1 << (scheme.bits_per_symbol // 2)
    return 1.0 / math.sqrt(2.0 * (L * L - 1) / 3.0)


def _bits_to_int(bits):
    out = np.zeros(bits.shape[:-1], dtype=np.int64)
    for k in range(bits.shape[-1]):
        out = (out << 1) | bits[..., k]
    return out


def constellation(scheme):
    """Point for every integer label 0..M-1 (bits MSB first)."""
    scheme = ModScheme.parse(scheme)
    labels = np.arange(scheme.order)
    bits = (labels[:, None] >> np.arange(scheme.bits_per_symbol - 1, -1, -1)) & 1
    return modulate(bits.reshape(-1), scheme)


def modulate(bits, scheme):
    """Map bits (MSB first per symbol) to unit-average-power symbols.

    For square QAM the first half of each symbol's bits picks the in-phase
    level and the second half the quadrature level.
    """
    scheme = ModScheme.parse(scheme)
    bits = np.asarray(bits, dtype=np.int64)
    k = scheme.bits_per_symbol
    if bits.size % k:
        raise ValueError(f"{bits.size} bits is not a multiple of {k} for {scheme.name}")
    groups = bits.reshape(-1, k)
    if scheme is ModScheme.BPSK:
        return (1.0 - 2.0 * groups[:, 0]).astype(np.complex128)
    half = k // 2
    levels = _pam_levels(half)
    i = levels[_bits_to_int(groups[:, :half])]
    q = levels[_bits_to_int(groups[:, half:])]
    return _scale(scheme) * (i + 1j * q)


def _slice_axis(x, bits_per_dim):
    """Nearest-level Gray labels of real amplitudes x as a (n, bits) array."""
    L = 1 << bits_per_dim
    idx = np.clip(np.round(((L - 1) - x) / 2.0), 0, L - 1).astype(np.int64)
    gray = idx ^ (idx >> 1)
    return (gray[:, None] >> np.arange(bits_per_dim - 1, -1, -1)) & 1


def demodulate(symbols, scheme):
    """Minimum-distance hard decisions back to bits."""
    scheme = ModScheme.parse(scheme)
    y = np.asarray(symbols, dtype=np.complex128).reshape(-1)
    if scheme is ModScheme.BPSK:
        return (y.real < 0).astype(np.int8)
    half = scheme.bits_per_symbol // 2
    y = y / _scale(scheme)
    bits = np.concatenate([_slice_axis(y.real, half), _slice_axis(y.imag, half)], axis=1)
    return bits.reshape(-1).astype(np.int8)


def hard_decision(symbols, scheme):
    """Nearest constellation point for each symbol."""
    return modulate(demodulate(symbols, scheme), scheme)


def qfunc(x):
    return 0.5 * erfc(np.asarray(x, float) / math.sqrt(2.0))


def ber_awgn(scheme, es_n0_db):
    """Analytic Gray-coded bit error rate versus per-symbol Es/N0.

    BPSK and QPSK are exact, Q(sqrt(2 Eb/N0)). Square QAM uses the usual
    nearest-neighbour approximation
    (4/log2 M)(1 - 1/sqrt M) Q(sqrt(3 Es/N0 / (M - 1))).
    """
    scheme = ModScheme.parse(scheme)
    es_n0 = 10.0 ** (np.asarray(es_n0_db, float) / 10.0)
    k = scheme.bits_per_symbol
    if k <= 2:
        return qfunc(np.sqrt(2.0 * es_n0 / k))
    M = scheme.order
    return (4.0 / k) * (1.0 - 1.0 / math.sqrt(M)) * qfunc(np.sqrt(3.0 * es_n0 / (M - 1)))


def ber(tx_bits, rx_bits):
    tx = np.asarray(tx_bits)
    rx = np.asarray(rx_bits)
    if tx.shape != rx.shape:
        raise ValueError(f"bit arrays differ in length: {tx.shape} vs {rx.shape}")
    if tx.size == 0:
        raise ValueError("empty bit arrays")
    return float(np.count_nonzero(tx != rx)) / tx.size
