"""Compiled and fallback kernels must agree bit for bit."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isac_amc import kernels
from isac_amc.golay import correlate

needs_compiled = pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
BLOCKS = np.array([-2, -1, 2, -1, -2, 1], np.int8)


def _bits(x):
    return np.ascontiguousarray(x).view(np.uint32)


def test_backend_name():
    assert kernels.BACKEND in ("compiled", "python")


@needs_compiled
@settings(max_examples=25, deadline=None)
@given(key=st.integers(0, 2**64 - 1), offset=st.integers(0, 2**40),
       n=st.integers(1, 3000), scale=st.floats(1e-6, 10.0))
def test_noise_fill_bit_identical(key, offset, n, scale):
    a = np.empty(n, np.complex64)
    b = np.empty(n, np.complex64)
    kernels.compiled.complex_normal_fill(a, key, offset, scale)
    kernels.fallback.complex_normal_fill(b, key, offset, scale)
    assert np.array_equal(_bits(a), _bits(b))


def test_noise_fill_offset_is_stream_position():
    full = np.empty(100, np.complex64)
    tail = np.empty(60, np.complex64)
    kernels.complex_normal_fill(full, 99, 0, 1.0)
    kernels.complex_normal_fill(tail, 99, 40, 1.0)
    assert np.array_equal(_bits(full[40:]), _bits(tail))


def test_noise_fill_statistics():
    x = np.empty(400_000, np.complex64)
    kernels.complex_normal_fill(x, 2024, 0, 0.5)
    assert abs(x.real.mean()) < 0.005 and abs(x.imag.mean()) < 0.005
    assert x.real.var() == pytest.approx(0.25, rel=0.01)
    assert x.imag.var() == pytest.approx(0.25, rel=0.01)
    assert abs(np.mean(x.real * x.imag)) < 0.003
    # Gaussian tails: kurtosis of 3 per component
    k = np.mean(x.real.astype(float) ** 4) / 0.25**2
    assert k == pytest.approx(3.0, abs=0.05)


def test_noise_fill_distinct_keys():
    a = np.empty(64, np.complex64)
    b = np.empty(64, np.complex64)
    kernels.complex_normal_fill(a, 1, 0, 1.0)
    kernels.complex_normal_fill(b, 2, 0, 1.0)
    assert not np.array_equal(a, b)


@needs_compiled
@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), delay=st.integers(0, 1600))
def test_add_echo_bit_identical(seed, delay):
    r = np.random.default_rng(seed)
    shape = (3, 4, 1531)
    base = (r.standard_normal(shape) + 1j * r.standard_normal(shape)).astype(np.complex64)
    wave = r.choice([-1.0, 1.0], 768).astype(np.float32)
    ant = (r.standard_normal(3) + 1j * r.standard_normal(3)).astype(np.complex64)
    pul = np.exp(1j * r.uniform(0, 6.3, 4)).astype(np.complex64)
    a, b = base.copy(), base.copy()
    kernels.compiled.add_echo(a, wave, delay, ant, pul)
    kernels.fallback.add_echo(b, wave, delay, ant, pul)
    assert np.array_equal(_bits(a), _bits(b))


@needs_compiled
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n_rec=st.integers(1, 9),
       rec_len=st.integers(200, 1700), n_lags=st.integers(1, 900))
def test_golay_correlate_bit_identical(seed, n_rec, rec_len, n_lags):
    r = np.random.default_rng(seed)
    rec = (r.standard_normal((n_rec, rec_len)) + 1j * r.standard_normal((n_rec, rec_len))).astype(np.complex64)
    oc, pc = kernels.compiled.golay_correlate(rec, BLOCKS, 7, n_lags)
    of, pf = kernels.fallback.golay_correlate(rec, BLOCKS, 7, n_lags)
    assert np.array_equal(_bits(oc), _bits(of))
    assert np.array_equal(pc, pf)


@needs_compiled
def test_golay_correlate_power_only_matches():
    r = np.random.default_rng(3)
    rec = (r.standard_normal((600, 1531)) + 1j * r.standard_normal((600, 1531))).astype(np.complex64)
    _, p_full = kernels.compiled.golay_correlate(rec, BLOCKS, 7, 767)
    out, p_only = kernels.compiled.golay_correlate(rec, BLOCKS, 7, 767, with_output=False)
    _, p_fb = kernels.fallback.golay_correlate(rec, BLOCKS, 7, 767, with_output=False)
    assert out is None
    assert np.array_equal(p_full, p_only)
    assert np.array_equal(p_only, p_fb)


def test_golay_correlate_against_fir(waveform):
    r = np.random.default_rng(4)
    rec = (r.standard_normal((2, 1531)) + 1j * r.standard_normal((2, 1531))).astype(np.complex64)
    for impl in filter(None, (kernels.compiled, kernels.fallback)):
        out, _ = impl.golay_correlate(rec, BLOCKS, 7, 767)
        for i in range(2):
            ref = correlate(rec[i].astype(complex), waveform.samples.astype(float))[:767]
            np.testing.assert_allclose(out[i], ref, atol=2e-3)
