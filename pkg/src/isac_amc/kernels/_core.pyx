# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot loops for radar cube synthesis and pulse compression."""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int8_t, int64_t, uint64_t

cnp.import_array()


cdef extern from "kernels.h" nogil:
    void ck_complex_normal_fill(float *out, int64_t n, uint64_t key,
                                uint64_t offset, float scale)
    void ck_add_echo(float *cube, int64_t n_ant, int64_t n_pulse, int64_t n_fast,
                     const float *wave, int64_t wave_len, int64_t delay,
                     const float *ant_coef, const float *pulse_coef)
    void ck_golay_correlate(const float *records, int64_t n_records,
                            int64_t rec_len, const int8_t *blocks, int n_blocks,
                            int log2_len, int64_t n_lags, float *out,
                            double *power, float *work)


def complex_normal_fill(out, uint64_t key, uint64_t offset, double scale):
    cdef float[::1] view = out.reshape(-1).view(np.float32)
    cdef int64_t n = view.shape[0] // 2
    if n == 0:
        return
    with nogil:
        ck_complex_normal_fill(&view[0], n, key, offset, <float>scale)


def add_echo(cube, wave, int64_t delay, ant_coef, pulse_coef):
    cdef int64_t n_ant = cube.shape[0]
    cdef int64_t n_pulse = cube.shape[1]
    cdef int64_t n_fast = cube.shape[2]
    cdef float[::1] c = cube.reshape(-1).view(np.float32)
    cdef float[::1] w = np.ascontiguousarray(wave, dtype=np.float32)
    cdef float[::1] a = np.ascontiguousarray(ant_coef, dtype=np.complex64).view(np.float32)
    cdef float[::1] p = np.ascontiguousarray(pulse_coef, dtype=np.complex64).view(np.float32)
    with nogil:
        ck_add_echo(&c[0], n_ant, n_pulse, n_fast, &w[0], w.shape[0], delay, &a[0], &p[0])


def golay_correlate(records, blocks, int log2_len, int64_t n_lags, bint with_power=True,
                    bint with_output=True):
    cdef int64_t n_records = records.shape[0]
    cdef int64_t rec_len = records.shape[1]
    cdef float[::1] rec = np.ascontiguousarray(records, dtype=np.complex64).reshape(-1).view(np.float32)
    cdef int8_t[::1] blk = np.ascontiguousarray(blocks, dtype=np.int8)
    cdef int64_t L = 1 << log2_len
    cdef int64_t span = max(n_lags + (blk.shape[0] - 1) * L + L, rec_len)
    cdef float[::1] work = np.empty(8 * (span + L) + 2 * n_lags, dtype=np.float32)

    out = np.empty((n_records if with_output else 1, n_lags), dtype=np.complex64)
    power = np.zeros(n_lags, dtype=np.float64)
    cdef float[::1] o = out.reshape(-1).view(np.float32)
    cdef float *o_ptr = &o[0] if with_output else NULL
    cdef double[::1] pw = power
    cdef double *pw_ptr = &pw[0] if with_power else NULL
    with nogil:
        ck_golay_correlate(&rec[0], n_records, rec_len, &blk[0], <int>blk.shape[0],
                           log2_len, n_lags, o_ptr, pw_ptr, &work[0])
    return (out if with_output else None), (power if with_power else None)
