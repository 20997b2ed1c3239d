#ifndef ISAC_AMC_KERNELS_H
#define ISAC_AMC_KERNELS_H

#include <stdint.h>

/* Complex buffers are interleaved (re, im) float32, i.e. numpy complex64. */

void ck_complex_normal_fill(float *out, int64_t n, uint64_t key,
                            uint64_t offset, float scale);

void ck_add_echo(float *cube, int64_t n_ant, int64_t n_pulse, int64_t n_fast,
                 const float *wave, int64_t wave_len, int64_t delay,
                 const float *ant_coef, const float *pulse_coef);

/* Correlate each record against a preamble made of +-a / +-b blocks of a
 * Golay pair of length 2**log2_len.  blocks[j] is +1/-1 for +-a and +2/-2
 * for +-b.  work must hold 4 * 2 * (n_lags + (n_blocks - 1) * L + L) floats.
 * When power is non-NULL, |out|^2 summed over records is added into it. */
void ck_golay_correlate(const float *records, int64_t n_records,
                        int64_t rec_len, const int8_t *blocks, int n_blocks,
                        int log2_len, int64_t n_lags, float *out,
                        double *power, float *work);

#endif
