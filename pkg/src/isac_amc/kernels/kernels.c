#include <math.h>
#include <string.h>

#include "kernels.h"

#define GOLDEN 0x9E3779B97F4A7C15ULL
#define INV_2_24 (1.0f / 16777216.0f)
#define BLOCK 1024

/* Every float operation below is mirrored step by step in _fallback.py.
 * Build with -ffp-contract=off so both backends round identically. */

static inline uint64_t splitmix64(uint64_t x)
{
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

static inline float log_unit(float u)
{
    uint32_t bits;
    memcpy(&bits, &u, sizeof bits);
    float e = (float)((int32_t)(bits >> 23) - 126);
    uint32_t mb = (bits & 0x7FFFFFu) | 0x3F000000u;
    float m;
    memcpy(&m, &mb, sizeof m);
    int low = m < 0.70710678f;
    e = low ? e - 1.0f : e;
    float x = low ? (m + m) - 1.0f : m - 1.0f;
    float z = x * x;
    float y = 7.0376836292e-2f;
    y = y * x - 1.1514610310e-1f;
    y = y * x + 1.1676998740e-1f;
    y = y * x - 1.2420140846e-1f;
    y = y * x + 1.4249322787e-1f;
    y = y * x - 1.6668057665e-1f;
    y = y * x + 2.0000714765e-1f;
    y = y * x - 2.4999993993e-1f;
    y = y * x + 3.3333331174e-1f;
    y = y * x * z;
    y = y + (-2.12194440e-4f * e);
    y = y + (-0.5f * z);
    z = x + y;
    return z + 0.693359375f * e;
}

void ck_complex_normal_fill(float *out, int64_t n, uint64_t key,
                            uint64_t offset, float scale)
{
    float u1[BLOCK], u2[BLOCK];

    for (int64_t start = 0; start < n; start += BLOCK) {
        int64_t m = n - start < BLOCK ? n - start : BLOCK;
        for (int64_t i = 0; i < m; i++) {
            uint64_t z = splitmix64(key + (offset + (uint64_t)(start + i) + 1ULL) * GOLDEN);
            u1[i] = ((float)(z >> 40) + 0.5f) * INV_2_24;
            u2[i] = ((float)(z & 0xFFFFFFULL) + 0.5f) * INV_2_24;
        }
        float *o = out + 2 * start;
        for (int64_t i = 0; i < m; i++) {
            float r = scale * sqrtf(-2.0f * log_unit(u1[i]));
            /* angle 2*pi*u2 = q*pi/2 + phi with |phi| <= pi/4 */
            float t = 4.0f * u2[i];
            float q = rintf(t);
            float phi = (t - q) * 1.57079637f;
            float zz = phi * phi;
            float s = ((-1.9515295891e-4f * zz + 8.3321608736e-3f) * zz - 1.6666654611e-1f) * zz * phi + phi;
            float c = ((2.443315711809948e-5f * zz - 1.388731625493765e-3f) * zz + 4.166664568298827e-2f) * zz * zz - 0.5f * zz + 1.0f;
            /* quadrant rotation: swap for odd q, then exact sign flips */
            int k = (int)q & 3;
            int odd = k & 1;
            float a = odd ? s : c;
            float b = odd ? c : s;
            float sign_c = (float)(1 - 2 * ((k ^ (k >> 1)) & 1));
            float sign_s = (float)(1 - 2 * (k >> 1));
            o[2 * i] = r * (a * sign_c);
            o[2 * i + 1] = r * (b * sign_s);
        }
    }
}

void ck_add_echo(float *cube, int64_t n_ant, int64_t n_pulse, int64_t n_fast,
                 const float *wave, int64_t wave_len, int64_t delay,
                 const float *ant_coef, const float *pulse_coef)
{
    if (delay >= n_fast)
        return;
    int64_t len = wave_len;
    if (delay + len > n_fast)
        len = n_fast - delay;

    for (int64_t n = 0; n < n_ant; n++) {
        float ar = ant_coef[2 * n], ai = ant_coef[2 * n + 1];
        for (int64_t p = 0; p < n_pulse; p++) {
            float pr = pulse_coef[2 * p], pi = pulse_coef[2 * p + 1];
            float cr = ar * pr - ai * pi;
            float ci = ar * pi + ai * pr;
            float *rec = cube + 2 * ((n * n_pulse + p) * n_fast + delay);
            for (int64_t i = 0; i < len; i++) {
                rec[2 * i] += cr * wave[i];
                rec[2 * i + 1] += ci * wave[i];
            }
        }
    }
}

static void stage(float *restrict a_out, float *restrict b_out,
                  const float *restrict a_in, const float *restrict b_in,
                  int64_t n_float, int64_t shift)
{
    for (int64_t i = 0; i < n_float; i++) {
        float x = a_in[i];
        float y = b_in[i + shift];
        a_out[i] = x + y;
        b_out[i] = x - y;
    }
}

/* Two consecutive stages (shifts d and 2d) in one pass. The grouping
 * (a[i] + b[i+d]) + (a[i+2d] - b[i+3d]) is exactly what two separate
 * stages compute, so results are bit-identical to the radix-2 path. */
static void stage2(float *restrict a_out, float *restrict b_out,
                   const float *restrict a_in, const float *restrict b_in,
                   int64_t n_float, int64_t d)
{
    for (int64_t i = 0; i < n_float; i++) {
        float lo = a_in[i] + b_in[i + d];
        float hi = a_in[i + 2 * d] - b_in[i + 3 * d];
        a_out[i] = lo + hi;
        b_out[i] = lo - hi;
    }
}

void ck_golay_correlate(const float *records, int64_t n_records,
                        int64_t rec_len, const int8_t *blocks, int n_blocks,
                        int log2_len, int64_t n_lags, float *out,
                        double *power, float *work)
{
    const int64_t L = (int64_t)1 << log2_len;
    int64_t span = n_lags + (int64_t)(n_blocks - 1) * L + L;
    if (span < rec_len)
        span = rec_len;
    const int64_t buf = 2 * (span + L);

    float *a0 = work, *b0 = work + buf, *a1 = work + 2 * buf, *b1 = work + 3 * buf;
    memset(work, 0, sizeof(float) * 4 * buf);

    for (int64_t r = 0; r < n_records; r++) {
        const float *rec = records + 2 * r * rec_len;
        memcpy(a0, rec, sizeof(float) * 2 * rec_len);
        memcpy(b0, rec, sizeof(float) * 2 * rec_len);

        float *ai = a0, *bi = b0, *ao = a1, *bo = b1;
        int s = 0;
        for (; s + 1 < log2_len; s += 2) {
            stage2(ao, bo, ai, bi, 2 * span, 2 * ((int64_t)1 << s));
            float *t = ai; ai = ao; ao = t;
            t = bi; bi = bo; bo = t;
        }
        if (s < log2_len) {
            stage(ao, bo, ai, bi, 2 * span, 2 * ((int64_t)1 << s));
            float *t = ai; ai = ao; ao = t;
            t = bi; bi = bo; bo = t;
        }

        /* out == NULL: power-only mode, the row lives in scratch space */
        float *o = out ? out + 2 * r * n_lags : work + 4 * buf;
        memset(o, 0, sizeof(float) * 2 * n_lags);
        for (int j = 0; j < n_blocks; j++) {
            int8_t code = blocks[j];
            const float *src = (code == 1 || code == -1) ? ai : bi;
            src += 2 * (int64_t)j * L;
            if (code > 0) {
                for (int64_t i = 0; i < 2 * n_lags; i++)
                    o[i] += src[i];
            } else {
                for (int64_t i = 0; i < 2 * n_lags; i++)
                    o[i] -= src[i];
            }
        }
        if (power) {
            for (int64_t k = 0; k < n_lags; k++)
                power[k] += (double)o[2 * k] * o[2 * k] + (double)o[2 * k + 1] * o[2 * k + 1];
        }

        /* stage buffers were filled past rec_len; restore the zero tail */
        memset(a0 + 2 * rec_len, 0, sizeof(float) * (2 * span - 2 * rec_len));
        memset(b0 + 2 * rec_len, 0, sizeof(float) * (2 * span - 2 * rec_len));
    }
}
