"""Pure numpy versions of the compiled kernels.

Same arguments, same memory semantics, same random stream definition. The
noise generator avoids libm: log, sin and cos are evaluated with the same
float32 polynomials and the same operation order as ``kernels.c``, so both
backends produce bit-identical cubes.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_CHUNK = 1 << 20
_RECORD_CHUNK = 512


def _splitmix64(x):
    z = x
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _f32(x):
    return np.float32(x)


def _log_unit(u):
    """Natural log of float32 values in (0, 1), Cephes-style polynomial."""
    bits = u.view(np.uint32)
    e = ((bits >> np.uint32(23)).astype(np.int32) - 126).astype(np.float32)
    m = ((bits & np.uint32(0x7FFFFF)) | np.uint32(0x3F000000)).view(np.float32)
    low = m < _f32(0.70710678)
    e = np.where(low, e - _f32(1.0), e)
    x = np.where(low, (m + m) - _f32(1.0), m - _f32(1.0))
    z = x * x
    y = np.full_like(x, _f32(7.0376836292e-2))
    for c in (-1.1514610310e-1, 1.1676998740e-1, -1.2420140846e-1, 1.4249322787e-1,
              -1.6668057665e-1, 2.0000714765e-1, -2.4999993993e-1, 3.3333331174e-1):
        y = y * x + _f32(c)
    y = y * x * z
    y = y + _f32(-2.12194440e-4) * e
    y = y + _f32(-0.5) * z
    z = x + y
    return z + _f32(0.693359375) * e


def _cos_sin_turn(u):
    """cos and sin of 2*pi*u for float32 u in (0, 1)."""
    t = _f32(4.0) * u
    q = np.rint(t)
    phi = (t - q) * _f32(1.57079637)
    zz = phi * phi
    s = ((_f32(-1.9515295891e-4) * zz + _f32(8.3321608736e-3)) * zz - _f32(1.6666654611e-1)) * zz * phi + phi
    c = ((_f32(2.443315711809948e-5) * zz - _f32(1.388731625493765e-3)) * zz
         + _f32(4.166664568298827e-2)) * zz * zz - _f32(0.5) * zz + _f32(1.0)
    k = q.astype(np.int64) & 3
    cos = np.choose(k, [c, -s, -c, s])
    sin = np.choose(k, [s, c, -s, -c])
    return cos, sin


def complex_normal_fill(out, key, offset, scale):
    flat = out.reshape(-1)
    n = flat.shape[0]
    key = np.uint64(key)
    scale = np.float32(scale)
    with np.errstate(over="ignore"):
        for start in range(0, n, _CHUNK):
            stop = min(n, start + _CHUNK)
            idx = np.arange(start, stop, dtype=np.uint64) + np.uint64(offset) + np.uint64(1)
            z = _splitmix64(key + idx * _GOLDEN)
            u1 = ((z >> np.uint64(40)).astype(np.float32) + _f32(0.5)) * _f32(2.0**-24)
            u2 = ((z & np.uint64(0xFFFFFF)).astype(np.float32) + _f32(0.5)) * _f32(2.0**-24)
            r = scale * np.sqrt(_f32(-2.0) * _log_unit(u1))
            cos, sin = _cos_sin_turn(u2)
            flat[start:stop].real = r * cos
            flat[start:stop].imag = r * sin


def add_echo(cube, wave, delay, ant_coef, pulse_coef):
    n_fast = cube.shape[2]
    if delay >= n_fast:
        return
    length = min(len(wave), n_fast - delay)
    a = np.asarray(ant_coef, np.complex64)[:, None]
    p = np.asarray(pulse_coef, np.complex64)[None, :]
    # explicit real arithmetic: numpy's complex multiply may fuse or reorder
    cr = a.real * p.real - a.imag * p.imag
    ci = a.real * p.imag + a.imag * p.real
    w = np.asarray(wave[:length], np.float32)
    seg = cube[:, :, delay:delay + length]
    seg.real += cr[:, :, None] * w
    seg.imag += ci[:, :, None] * w


def _golay_block(records, blocks, log2_len, n_lags, span):
    n_records, rec_len = records.shape
    L = 1 << log2_len
    a = np.zeros((n_records, span + L), np.complex64)
    a[:, :rec_len] = records
    b = a.copy()
    for s in range(log2_len):
        d = 1 << s
        shifted = b[:, d:d + span]
        a_new = np.zeros_like(a)
        b_new = np.zeros_like(b)
        np.add(a[:, :span], shifted, out=a_new[:, :span])
        np.subtract(a[:, :span], shifted, out=b_new[:, :span])
        a, b = a_new, b_new

    out = np.zeros((n_records, n_lags), np.complex64)
    for j, code in enumerate(blocks):
        src = a if abs(code) == 1 else b
        seg = src[:, j * L:j * L + n_lags]
        if code > 0:
            out += seg
        else:
            out -= seg
    return out


def golay_correlate(records, blocks, log2_len, n_lags, with_power=True, with_output=True):
    records = np.ascontiguousarray(records, dtype=np.complex64)
    n_records, rec_len = records.shape
    L = 1 << log2_len
    blocks = np.asarray(blocks, dtype=np.int8)
    span = max(n_lags + (len(blocks) - 1) * L + L, rec_len)

    out = np.empty((n_records, n_lags), np.complex64) if with_output else None
    power = np.zeros(n_lags, np.float64) if with_power else None
    for start in range(0, n_records, _RECORD_CHUNK):
        chunk = _golay_block(records[start:start + _RECORD_CHUNK], blocks, log2_len, n_lags, span)
        if with_output:
            out[start:start + chunk.shape[0]] = chunk
        if with_power:
            # row-by-row accumulation matches the compiled summation order
            for row in chunk:
                power += row.real.astype(np.float64) ** 2 + row.imag.astype(np.float64) ** 2
    return out, power
