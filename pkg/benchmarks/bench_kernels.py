"""Time the compiled kernels against the numpy fallback.

The matched filter is also compared with an FFT correlation reference, the
usual way to implement a long FIR in numpy.

    python3 benchmarks/bench_kernels.py [--records 8192] [--repeat 3]
"""

import argparse
import time

import numpy as np

from isac_amc import kernels
from isac_amc.golay import PREAMBLE_BLOCKS, default_preamble
from isac_amc.radar import RadarConfig


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def fft_correlate(records, waveform, n_lags):
    """Matched filter by zero-padded FFT correlation (float64 reference)."""
    n = records.shape[1] + waveform.size
    nfft = 1 << (n - 1).bit_length()
    spec = np.fft.fft(records, nfft, axis=1) * np.conj(np.fft.fft(waveform, nfft))[None, :]
    out = np.fft.ifft(spec, axis=1)[:, :n_lags]
    return out, (np.abs(out) ** 2).sum(0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--records", type=int, default=None,
                    help="fast-time records per cube (default: antennas * pulses)")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    cfg = RadarConfig()
    n_rec = args.records or cfg.num_rx * cfg.num_pulses
    n_pulse = max(1, n_rec // cfg.num_rx)
    shape = (cfg.num_rx, n_pulse, cfg.fast_time_len)
    wf = default_preamble()
    blocks = np.asarray(PREAMBLE_BLOCKS, np.int8)
    wave = wf.samples.astype(np.float32)
    ant = np.exp(-1j * np.arange(cfg.num_rx) * 0.7).astype(np.complex64)
    pulse = np.exp(-2j * np.pi * 1e-3 * np.arange(n_pulse)).astype(np.complex64)
    impls = [("compiled", kernels.compiled), ("python", kernels.fallback)]
    impls = [(name, m) for name, m in impls if m is not None]

    cube = np.empty(shape, np.complex64)
    print(f"cube {shape[0]} x {shape[1]} x {shape[2]} ({cube.nbytes / 2**20:.0f} MiB), "
          f"best of {args.repeat}")
    print(f"{'kernel':<28}{'backend':<10}{'seconds':>10}")

    rows = []
    for name, mod in impls:
        rows.append(("complex_normal_fill", name,
                     best_of(lambda: mod.complex_normal_fill(cube, 7, 0, 1.0), args.repeat)))
    for name, mod in impls:
        rows.append(("add_echo", name,
                     best_of(lambda: mod.add_echo(cube, wave, 300, ant, pulse), args.repeat)))
    records = cube.reshape(-1, shape[2])
    n_lags = cfg.num_range_bins
    for name, mod in impls:
        rows.append(("golay_correlate (power)", name,
                     best_of(lambda: mod.golay_correlate(records, blocks, 7, n_lags, True, False),
                             args.repeat)))
    for name, mod in impls:
        rows.append(("golay_correlate (full)", name,
                     best_of(lambda: mod.golay_correlate(records, blocks, 7, n_lags), args.repeat)))
    rows.append(("golay_correlate (full)", "numpy-fft",
                 best_of(lambda: fft_correlate(records, wf.samples.astype(np.float64), n_lags), 1)))
    for kernel, backend, sec in rows:
        print(f"{kernel:<28}{backend:<10}{sec:>10.4f}")

    if kernels.compiled is not None:
        a = np.empty((4, 8, shape[2]), np.complex64)
        b = np.empty_like(a)
        kernels.compiled.complex_normal_fill(a, 1, 0, 1.0)
        kernels.fallback.complex_normal_fill(b, 1, 0, 1.0)
        oc, pc = kernels.compiled.golay_correlate(a.reshape(-1, shape[2]), blocks, 7, n_lags)
        of, pf = kernels.fallback.golay_correlate(a.reshape(-1, shape[2]), blocks, 7, n_lags)
        ref, _ = fft_correlate(a.reshape(-1, shape[2]), wf.samples.astype(np.float64), n_lags)
        print(f"bit-identical noise: {np.array_equal(a.view(np.uint32), b.view(np.uint32))}; "
              f"bit-identical matched filter: {np.array_equal(oc, of) and np.array_equal(pc, pf)}; "
              f"max |compiled - fft| = {np.abs(oc - ref).max():.2e}")


if __name__ == "__main__":
    main()
