"""Fast invariant checks for ``isac-amc selftest`` (a few seconds in total)."""

import math

import numpy as np

from isac_amc import kernels
from isac_amc.golay import autocorrelation, default_preamble, generate_golay_pair
from isac_amc.link import calibrate_budget, select_mcs, snr_at_range
from isac_amc.metrics import OVERHEAD, frame_throughput
from isac_amc.modem import ModScheme, demodulate, modulate
from isac_amc.ofdm import OfdmConfig, build_frame, ofdm_receive
from isac_amc.radar import RadarConfig, detect_targets, synthesize_datacube
from isac_amc.scene import TargetState, reflectivity_from_rcs


def check_golay():
    for n in range(1, 11):
        pair = generate_golay_pair(2**n)
        s = autocorrelation(pair.a) + autocorrelation(pair.b)
        if s[0] != 2 * pair.length or np.any(s[1:]):
            return False, f"pair of length {pair.length} is not complementary"
    return True, "lengths 2..1024 exactly complementary"


def check_modem():
    rng = np.random.default_rng(1)
    for scheme in ModScheme:
        bits = rng.integers(0, 2, 600 * scheme.bits_per_symbol, dtype=np.int8)
        if not np.array_equal(demodulate(modulate(bits, scheme), scheme), bits):
            return False, f"{scheme.label} bit round trip failed"
    return True, "all four mappings invert"


def check_ofdm():
    cfg = OfdmConfig()
    rng = np.random.default_rng(2)
    for scheme in ModScheme:
        bits = rng.integers(0, 2, cfg.bits_per_frame(scheme), dtype=np.int8)
        res = ofdm_receive(build_frame(modulate(bits, scheme), cfg), cfg, scheme)
        if res.erased or not np.array_equal(res.bits, bits):
            return False, f"noiseless {scheme.label} frame decoded with errors"
    return True, "noiseless frames error-free"


def check_link():
    budget = calibrate_budget()
    s16, s6 = snr_at_range(budget, 16.0), snr_at_range(budget, 6.0)
    ok = abs(s16 - 3.72) <= 0.05 and abs(s6 - 12.24) <= 0.05
    from isac_amc.link import McsPolicy
    pol = McsPolicy()
    table = [(3.0, ModScheme.QAM64), (8.0, ModScheme.QAM16), (12.0, ModScheme.QPSK), (20.0, ModScheme.BPSK)]
    ok = ok and all(select_mcs(pol, r) is s for r, s in table)
    return ok, f"SNR(16 m) = {s16:.3f} dB, SNR(6 m) = {s6:.3f} dB"


def check_throughput():
    ok = frame_throughput(ModScheme.QAM64, 0.0) == 9.504e9 and OVERHEAD == 0.6
    return ok, f"QAM64 peak = {frame_throughput(ModScheme.QAM64, 0.0):.1f} bit/s"


def check_radar():
    cfg = RadarConfig()
    wf = default_preamble()
    r, v, az = 17.3, -9.0, math.radians(25.0)
    tgt = TargetState(0.0, (0.0, 0.0), r, az, v, reflectivity_from_rcs(r))
    det = detect_targets(synthesize_datacube(cfg, [tgt], wf, rng_seed=7), wf)
    if not det:
        return False, "no detection"
    d = det[0]
    ok = (abs(d.range_hat - r) <= cfg.range_bin
          and abs(d.velocity_hat - v) <= cfg.velocity_bin
          and abs(math.sin(d.azimuth_hat) - math.sin(az)) <= cfg.sin_bin)
    return ok, f"r={d.range_hat:.3f} m v={d.velocity_hat:.2f} m/s az={math.degrees(d.azimuth_hat):.2f} deg"


def check_backends():
    if kernels.compiled is None:
        return True, "compiled kernels unavailable; python fallback in use"
    a = np.empty((2, 3, 1000), np.complex64)
    b = np.empty_like(a)
    kernels.compiled.complex_normal_fill(a, 12345, 0, 1.0)
    kernels.fallback.complex_normal_fill(b, 12345, 0, 1.0)
    if not np.array_equal(a.view(np.uint32), b.view(np.uint32)):
        return False, "noise generators differ between backends"
    rec = a.reshape(6, 1000)
    blocks = np.array([-2, -1, 2, -1, -2, 1], np.int8)
    oc, pc = kernels.compiled.golay_correlate(rec, blocks, 7, 200)
    of, pf = kernels.fallback.golay_correlate(rec, blocks, 7, 200)
    ok = np.array_equal(oc, of) and np.array_equal(pc, pf)
    return ok, "compiled and python kernels bit-identical" if ok else "matched filters differ"


CHECKS = (
    ("golay complementarity", check_golay),
    ("modem round trip", check_modem),
    ("ofdm round trip", check_ofdm),
    ("link budget / table", check_link),
    ("throughput arithmetic", check_throughput),
    ("radar single target", check_radar),
    ("kernel backends", check_backends),
)


def run_selftest(out=print):
    """Run every check; returns True when all pass."""
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= bool(ok)
        out(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    out(f"backend: {kernels.BACKEND}")
    return all_ok
