"""Per-frame throughput, trajectory aggregation and arm comparison."""

import math
from dataclasses import dataclass, field

from isac_amc.modem import ModScheme

SAMPLE_RATE = 2.64e9
OVERHEAD = 384 / (512 + 128)
SUCCESS_BER = 0.1
ARMS = ("adaptive", "bpsk", "qpsk", "qam16", "qam64")
BASELINES = ARMS[1:]


@dataclass(frozen=True)
class FrameRecord:
    time: float
    true_range: float
    est_range: float
    true_azimuth: float
    est_azimuth: float
    snr_db: float
    scheme: ModScheme
    frame_ber: float
    success: int
    throughput: float


@dataclass
class TrajectoryReport:
    kind: object
    avg_throughput: float
    avg_ber: float
    improvements: dict = field(default_factory=dict)
    arm: str = "adaptive"

    def as_dict(self):
        return {
            "trajectory": getattr(self.kind, "value", self.kind),
            "arm": self.arm,
            "avg_throughput_bps": self.avg_throughput,
            "avg_ber": self.avg_ber,
            "improvements": {k: v for k, v in self.improvements.items()},
        }


def frame_success(frame_ber):
    return 1 if frame_ber < SUCCESS_BER else 0


def frame_throughput(scheme, frame_ber, sample_rate=SAMPLE_RATE, overhead=OVERHEAD):
    """Fs * overhead * log2(M) * (1 - BER) * S, S = [BER < 0.1]."""
    if not 0.0 <= frame_ber <= 1.0:
        raise ValueError(f"frame BER must lie in [0, 1], got {frame_ber}")
    scheme = ModScheme.parse(scheme)
    if not frame_success(frame_ber):
        return 0.0
    return sample_rate * overhead * scheme.bits_per_symbol * (1.0 - frame_ber)


def aggregate(records):
    if not records:
        raise ValueError("cannot aggregate an empty record list")
    n = len(records)
    return (math.fsum(r.throughput for r in records) / n,
            math.fsum(r.frame_ber for r in records) / n)


def improvement(adaptive_throughput, fixed_throughput):
    """Percentage gain of adaptive over a fixed arm; None if the arm never succeeds."""
    if fixed_throughput <= 0:
        return None
    return 100.0 * (adaptive_throughput / fixed_throughput - 1.0)


def compare(adaptive, fixed, kind=None):
    """Fill improvement percentages of ``adaptive`` over each fixed arm.

    ``adaptive`` is a (avg_throughput, avg_ber) pair or a record list;
    ``fixed`` maps arm name -> (avg_throughput, avg_ber) or record list.
    """
    def summary(x):
        return aggregate(x) if isinstance(x, list) else tuple(x)

    thr, avg_ber = summary(adaptive)
    gains = {name: improvement(thr, summary(arm)[0]) for name, arm in fixed.items()}
    return TrajectoryReport(kind, thr, avg_ber, gains)
