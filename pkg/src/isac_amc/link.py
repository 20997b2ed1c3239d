"""Range-keyed modulation selection through the Friis SNR model.

    SNR = Pt Gt Gr lambda^2 / ((4 pi d)^2 Np)

Only the product ``Pt Gt Gr`` matters, so the budget is calibrated from a
single reference point (7.80 dB at 10 m). The policy's SNR breakpoints are
derived from its range breakpoints through that budget, which keeps the
range-keyed and SNR-keyed selectors in exact agreement.
"""

import math
from dataclasses import dataclass

from isac_amc.modem import ModScheme
from isac_amc.scene import C

DEFAULT_WAVELENGTH = C / 60e9
DEFAULT_NOISE_POWER = 1e-11
REFERENCE_RANGE = 10.0
REFERENCE_SNR_DB = 7.80

# (upper range bound in metres, scheme); the last row is the fallback
DEFAULT_BREAKPOINTS = ((6.0, ModScheme.QAM64), (10.0, ModScheme.QAM16), (16.0, ModScheme.QPSK))
DEFAULT_FALLBACK = ModScheme.BPSK


@dataclass(frozen=True)
class LinkBudget:
    ptgtgr: float
    wavelength: float = DEFAULT_WAVELENGTH
    noise_power: float = DEFAULT_NOISE_POWER

    def __post_init__(self):
        if min(self.ptgtgr, self.wavelength, self.noise_power) <= 0:
            raise ValueError("link budget terms must be strictly positive")


def snr_at_range(budget, d):
    if d <= 0:
        raise ValueError(f"range must be positive, got {d}")
    lin = budget.ptgtgr * budget.wavelength**2 / ((4 * math.pi * d) ** 2 * budget.noise_power)
    return 10.0 * math.log10(lin)


def range_at_snr(budget, snr_db):
    """Inverse of snr_at_range."""
    lin = 10.0 ** (snr_db / 10.0)
    return budget.wavelength / (4 * math.pi) * math.sqrt(budget.ptgtgr / (lin * budget.noise_power))


def calibrate_budget(reference_range=REFERENCE_RANGE, reference_snr_db=REFERENCE_SNR_DB,
                     wavelength=DEFAULT_WAVELENGTH, noise_power=DEFAULT_NOISE_POWER):
    if reference_range <= 0:
        raise ValueError("reference range must be positive")
    snr_lin = 10.0 ** (reference_snr_db / 10.0)
    ptgtgr = snr_lin * (4 * math.pi * reference_range) ** 2 * noise_power / wavelength**2
    return LinkBudget(ptgtgr, wavelength, noise_power)


@dataclass(frozen=True)
class McsPolicy:
    """Piecewise-constant range -> scheme map; ties go to the lower order."""

    breakpoints: tuple = DEFAULT_BREAKPOINTS
    fallback: ModScheme = DEFAULT_FALLBACK
    budget: LinkBudget = None

    def __post_init__(self):
        ranges = [r for r, _ in self.breakpoints]
        if any(b <= a for a, b in zip(ranges, ranges[1:])):
            raise ValueError("range breakpoints must be strictly increasing")
        if any(r <= 0 for r in ranges):
            raise ValueError("range breakpoints must be positive")
        if self.budget is None:
            object.__setattr__(self, "budget", calibrate_budget())

    @property
    def snr_breakpoints(self):
        """SNR thresholds (dB, decreasing) implied by the range breakpoints."""
        return tuple(snr_at_range(self.budget, r) for r, _ in self.breakpoints)

    def table(self):
        rows = []
        lower = 0.0
        for (upper, scheme), snr in zip(self.breakpoints, self.snr_breakpoints):
            rows.append((lower, upper, snr, scheme))
            lower = upper
        rows.append((lower, math.inf, None, self.fallback))
        return rows


def select_mcs(policy, range_hat):
    if range_hat < 0:
        raise ValueError("range must be non-negative")
    for upper, scheme in policy.breakpoints:
        if range_hat < upper:
            return scheme
    return policy.fallback


def select_mcs_from_snr(policy, snr_db):
    for threshold, (_, scheme) in zip(policy.snr_breakpoints, policy.breakpoints):
        if snr_db > threshold:
            return scheme
    return policy.fallback
