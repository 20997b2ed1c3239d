"""Run configuration and its flat ``key = value`` text format.

Example::

    trajectory.kind = u_shaped
    scene.speed_mps = 15
    radar.pri_s = 0.58e-6
    radar.pulses = 512
    ofdm.nfft = 512
    ofdm.ncp = 128
    policy = adaptive
    budget.ref_range_m = 10
    budget.ref_snr_db = 7.8
    seed = 2024
    out_dir = results/u_shaped

Blank lines and ``#`` comments are ignored. Unknown keys are errors.
"""

import configparser
import dataclasses
from dataclasses import dataclass, field

from isac_amc.link import DEFAULT_BREAKPOINTS, DEFAULT_NOISE_POWER, McsPolicy, calibrate_budget
from isac_amc.modem import ModScheme
from isac_amc.ofdm import OfdmConfig
from isac_amc.radar import RadarConfig
from isac_amc.scene import SceneConfig, TrajectoryKind

POLICIES = ("adaptive", "bpsk", "qpsk", "qam16", "qam64")

_SECTION = "run"


@dataclass(frozen=True)
class RunConfig:
    trajectory: TrajectoryKind = TrajectoryKind.UShaped
    scene: SceneConfig = field(default_factory=SceneConfig)
    radar: RadarConfig = field(default_factory=RadarConfig)
    ofdm: OfdmConfig = field(default_factory=OfdmConfig)
    policy: str = "adaptive"
    ref_range_m: float = 10.0
    ref_snr_db: float = 7.8
    breakpoints_m: tuple = tuple(r for r, _ in DEFAULT_BREAKPOINTS)
    seed: int = 2024
    out_dir: str = "results"

    def __post_init__(self):
        object.__setattr__(self, "trajectory", TrajectoryKind.parse(self.trajectory))
        object.__setattr__(self, "policy", _parse_policy(str(self.policy)))
        object.__setattr__(self, "breakpoints_m",
                           _parse_breakpoints(",".join(str(float(b)) for b in self.breakpoints_m)))
        if self.ref_range_m <= 0:
            raise ValueError("budget.ref_range_m must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def budget(self):
        return calibrate_budget(self.ref_range_m, self.ref_snr_db,
                                self.radar.wavelength, DEFAULT_NOISE_POWER)

    def mcs_policy(self):
        schemes = [s for _, s in DEFAULT_BREAKPOINTS]
        return McsPolicy(tuple(zip(self.breakpoints_m, schemes)), budget=self.budget())

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_text(self):
        lines = [f"{key} = {value}" for key, value in _flatten(self).items()]
        return "\n".join(lines) + "\n"


def _fmt(x):
    return repr(x) if isinstance(x, float) else str(x)


def _flatten(cfg):
    s, r, o = cfg.scene, cfg.radar, cfg.ofdm
    return {
        "trajectory.kind": cfg.trajectory.value,
        "scene.speed_mps": _fmt(s.speed),
        "scene.frame_interval_s": _fmt(s.frame_interval),
        "scene.duration_s": "auto" if s.duration is None else _fmt(s.duration),
        "scene.rcs_dbsm": _fmt(s.rcs_dbsm),
        "radar.power_gain_w": _fmt(s.radar_power_gain),
        "radar.pri_s": _fmt(r.pri),
        "radar.pulses": str(r.num_pulses),
        "radar.antennas": str(r.num_rx),
        "radar.noise_power_w": _fmt(r.noise_power),
        "ofdm.nfft": str(o.n_fft),
        "ofdm.ncp": str(o.n_cp),
        "ofdm.ndata": str(o.n_data),
        "ofdm.symbols": str(o.symbols_per_frame),
        "policy": cfg.policy,
        "policy.breakpoints_m": ",".join(_fmt(float(b)) for b in cfg.breakpoints_m),
        "budget.ref_range_m": _fmt(cfg.ref_range_m),
        "budget.ref_snr_db": _fmt(cfg.ref_snr_db),
        "seed": str(cfg.seed),
        "out_dir": cfg.out_dir,
    }


def _parse_policy(text):
    policy = text.strip().lower()
    if policy.startswith("fixed:"):
        policy = policy[len("fixed:"):]
    return policy if policy == "adaptive" else ModScheme.parse(policy).label


def _parse_breakpoints(text):
    values = tuple(float(x) for x in text.split(","))
    if len(values) != len(DEFAULT_BREAKPOINTS):
        raise ValueError(f"expected {len(DEFAULT_BREAKPOINTS)} comma-separated ranges")
    if any(b <= a for a, b in zip(values, values[1:])) or values[0] <= 0:
        raise ValueError("ranges must be positive and strictly increasing")
    return values


def _parse_pairs(text):
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#", ";"),
                                       interpolation=None)
    parser.optionxform = str
    parser.read_string(f"[{_SECTION}]\n{text}")
    return dict(parser[_SECTION])


def from_mapping(values, base=None):
    """Apply flat ``key -> string`` overrides on top of ``base``."""
    cfg = base or RunConfig()
    scene, radar, ofdm = {}, {}, {}
    top = {}
    for key, raw in values.items():
        key = key.strip()
        val = str(raw).strip()
        try:
            if key == "trajectory.kind":
                top["trajectory"] = TrajectoryKind.parse(val)
            elif key == "scene.speed_mps":
                scene["speed"] = float(val)
            elif key == "scene.frame_interval_s":
                scene["frame_interval"] = float(val)
            elif key == "scene.duration_s":
                scene["duration"] = None if val.lower() == "auto" else float(val)
            elif key == "scene.rcs_dbsm":
                scene["rcs_dbsm"] = float(val)
            elif key == "radar.power_gain_w":
                scene["radar_power_gain"] = float(val)
            elif key == "radar.pri_s":
                radar["pri"] = float(val)
            elif key == "radar.pulses":
                radar["num_pulses"] = int(val)
            elif key == "radar.antennas":
                radar["num_rx"] = int(val)
            elif key == "radar.noise_power_w":
                radar["noise_power"] = float(val)
            elif key == "ofdm.nfft":
                ofdm["n_fft"] = int(val)
            elif key == "ofdm.ncp":
                ofdm["n_cp"] = int(val)
            elif key == "ofdm.ndata":
                ofdm["n_data"] = int(val)
            elif key == "ofdm.symbols":
                ofdm["symbols_per_frame"] = int(val)
            elif key == "policy":
                top["policy"] = _parse_policy(val)
            elif key == "policy.breakpoints_m":
                top["breakpoints_m"] = _parse_breakpoints(val)
            elif key == "budget.ref_range_m":
                top["ref_range_m"] = float(val)
            elif key == "budget.ref_snr_db":
                top["ref_snr_db"] = float(val)
            elif key == "seed":
                top["seed"] = int(val)
            elif key == "out_dir":
                top["out_dir"] = val
            else:
                raise KeyError(key)
        except KeyError:
            raise ValueError(f"unknown config key: {key!r}") from None
        except ValueError as exc:
            raise ValueError(f"bad value for {key}: {val!r} ({exc})") from None

    if "n_fft" in ofdm and "n_data" not in ofdm:
        ofdm["n_data"] = ofdm["n_fft"] * 3 // 4
    if "n_fft" in ofdm or "n_data" in ofdm:
        n_fft = ofdm.get("n_fft", cfg.ofdm.n_fft)
        ofdm["n_null_each_side"] = (n_fft - ofdm.get("n_data", cfg.ofdm.n_data)) // 2
    return cfg.replace(
        scene=dataclasses.replace(cfg.scene, **scene),
        radar=dataclasses.replace(cfg.radar, **radar),
        ofdm=dataclasses.replace(cfg.ofdm, **ofdm),
        **top,
    )


def parse_config(text, base=None):
    return from_mapping(_parse_pairs(text), base)


def load_config(path, base=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValueError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, base)
