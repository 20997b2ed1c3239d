import pytest

from isac_amc.config import RunConfig, from_mapping, load_config, parse_config
from isac_amc.scene import TrajectoryKind

EXAMPLE = """
# reference U-shaped run
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
"""


def test_example_parses_to_defaults():
    cfg = parse_config(EXAMPLE)
    assert cfg.replace(out_dir="results") == RunConfig()


def test_round_trip_text():
    cfg = RunConfig(trajectory="sine", seed=7, policy="fixed:qam16",
                    breakpoints_m=(5.0, 9.0, 15.0))
    assert parse_config(cfg.to_text()) == cfg


def test_overrides():
    cfg = from_mapping({"scene.duration_s": "0.5", "policy": "QPSK", "radar.pulses": "64",
                        "trajectory.kind": "figure-of-eight"})
    assert cfg.scene.duration == 0.5
    assert cfg.policy == "qpsk"
    assert cfg.radar.num_pulses == 64
    assert cfg.trajectory is TrajectoryKind.FigureOfEight


def test_fft_change_keeps_three_quarters_data():
    cfg = from_mapping({"ofdm.nfft": "256", "ofdm.ncp": "64"})
    assert cfg.ofdm.n_data == 192 and cfg.ofdm.n_null_each_side == 32


@pytest.mark.parametrize("text, msg", [
    ("colour = blue", "unknown config key"),
    ("seed = abc", "bad value for seed"),
    ("policy = 8psk", "bad value for policy"),
    ("trajectory.kind = spiral", "bad value for trajectory.kind"),
    ("seed = -1", "seed must be non-negative"),
    ("policy.breakpoints_m = 10, 6, 16", "bad value"),
])
def test_validation_errors(text, msg):
    with pytest.raises(ValueError, match=msg):
        parse_config(text)


def test_load_missing_file(tmp_path):
    path = tmp_path / "nope.cfg"
    with pytest.raises(ValueError, match=str(path)):
        load_config(path)


def test_load_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("seed = 11\n")
    assert load_config(path).seed == 11


def test_budget_and_policy():
    cfg = RunConfig()
    assert cfg.mcs_policy().budget == cfg.budget()
