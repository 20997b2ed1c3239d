import json

import pytest

from isac_amc.cli import build_parser, main, resolve_config


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_resolve_precedence(tmp_path):
    cfg_file = tmp_path / "c.cfg"
    cfg_file.write_text("seed = 5\nout_dir = a\ntrajectory.kind = sine\n")
    args = build_parser().parse_args(["run", "--config", str(cfg_file), "--seed", "9", "--out", "b",
                                      "--set", "scene.duration_s=0.5", "--policy", "qpsk"])
    cfg = resolve_config(args)
    assert (cfg.seed, cfg.out_dir, cfg.trajectory.value, cfg.policy) == (9, "b", "sine", "qpsk")
    assert cfg.scene.duration == 0.5


def test_bad_set_syntax():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["run", "--set", "novalue"])


def test_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("[PASS]") == 7


def test_run_writes_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["run", "--out", str(out), "-q", "--no-plots", "--policy", "bpsk",
                 "--set", "scene.duration_s=0.05", "--set", "radar.pulses=32"])
    assert code == 0
    lines = (out / "frames.csv").read_text().splitlines()
    assert len(lines) == 7 and all(",bpsk," in line for line in lines[1:])
    assert json.loads((out / "summary.json").read_text())["arm"] == "bpsk"


def test_compare_writes_arm_dirs(tmp_path, capsys):
    out = tmp_path / "cmp"
    code = main(["compare", "--out", str(out), "-q", "--trajectory", "hybrid",
                 "--set", "scene.duration_s=0.03", "--set", "radar.pulses=32"])
    assert code == 0
    for arm in ("adaptive", "bpsk", "qpsk", "qam16", "qam64"):
        assert (out / arm / "frames.csv").exists()
    assert (out / "ber_vs_time.png").exists()
    assert "adaptive" in capsys.readouterr().out


def test_config_error_exit_code(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == 2
    assert "missing.cfg" in capsys.readouterr().err
    assert main(["run", "--set", "bogus=1"]) == 2
