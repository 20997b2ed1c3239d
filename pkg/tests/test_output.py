import csv
import json
import math
import os

import pytest

from isac_amc.metrics import FrameRecord, TrajectoryReport
from isac_amc.modem import ModScheme
from isac_amc.output import (
    CSV_HEADER,
    OutputError,
    emit_comparison,
    emit_outputs,
    frame_row,
    frames_csv_text,
)


def records(n=600):
    out = []
    for i in range(n):
        b = (i % 7) / 50
        out.append(FrameRecord(i * 0.01, 40 - i * 0.05, 40 - i * 0.05 + 0.01, 0.1, 0.11, 5.0,
                               ModScheme.QPSK, b, int(b < 0.1), 3.168e9 * (1 - b) if b < 0.1 else 0.0))
    return out


def test_header_is_exact():
    assert frames_csv_text([]).splitlines()[0] == (
        "time_s,true_range_m,est_range_m,true_az_deg,est_az_deg,snr_db,scheme,frame_ber,success,throughput_bps")
    assert len(CSV_HEADER) == 10


def test_row_formatting():
    r = FrameRecord(0.06, 10.0, math.nan, math.radians(30), 0.0, 7.8, ModScheme.QAM64, 0.0, 1, 9.504e9)
    assert frame_row(r) == ("0.060000", "10.000000", "nan", "30.0000", "0.0000", "7.8000",
                            "qam64", "0.00000000", "1", "9504000000.0")


def test_emit_outputs(tmp_path):
    recs = records()
    rep = TrajectoryReport("u_shaped", 1.5e9, 0.04, {}, "qpsk")
    paths = emit_outputs(recs, rep, tmp_path / "run", seed=3)
    with open(paths["frames"], newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 601 and tuple(rows[0]) == CSV_HEADER
    summary = json.loads(open(paths["summary"]).read())
    assert {"avg_throughput_bps", "avg_ber", "improvements"} <= set(summary)
    assert summary["frames"] == 600 and summary["seed"] == 3
    for key in ("ber_plot", "throughput_plot"):
        assert os.path.getsize(paths[key]) > 1000


def test_same_input_same_bytes(tmp_path):
    rep = TrajectoryReport("sine", 1.0, 0.1, {}, "qpsk")
    a = emit_outputs(records(50), rep, tmp_path / "a", plots=False)
    b = emit_outputs(records(50), rep, tmp_path / "b", plots=False)
    for key in ("frames", "summary"):
        assert open(a[key], "rb").read() == open(b[key], "rb").read()


def test_comparison_layout(tmp_path):
    recs = records(20)
    results = {
        "adaptive": (recs, TrajectoryReport("hybrid", 2.0, 0.05, {"bpsk": 50.0, "qam64": None}, "adaptive")),
        "bpsk": (recs, TrajectoryReport("hybrid", 1.0, 0.01, {}, "bpsk")),
        "qam64": (recs, TrajectoryReport("hybrid", 0.0, 0.4, {}, "qam64")),
    }
    emit_comparison(results, tmp_path, seed=1)
    top = json.loads((tmp_path / "summary.json").read_text())
    assert top["adaptive"]["improvements"] == {"bpsk": 50.0, "qam64": None}
    for arm in results:
        assert (tmp_path / arm / "frames.csv").exists()
    assert (tmp_path / "throughput_bars.png").exists()


def test_unwritable_directory_reports_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OutputError, match=str(blocker)):
        emit_outputs(records(2), TrajectoryReport("u", 0, 0), blocker / "sub", plots=False)
