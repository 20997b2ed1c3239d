"""Result persistence: per-frame CSV, JSON summary and the two plots.

All numbers are written with fixed format strings so that equal inputs give
byte-identical files regardless of platform float printing.
"""

import csv
import io
import json
import math
import os

import numpy as np

CSV_HEADER = ("time_s", "true_range_m", "est_range_m", "true_az_deg", "est_az_deg",
              "snr_db", "scheme", "frame_ber", "success", "throughput_bps")

FRAMES_CSV = "frames.csv"
SUMMARY_JSON = "summary.json"
BER_PLOT = "ber_vs_time.png"
THROUGHPUT_PLOT = "throughput_bars.png"


class OutputError(OSError):
    """Raised when a result file cannot be written; the message names the path."""


def _num(x, fmt):
    return "nan" if x is None or math.isnan(x) else format(x, fmt)


def frame_row(rec):
    return (
        _num(rec.time, ".6f"),
        _num(rec.true_range, ".6f"),
        _num(rec.est_range, ".6f"),
        _num(math.degrees(rec.true_azimuth), ".4f"),
        _num(math.degrees(rec.est_azimuth), ".4f"),
        _num(rec.snr_db, ".4f"),
        rec.scheme.label,
        _num(rec.frame_ber, ".8f"),
        str(int(rec.success)),
        _num(rec.throughput, ".1f"),
    )


def frames_csv_text(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(frame_row(r) for r in records)
    return buf.getvalue()


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(exc.errno, f"cannot write {path}: {exc.strerror}") from None
    return path


def _ensure_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise OutputError(exc.errno, f"cannot create output directory {path}: {exc.strerror}") from None
    if not os.access(path, os.W_OK):
        raise OutputError(13, f"output directory {path} is not writable")


def write_frames_csv(records, path):
    return _write_text(path, frames_csv_text(records))


def summary_dict(report, records=None, seed=None):
    out = report.as_dict()
    if records is not None:
        out["frames"] = len(records)
        out["success_rate"] = sum(r.success for r in records) / len(records)
        counts = {}
        for r in records:
            counts[r.scheme.label] = counts.get(r.scheme.label, 0) + 1
        out["scheme_frames"] = counts
    if seed is not None:
        out["seed"] = seed
    return out


def write_summary(summary, path):
    return _write_text(path, json.dumps(summary, indent=2, sort_keys=True, allow_nan=False) + "\n")


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _save(fig, path):
    plt = _pyplot()
    try:
        fig.savefig(path, dpi=120, metadata={"Software": None})
    except OSError as exc:
        raise OutputError(exc.errno, f"cannot write {path}: {exc.strerror}") from None
    finally:
        plt.close(fig)
    return path


def plot_ber_vs_time(series, path, title=None):
    """Per-frame BER against time, one line per arm (``{arm: records}``)."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    for arm, records in series.items():
        t = np.array([r.time for r in records])
        b = np.array([r.frame_ber for r in records])
        ax.plot(t, b, label=arm, lw=1.0)
    ax.axhline(0.1, color="k", ls=":", lw=0.8)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("frame BER")
    ax.set_ylim(0, 0.55)
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize="small")
    fig.tight_layout()
    return _save(fig, path)


def plot_throughput_bars(reports, path, title=None):
    """Average throughput bars with average BER on a twin axis (``{arm: report}``)."""
    plt = _pyplot()
    arms = list(reports)
    thr = [reports[a].avg_throughput / 1e9 for a in arms]
    bers = [reports[a].avg_ber for a in arms]
    fig, ax = plt.subplots(figsize=(6, 4))
    x = np.arange(len(arms))
    ax.bar(x, thr, color="tab:blue", width=0.6)
    ax.set_xticks(x, arms)
    ax.set_ylabel("avg throughput (Gbps)")
    ax2 = ax.twinx()
    ax2.plot(x, bers, "o-", color="tab:red")
    ax2.set_ylabel("avg BER")
    ax2.set_ylim(0, max(0.55, max(bers) * 1.1))
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def emit_outputs(records, report, out_dir, seed=None, plots=True):
    """Write frames.csv, summary.json and (optionally) both plots for one arm."""
    _ensure_dir(out_dir)
    paths = {
        "frames": write_frames_csv(records, os.path.join(out_dir, FRAMES_CSV)),
        "summary": write_summary(summary_dict(report, records, seed),
                                 os.path.join(out_dir, SUMMARY_JSON)),
    }
    if plots:
        title = f"{getattr(report.kind, 'value', report.kind)} / {report.arm}"
        paths["ber_plot"] = plot_ber_vs_time({report.arm: records},
                                             os.path.join(out_dir, BER_PLOT), title)
        paths["throughput_plot"] = plot_throughput_bars({report.arm: report},
                                                        os.path.join(out_dir, THROUGHPUT_PLOT), title)
    return paths


def emit_comparison(results, out_dir, seed=None, plots=True):
    """One sub-directory per arm plus a top-level summary and comparison plots."""
    _ensure_dir(out_dir)
    paths = {}
    for arm, (records, report) in results.items():
        paths[arm] = emit_outputs(records, report, os.path.join(out_dir, arm), seed, plots=False)
    top = {arm: summary_dict(report, records) for arm, (records, report) in results.items()}
    if seed is not None:
        top["seed"] = seed
    paths["summary"] = write_summary(top, os.path.join(out_dir, SUMMARY_JSON))
    if plots:
        kind = next(iter(results.values()))[1].kind
        title = getattr(kind, "value", kind)
        paths["ber_plot"] = plot_ber_vs_time({a: r for a, (r, _) in results.items()},
                                             os.path.join(out_dir, BER_PLOT), title)
        paths["throughput_plot"] = plot_throughput_bars({a: rep for a, (_, rep) in results.items()},
                                                        os.path.join(out_dir, THROUGHPUT_PLOT), title)
    return paths
