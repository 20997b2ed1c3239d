"""Command line entry point: ``isac-amc {run,compare,selftest}``."""

import argparse
import sys
import time

from isac_amc.config import RunConfig, from_mapping, load_config
from isac_amc.output import OutputError, emit_comparison, emit_outputs
from isac_amc.sim import compare_arms, run_simulation


def _key_value(text):
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key.strip(), value.strip()


def build_parser():
    parser = argparse.ArgumentParser(
        prog="isac-amc",
        description="Radar-enabled adaptive modulation simulator for a 60 GHz ISAC link.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--seed", type=int, help="master seed (overrides the config)")
    common.add_argument("--out", help="output directory (overrides out_dir)")
    common.add_argument("--trajectory", help="u_shaped | figure_of_eight | sine | hybrid")
    common.add_argument("--set", dest="overrides", action="append", type=_key_value, default=[],
                        metavar="KEY=VALUE", help="override one config key (repeatable)")
    common.add_argument("--no-plots", action="store_true", help="skip the PNG plots")
    common.add_argument("-q", "--quiet", action="store_true", help="no progress output")

    run = sub.add_parser("run", parents=[common], help="simulate one arm")
    run.add_argument("--policy", help="adaptive | bpsk | qpsk | qam16 | qam64")
    sub.add_parser("compare", parents=[common], help="adaptive plus all four fixed arms, shared seeds")
    sub.add_parser("selftest", help="quick invariant checks")
    return parser


def resolve_config(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    values = dict(args.overrides)
    if args.trajectory:
        values["trajectory.kind"] = args.trajectory
    if getattr(args, "policy", None):
        values["policy"] = args.policy
    if args.seed is not None:
        values["seed"] = str(args.seed)
    if args.out:
        values["out_dir"] = args.out
    return from_mapping(values, cfg) if values else cfg


def _progress(quiet):
    if quiet:
        return None
    start = time.monotonic()

    def report(done, total):
        if done == total or done % 25 == 0:
            print(f"\rsensing frame {done}/{total} ({time.monotonic() - start:.0f} s)",
                  end="\n" if done == total else "", file=sys.stderr, flush=True)
    return report


def _fmt_gain(g):
    return "n/a" if g is None else f"{g:+.1f}%"


def cmd_run(args):
    cfg = resolve_config(args)
    records, report = run_simulation(cfg, progress=_progress(args.quiet))
    emit_outputs(records, report, cfg.out_dir, cfg.seed, plots=not args.no_plots)
    print(f"{cfg.trajectory.value} / {report.arm}: {len(records)} frames, "
          f"avg throughput {report.avg_throughput / 1e9:.3f} Gbps, avg BER {report.avg_ber:.4f}")
    print(f"wrote {cfg.out_dir}")
    return 0


def cmd_compare(args):
    cfg = resolve_config(args)
    results = compare_arms(cfg, progress=_progress(args.quiet))
    emit_comparison(results, cfg.out_dir, cfg.seed, plots=not args.no_plots)
    gains = results["adaptive"][1].improvements
    print(f"{cfg.trajectory.value}, seed {cfg.seed}")
    print(f"{'arm':<10}{'Gbps':>8}{'avg BER':>10}{'gain':>10}")
    for arm, (_, report) in results.items():
        gain = "" if arm == "adaptive" else _fmt_gain(gains.get(arm))
        print(f"{arm:<10}{report.avg_throughput / 1e9:>8.3f}{report.avg_ber:>10.4f}{gain:>10}")
    print(f"wrote {cfg.out_dir}")
    return 0


def cmd_selftest(args):
    from isac_amc.selftest import run_selftest
    return 0 if run_selftest() else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"run": cmd_run, "compare": cmd_compare, "selftest": cmd_selftest}[args.command]
    try:
        return handler(args)
    except (ValueError, OutputError) as exc:
        print(f"isac-amc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
