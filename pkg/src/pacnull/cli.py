"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 not significant under
``mi --strict``.  Every command that writes files also writes a manifest
JSON; ``pacnull replay MANIFEST`` re-runs it and reproduces the outputs.
Relative output paths resolve against ``$PACNULL_OUTDIR`` when it is set.
"""

import argparse
import os
from pathlib import Path
import sys

import numpy as np

from . import __version__
from .errors import DomainError, InvalidArgumentError, NumericInstabilityError, DegenerateInputError
from .io import dumps, read_columns, write_column, write_json, write_rows
from .mcval import max_relative_gap, mc_null, ks_distance, qq_table
from .mi import mi_pipeline
from .nullmodel import VARIANTS, assess, critical_value, null_params, p_value
from .scenarios import KINDS, ScenarioConfig, SweepRow, simulate, sweep
from .sigproc import BandSpec, TimeSeries

OUTDIR_ENV = "PACNULL_OUTDIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for --strict
    def error(self, message):
        raise UsageError(message)


def _out_path(path):
    p = Path(path)
    if not p.is_absolute():
        p = Path(os.environ.get(OUTDIR_ENV, ".")) / p
    return p


def _float_list(text):
    """``"0,0.5,1"`` or ``"start:stop:step"`` (stop inclusive)."""
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            count = int(round((stop - start) / step)) + 1
            return [round(start + i * step, 12) for i in range(count)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def _int_list(text):
    """``"9,18,36"`` or an inclusive range ``"0-19"``."""
    try:
        if "-" in text and "," not in text:
            lo, hi = (int(t) for t in text.split("-"))
            return list(range(lo, hi + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse integer list {text!r}") from exc


def _band(text):
    return BandSpec.parse(text)


def _manifest(command, argv, config, seed, outputs):
    return {
        "command": command,
        "argv": list(argv),
        "config": config,
        "seed": seed,
        "version": __version__,
        "outputs": [str(p) for p in outputs],
    }


def _emit(obj, out):
    text = dumps(obj)
    if out:
        path = _out_path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def cmd_mi(args):
    data = read_columns(args.input)
    if data.shape[1] > 2:
        raise InvalidArgumentError(f"expected 1 or 2 columns, got {data.shape[1]}")
    x = TimeSeries(data[:, 0], args.fs)
    y = TimeSeries(data[:, 1], args.fs) if data.shape[1] == 2 else None
    low, high = args.low.validate(args.fs), args.high.validate(args.fs)
    value = mi_pipeline(x, low, high, args.bins, amp_source=y)
    result = assess(value, len(x), args.alpha)
    report = result.to_dict()
    report.update(
        entropy=value.entropy_nats,
        empty_bins=value.empty_bins,
        fs=args.fs,
        bands={"low": [low.f_lo, low.f_hi], "high": [high.f_lo, high.f_hi]},
        channels=int(data.shape[1]),
    )
    _emit(report, args.out)
    if args.strict and not result.significant:
        return 2
    return 0


def cmd_null(args):
    params = null_params(args.n, args.bins, args.variant)
    report = {"params": params.to_dict(), "alpha": args.alpha,
              "critical_value": critical_value(params, args.alpha)}
    if args.mi is not None:
        report["mi"] = args.mi
        report["p_value"] = p_value(params, args.mi)
        report["significant"] = bool(report["p_value"] < args.alpha)
    _emit(report, args.out)
    return 0


def _scenario(args):
    kw = {}
    if args.low is not None:
        kw["low_band"] = args.low
    if args.high is not None:
        kw["high_band"] = args.high
    return kw


def cmd_simulate(args, argv):
    cfg = ScenarioConfig(args.kind, strength=args.strength, fs=args.fs, duration=args.duration,
                         seed=args.seed, jitter=args.jitter, snr_mode=args.snr_mode, **_scenario(args))
    x = simulate(cfg)
    out = _out_path(args.out)
    write_column(out, x.samples, header="x")
    manifest = out.with_suffix(".manifest.json")
    write_json(manifest, _manifest("simulate", argv, cfg.to_dict(), cfg.seed, [out]))
    return 0


def cmd_validate(args, argv):
    outdir = _out_path(args.out_dir)
    sample = mc_null(args.n, args.bins, args.reps, args.seed)
    params = null_params(args.n, args.bins)
    qs = np.round(np.arange(1, 100) / 100.0, 2)
    table = qq_table(sample, params, qs)
    central = [r for r in table if 0.05 - 1e-9 <= r[0] <= 0.95 + 1e-9]
    paths = [
        write_rows(outdir / "qq.csv", ["quantile", "empirical", "theoretical"], table),
        write_column(outdir / "null_sample.csv", sample.mis, header="mi"),
        write_json(outdir / "ks.json", {
            "n": args.n, "bins": args.bins, "reps": args.reps, "seed": args.seed,
            "ks_distance": ks_distance(sample, params),
            "max_relative_quantile_gap_05_95": max_relative_gap(central),
            "params": params.to_dict(),
        }),
    ]
    config = {"n": args.n, "bins": args.bins, "reps": args.reps}
    write_json(outdir / "manifest.json", _manifest("validate", argv, config, args.seed, paths))
    return 0


def cmd_sweep(args, argv):
    rows = sweep(args.kind, args.strengths, args.bins, args.seeds, alpha=args.alpha,
                 snr_mode=args.snr_mode, **_scenario(args))
    out = _out_path(args.out)
    write_rows(out, SweepRow.FIELDS, ([getattr(r, f) for f in SweepRow.FIELDS] for r in rows))
    config = {"kind": args.kind, "strengths": args.strengths, "bins": args.bins,
              "seeds": args.seeds, "alpha": args.alpha, "snr_mode": args.snr_mode}
    write_json(out.with_suffix(".manifest.json"),
               _manifest("sweep", argv, config, args.seeds, [out]))
    return 0


def cmd_replay(args):
    import json

    try:
        manifest = json.loads(Path(args.manifest).read_text())
    except (OSError, ValueError) as exc:
        raise InvalidArgumentError(f"cannot read manifest {args.manifest}: {exc}") from exc
    return main(manifest["argv"])


def build_parser():
    p = _Parser(prog="pacnull", description="Modulation index with a closed-form white-noise null.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("mi", help="MI and significance for a CSV signal")
    m.add_argument("input")
    m.add_argument("--fs", type=float, required=True)
    m.add_argument("--low", type=_band, default=BandSpec(0.1, 5.0), help="phase band lo,hi in Hz")
    m.add_argument("--high", type=_band, default=BandSpec(10.0, 75.0), help="amplitude band lo,hi in Hz")
    m.add_argument("--bins", type=int, default=18)
    m.add_argument("--alpha", type=float, default=0.01)
    m.add_argument("--strict", action="store_true", help="exit 2 when not significant")
    m.add_argument("--out")

    n = sub.add_parser("null", help="closed-form null parameters and critical value")
    n.add_argument("--n", type=int, required=True)
    n.add_argument("--bins", type=int, default=18)
    n.add_argument("--alpha", type=float, default=0.01)
    n.add_argument("--mi", type=float)
    n.add_argument("--variant", choices=sorted(VARIANTS), default="calibrated")
    n.add_argument("--out")

    s = sub.add_parser("simulate", help="write a scenario signal as CSV")
    s.add_argument("--kind", required=True)
    s.add_argument("--strength", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--fs", type=float, default=300.0)
    s.add_argument("--duration", type=float, default=2.0)
    s.add_argument("--jitter", action="store_true")
    s.add_argument("--snr-mode", choices=("rms", "peak"), default="rms")
    s.add_argument("--low", type=_band)
    s.add_argument("--high", type=_band)
    s.add_argument("--out", default="signal.csv")

    v = sub.add_parser("validate", help="Monte Carlo check of the null")
    v.add_argument("--n", type=int, default=1000)
    v.add_argument("--bins", type=int, default=18)
    v.add_argument("--reps", type=int, default=10_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out-dir", default="validate")

    w = sub.add_parser("sweep", help="MI over strengths, bins and seeds")
    w.add_argument("--kind", required=True)
    w.add_argument("--strengths", type=_float_list, required=True)
    w.add_argument("--bins", type=_int_list, default=[9, 18, 36, 60])
    w.add_argument("--seeds", type=_int_list, default=[0])
    w.add_argument("--alpha", type=float, default=0.01)
    w.add_argument("--snr-mode", choices=("rms", "peak"), default="rms")
    w.add_argument("--low", type=_band)
    w.add_argument("--high", type=_band)
    w.add_argument("--out", default="sweep.csv")

    r = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    r.add_argument("manifest")
    return p


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command == "mi":
            return cmd_mi(args)
        if args.command == "null":
            return cmd_null(args)
        if args.command == "simulate":
            if args.kind not in KINDS:
                raise InvalidArgumentError(f"unknown scenario kind {args.kind!r}")
            return cmd_simulate(args, argv)
        if args.command == "validate":
            return cmd_validate(args, argv)
        if args.command == "sweep":
            return cmd_sweep(args, argv)
        return cmd_replay(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (InvalidArgumentError, DomainError, DegenerateInputError,
            NumericInstabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run():
    sys.exit(main())
