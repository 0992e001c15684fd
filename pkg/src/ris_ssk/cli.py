"""Command-line front end.

::

    ris-ssk analyze  [--config cfg.toml] [--snr-start ...] --out DIR
    ris-ssk simulate [--config cfg.toml] [--trials N] [--seed S] [--workers W] --out DIR
    ris-ssk figure --id {2,3,4,5} [--trials N] [--seed S] --out DIR
    ris-ssk validate [--out DIR]

Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import sys
from pathlib import Path

from . import __version__, analysis, validation
from .channel import SystemConfig, db_to_linear
from .figures import FIGURE_IDS, preset
from .montecarlo import sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

ANALYTIC_KINDS = ("closed_form_eq26", "closed_form_eq27", "asymptotic", "quadrature_oracle")
ANALYZE_COLUMNS = ("snr_db", "value", "curve_kind", "L", "kappa_db", "sigma_e_sq", "n_t")
SIMULATE_COLUMNS = ("snr_db", "ber", "trials", "bit_errors", "ci95")
FIGURE_COLUMNS = ("figure", "series", "curve_kind", "snr_db", "value", "trials", "bit_errors", "ci95",
                  "L", "kappa_db", "sigma_e_sq", "zeta", "n_t")

CONFIG_KEYS = {"n_t", "L", "kappa", "kappa_db", "sigma_e_sq", "d_over_lambda", "phi_los", "snr_db",
               "snr_db_list", "snr_start", "snr_stop", "snr_step", "trials", "seed", "phase_reference",
               "hypothesis", "curves", "zeta"}


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """Serialise numbers with 12 significant digits."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "-inf" if value < 0 else "inf"
        return f"{value:.12g}"
    return str(value)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def snr_range(start: float, stop: float, step: float) -> tuple:
    """Inclusive dB grid ``start, start + step, ..., stop``."""
    if step <= 0:
        raise UsageError("--snr-step must be positive")
    if stop < start:
        raise UsageError("--snr-stop must not be below --snr-start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(float(round(start + i * step, 10)) for i in range(n))


def load_config_file(path: str) -> dict:
    """Read a TOML scenario file, or the ``config`` block of a run manifest."""
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file not found: {path}")
    if p.suffix == ".json":
        data = json.loads(p.read_text(encoding="utf-8"))
        data = data.get("config", data)
        data = {k: v for k, v in data.items() if k in CONFIG_KEYS}
        data.pop("zeta", None)
        data.pop("kappa_db", None)
        return data
    import tomli

    try:
        data = tomli.loads(p.read_text(encoding="utf-8"))
    except tomli.TOMLDecodeError as exc:
        raise UsageError(f"cannot parse {path}: {exc}")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys in {path}: {', '.join(sorted(unknown))}")
    return data


def build_config(args) -> tuple:
    """Merge file values and CLI flags; returns ``(SystemConfig, extras)``."""
    raw = load_config_file(args.config) if args.config else {}
    if "kappa" in raw and "kappa_db" in raw:
        raise UsageError("give either kappa or kappa_db, not both")
    kwargs = {}
    for key in ("n_t", "L", "sigma_e_sq", "d_over_lambda", "phi_los", "trials", "seed",
                "phase_reference", "hypothesis"):
        if key in raw:
            kwargs[key] = raw[key]
    if "kappa" in raw:
        kwargs["kappa"] = float(raw["kappa"])
    else:
        kwargs["kappa"] = float(db_to_linear(raw.get("kappa_db", 3.0)))

    grid = raw.get("snr_db", raw.get("snr_db_list"))
    if {"snr_start", "snr_stop", "snr_step"} <= set(raw):
        grid = snr_range(raw["snr_start"], raw["snr_stop"], raw["snr_step"])
    flags = (args.snr_start, args.snr_stop, args.snr_step)
    if any(f is not None for f in flags):
        if any(f is None for f in flags):
            raise UsageError("--snr-start, --snr-stop and --snr-step must be given together")
        grid = snr_range(*flags)
    if grid is None:
        grid = snr_range(-44.0, -26.0, 2.0)
    kwargs["snr_db_list"] = tuple(grid)

    if getattr(args, "trials", None) is not None:
        kwargs["trials"] = args.trials
    if getattr(args, "seed", None) is not None:
        kwargs["seed"] = args.seed
    try:
        cfg = SystemConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid configuration: {exc}")
    if not cfg.snr_db_list:
        raise UsageError("SNR grid is empty")
    return cfg, {"curves": raw.get("curves")}


def manifest(command: str, config=None, curve_kinds=(), seed=None, **extra) -> dict:
    out = {
        "tool_version": __version__,
        "command": command,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "seed": seed if seed is not None else (config.seed if config is not None else None),
        "curve_kinds": list(curve_kinds),
    }
    if config is not None:
        out["config"] = config.to_dict()
    out.update(extra)
    return out


def write_csv(path: Path, columns, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row[c]) for c in columns])


def write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _analytic_rows(kind: str, cfg: SystemConfig):
    curve = analysis.analytic_curve(kind, cfg.snr_db_list, cfg.L, cfg.kappa, cfg.sigma_e_sq, cfg.n_t)
    return curve, [
        {"snr_db": s, "value": v, "curve_kind": kind, "L": cfg.L, "kappa_db": cfg.kappa_db,
         "sigma_e_sq": cfg.sigma_e_sq, "n_t": cfg.n_t}
        for s, v in zip(curve.snr_db, curve.values)
    ]


def cmd_analyze(args) -> int:
    cfg, extras = build_config(args)
    kinds = args.curves or extras.get("curves") or list(ANALYTIC_KINDS)
    bad = [k for k in kinds if k not in ANALYTIC_KINDS]
    if bad:
        raise UsageError(f"unknown curve kinds: {', '.join(bad)}")
    out = Path(args.out)
    curves = {}
    skipped = {}
    for kind in kinds:
        if kind == "asymptotic" and cfg.sigma_e_sq == 0:
            skipped[kind] = "no error floor under perfect CSI (sigma_e_sq = 0)"
            continue
        curve, rows = _analytic_rows(kind, cfg)
        curves[kind] = curve
        write_csv(out / f"{kind}.csv", ANALYZE_COLUMNS, rows)

    summary = {"skipped": skipped}
    if "closed_form_eq26" in curves and "closed_form_eq27" in curves:
        a, b = curves["closed_form_eq26"].values, curves["closed_form_eq27"].values
        gaps = [abs(y / x - 1.0) if x > 0 else 0.0 for x, y in zip(a, b)]
        summary["eq27_vs_eq26_max_rel_gap"] = max(gaps)
        summary["eq27_vs_eq26_rel_gap"] = gaps
    if cfg.sigma_e_sq > 0:
        limit = analysis.upep_asymptotic(cfg.L, cfg.kappa, cfg.sigma_e_sq, "limit")
        printed = analysis.upep_asymptotic(cfg.L, cfg.kappa, cfg.sigma_e_sq, "printed")
        summary["floor_limit"] = limit
        summary["floor_printed"] = printed
    write_json(out / "summary.json", summary)
    write_json(out / "manifest.json", manifest("analyze", cfg, list(curves)))
    print(f"wrote {len(curves)} curve(s) to {out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg, _ = build_config(args)
    result = sweep(cfg, workers=args.workers)
    rows = [{"snr_db": p.snr_db, "ber": p.ber, "trials": p.trials, "bit_errors": p.bit_errors,
             "ci95": p.ci95_half_width} for p in result.points]
    out = Path(args.out)
    write_csv(out / "simulated.csv", SIMULATE_COLUMNS, rows)
    write_json(out / "manifest.json", manifest("simulate", cfg, ["simulated"]))
    for r in rows:
        print(f"{r['snr_db']:8.2f} dB  ber={fmt(r['ber'])}  errors={r['bit_errors']}")
    return EXIT_OK


def run_figure(figure_id: int, trials: int, seed: int, workers: int = 1) -> tuple:
    """Rows of the combined figure CSV plus the per-series manifest entries."""
    rows, entries = [], []
    for series in preset(figure_id, trials=trials, seed=seed):
        cfg = series.config
        common = {"figure": figure_id, "series": series.label, "L": cfg.L, "kappa_db": cfg.kappa_db,
                  "sigma_e_sq": cfg.sigma_e_sq, "zeta": cfg.zeta, "n_t": cfg.n_t}
        for kind in series.curve_kinds:
            if kind == "simulated":
                for p in sweep(cfg, workers=workers).points:
                    rows.append({**common, "curve_kind": kind, "snr_db": p.snr_db, "value": p.ber,
                                 "trials": p.trials, "bit_errors": p.bit_errors, "ci95": p.ci95_half_width})
            else:
                curve = analysis.analytic_curve(kind, cfg.snr_db_list, cfg.L, cfg.kappa, cfg.sigma_e_sq, cfg.n_t)
                for s, v in zip(curve.snr_db, curve.values):
                    rows.append({**common, "curve_kind": kind, "snr_db": s, "value": v,
                                 "trials": "", "bit_errors": "", "ci95": ""})
        entries.append({"label": series.label, "config": cfg.to_dict(), "curve_kinds": list(series.curve_kinds)})
    return rows, entries


def cmd_figure(args) -> int:
    trials = args.trials if args.trials is not None else 100_000
    seed = args.seed if args.seed is not None else 1
    rows, entries = run_figure(args.id, trials, seed, args.workers)
    out = Path(args.out)
    write_csv(out / f"figure{args.id}.csv", FIGURE_COLUMNS, rows)
    kinds = sorted({k for e in entries for k in e["curve_kinds"]})
    write_json(out / f"figure{args.id}_manifest.json",
               manifest("figure", None, kinds, seed, figure=args.id, trials=trials, series=entries))
    print(f"wrote {len(rows)} rows to {out / f'figure{args.id}.csv'}")
    return EXIT_OK


def cmd_validate(args) -> int:
    results = validation.run_all()
    report = {"passed": all(r.passed for r in results), "checks": [r.to_dict() for r in results],
              "reports": validation.reports()}
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}")
    if args.out:
        write_json(Path(args.out) / "validation.json", report)
    else:
        print(json.dumps(report, indent=2, default=_json_default))
    if not report["passed"]:
        failed = ", ".join(r.name for r in results if not r.passed)
        print(f"validation failed: {failed}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _add_run_flags(p, config=True):
    if config:
        p.add_argument("--config", help="TOML scenario file or a run manifest (JSON)")
    p.add_argument("--seed", type=_seed, help="master seed (unsigned 64-bit)")
    p.add_argument("--trials", type=_positive_int, help="symbols per SNR point")
    p.add_argument("--workers", type=_positive_int, default=1, help="worker processes (results do not depend on it)")
    p.add_argument("--out", default="out", help="output directory")


def _add_snr_flags(p):
    p.add_argument("--snr-start", type=float, help="first SNR (dB)")
    p.add_argument("--snr-stop", type=float, help="last SNR (dB), inclusive")
    p.add_argument("--snr-step", type=float, help="SNR step (dB)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ris-ssk", description="RIS-aided SSK error-rate analysis and simulation")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analytical ABEP curves")
    _add_run_flags(p)
    _add_snr_flags(p)
    p.add_argument("--curves", nargs="+", choices=ANALYTIC_KINDS, help="curve kinds to emit")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo BER sweep")
    _add_run_flags(p)
    _add_snr_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figure", help="reproduce a figure preset")
    p.add_argument("--id", type=int, required=True, choices=FIGURE_IDS)
    _add_run_flags(p, config=False)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("validate", help="run the cross-oracle checks")
    p.add_argument("--out", help="write validation.json here instead of stdout")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ris-ssk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
