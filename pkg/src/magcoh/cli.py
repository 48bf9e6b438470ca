"""Command-line surface.

Subcommands: point, pair, sweep, reproduce, stability-map.  Exit codes:
0 success, 2 config error, 3 requested single point unstable (point only),
4 solver non-convergence or numerical failure, 5 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, kernels
from .config import ConfigError, parse_config, parse_value
from .covariance import ResidualError, UnstableSystemError
from .dataset import (
    STABILITY_COLUMNS,
    emit_dataset,
    record_to_dict,
    stability_row,
    sweep_metadata,
    write_metadata,
)
from .params import PARAM_FIELDS
from .steady import NonConvergenceError
from .sweep import FIGURE_IDS, evaluate_pair, evaluate_point, figure_preset, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3
EXIT_SOLVER = 4
EXIT_IO = 5


def _load_config(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def _point_meta(params, provenance, extra=None) -> dict:
    meta = {
        "schema_version": 1,
        "package_version": __version__,
        "backend": kernels.BACKEND,
        "params": {n: getattr(params, n) for n in PARAM_FIELDS},
        "provenance": dict(provenance),
        "delta_a_choice": "delta_a defaults to omega_b (independent input, "
        "not pinned by the benchmark parameter set)",
    }
    if extra:
        meta.update(extra)
    return meta


def _print_point(rec) -> None:
    print(f"stable = {rec.stable}")
    print(f"spectral_abscissa = {rec.spectral_abscissa!r}")
    print(f"a_s = {rec.a_s!r}")
    print(f"m_s = {rec.m_s!r}")
    print(f"b_s = {rec.b_s!r}")
    for name in ("C_a", "C_m", "C_b", "C_tot"):
        value = getattr(rec, name)
        print(f"{name} = {'absent (unstable)' if value is None else repr(value)}")


def _cmd_point(args) -> int:
    params, _, provenance = _load_config(args.config)
    rec = evaluate_point(params)
    _print_point(rec)
    if args.out:
        emit_dataset([rec], args.format, args.out)
        write_metadata(_point_meta(params, provenance), Path(args.out).with_suffix(".meta.json"))
    if not rec.stable:
        print("requested point is unstable; coherences are undefined", file=sys.stderr)
        return EXIT_UNSTABLE
    return EXIT_OK


def _cmd_pair(args) -> int:
    params, _, provenance = _load_config(args.config)
    try:
        magnitude = parse_value(args.deltaB_mag, "abs_delta_B", params.omega_b)
    except ConfigError as exc:
        raise ConfigError(f"--deltaB-mag: {exc}") from exc
    if magnitude < 0:
        raise ConfigError("--deltaB-mag must be nonnegative")
    rec = evaluate_pair(params, magnitude)
    print(f"delta_B magnitude = {magnitude!r} rad/s")
    print(f"stable(+) = {rec.plus.stable}, stable(-) = {rec.minus.stable}")
    for name in ("I_a", "I_m", "I_b", "I_tot"):
        value = getattr(rec, name)
        print(f"{name} = {'absent' if value is None else repr(value)}")
    if args.out:
        emit_dataset([rec], args.format, args.out)
        write_metadata(
            _point_meta(params, provenance, {"deltaB_magnitude": magnitude}),
            Path(args.out).with_suffix(".meta.json"),
        )
    return EXIT_OK


def _cmd_sweep(args) -> int:
    params, spec, provenance = _load_config(args.config)
    if spec is None:
        raise ConfigError("config defines no sweep (axis1 missing)")
    if args.format:
        spec = type(spec)(
            base=spec.base,
            axis1=spec.axis1,
            axis2=spec.axis2,
            pair_barnett=spec.pair_barnett,
            fmt=args.format,
            notes=spec.notes,
        )
    records = run_sweep(spec)
    emit_dataset(records, spec.fmt, args.out)
    write_metadata(
        sweep_metadata(spec, provenance), Path(args.out).with_suffix(".meta.json")
    )
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    spec = figure_preset(args.figure)
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc}") from exc
    records = run_sweep(spec)
    csv_path = out_dir / f"{args.figure}.csv"
    emit_dataset(records, "csv", csv_path)
    write_metadata(
        sweep_metadata(spec, extra={"preset": args.figure}),
        out_dir / f"{args.figure}.meta.json",
    )
    print(f"wrote {len(records)} records to {csv_path}")
    return EXIT_OK


def _cmd_stability_map(args) -> int:
    params, spec, provenance = _load_config(args.config)
    if spec is None:
        raise ConfigError("config defines no sweep (axis1 missing)")
    # a stability map charts the grid as-is; pairing is irrelevant here
    spec = type(spec)(
        base=spec.base,
        axis1=spec.axis1,
        axis2=spec.axis2,
        pair_barnett=False,
        fmt="csv",
        notes=spec.notes,
    )
    records = run_sweep(spec)
    rows = [stability_row(rec) for rec in records]
    emit_dataset(rows, "csv", args.out, columns=STABILITY_COLUMNS)
    write_metadata(
        sweep_metadata(spec, provenance), Path(args.out).with_suffix(".meta.json")
    )
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magcoh",
        description="Steady-state quantum coherence and Barnett-effect "
        "nonreciprocity in driven cavity magnomechanics.",
    )
    parser.add_argument("--version", action="version", version=f"magcoh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate a single configured point")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=_cmd_point)

    p = sub.add_parser("pair", help="evaluate a +/- Barnett-shift pair")
    p.add_argument("--config", required=True)
    p.add_argument("--deltaB-mag", required=True, dest="deltaB_mag",
                   help="shift magnitude; plain Hz or '<x> wb'")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=_cmd_pair)

    p = sub.add_parser("sweep", help="run the sweep defined in the config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "jsonl"), default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("reproduce", help="run a bundled figure preset")
    p.add_argument("figure", choices=FIGURE_IDS)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("stability-map", help="stability verdict over the configured grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_stability_map)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonConvergenceError, ResidualError, UnstableSystemError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ArithmeticError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
