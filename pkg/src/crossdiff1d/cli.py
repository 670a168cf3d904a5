"""Command-line entry point.

Subcommands:
    run                  execute a config file end to end
    exp1 / exp2          built-in two-bump competition presets
    validate-barenblatt  single-species run against the exact profile
    front                Lagrangian interface tracking from a config file
    sweep-delta          re-run a config across regularization weights

Exit codes: 0 success, 1 usage or configuration problem, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import parse_config_file, render_config
from .diagnostics import Snapshot
from .errors import ConfigError, ConfigValidationError, NumericalError
from .presets import (
    RunResult,
    barenblatt_validation_error,
    exp1,
    exp2,
    run_config,
    sweep_delta,
)
from .snapshot_io import write_snapshot_csv


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this artifact reserves 2 for
    numerical failures, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt_opt(v: float | None) -> str:
    return "none" if v is None else f"{v:.6g}"


def _write_outputs(result: RunResult, out_dir: str) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for snap in result.snapshots:
        write_snapshot_csv(snap, out / f"snapshot_t{snap.t:g}.csv")
        print(
            f"t={snap.t:g} mass1={snap.mass1:.6g} mass2={snap.mass2:.6g} "
            f"defect={snap.segregation_defect:.3g} "
            f"contact={_fmt_opt(snap.contact_point)} "
            f"jump={_fmt_opt(snap.gradient_jump)}"
        )
    if result.interface is not None:
        times, etas = result.interface
        rows = ["t,eta"]
        rows += [f"{float(t)!r},{float(e)!r}" for t, e in zip(times, etas)]
        (out / "interface.csv").write_text("\n".join(rows) + "\n")
        print(f"interface: {times.size} samples, final eta={etas[-1]:.6g}")
    if result.max_inner_iterations is not None:
        print(f"max inner iterations: {result.max_inner_iterations}")


def _parse_times(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise ConfigValidationError(
            f"--snapshots must be comma-separated numbers, got {text!r}"
        ) from None


def _cmd_run(args) -> int:
    cfg = parse_config_file(args.config)
    _write_outputs(run_config(cfg), args.out)
    return 0


def _cmd_exp(args, preset) -> int:
    cfg = preset()
    if args.t_final is not None:
        cfg = replace(cfg, t_final=args.t_final, snapshot_times=(args.t_final,))
    if args.snapshots is not None:
        cfg = replace(cfg, snapshot_times=_parse_times(args.snapshots))
    from .config import validate_config

    validate_config(cfg)
    if args.print_config:
        print(render_config(cfg), end="")
        return 0
    _write_outputs(run_config(cfg), args.out)
    return 0


def _cmd_validate_barenblatt(args) -> int:
    err, final = barenblatt_validation_error(
        n=args.n, tau=args.tau, t_final=args.t_final
    )
    print(
        f"n={args.n} tau={args.tau:g} t_final={args.t_final:g} "
        f"linf_error={err:.6e}"
    )
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_snapshot_csv(final, out / f"snapshot_t{final.t:g}.csv")
    return 0


def _cmd_front(args) -> int:
    cfg = parse_config_file(args.config)
    cfg = replace(cfg, solver="fronttrack")
    from .config import validate_config

    validate_config(cfg)
    _write_outputs(run_config(cfg), args.out)
    return 0


def _cmd_sweep_delta(args) -> int:
    cfg = parse_config_file(args.config) if args.config else exp2()
    values = _parse_times(args.values)
    if not values:
        raise ConfigValidationError("--values must name at least one delta")
    rows = sweep_delta(cfg, list(values), jobs=args.jobs)
    lines = ["delta,gradient_jump,contact_point"]
    for delta, jump, contact in rows:
        j = "none" if jump is None else repr(float(jump))
        c = "none" if contact is None else repr(float(contact))
        lines.append(f"{float(delta)!r},{j},{c}")
    table = "\n".join(lines)
    print(table)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sweep.csv").write_text(table + "\n")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="crossdiff1d",
        description="1D cross-diffusion laboratory: regularized Eulerian scheme, "
        "Lagrangian front tracking, and closed-form references.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a config file")
    p_run.add_argument("--config", required=True, help="path to a config file")
    p_run.add_argument("--out", required=True, help="output directory")

    for name, help_text in (
        ("exp1", "two-bump competition, equal diffusion speeds"),
        ("exp2", "two-bump competition, a2 = 3"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--t-final", type=float, default=None, dest="t_final")
        p.add_argument(
            "--snapshots", default=None, help="comma-separated snapshot times"
        )
        p.add_argument(
            "--print-config",
            action="store_true",
            dest="print_config",
            help="print the effective config instead of running",
        )

    p_val = sub.add_parser(
        "validate-barenblatt", help="single-species run vs. the exact profile"
    )
    p_val.add_argument("--n", type=int, default=1000)
    p_val.add_argument("--tau", type=float, default=1e-5)
    p_val.add_argument("--t-final", type=float, default=0.5, dest="t_final")
    p_val.add_argument("--out", default=None, help="optional output directory")

    p_front = sub.add_parser("front", help="Lagrangian interface tracking")
    p_front.add_argument("--config", required=True, help="path to a config file")
    p_front.add_argument("--out", required=True, help="output directory")

    p_sweep = sub.add_parser(
        "sweep-delta", help="gradient-jump table across regularization weights"
    )
    p_sweep.add_argument(
        "--config", default=None, help="base config (default: the exp2 preset)"
    )
    p_sweep.add_argument(
        "--values", required=True, help="comma-separated delta values"
    )
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--out", default=None, help="optional output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "exp1":
            return _cmd_exp(args, exp1)
        if args.command == "exp2":
            return _cmd_exp(args, exp2)
        if args.command == "validate-barenblatt":
            return _cmd_validate_barenblatt(args)
        if args.command == "front":
            return _cmd_front(args)
        if args.command == "sweep-delta":
            return _cmd_sweep_delta(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
