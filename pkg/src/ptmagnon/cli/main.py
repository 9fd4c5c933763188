"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 solver error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from ..errors import ConfigError, PTMagnonError
from ..spectrum import CoupledModeMatrix, classify_phase, eigenvalues, find_ep
from ..supermode import effective_kerr
from .config import ScenarioConfig, parse_config
from .figures import FIGURES, emit_spectrum_csv, reproduce_figure, spectrum_table
from .sweep import G2_COLUMNS, ResultTable, _fmt, emit_csv, evaluate_point, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3

SUPERMODE_COLUMNS = ("chi1", "chi2", "chi3", "q21_abs", "q22_abs", "condition_number")


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; those are configuration errors here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _load(args) -> ScenarioConfig:
    text = ""
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
    return parse_config(text, args.set)


def _write(args, cfg: ScenarioConfig, default_name: str, text: str) -> None:
    """Write to --out/<csv path or default name>, or to stdout without --out."""
    if args.out is None and cfg.csv_path is None:
        sys.stdout.write(text)
        return
    name = cfg.csv_path or default_name
    path = name if args.out is None else os.path.join(args.out, name)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    print(path, file=sys.stderr)


def cmd_spectrum(args) -> int:
    cfg = _load(args)
    if cfg.sweep is None:
        m = CoupledModeMatrix.from_params(cfg.params)
        r = eigenvalues(m)
        print(f"omega1 = {r.omega1.real:.12g} {r.omega1.imag:+.12g}j")
        print(f"omega2 = {r.omega2.real:.12g} {r.omega2.imag:+.12g}j")
        print(f"phase  = {classify_phase(m).value}")
        return EXIT_OK
    if cfg.sweep.variable == "chi":
        raise ConfigError("the linear spectrum does not depend on chi", key="sweep.variable")
    _write(args, cfg, "spectrum.csv", emit_spectrum_csv(spectrum_table(cfg)))
    return EXIT_OK


def cmd_g2(args) -> int:
    cfg = _load(args)
    if cfg.sweep is None:
        row, diag = evaluate_point(cfg, None)
        table = ResultTable(list(G2_COLUMNS), [[row[c] for c in G2_COLUMNS]], [diag])
    else:
        table = run_sweep(cfg, jobs=args.jobs)
    _write(args, cfg, "g2.csv", emit_csv(table))
    if cfg.plot_path and cfg.sweep is not None:
        _plot_g2(args, cfg, table)
    return EXIT_OK


def _plot_g2(args, cfg, table):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x = table.column(cfg.sweep.variable)
    f, ax = plt.subplots(figsize=(5, 3.5))
    for mode, color in (("m", "C0"), ("a", "C1")):
        for solver, style in (("analytic", "-"), ("lindblad", ":")):
            y = table.column(f"g2_{mode}_{solver}")
            ax.plot(x, np.where(y > 0, y, np.nan), style, color=color, label=f"g2_{mode} {solver}")
    ax.set_yscale("log")
    ax.set_xlabel(f"{cfg.sweep.variable} / kappa_m")
    ax.set_ylabel("g2(0)")
    ax.legend(fontsize=8)
    f.tight_layout()
    path = cfg.plot_path if args.out is None else os.path.join(args.out, cfg.plot_path)
    f.savefig(path, format="svg")
    plt.close(f)


def cmd_supermode(args) -> int:
    cfg = _load(args)
    if cfg.sweep is None:
        k = effective_kerr(cfg.params)
        for name in SUPERMODE_COLUMNS:
            print(f"{name} = {getattr(k, name):.12g}")
        if k.ill_conditioned:
            print("warning: transform is ill-conditioned (close to the exceptional point)", file=sys.stderr)
        return EXIT_OK
    rows, diags = [], []
    for x in cfg.sweep.grid():
        try:
            k = effective_kerr(cfg.sweep.apply(cfg.params, float(x)))
            rows.append([x] + [getattr(k, c) for c in SUPERMODE_COLUMNS])
            diags.append("ill-conditioned" if k.ill_conditioned else "")
        except PTMagnonError as exc:
            rows.append([x] + [math.nan] * len(SUPERMODE_COLUMNS))
            diags.append(str(exc))
    table = ResultTable([cfg.sweep.variable, *SUPERMODE_COLUMNS], rows, diags)
    _write(args, cfg, "supermode.csv", emit_csv(table))
    return EXIT_OK


def cmd_ep(args) -> int:
    cfg = _load(args)
    x = find_ep(cfg.params, args.free_var, tuple(args.bracket), tol=args.tol)
    print(f"{args.free_var} = {_fmt(x)}")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    out = args.out or os.path.join("out", args.figure)
    for path in reproduce_figure(args.figure, out, jobs=args.jobs, overrides=args.set):
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="scenario file (key = value lines)")
    common.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                        help="override one configuration key; repeatable")
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="parallel sweep workers")
    common.add_argument("--out", metavar="DIR", help="output directory (default: stdout, or out/<fig>)")

    p = _Parser(prog="ptmagnon", description="PT-symmetric cavity-magnon blockade calculations")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("spectrum", parents=[common], help="eigenfrequencies, single point or sweep")
    sub.add_parser("g2", parents=[common], help="g2(0) from the analytic and master-equation solvers")
    sub.add_parser("supermode", parents=[common], help="effective supermode Kerr coefficients")
    ep = sub.add_parser("ep", parents=[common], help="locate the exceptional point")
    ep.add_argument("--free-var", choices=("g", "kappa_a", "delta"), default="g")
    ep.add_argument("--bracket", type=float, nargs=2, default=(0.0, 5.0), metavar=("LO", "HI"))
    ep.add_argument("--tol", type=float, default=1e-8)
    rp = sub.add_parser("reproduce", parents=[common], help="regenerate a figure's data and plot")
    rp.add_argument("figure", choices=sorted(FIGURES))
    return p


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "g2": cmd_g2,
    "supermode": cmd_supermode,
    "ep": cmd_ep,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("ptmagnon: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"ptmagnon: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PTMagnonError as exc:
        print(f"ptmagnon: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"ptmagnon: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"ptmagnon: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
