"""Command line entry points.

Subcommands: analyze, sweep, lattice, oracle.  Exit codes: 0 when a report
was produced (analysis verdicts never change it), 2 on config errors, 3 on
i/o errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import (_certificate, _lattice_section, _oracle_section,
                       analyze_config, sweep, sweep_csv)
from .config import ConfigError, parse_config
from .quadform import fundamental_matrix
from .report import dumps
from .spectral import eigen_analysis

__all__ = ["main"]

_EPILOG = """\
sweep CSV columns: param,real,similar,verdict,re_ev_1,im_ev_1,...
  (flags are 1/0, empty when indeterminate or not elliptic; eigenvalues of
  the fundamental matrix sorted by descending Im, then ascending Re)
environment: QSYMM_TOL_OVERRIDE=<decimal in (0,1)> overrides the relative
  tolerance for every run
exit codes: 0 = report produced, 2 = config error, 3 = i/o error;
  analysis verdicts never affect the exit code
"""


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptquad",
        description="Classify quadratic differential operators with an "
                    "antilinear symmetry and build their normal form.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full report for one symbol")
    p.add_argument("config", help="path to a .toml or .json config")
    p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("sweep", help="classify a one-parameter family")
    p.add_argument("config")
    p.add_argument("--out", help="write CSV rows here (summary JSON then goes "
                                 "to stdout); default prints CSV to stdout "
                                 "and the summary to stderr")

    p = sub.add_parser("lattice", help="spectral lattice entries up to a cutoff")
    p.add_argument("config")
    p.add_argument("--cutoff", type=float, default=None,
                   help="override options.lattice_cutoff")
    p.add_argument("--out")

    p = sub.add_parser("oracle", help="compare against the truncated quantization")
    p.add_argument("config")
    p.add_argument("--cutoff", type=int, default=None, metavar="N",
                   help="override options.oracle_cutoff (Hermite levels per mode)")
    p.add_argument("-k", type=int, default=None,
                   help="override options.k_compare (eigenvalues compared)")
    p.add_argument("--out")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _head_sections(cfg, cert, restricted) -> dict:
    return {
        "input": cfg.echo,
        "normalization": {"z": cert.z, "restricted_to_real": restricted},
        "ellipticity": {
            "elliptic": cert.elliptic,
            "z": cert.z,
            "min_eig": cert.min_eig,
            "description": cert.describe(),
        },
    }


def _cmd_analyze(cfg, args) -> int:
    _emit(dumps(analyze_config(cfg)), args.out)
    return 0


def _cmd_sweep(cfg, args) -> int:
    if cfg.sweep is None:
        raise ConfigError("sweep command needs a [sweep] table in the config")
    result = sweep(cfg.symbol, cfg.sweep, cfg.tol)
    csv_text = sweep_csv(result)
    summary = dumps(result["summary"])
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        sys.stdout.write(summary)
    else:
        sys.stdout.write(csv_text)
        sys.stderr.write(summary)
    return 0


def _cmd_lattice(cfg, args) -> int:
    warnings: list[str] = []
    cert, _, restricted = _certificate(cfg.symbol, cfg.tol, warnings)
    report = _head_sections(cfg, cert, restricted)
    if not cert.elliptic:
        report["lattice"] = {"skipped": "symbol is not elliptic: no z with "
                                        "Re(z q) positive definite"}
    else:
        eigen = eigen_analysis(fundamental_matrix(cfg.symbol.scaled(cert.z)),
                               cfg.tol)
        cutoff = args.cutoff if args.cutoff is not None else cfg.lattice_cutoff
        try:
            report["lattice"] = _lattice_section(eigen, cert.z, cutoff, cfg.tol)
        except ValueError as exc:
            report["lattice"] = {"skipped": str(exc)}
    report["warnings"] = warnings
    _emit(dumps(report), args.out)
    return 0


def _cmd_oracle(cfg, args) -> int:
    warnings: list[str] = []
    cert, _, restricted = _certificate(cfg.symbol, cfg.tol, warnings)
    report = _head_sections(cfg, cert, restricted)
    nmax = args.cutoff if args.cutoff is not None else cfg.oracle_cutoff
    k = args.k if args.k is not None else cfg.k_compare
    if not cert.elliptic:
        reason = "symbol is not elliptic: no z with Re(z q) positive definite"
        report["lattice"] = {"skipped": reason}
        report["oracle"] = {"skipped": reason}
    else:
        eigen = eigen_analysis(fundamental_matrix(cfg.symbol.scaled(cert.z)),
                               cfg.tol)
        try:
            report["lattice"] = _lattice_section(eigen, cert.z,
                                                 cfg.lattice_cutoff, cfg.tol)
        except ValueError as exc:
            report["lattice"] = {"skipped": str(exc)}
        report["oracle"] = _oracle_section(cfg.symbol, report["lattice"], nmax, k)
    report["warnings"] = warnings
    _emit(dumps(report), args.out)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "sweep": _cmd_sweep,
    "lattice": _cmd_lattice,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    try:
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
