"""``irs-aser`` command line: curves, figure data and self-validation.

Exit codes: 0 ok, 2 usage or domain error, 3 numerical failure,
4 validation failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
import time
from importlib import metadata
from pathlib import Path
from typing import Optional, Sequence

from .aser import METHODS
from .curves import DEFAULT_SNR, compute_curve, parse_snr_range
from .errors import DomainError, NumericError
from .figures import FIGURES, Table, build_figure, render_csv, write_csv, write_plot_script
from .modem import XQAM_SIZES, ModulationScheme
from .validation import LEVELS, format_report, mutated_delta1, run_suite

__all__ = ["main", "parse_scheme", "build_parser"]

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VALIDATION = 0, 2, 3, 4

_RQAM = re.compile(r"rqam:(\d+)x(\d+)(?::b=([^:]+))?")
_SIZED = re.compile(r"(sqam|xqam):(\d+)")


def parse_scheme(text: str) -> ModulationScheme:
    """Parse ``rqam:8x4:b=1.0``, ``sqam:16``, ``xqam:32`` or ``bpsk``."""
    t = text.strip().lower()
    if t == "bpsk":
        return ModulationScheme.bpsk()
    if m := _RQAM.fullmatch(t):
        try:
            beta = float(m.group(3)) if m.group(3) is not None else 1.0
        except ValueError:
            raise DomainError(f"bad scheme {text!r}: cannot parse beta {m.group(3)!r}") from None
        return ModulationScheme.rqam(int(m.group(1)), int(m.group(2)), beta)
    if m := _SIZED.fullmatch(t):
        kind, size = m.group(1), int(m.group(2))
        if kind == "sqam":
            return ModulationScheme.sqam(size)
        if size not in XQAM_SIZES:
            raise DomainError(
                f"bad scheme {text!r}: XQAM order {size} not admissible; "
                f"expected one of {', '.join(map(str, XQAM_SIZES))}"
            )
        return ModulationScheme.xqam(size)
    head = t.split(":", 1)[0]
    raise DomainError(
        f"bad scheme {text!r}: unrecognised token {head!r}; "
        "expected rqam:<MI>x<MQ>[:b=<beta>], sqam:<M>, xqam:<M> or bpsk"
    )


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch and epoch.isdigit() else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def _manifest(command: str, params: dict, seed: int) -> dict:
    # Byte-stable part; the timestamp lives only in the sidecar file.
    return {"command": command, "params": params, "seed": seed, "version": _version()}


def _write_sidecar(path: Path, manifest: dict, outputs: list[str]) -> None:
    full = dict(manifest, timestamp=_timestamp(), outputs=outputs)
    path.write_text(json.dumps(full, indent=2, sort_keys=True) + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors share the domain-error exit code
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="irs-aser", description="ASER of QAM over IRS-assisted links.")
    p.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("curve", help="ASER against SNR for one scheme")
    c.add_argument("--scheme", required=True,
                   help="rqam:<MI>x<MQ>[:b=<beta>] | sqam:<M> | xqam:<M> | bpsk")
    c.add_argument("-N", "--elements", type=int, default=None,
                   help="number of IRS elements (omit for AWGN-only methods)")
    c.add_argument("--snr", default=DEFAULT_SNR, help="start:step:stop in dB (default %(default)s)")
    c.add_argument("--methods", default="closed-form",
                   help=f"comma-separated subset of {','.join(METHODS)}")
    c.add_argument("--symbols", type=int, default=1_000_000, help="Monte Carlo symbols per point")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", type=Path, default=None, help="CSV path (default stdout)")

    f = sub.add_parser("figure", help="data and plot script for one figure")
    f.add_argument("id", choices=sorted(FIGURES))
    f.add_argument("--out", type=Path, default=Path("."), help="output directory")
    f.add_argument("--snr", default=DEFAULT_SNR)
    f.add_argument("--symbols", type=int, default=1_000_000)
    f.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("validate", help="run the self-check suites")
    v.add_argument("--level", choices=LEVELS, default="fast")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--mutate", choices=("delta1",), default=None,
                   help="corrupt a model parameter to confirm the checks catch it")
    return p


def _cmd_curve(args) -> int:
    scheme = parse_scheme(args.scheme)
    grid = parse_snr_range(args.snr)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise DomainError(f"unknown method {m!r}; expected one of {', '.join(METHODS)}")
    if not methods:
        raise DomainError("no methods given")
    cols = {"snr_db": grid}
    for m in methods:
        cols[m] = compute_curve(scheme, args.elements, grid, m, num_symbols=args.symbols,
                                seed=args.seed).values
    params = {"scheme": scheme.label, "N": args.elements, "snr": args.snr,
              "methods": methods, "symbols": args.symbols}
    manifest = _manifest("curve", params, args.seed)
    table = Table("curve", cols)
    if args.out is None:
        sys.stdout.write(render_csv(table, manifest))
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        write_csv(args.out, table, manifest)
        _write_sidecar(args.out.with_suffix(".manifest.json"), manifest, [args.out.name])
    return EXIT_OK


def _cmd_figure(args) -> int:
    grid = parse_snr_range(args.snr)
    if args.symbols < 1000:
        raise DomainError(f"--symbols must be >= 1000, got {args.symbols}")
    tables = build_figure(args.id, grid, symbols=args.symbols, seed=args.seed)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    params = {"figure": args.id, "snr": args.snr, "symbols": args.symbols}
    manifest = _manifest("figure", params, args.seed)
    names = []
    for t in tables:
        write_csv(out / f"{t.name}.csv", t, manifest)
        names.append(f"{t.name}.csv")
    write_plot_script(out / f"plot_{args.id}.py", args.id, tables)
    names.append(f"plot_{args.id}.py")
    _write_sidecar(out / f"{args.id}.manifest.json", manifest, names)
    for n in names:
        print(out / n)
    return EXIT_OK


def _cmd_validate(args) -> int:
    if args.mutate == "delta1":
        with mutated_delta1():
            results = run_suite(args.level, args.seed)
    else:
        results = run_suite(args.level, args.seed)
    sys.stdout.write(format_report(results, args.level, args.seed))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


_COMMANDS = {"curve": _cmd_curve, "figure": _cmd_figure, "validate": _cmd_validate}


_NEGATIVE_RANGE = re.compile(r"-\d[\d.:eE+-]*")


def _bind_negative_ranges(argv: Sequence[str]) -> list[str]:
    # argparse would read "--snr -20:1:10" as two options
    out: list[str] = []
    for tok in argv:
        if out and out[-1] == "--snr" and _NEGATIVE_RANGE.fullmatch(tok):
            out[-1] = f"--snr={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_bind_negative_ranges(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"irs-aser: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"irs-aser: numerical failure: {exc} (error estimate {exc.estimate:.3g})",
              file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
