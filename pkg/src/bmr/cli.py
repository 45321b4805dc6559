"""Command line interface: point rates, sweeps and the preset report figures.

Exit codes: 0 success, 1 usage error, 2 numeric or domain error, 3 I/O error.
The environment variable BMR_PRECISION (default 12) sets the number of
significant digits of every printed float, which also pins the CSV output to
byte-identical reruns.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from .environment import ChannelParams
from .rates import scheme_rate_many

__all__ = ["EXIT_OK", "EXIT_USAGE", "EXIT_DOMAIN", "EXIT_IO", "SweepSpec", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_IO = 3

SCHEME_ORDER = ("local", "collective")
SWEEP_VARIABLES = ("s", "eta", "n", "n_mean")
SWEEP_CSV_HEADER = ("value", "scheme", "total_bits", "per_use_bits")


class _UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable with its values, the fixed remainder, and the schemes."""

    variable: str
    values: tuple[float, ...]
    fixed: ChannelParams
    schemes: tuple[str, ...]

    def points(self) -> list[ChannelParams]:
        # ChannelParams validation keeps swept values inside the variable's domain
        return [replace(self.fixed, **{self.variable: value}) for value in self.values]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1 here
        raise _UsageError(message)


def _add_point_arguments(parser) -> None:
    parser.add_argument("--n", type=int, default=10, help="channel uses (default 10)")
    parser.add_argument("--eta", type=float, default=0.7, help="beam-splitter transmissivity in [0, 1] (default 0.7)")
    parser.add_argument("--s", type=float, default=0.0, help="memory (environment squeezing) parameter (default 0)")
    parser.add_argument("--N", type=float, default=8.0, help="mean excitation budget per use (default 8)")
    parser.add_argument(
        "--scheme",
        choices=("local", "collective", "both"),
        default="both",
        help="which encoding/decoding scheme(s) to evaluate",
    )


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="bmr",
        description="Bit rates of a lossy bosonic channel with correlated environment, "
        "homodyne detection, for local and collective encoding/decoding schemes.",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rate = commands.add_parser("rate", help="rates at one parameter point, JSON on stdout")
    _add_point_arguments(rate)
    rate.set_defaults(handler=cmd_rate)

    sweep = commands.add_parser("sweep", help="rates along one swept variable, CSV file")
    _add_point_arguments(sweep)
    sweep.add_argument(
        "--sweep",
        required=True,
        metavar="VAR=START:STOP:STEP",
        help="swept variable (s, eta, n, n_mean/N); VAR=v1,v2,... lists explicit values",
    )
    sweep.add_argument("--out", required=True, help="output CSV path")
    sweep.set_defaults(handler=cmd_sweep)

    figure = commands.add_parser("figure", help="preset report figure: CSV plus SVG chart")
    figure.add_argument("which", choices=("fig2", "fig3"), help="which preset to reproduce")
    figure.add_argument("--out-dir", default=".", help="directory receiving <which>.csv and <which>.svg")
    figure.set_defaults(handler=cmd_figure)
    return parser


def _precision_from_env() -> int:
    raw = os.environ.get("BMR_PRECISION", "")
    if not raw:
        return 12
    try:
        digits = int(raw)
    except ValueError:
        raise _UsageError(f"BMR_PRECISION must be an integer, got {raw!r}") from None
    if not 1 <= digits <= 17:
        raise _UsageError(f"BMR_PRECISION must lie in 1..17, got {digits}")
    return digits


def _fmt(value, digits: int) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.{digits}g}"


def _rounded(value, digits: int) -> float:
    return float(f"{float(value):.{digits}g}")


def _write_csv(path: str, header, rows, digits: int) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(row[column], digits) for column in header) for row in rows)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write("\n".join(lines) + "\n")


def _params_from_args(args) -> ChannelParams:
    return ChannelParams(n=args.n, eta=args.eta, s=args.s, n_mean=args.N)


def _schemes_from_args(args) -> tuple[str, ...]:
    return SCHEME_ORDER if args.scheme == "both" else (args.scheme,)


def cmd_rate(args, digits: int) -> int:
    """Evaluate one parameter point and print the schemes' results as JSON."""
    params = _params_from_args(args)
    schemes = _schemes_from_args(args)
    payload = {
        "params": {"n": params.n, "eta": params.eta, "s": params.s, "N": params.n_mean},
        "results": [],
    }
    if params.eta == 0.0:
        payload["notice"] = "eta = 0: the channel transmits nothing, all rates are zero"
    elif params.eta == 1.0:
        payload["notice"] = "eta = 1: lossless channel, per-use rate is log2(2N + 1) for both schemes"
    for scheme in schemes:
        result = scheme_rate_many([params], scheme)[0]
        payload["results"].append(
            {
                "scheme": scheme,
                "total_bits": _rounded(result.total_bits, digits),
                "per_use_bits": _rounded(result.per_use_bits, digits),
                "per_mode_bits": [_rounded(x, digits) for x in result.per_mode_bits],
                "allocation": [_rounded(x, digits) for x in result.allocation],
                "r_opt": [_rounded(x, digits) for x in result.r_opt],
            }
        )
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def _parse_sweep(text: str) -> tuple[str, tuple[float, ...]]:
    if "=" not in text:
        raise _UsageError(f"sweep must look like VAR=START:STOP:STEP, got {text!r}")
    name, _, body = text.partition("=")
    name = name.strip()
    if name == "N":
        name = "n_mean"
    if name not in SWEEP_VARIABLES:
        raise _UsageError(f"sweep variable must be one of {SWEEP_VARIABLES} (or N), got {name!r}")
    body = body.strip()
    if not body:
        return name, ()
    try:
        if ":" in body:
            parts = [float(piece) for piece in body.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if step <= 0:
                raise _UsageError(f"sweep step must be positive, got {step:g}")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            values = tuple(start + i * step for i in range(max(count, 0)))
        else:
            values = tuple(float(piece) for piece in body.split(","))
    except _UsageError:
        raise
    except ValueError:
        raise _UsageError(f"could not parse sweep values from {body!r}") from None
    return name, values


def sweep_rows(spec: SweepSpec) -> list[dict]:
    """CSV rows of a sweep: value-major order, local before collective."""
    points = spec.points()
    per_scheme = {scheme: scheme_rate_many(points, scheme) for scheme in spec.schemes}
    rows = []
    for i, value in enumerate(spec.values):
        for scheme in spec.schemes:
            result = per_scheme[scheme][i]
            rows.append(
                {
                    "value": value,
                    "scheme": scheme,
                    "total_bits": result.total_bits,
                    "per_use_bits": result.per_use_bits,
                }
            )
    return rows


def cmd_sweep(args, digits: int) -> int:
    """Evaluate a one-variable sweep and write the CSV table."""
    variable, values = _parse_sweep(args.sweep)
    if variable == "n":
        for value in values:
            if value != int(value):
                raise ValueError(f"swept channel uses must be integers, got {value:g}")
        values = tuple(int(value) for value in values)
    spec = SweepSpec(
        variable=variable,
        values=values,
        fixed=_params_from_args(args),
        schemes=_schemes_from_args(args),
    )
    _write_csv(args.out, SWEEP_CSV_HEADER, sweep_rows(spec), digits)
    return EXIT_OK


def cmd_figure(args, digits: int) -> int:
    """Reproduce a preset figure: CSV table plus SVG chart in the output directory."""
    from . import figures  # deferred so plain rate/sweep runs skip matplotlib

    os.makedirs(args.out_dir, exist_ok=True)
    if args.which == "fig2":
        rows = figures.fig2_rows()
        header = ("n", "s", "scheme", "total_bits", "per_use_bits")
        renderer = figures.render_fig2
    else:
        rows = figures.fig3_rows()
        header = ("eta", "s", "scheme", "total_bits", "per_use_bits")
        renderer = figures.render_fig3
    _write_csv(os.path.join(args.out_dir, f"{args.which}.csv"), header, rows, digits)
    renderer(rows, os.path.join(args.out_dir, f"{args.which}.svg"))
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        digits = _precision_from_env()
        return args.handler(args, digits)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
