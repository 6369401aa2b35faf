"""Command line front end, invoked as ``python -m winterbottom_lab``.

Subcommands map one-to-one onto the functions in :mod:`experiments`; the
CLI layer only parses arguments, picks an output format, and translates
exceptions into exit codes (0 ok, 1 runtime failure, 2 invalid input).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .auxgeom import adhesion_length, build_hn, straighten_to_hn_prime
from .continuum import continuum_energy, winterbottom_shape
from .energy import rescaled_energy
from .errors import ConfigError
from .experiments import (
    CONVERGENCE_FIELDS,
    DEFAULT_SCAN_QS,
    DEFAULT_SCAN_RATIOS,
    SCAN_FIELDS,
    convergence_experiment,
    energy_report,
    read_configuration,
    rows_to_csv,
    wetting_scan,
)
from .lattice import ModelParams
from .search import AnnealSchedule, anneal_minimize, exact_minimize

__all__ = ["main"]

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _coupling(text: str):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    return int(value) if value.denominator == 1 else value


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        )


def _ratio_list(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part) for part in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}"
        )


def _window(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    try:
        width, height = (int(part) for part in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}")
    return width, height


def _schedule(text: str) -> AnnealSchedule:
    try:
        return AnnealSchedule.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--cf", type=_coupling, default=1, metavar="C_F",
        help="film bond strength; integers and rationals like 3/2 stay exact",
    )
    parser.add_argument(
        "--cs", type=_coupling, default=2, metavar="C_S",
        help="substrate bond strength",
    )
    parser.add_argument(
        "--p", type=int, default=1,
        help="denominator of the substrate gap e_S = q/p",
    )
    parser.add_argument(
        "--q", type=int, default=1,
        help="substrate bond period along the floor row; also the numerator of e_S",
    )


def _add_output(parser: argparse.ArgumentParser, formats=("json",)) -> None:
    parser.add_argument("--out", help="write here instead of stdout")
    parser.add_argument(
        "--format", choices=formats, default=formats[0], dest="fmt",
        help="output format",
    )


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="winterbottom_lab",
        description="Atomistic wetting and dewetting on the triangular lattice.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    energy = sub.add_parser("energy", help="audit one configuration file")
    energy.add_argument("config", help="configuration JSON file")
    _add_output(energy)

    minimize = sub.add_parser("minimize", help="search for a ground state")
    minimize.add_argument("--n", type=int, required=True, help="atom count")
    _add_params(minimize)
    minimize.add_argument(
        "--window", type=_window, metavar="WxH",
        help="exact-search window, e.g. 8x5",
    )
    minimize.add_argument(
        "--schedule", type=_schedule, metavar="T0:ALPHA:STEPS",
        help="anneal instead of exact search, e.g. 2.0:0.995:5000",
    )
    minimize.add_argument("--seed", type=int, help="RNG seed (required with --schedule)")
    minimize.add_argument("--replicas", type=int, default=8)
    minimize.add_argument("--threads", type=int, help="parallel replicas; default: logical cores")
    _add_output(minimize)

    scan = sub.add_parser("wetting-scan", help="exact minima across a parameter grid")
    scan.add_argument("--cf", type=_coupling, default=1, metavar="C_F")
    scan.add_argument(
        "--ratios", type=_ratio_list,
        default=DEFAULT_SCAN_RATIOS, metavar="R1,R2,...",
        help="c_S/c_F grid values",
    )
    scan.add_argument(
        "--qs", type=_int_list, default=DEFAULT_SCAN_QS, metavar="Q1,Q2,...",
    )
    scan.add_argument("--n", type=int, default=6, help="scan all sizes up to this")
    scan.add_argument("--window", type=_window, metavar="WxH")
    _add_output(scan, formats=("csv", "json"))

    converge = sub.add_parser(
        "converge", help="annealed minimizers against the continuum shape"
    )
    _add_params(converge)
    converge.add_argument(
        "--n", type=_int_list, default=(50, 100, 200, 400), metavar="N1,N2,...",
    )
    converge.add_argument("--seed", type=int, required=True)
    converge.add_argument(
        "--schedule", type=_schedule, metavar="T0:ALPHA:STEPS",
        help="override the size-scaled default schedule",
    )
    converge.add_argument("--replicas", type=int, default=8)
    converge.add_argument("--threads", type=int, help="parallel replicas; default: logical cores")
    _add_output(converge, formats=("csv", "json"))

    shape = sub.add_parser("winterbottom", help="emit the continuum minimizer")
    _add_params(shape)
    shape.add_argument("--mass", type=float, help="enclosed area; default matches the lattice density")
    _add_output(shape)

    geometry = sub.add_parser(
        "geometry", help="emit the auxiliary boundary sets of a configuration"
    )
    geometry.add_argument("config", help="configuration JSON file")
    _add_output(geometry)

    return top


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json_doc(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _cmd_energy(args) -> None:
    cfg, params = read_configuration(args.config)
    _emit(_json_doc(energy_report(cfg, params)), args.out)


def _cmd_minimize(args) -> None:
    params = ModelParams(c_F=args.cf, c_S=args.cs, p=args.p, q=args.q)
    if args.schedule is None:
        report = exact_minimize(args.n, params, args.window)
    else:
        if args.seed is None:
            raise ConfigError("annealing is randomized: give --seed")
        report = anneal_minimize(
            args.n, params, args.schedule, args.seed, args.replicas,
            workers=args.threads,
        )
    _emit(_json_doc(report.as_dict()), args.out)


def _cmd_wetting_scan(args) -> None:
    rows = wetting_scan(args.ratios, args.qs, args.n, c_f=args.cf, window=args.window)
    if args.fmt == "csv":
        _emit(rows_to_csv(rows, SCAN_FIELDS), args.out)
    else:
        _emit(_json_doc({"rows": rows}), args.out)


def _cmd_converge(args) -> None:
    params = ModelParams(c_F=args.cf, c_S=args.cs, p=args.p, q=args.q)
    result = convergence_experiment(
        params, args.n, args.seed,
        schedule=args.schedule, replicas=args.replicas, workers=args.threads,
    )
    if args.fmt == "json":
        _emit(_json_doc(result), args.out)
        return
    if args.out is None:
        raise ConfigError("csv output needs --out so the polygons file has somewhere to go")
    _emit(rows_to_csv(result["rows"], CONVERGENCE_FIELDS), args.out)
    polygons_path = Path(args.out).with_suffix(".polygons.json")
    polygons_path.write_text(_json_doc(result["polygons"]), encoding="utf-8")


def _cmd_winterbottom(args) -> None:
    params = ModelParams(c_F=args.cf, c_S=args.cs, p=args.p, q=args.q)
    shape = winterbottom_shape(params, args.mass)
    _emit(
        _json_doc(
            {
                "vertices": [list(v) for v in shape.vertices],
                "area": shape.area,
                "energy": continuum_energy(shape, params),
                "sigma": float(params.sigma),
            }
        ),
        args.out,
    )


def _cmd_geometry(args) -> None:
    cfg, params = read_configuration(args.config)
    hn = build_hn(cfg, params)
    hnp = straighten_to_hn_prime(hn)
    _emit(
        _json_doc(
            {
                "n": len(cfg),
                "hn_loops": [[list(v) for v in loop] for loop in hn.loops_xy()],
                "hn_prime_loops": [[list(v) for v in loop] for loop in hnp.loops_xy()],
                "adhesion_length": adhesion_length(hnp, params),
                "rescaled_energy": rescaled_energy(cfg, params),
            }
        ),
        args.out,
    )


_DISPATCH = {
    "energy": _cmd_energy,
    "minimize": _cmd_minimize,
    "wetting-scan": _cmd_wetting_scan,
    "converge": _cmd_converge,
    "winterbottom": _cmd_winterbottom,
    "geometry": _cmd_geometry,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        _DISPATCH[args.command](args)
    except (ValueError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK
