"""Command line front end: ``kuga rst | tables | dims | region``.

Exit codes: 0 canonical / success, 10 not canonical, 11 indeterminate
(quasi-reflection present), 1 table check mismatch, 2 bad input, 3 output
could not be written.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from importlib import resources

from . import dims, rst
from .cyclo import DEFAULT_TOL
from .errors import KugaError

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_IO = 3
EXIT_FOR_STATUS = {
    rst.Status.CANONICAL: 0,
    rst.Status.NOT_CANONICAL: 10,
    rst.Status.INDETERMINATE: 11,
}
TOL_ENV = "KUGA_RST_TOL"


class InputError(Exception):
    pass


def _tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not tol > 0:
        raise InputError(f"{TOL_ENV} must be positive")
    return tol


def _load_scenario(args) -> rst.Scenario:
    tol = _tolerance()
    if args.n < 0:
        raise InputError("--n must be >= 0")
    if args.preset:
        return rst.preset(args.preset, args.n, args.include_sigma, tol=tol)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{args.file}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.file}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return rst.scenario_from_dict(obj, args.n, args.include_sigma, tol,
                                      name=os.path.basename(args.file))
    except (ValueError, KugaError) as exc:
        raise InputError(f"{args.file}: {exc}") from None


def _verdict_text(v: rst.Verdict) -> str:
    lines = [f"scenario: {v.scenario}", f"n: {v.n}", f"status: {v.status.value}"]
    if v.witness is not None:
        w = v.witness
        lines.append(f"witness: k1={w.powers[0]} k2={w.powers[1] if len(w.powers) > 1 else 0} "
                     f"type={w.type} rst_sum={rst.format_fraction(w.rst_sum)}")
    if v.min_rst_sum is not None:
        lines.append(f"min rst_sum: {rst.format_fraction(v.min_rst_sum)}")
    for r in v.table:
        lines.append(f"  {tuple(r.powers)}  {r.type}  {rst.format_fraction(r.rst_sum)}")
    return "\n".join(lines) + "\n"


def fixture_path(name: str, n: int):
    return resources.files("kuga") / "fixtures" / f"{name}_n{n}.txt"


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".kuga-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_rst(args, out) -> int:
    scenario = _load_scenario(args)
    verdict = rst.analyze(scenario)
    out.write(verdict.to_json() + "\n" if args.format == "json" else _verdict_text(verdict))
    return EXIT_FOR_STATUS[verdict.status]


def cmd_tables(args, out) -> int:
    scenario = _load_scenario(args)
    rows = rst.build_table(scenario)
    if args.format == "json":
        text = json.dumps(rst.table_to_dict(scenario, rows), indent=2) + "\n"
    else:
        text = rst.render_table(scenario, rows)
    out.write(text)
    if args.check:
        if args.format != "text":
            raise InputError("--check compares the text rendering; drop --format json")
        path = fixture_path(scenario.name, scenario.n)
        if not path.is_file():
            raise InputError(f"no stored fixture for {scenario.name} with n={scenario.n}")
        expected = path.read_text(encoding="utf-8")
        if expected != text:
            print(f"table differs from fixture {path.name}", file=sys.stderr)
            return EXIT_MISMATCH
        print(f"table matches fixture {path.name}", file=sys.stderr)
    return EXIT_OK


def cmd_dims(args, out) -> int:
    if args.query == "mr":
        value = dims.dim_M(args.r)
    elif args.query == "jacobi":
        if args.k < 1 or args.p < 1:
            raise InputError("--k and --p must be positive")
        value = dims.jacobi_lower_bound(args.k, args.p)
    else:
        if args.p_max < 2:
            raise InputError("--p-max must be >= 2")
        value = dims.minimal_prime(args.k, args.p_max)
    out.write(("none" if value is None else str(value)) + "\n")
    return EXIT_OK


def cmd_region(args, out) -> int:
    if args.p_max < 3 or args.n_max < 0:
        raise InputError("need --p-max >= 3 and --n-max >= 0")
    cells = dims.region_grid(args.p_max, args.n_max)
    text = dims.grid_to_csv(cells) if args.format == "csv" else dims.grid_to_json(cells)
    try:
        if args.out:
            _atomic_write(args.out, text)
        else:
            out.write(text)
        if args.plot_data:
            _atomic_write(args.plot_data, dims.grid_to_plot_data(cells))
    except OSError as exc:
        print(f"kuga region: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _scenario_args(p: argparse.ArgumentParser, sigma_default: bool):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=rst.PRESETS)
    src.add_argument("--file", help="JSON scenario file")
    p.add_argument("--n", type=int, default=1, help="fibre dimension (default 1)")
    if sigma_default:
        p.add_argument("--without-sigma", dest="include_sigma", action="store_false",
                       help="leave out (0, -1_4)")
    else:
        p.add_argument("--with-sigma", dest="include_sigma", action="store_true",
                       help="add (0, -1_4) to the generators")
    p.add_argument("--format", choices=("json", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kuga", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rst", help="RST verdict for a fixed-point scenario")
    _scenario_args(p, sigma_default=False)
    p.set_defaults(func=cmd_rst)

    p = sub.add_parser("tables", help="type table indexed by generator powers")
    _scenario_args(p, sigma_default=True)
    p.add_argument("--check", action="store_true", help="diff against the stored fixture")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("dims", help="dimension formulas")
    q = p.add_subparsers(dest="query", required=True)
    mr = q.add_parser("mr", help="dim M_r for SL(2, Z)")
    mr.add_argument("--r", type=int, required=True)
    jac = q.add_parser("jacobi", help="lower bound j(k, p)")
    jac.add_argument("--k", type=int, required=True)
    jac.add_argument("--p", type=int, required=True)
    mp = q.add_parser("min-prime", help="first prime p with j(k, p) > 0")
    mp.add_argument("--k", type=int, required=True)
    mp.add_argument("--p-max", type=int, default=1000)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("region", help="relative general type region on the (p, n) grid")
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write here instead of stdout")
    p.add_argument("--plot-data", help="also write gnuplot-style data to this path")
    p.set_defaults(func=cmd_region)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"kuga {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KugaError as exc:
        print(f"kuga {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
