"""Command line entry point: convergence tables, jump studies, point sets, RBF fits."""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import experiments as ex
from .ddpu import compute_indicators
from .kernels import RadialKernel, ScaledWeight
from .partition import build_covering
from .pointsets import halton_points, read_csv, unit_box, write_csv
from .rbf import fit_rbf

KERNEL_TOKENS = [k.value for k in RadialKernel]


def parse_levels(text: str) -> list:
    """``4:7`` -> [4, 5, 6, 7]; ``4,6`` -> [4, 6]; ``5`` -> [5]."""
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


def _add_method_args(p, method_default="ddpu"):
    p.add_argument("--method", choices=["pu", "ddpu"], default=method_default)
    p.add_argument("--sampling", choices=["grid", "halton"], default="grid")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--kernel", choices=KERNEL_TOKENS, default="w2")
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--t", type=float, default=2.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pumls", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convergence", help="error and rate table over refinement levels")
    _add_method_args(p, "pu")
    p.add_argument("--levels", type=parse_levels, default=[4, 5, 6, 7])
    p.add_argument("--function", choices=sorted(ex.TEST_FUNCTIONS), default="franke")
    p.add_argument("--eval-res", type=int, default=120)
    p.add_argument("--h-mode", choices=["nominal", "probe"], default="nominal")
    p.add_argument("--out")

    p = sub.add_parser("approximate", help="gridded approximation of a test function")
    _add_method_args(p)
    p.add_argument("--function", choices=sorted(ex.TEST_FUNCTIONS), required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--eval-res", type=int, default=120)
    p.add_argument("--out")

    p = sub.add_parser("indicators", help="smoothness indicator of every subdomain")
    p.add_argument("--function", choices=sorted(ex.TEST_FUNCTIONS), required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--sampling", choices=["grid", "halton"], default="grid")
    p.add_argument("--out")

    p = sub.add_parser("halton", help="Halton point set")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--header", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("rbf", help="global RBF interpolation of CSV data")
    p.add_argument("--kernel", choices=KERNEL_TOKENS, required=True)
    p.add_argument("--shape", type=float, required=True)
    p.add_argument("--data", required=True, help="CSV rows x_1,...,x_n,f")
    p.add_argument("--eval", required=True, help="CSV rows x_1,...,x_n")
    p.add_argument("--out")
    return parser


def _open_out(path):
    if path is None:
        return sys.stdout
    return open(path, "w", newline="")


def _cmd_convergence(args):
    report = ex.run_convergence(
        args.method, args.sampling, args.degree, args.kernel, args.levels,
        args.eval_res, args.function, args.epsilon, args.t, args.h_mode,
    )
    if args.out:
        report.to_csv(args.out)
        print(report)
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(report.HEADER)
        for row in report.rows():
            writer.writerow(["" if v is None else v for v in row])


def _cmd_approximate(args):
    fn = ex.get_test_function(args.function)
    pts = ex.sample_points(args.sampling, args.level)
    op = ex.make_operator(args.method, pts.with_values(fn), args.degree, args.kernel,
                          args.epsilon, args.t)
    Z = ex.eval_grid(args.eval_res, 2)
    exact = fn(*Z.T)
    approx = op.evaluate(Z)
    fh = _open_out(args.out)
    try:
        writer = csv.writer(fh)
        writer.writerow(("x", "y", "exact", "approx", "abs_error"))
        for (x, y), e, a in zip(Z, exact, approx):
            writer.writerow((x, y, e, a, abs(a - e)))
    finally:
        if fh is not sys.stdout:
            fh.close()


def _cmd_indicators(args):
    fn = ex.get_test_function(args.function)
    data = ex.sample_points(args.sampling, args.level).with_values(fn)
    cov = build_covering(data, unit_box(2))
    ind = compute_indicators(cov, data)
    fh = _open_out(args.out)
    try:
        writer = csv.writer(fh)
        writer.writerow(("center_x", "center_y", "N_k", "I_k"))
        for c, n, v in zip(cov.centers, ind.counts, ind.values):
            writer.writerow((c[0], c[1], n, v))
    finally:
        if fh is not sys.stdout:
            fh.close()


def _cmd_halton(args):
    pts = halton_points(args.count, args.dim)
    if args.out:
        write_csv(args.out, pts, header=args.header)
        return
    writer = csv.writer(sys.stdout)
    if args.header:
        writer.writerow([f"x_{d + 1}" for d in range(args.dim)])
    for row in pts.nodes:
        writer.writerow([repr(float(v)) for v in row])


def _cmd_rbf(args):
    with open(args.data) as fh:
        ncols = len(next(r for r in csv.reader(fh) if r))
    data = read_csv(args.data, dim=ncols - 1)
    if data.values is None:
        raise ValueError("data CSV needs a value column")
    targets = read_csv(args.eval, dim=data.dim)
    interp = fit_rbf(ScaledWeight(args.kernel, args.shape), data)
    approx = interp(targets.nodes)
    fh = _open_out(args.out)
    try:
        writer = csv.writer(fh)
        for row, v in zip(targets.nodes, approx):
            writer.writerow([repr(float(c)) for c in row] + [repr(float(v))])
    finally:
        if fh is not sys.stdout:
            fh.close()


COMMANDS = {
    "convergence": _cmd_convergence,
    "approximate": _cmd_approximate,
    "indicators": _cmd_indicators,
    "halton": _cmd_halton,
    "rbf": _cmd_rbf,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (ValueError, OSError, RuntimeError, np.linalg.LinAlgError) as exc:
        msg = " ".join(str(exc).split())
        print(f"pumls {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
