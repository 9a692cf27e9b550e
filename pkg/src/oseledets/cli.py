"""Command line interface: ``oseledets <command> ...``.

Exit codes: 0 success, 2 usage or precondition failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import scipy.linalg as linalg

from . import fileio
from .core import OseledetsError, WindowRangeError
from .exact_model import ExactModelSpec, generate, log_ladder
from .methods import METHODS, compute, estimate_shifts, required_range
from .spectrum import DichotomyShifts, qr_lyapunov
from .validation import equivariance_defect, exact_error, expansion_rate_series

log = logging.getLogger("oseledets")


class UsageError(Exception):
    pass


def _default_seed():
    return int(os.environ.get("OSLC_SEED", "0"))


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _parse_spectrum(text, dim):
    if text is None:
        return log_ladder(dim if dim is not None else 8)
    if text.startswith("log-ladder:"):
        return log_ladder(int(text.split(":", 1)[1]))
    return tuple(float(x) for x in text.split(","))


def _method_params(args):
    names = {"M": "M", "M_prime": "M_prime", "M1": "M1", "M1_prime": "M1_prime", "M2": "M2",
             "stride": "stride", "shift_fraction": "fraction"}
    p = {v: getattr(args, k) for k, v in names.items() if getattr(args, k, None) is not None}
    if getattr(args, "c_init", None):
        p["c_init"] = np.array([float(x) for x in args.c_init.split(",")])
    return p


def _shifts(args, window):
    left, right = getattr(args, "lambda_left", None), getattr(args, "lambda_right", None)
    if (left is None) != (right is None):
        raise UsageError("give both --lambda-left and --lambda-right, or neither")
    if left is not None:
        return DichotomyShifts(left, right)
    sh = estimate_shifts(window, args.seed, args.shift_fraction or 0.1)
    log.info("auto-selected shifts: lambda_left=%.17g lambda_right=%.17g", sh.lambda_left, sh.lambda_right)
    return sh


def _check_range(window, method, N, at, params):
    lo, hi = required_range(method, N, at, **params)
    if not window.covers(lo, hi):
        raise WindowRangeError(
            f"method {method} with N={N} needs times [{lo}, {hi}]; window holds "
            f"[{window.start}, {window.stop}]",
            required=(lo, hi),
        )
    return lo, hi


def cmd_gen_exact(args):
    spectrum = _parse_spectrum(args.spectrum, args.dim)
    if args.dim is not None and args.dim != len(spectrum):
        raise UsageError(f"--dim {args.dim} does not match spectrum length {len(spectrum)}")
    try:
        spec = ExactModelSpec(spectrum, args.eps, args.half_width, args.seed, fresh_z=args.fresh_z)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    window, truth = generate(spec)
    fileio.write_cocycle(args.out, window)
    if args.truth_out:
        text = fileio.csv_text(fileio.truth_header(spec.dim), fileio.truth_rows(truth))
        _emit(text, args.truth_out)
    log.info("wrote d=%d window [%d, %d] to %s", spec.dim, window.start, window.stop, args.out)


def cmd_compute(args):
    window = fileio.read_cocycle(args.infile)
    params = _method_params(args)
    _check_range(window, args.method, args.n, args.at, params)
    shifts = _shifts(args, window) if args.method.startswith("dich") else None
    t0 = time.perf_counter()
    res = compute(args.method, window, args.n, args.j, at=args.at, seed=args.seed, shifts=shifts, **params)
    elapsed = 1e3 * (time.perf_counter() - t0)
    log.info("%s j=%d N=%d took %.3f ms", args.method, args.j, args.n, elapsed)
    for w in res.warnings:
        log.warning("%s: %s", args.method, w)
    d = window.dim
    header = ["method", "j", "N", "time", "lambda_left", "lambda_right"]
    row = [res.method, res.j, args.n, res.time,
           shifts.lambda_left if shifts else None, shifts.lambda_right if shifts else None]
    if args.timing:
        header.append("elapsed_ms")
        row.append(elapsed)
    header += [f"v{i}" for i in range(1, d + 1)]
    row += list(res.vector)
    _emit(fileio.csv_text(header, [row]), args.out)


_SWEEP = {}


def _sweep_init(path):
    _SWEEP["window"] = fileio.read_cocycle(path)


def _sweep_point(task):
    method, N, j, seed, shifts, truth = task
    try:
        res = compute(method, _SWEEP["window"], N, j, seed=seed, shifts=shifts)
        return exact_error(res, truth)
    except (OseledetsError, ValueError, linalg.LinAlgError, ArithmeticError):
        return float("nan")


def cmd_sweep(args):
    window = fileio.read_cocycle(args.infile)
    vectors = fileio.read_vectors(args.truth)
    if (0, args.j) not in vectors:
        raise UsageError(f"truth file has no vector for time 0, j={args.j}")
    truth = vectors[(0, args.j)]
    methods = METHODS if args.methods in (None, "all") else tuple(args.methods.split(","))
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}")
    shifts = None
    if any(m.startswith("dich") for m in methods):
        shifts = estimate_shifts(window, args.seed)
        log.info("shifts: %.17g %.17g", shifts.lambda_left, shifts.lambda_right)
    grid = [(m, N) for m in methods for N in range(args.n_min, args.n_max + 1, args.n_step)]
    tasks = [(m, N, args.j, args.seed, shifts, truth) for m, N in grid]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs, initializer=_sweep_init, initargs=(args.infile,)) as ex:
            errors = list(ex.map(_sweep_point, tasks, chunksize=4))
    else:
        _sweep_init(args.infile)
        errors = [_sweep_point(t) for t in tasks]
    rows = [(m, args.j, N, e) for (m, N), e in zip(grid, errors)]
    _emit(fileio.csv_text(["method", "j", "N", "error"], rows), args.out)


def cmd_validate(args):
    window = fileio.read_cocycle(args.infile)
    rows = []
    if args.method == "truth":
        if not args.truth:
            raise UsageError("--method truth needs --truth")
        vectors = fileio.read_vectors(args.truth)

        def approx(at):
            return vectors[(at, args.j)]

        lo, hi = 0, -1
    else:
        params = _method_params(args)
        lo, hi = _check_range(window, args.method, args.n, 0, params)
        shifts = _shifts(args, window) if args.method.startswith("dich") else None

        def approx(at):
            return compute(args.method, window, args.n, args.j, at=at, seed=args.seed, shifts=shifts, **params)

    if args.equivariance is not None:
        m_max = args.equivariance
        window.require(min(lo, 0), max(hi + m_max, m_max - 1), "equivariance test")
        series = equivariance_defect(window, approx, args.equivariance)
        if series.note:
            log.warning("%s", series.note)
        rows += [(series.kind, m, v) for m, v in series.points]
    if args.expansion is not None:
        window.require(0, args.expansion - 1, "expansion test")
        series = expansion_rate_series(window, approx(0), args.expansion)
        rows += [(series.kind, m, v) for m, v in series.points]
    _emit(fileio.csv_text(["kind", "m", "value"], rows), args.out)


def cmd_lyap(args):
    window = fileio.read_cocycle(args.infile)
    est = qr_lyapunov(window, args.k, seed=args.seed)
    rows = [(i, lam) for i, lam in enumerate(est.lambdas, start=1)]
    _emit(fileio.csv_text(["i", "lambda"], rows), args.out)


def _add_method_flags(p):
    p.add_argument("--method", required=True)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--n", type=int, required=True, help="data half-width N")
    p.add_argument("--M", type=int)
    p.add_argument("--M-prime", dest="M_prime", type=int)
    p.add_argument("--M1", type=int)
    p.add_argument("--M1-prime", dest="M1_prime", type=int)
    p.add_argument("--M2", type=int)
    p.add_argument("--stride", type=int, help="svd2 checkpoint spacing")
    p.add_argument("--c-init", help="comma list, ginelli initial coefficients")
    p.add_argument("--lambda-left", type=float)
    p.add_argument("--lambda-right", type=float)
    p.add_argument("--shift-fraction", type=float)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser = argparse.ArgumentParser(prog="oseledets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-exact", parents=[common], help="write an exact-model cocycle and its true vectors")
    p.add_argument("--dim", type=int)
    p.add_argument("--spectrum", help='comma list or "log-ladder:k"')
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--half-width", type=int, default=350)
    p.add_argument("--seed", type=int, default=_default_seed())
    z = p.add_mutually_exclusive_group()
    z.add_argument("--fresh-z", dest="fresh_z", action="store_true", default=True)
    z.add_argument("--fixed-z", dest="fresh_z", action="store_false")
    p.add_argument("--out", required=True)
    p.add_argument("--truth-out")
    p.set_defaults(func=cmd_gen_exact)

    p = sub.add_parser("compute", parents=[common], help="estimate one Oseledets vector")
    p.add_argument("--in", dest="infile", required=True)
    _add_method_flags(p)
    p.add_argument("--at", type=int, default=0)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--timing", action="store_true", help="add elapsed_ms column")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", parents=[common], help="error against truth over a grid of N")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--methods", default="all")
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--n-min", type=int, default=10)
    p.add_argument("--n-max", type=int, default=350)
    p.add_argument("--n-step", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", parents=[common], help="equivariance and expansion-rate series")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--method", required=True, help="a method name, or 'truth' with --truth")
    p.add_argument("--truth")
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--n", type=int, default=150)
    for name in ("M", "M_prime", "M1", "M1_prime", "M2", "stride", "c_init",
                 "lambda_left", "lambda_right", "shift_fraction"):
        p.set_defaults(**{name: None})
    p.add_argument("--equivariance", type=int, metavar="M_MAX")
    p.add_argument("--expansion", type=int, metavar="M_MAX")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("lyap", parents=[common], help="QR estimate of the leading Lyapunov exponents")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out")
    p.set_defaults(func=cmd_lyap)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr, force=True)
    try:
        args.func(args)
    except (UsageError, WindowRangeError, fileio.CocycleFormatError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OseledetsError, linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
