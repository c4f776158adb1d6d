"""Command-line front end: ``verify``, ``sweep``, ``transform`` and ``clt``.

Exit codes: 0 success, 1 failed check, 2 configuration error, 3 resource cap.
CSV numbers carry 17 significant digits so reruns compare byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import families
from .clt import clt_moment_check
from .config import RunConfig, parse_orders, resolve_config
from .core import forward_transform
from .errors import ResourceError
from .inequalities import FAMILIES, sweep
from .verify import run_suite

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3

SWEEP_HEADER = ["alpha", "d", "p", "q", "family", "seed", "lhs", "rhs", "ratio", "bound_constant"]
CLT_HEADER = ["n", "moment_spec", "gamma_n_value", "mu_value", "gap"]
VERIFY_HEADER = ["module", "check", "measured", "threshold", "status"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage already; route it through the same message path
    def error(self, message):
        raise _UsageError(message)


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def _write_csv(header, rows, out: Optional[str]):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _float_list(text: str, what: str):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise _UsageError(f"{what} expects comma-separated numbers, got {text!r}") from None


def _int_list(text: str, what: str):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise _UsageError(f"{what} expects comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--alpha", type=float)
    common.add_argument("--d", type=int)
    common.add_argument("--radius", type=float, help="NU grid truncation radius")
    common.add_argument("--orders", help="Euclidean,radial,theta quadrature orders, e.g. 64,48,64")
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="write CSV here instead of stdout")

    parser = _Parser(prog="weinstein", description="Weinstein transform toolbox and inequality checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("verify", parents=[common], help="run the invariant suite")

    sw = sub.add_parser("sweep", parents=[common], help="Babenko ratios over a p range")
    sw.add_argument("--p-min", type=float, default=1.1)
    sw.add_argument("--p-max", type=float, default=2.0)
    sw.add_argument("--steps", type=int, default=5)
    sw.add_argument("--family", default="GAUSSIAN", help="GAUSSIAN, HERMITE or RANDOM")
    sw.add_argument("--n-functions", type=int, default=20, help="functions drawn per p value")

    tr = sub.add_parser("transform", parents=[common], help="evaluate the transform at given points")
    tr.add_argument("--function", required=True, help="gaussian, gaussian_hermite:<m1,...>, or bump")
    tr.add_argument("--points", required=True, help="file with one lambda per line; '-' reads stdin")

    cl = sub.add_parser("clt", parents=[common], help="moments of n-fold convolutions of beta_n")
    cl.add_argument("--n", default="4,8,16,32", help="comma-separated fold counts")
    cl.add_argument("--moments", default="0,2,3,4", help="comma-separated moment orders; 0 is mass")
    cl.add_argument("--cap", type=int, default=1024, help="atom cap per marginal")
    return parser


def _config(args) -> RunConfig:
    orders = parse_orders(args.orders) if args.orders else {}
    return resolve_config(
        args.config,
        alpha=args.alpha,
        d=args.d,
        radius=args.radius,
        tolerance=args.tol,
        seed=args.seed,
        output_path=args.out,
        **orders,
    )


def cmd_verify(cfg: RunConfig) -> int:
    results = []

    def report(chk):
        print(chk.line(), flush=True)
        results.append(chk)

    run_suite(cfg, progress=report)
    failed = [c for c in results if not c.passed]
    print(f"{len(results)} checks, {len(results) - len(failed)} passed, {len(failed)} failed")
    if cfg.output_path:
        rows = [(c.module, c.name, c.measured, c.threshold, "PASS" if c.passed else "FAIL") for c in results]
        _write_csv(VERIFY_HEADER, rows, cfg.output_path)
    return EXIT_CHECK if failed else EXIT_OK


def cmd_sweep(cfg: RunConfig, p_min: float, p_max: float, steps: int, family: str, n_functions: int = 20) -> int:
    if not 1 < p_min <= p_max <= 2:
        raise _UsageError(f"need 1 < p_min <= p_max <= 2, got p_min={p_min}, p_max={p_max}")
    if steps < 1 or n_functions < 1:
        raise _UsageError("steps and n-functions must be >= 1")
    if family.upper() not in FAMILIES:
        raise _UsageError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    p_values = np.linspace(p_min, p_max, steps) if steps > 1 else [p_min]
    rows = sweep(cfg.params, [float(p) for p in p_values], family, cfg.seed, cfg.nu_grid(), n_functions)
    _write_csv(
        SWEEP_HEADER,
        [(r.alpha, r.d, r.p, r.q, r.family, r.seed, r.lhs, r.rhs, r.ratio, r.bound_constant) for r in rows],
        cfg.output_path,
    )
    return EXIT_OK


def read_points(source: str, dim: int) -> np.ndarray:
    """One point per line, comma or whitespace separated; ``#`` comments."""
    text = sys.stdin.read() if source == "-" else _read(source)
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].replace(",", " ").split()
        if not line:
            continue
        try:
            vals = [float(v) for v in line]
        except ValueError:
            raise _UsageError(f"{source}:{lineno}: not a number") from None
        if len(vals) != dim:
            raise _UsageError(f"{source}:{lineno}: expected {dim} coordinates, got {len(vals)}")
        pts.append(vals)
    return np.array(pts, dtype=float).reshape(-1, dim)


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read points file {path}: {exc}") from None


def cmd_transform(cfg: RunConfig, function_name: str, points_source: str) -> int:
    params = cfg.params
    f = families.from_name(params, function_name)
    lam = read_points(points_source, params.dim)
    vals = forward_transform(params, cfg.nu_grid(), f, lam) if len(lam) else np.zeros(0, complex)
    header = [f"lambda_{k + 1}" for k in range(params.dim)] + ["re", "im"]
    _write_csv(header, [(*pt, v.real, v.imag) for pt, v in zip(lam, vals)], cfg.output_path)
    return EXIT_OK


def cmd_clt(cfg: RunConfig, n_list, moment_orders, cap: int = 1024) -> int:
    if not n_list:
        raise _UsageError("--n needs at least one fold count")
    rows = clt_moment_check(cfg.params, n_list, moment_orders, cfg.rule(), cap=cap)
    _write_csv(CLT_HEADER, [(r.n, r.moment_spec, r.gamma_n_value, r.mu_value, r.gap) for r in rows], cfg.output_path)
    return EXIT_OK


def _dispatch(args) -> int:
    cfg = _config(args)
    if args.command == "verify":
        return cmd_verify(cfg)
    if args.command == "sweep":
        return cmd_sweep(cfg, args.p_min, args.p_max, args.steps, args.family, args.n_functions)
    if args.command == "transform":
        return cmd_transform(cfg, args.function, args.points)
    return cmd_clt(cfg, _int_list(args.n, "--n"), _int_list(args.moments, "--moments"), args.cap)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _dispatch(args)
    except ResourceError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (_UsageError, ValueError) as exc:
        # DomainError and ConfigurationError are ValueErrors
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
