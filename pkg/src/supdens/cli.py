"""Command-line interface: fit, eval, solve, simulate, joint.

Inputs are headerless CSVs of finite reals (one column; d columns for
`joint`).  Data goes to the output stream (a file via --output, else stdout);
diagnostics go to stderr.  Exit codes: 0 success, 1 usage error, 2 data
error, 3 numeric non-convergence.  No output file is created on a nonzero
exit: results are rendered fully before anything is written.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

import numpy as np

from .bandwidth import lscv_bandwidth
from .errors import ConfigError, DataError, NumericError
from .estimators import (
    BOUNDARY_KERNEL,
    NAIVE,
    REFLECTION,
    FittedEstimator,
    Sample,
    SupportInterval,
    evaluate_grid,
)
from .joint import MultiSample, fit_joint
from .kernels import get_kernel
from .simulate import ExperimentSpec, MethodSpec, TABLE_METHODS, run_experiment
from .solver import SupportMode, fit, solve_support

__all__ = ["run_cli", "main"]

_METHOD_NAMES = {"naive": NAIVE, "reflection": REFLECTION, "boundary-kernel": BOUNDARY_KERNEL}
_METHOD_LABELS = {
    "naive": MethodSpec(NAIVE),
    "bk:proposed": MethodSpec(BOUNDARY_KERNEL, SupportMode.proposed()),
    "bk:extremes": MethodSpec(BOUNDARY_KERNEL, SupportMode.extremes()),
    "refl:proposed": MethodSpec(REFLECTION, SupportMode.proposed()),
    "refl:extremes": MethodSpec(REFLECTION, SupportMode.extremes()),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 instead of argparse's 2
        raise UsageError(message)


def _read_csv(path: str, columns: Optional[int] = None) -> np.ndarray:
    """Headerless CSV of finite reals; returns an (n, d) array."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows: List[List[float]] = []
    for i, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        cells = line.split(",")
        try:
            row = [float(c) for c in cells]
        except ValueError:
            raise DataError(f"{path}:{i}: not a number: {line!r}") from None
        if not all(np.isfinite(row)):
            raise DataError(f"{path}:{i}: non-finite value")
        rows.append(row)
    if not rows:
        raise DataError(f"{path}: no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise DataError(f"{path}: ragged rows (widths {sorted(widths)})")
    arr = np.asarray(rows, dtype=float)
    if columns is not None and arr.shape[1] != columns:
        raise DataError(f"{path}: expected {columns} column(s), found {arr.shape[1]}")
    return arr


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def _parse_grid(spec: str) -> np.ndarray:
    try:
        lo_s, hi_s, cnt_s = spec.split(":")
        lo, hi, cnt = float(lo_s), float(hi_s), int(cnt_s)
    except ValueError:
        raise UsageError(f"grid must be min:max:count, got {spec!r}") from None
    if cnt < 1:
        raise UsageError("grid count must be at least 1")
    if cnt == 1:
        return np.asarray([lo])
    if not lo < hi:
        raise UsageError("grid needs min < max")
    return np.linspace(lo, hi, cnt)


def _parse_mode(args) -> Optional[SupportMode]:
    name = args.mode
    if name is None:
        return None
    if name == "proposed":
        return SupportMode.proposed()
    if name == "extremes":
        return SupportMode.extremes()
    if name == "known":
        if args.lower is None or args.upper is None:
            raise UsageError("--mode known requires --lower and --upper")
        return SupportMode.known(args.lower, args.upper)
    if name == "half-known-lower":
        if args.lower is None:
            raise UsageError("--mode half-known-lower requires --lower")
        return SupportMode.half_known_lower(args.lower)
    if name == "half-known-upper":
        if args.upper is None:
            raise UsageError("--mode half-known-upper requires --upper")
        return SupportMode.half_known_upper(args.upper)
    raise UsageError(f"unknown mode {name!r}")


def _resolve_bandwidth(policy: str, sample: Sample, kernel) -> float:
    if policy == "lscv":
        return lscv_bandwidth(sample, kernel)
    try:
        h = float(policy)
    except ValueError:
        raise UsageError(f"--bandwidth must be 'lscv' or a number, got {policy!r}") from None
    if h <= 0:
        raise UsageError("--bandwidth must be positive")
    return h


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _grid_csv(rows: np.ndarray, header: str) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


# -- subcommand handlers --------------------------------------------------------


def _cmd_fit(args) -> int:
    kernel = get_kernel(args.kernel)
    data = _read_csv(args.input, columns=1)
    sample = Sample(data[:, 0])
    mode = _parse_mode(args)
    method = _METHOD_NAMES[args.method]
    h = _resolve_bandwidth(args.bandwidth, sample, kernel)
    est, report = fit(sample, h, kernel, method, mode, tol=args.tol, max_iter=args.max_iter)
    model = {
        "method": args.method,
        "kernel": args.kernel,
        "bandwidth": h,
        "support": {"lower": est.support.lower, "upper": est.support.upper},
        "solve_report": report.to_dict() if report is not None else None,
        "sample": [float(v) for v in sample.values],
    }
    _write_output(json.dumps(model, indent=2) + "\n", args.output)
    return 0


def _cmd_eval(args) -> int:
    try:
        with open(args.model, "r", encoding="utf-8") as fh:
            model = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {args.model}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{args.model}: invalid JSON: {exc}") from exc
    try:
        kernel = get_kernel(model["kernel"])
        method = _METHOD_NAMES[model["method"]]
        sample = Sample(model["sample"])
        h = float(model["bandwidth"])
        support = SupportInterval(
            float(model["support"]["lower"]), float(model["support"]["upper"])
        )
    except (KeyError, TypeError) as exc:
        raise DataError(f"{args.model}: malformed model: {exc}") from exc
    est = FittedEstimator(method, sample, h, support, kernel)
    grid = _parse_grid(args.grid)
    rows = evaluate_grid(est, grid)
    if args.format == "json":
        records = [{"x": r[0], "pdf": r[1], "cdf": r[2]} for r in rows]
        _write_output(json.dumps(records, indent=2) + "\n", args.output)
    else:
        _write_output(_grid_csv(rows, "x,pdf,cdf"), args.output)
    return 0


def _cmd_solve(args) -> int:
    kernel = get_kernel(args.kernel)
    data = _read_csv(args.input, columns=1)
    sample = Sample(data[:, 0])
    mode = _parse_mode(args)
    if mode is None:
        raise UsageError("solve requires --mode")
    method = _METHOD_NAMES[args.method]
    if method == NAIVE:
        raise UsageError("solve works with reflection or boundary-kernel")
    h = _resolve_bandwidth(args.bandwidth, sample, kernel)
    report = solve_support(sample, h, kernel, method, mode, tol=args.tol, max_iter=args.max_iter)
    payload = {
        "method": args.method,
        "mode": args.mode,
        "kernel": args.kernel,
        "bandwidth": h,
        "n": sample.n,
        **report.to_dict(),
    }
    _write_output(json.dumps(payload, indent=2) + "\n", args.output)
    return 0


def _parse_dist(spec: str):
    try:
        family, params = spec.split(":")
        p_s, q_s = params.split(",")
        p, q = float(p_s), float(q_s)
    except ValueError:
        raise UsageError(f"--dist must look like beta:p,q, got {spec!r}") from None
    if family != "beta":
        raise UsageError(f"only the beta family is built in, got {family!r}")
    if p <= 0 or q <= 0:
        raise UsageError("beta shapes must be positive")
    return p, q


def _load_sim_config(path: str, args) -> None:
    """Apply `key = value` lines to unset simulate options (flags win).

    Keys: dist, n (space-separated lists), reps, seed, kernel, bandwidth,
    methods, nodes, format.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    for i, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{i}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key == "dist":
                if args.dist is None:
                    args.dist = value.split()
            elif key == "n":
                if args.n is None:
                    args.n = [int(v) for v in value.split()]
            elif key == "reps":
                args.reps = int(value) if args.reps is None else args.reps
            elif key == "seed":
                args.seed = int(value) if args.seed is None else args.seed
            elif key == "nodes":
                args.nodes = int(value) if args.nodes is None else args.nodes
            elif key == "kernel":
                args.kernel = value if args.kernel is None else args.kernel
            elif key == "bandwidth":
                args.bandwidth = value if args.bandwidth is None else args.bandwidth
            elif key == "methods":
                args.methods = value if args.methods is None else args.methods
            elif key == "format":
                args.format = value if args.format is None else args.format
            else:
                raise DataError(f"{path}:{i}: unknown key {key!r}")
        except ValueError:
            raise DataError(f"{path}:{i}: bad value for {key}: {value!r}") from None


def _cmd_simulate(args) -> int:
    if args.config is not None:
        _load_sim_config(args.config, args)
    args.kernel = args.kernel or "epanechnikov"
    args.bandwidth = args.bandwidth or "lscv"
    args.format = args.format or "csv"
    args.reps = 500 if args.reps is None else args.reps
    args.seed = 0 if args.seed is None else args.seed
    args.nodes = 4001 if args.nodes is None else args.nodes
    if args.format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {args.format!r}")
    kernel = get_kernel(args.kernel)
    if args.methods is None:
        methods = TABLE_METHODS
    else:
        methods = []
        for label in args.methods.split(","):
            label = label.strip()
            if label not in _METHOD_LABELS:
                raise UsageError(
                    f"unknown method label {label!r}; choose from {sorted(_METHOD_LABELS)}"
                )
            methods.append(_METHOD_LABELS[label])
        methods = tuple(methods)
    bandwidth: float | str = args.bandwidth
    if bandwidth != "lscv":
        try:
            bandwidth = float(bandwidth)
        except ValueError:
            raise UsageError(f"--bandwidth must be 'lscv' or a number, got {bandwidth!r}") from None
    dists = args.dist or ["beta:1,1"]
    ns = tuple(args.n or [50, 100, 300])
    chunks = []
    for i, dspec in enumerate(dists):
        p, q = _parse_dist(dspec)
        spec = ExperimentSpec(
            p=p,
            q=q,
            ns=ns,
            methods=methods,
            reps=args.reps,
            kernel=kernel,
            bandwidth=bandwidth,
            seed=args.seed,
            quad_nodes=args.nodes,
        )
        result = run_experiment(spec)
        if args.format == "json":
            chunks.append(result.detail_json())
        else:
            csv = result.table_csv()
            if i > 0:  # drop the repeated header for subsequent distributions
                csv = csv.split("\n", 1)[1]
            chunks.append(csv)
    if args.format == "json":
        text = json.dumps(chunks if len(chunks) > 1 else chunks[0], indent=2) + "\n"
    else:
        text = "".join(chunks)
    _write_output(text, args.output)
    return 0


def _cmd_joint(args) -> int:
    kernel = get_kernel(args.kernel)
    arr = _read_csv(args.input)
    data = MultiSample(arr)
    d = data.d
    mode = _parse_mode(args)
    if mode is None:
        raise UsageError("joint requires --mode")
    method = _METHOD_NAMES[args.method]
    if method == NAIVE:
        raise UsageError("joint works with reflection or boundary-kernel")
    if args.bandwidth == "lscv":
        hs = [lscv_bandwidth(data.coordinate(j), kernel) for j in range(d)]
    else:
        parts = args.bandwidth.split(",")
        if len(parts) not in (1, d):
            raise UsageError(f"--bandwidth needs 1 or {d} comma-separated values")
        try:
            hs = [float(s) for s in parts]
        except ValueError:
            raise UsageError(f"--bandwidth must be 'lscv' or numbers, got {args.bandwidth!r}") from None
        if len(hs) == 1:
            hs = hs * d
    est = fit_joint(data, hs, kernel, method, mode, tol=args.tol)
    grid_specs = args.grid.split(";")
    if len(grid_specs) == 1:
        axes = [_parse_grid(grid_specs[0]) for _ in range(d)]
    elif len(grid_specs) == d:
        axes = [_parse_grid(g) for g in grid_specs]
    else:
        raise UsageError(f"--grid needs 1 or {d} semicolon-separated specs")
    pdf_t = est.pdf_grid(axes)
    cdf_t = est.cdf_grid(axes)
    mesh = np.meshgrid(*axes, indexing="ij")
    cols = [m.ravel() for m in mesh] + [pdf_t.ravel(), cdf_t.ravel()]
    rows = np.column_stack(cols)
    header = ",".join(f"x{j + 1}" for j in range(d)) + ",pdf,cdf"
    out_text = _grid_csv(rows, header)
    report_text = None
    if args.report is not None:
        payload = {
            "bandwidths": hs,
            "rectangle": [list(pair) for pair in est.rectangle],
            "reports": [r.to_dict() if r is not None else None for r in est.reports],
        }
        report_text = json.dumps(payload, indent=2) + "\n"
    _write_output(out_text, args.output)
    if report_text is not None:
        _write_output(report_text, args.report)
    return 0


# -- parser ----------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="supdens", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("--input", required=True, help="headerless CSV of observations")
        p.add_argument("--kernel", default="epanechnikov", choices=["epanechnikov", "gaussian"])
        p.add_argument("--bandwidth", default="lscv", help="'lscv' or a positive number")
        p.add_argument("--tol", type=float, default=1e-10, help="solver residual tolerance")
        p.add_argument("--max-iter", type=int, default=200, help="bisection iteration cap")
        p.add_argument("--output", default=None, help="output path (default stdout)")

    p_fit = sub.add_parser("fit", help="fit an estimator and persist the model as JSON")
    common(p_fit)
    p_fit.add_argument("--method", required=True, choices=sorted(_METHOD_NAMES))
    p_fit.add_argument("--mode", default=None,
                       choices=["known", "proposed", "extremes", "half-known-lower", "half-known-upper"])
    p_fit.add_argument("--lower", type=float, default=None)
    p_fit.add_argument("--upper", type=float, default=None)
    p_fit.set_defaults(handler=_cmd_fit)

    p_eval = sub.add_parser("eval", help="evaluate a persisted model on a grid")
    p_eval.add_argument("--model", required=True, help="model JSON written by fit")
    p_eval.add_argument("--grid", required=True, help="min:max:count")
    p_eval.add_argument("--format", default="csv", choices=["csv", "json"])
    p_eval.add_argument("--output", default=None)
    p_eval.set_defaults(handler=_cmd_eval)

    p_solve = sub.add_parser("solve", help="estimate support endpoints; prints a JSON report")
    common(p_solve)
    p_solve.add_argument("--method", required=True, choices=["reflection", "boundary-kernel"])
    p_solve.add_argument("--mode", required=True,
                         choices=["proposed", "extremes", "half-known-lower", "half-known-upper"])
    p_solve.add_argument("--lower", type=float, default=None)
    p_solve.add_argument("--upper", type=float, default=None)
    p_solve.set_defaults(handler=_cmd_solve)

    p_sim = sub.add_parser("simulate", help="Monte Carlo boundary-ISE comparison table")
    p_sim.add_argument("--config", default=None,
                       help="key = value file with the same options (flags win)")
    p_sim.add_argument("--dist", action="append", help="beta:p,q (repeatable; default beta:1,1)")
    p_sim.add_argument("--n", action="append", type=int, help="sample size (repeatable)")
    p_sim.add_argument("--reps", type=int, default=None)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--kernel", default=None, choices=["epanechnikov", "gaussian"])
    p_sim.add_argument("--bandwidth", default=None)
    p_sim.add_argument("--methods", default=None,
                       help="comma list from: " + ",".join(sorted(_METHOD_LABELS)))
    p_sim.add_argument("--nodes", type=int, default=None, help="Simpson nodes for the ISE")
    p_sim.add_argument("--format", default=None, choices=["csv", "json"])
    p_sim.add_argument("--output", default=None)
    p_sim.set_defaults(handler=_cmd_simulate)

    p_joint = sub.add_parser("joint", help="fit a joint estimator and evaluate on a tensor grid")
    common(p_joint)
    p_joint.add_argument("--method", required=True, choices=["reflection", "boundary-kernel"])
    p_joint.add_argument("--mode", required=True,
                         choices=["known", "proposed", "extremes", "half-known-lower", "half-known-upper"])
    p_joint.add_argument("--lower", type=float, default=None)
    p_joint.add_argument("--upper", type=float, default=None)
    p_joint.add_argument("--grid", required=True,
                         help="min:max:count, or d specs separated by ';'")
    p_joint.add_argument("--report", default=None, help="optional path for the JSON solve reports")
    p_joint.set_defaults(handler=_cmd_joint)

    return parser


def run_cli(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
