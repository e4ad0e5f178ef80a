"""Batch command-line front end.

Every pipeline is a subcommand consuming JSON (and emitting JSON, or CSV for
matrices and report sequences).  Outputs are static reports embedding the
fully resolved configuration and the library version, so identical config
plus seed yields byte-identical files.

Exit codes: 0 success, 2 usage error, 3 input-data error, 4 numerical error.
A machine-readable error object is printed on stderr on failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .core import (
    CalculusError,
    CoefficientExpansion,
    InputDataError,
    MultiIndex,
    NumericalError,
    UsageError,
    enumerate_basis,
    expansion_inner,
    gauss_hermite,
)
from .hermite import hermite_coefficients, synthesize
from .bargmann import (
    bargmann_coeff,
    bargmann_integral,
    evaluate_fock,
    fock_inner_quadrature,
)
from .symbols import (
    BoundReport,
    OperatorMatrix,
    RealSymbol,
    ShubinWeight,
    WickSymbol,
    antiwick_matrix,
    kn_matrix,
    matrix_apply_at_point,
    pair_grid,
    real_to_wick_symbol,
    shubin_estimate_check,
    symbol_bound_check,
    weyl_matrix,
    wick_apply_quadrature,
    wick_matrix,
)
from .expansion import decompose, verify_decomposition
from .analysis import classify_decay, garding_check

OUTPUT_DIR_ENV = "WICKOPS_OUTPUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputDataError(f"cannot read input file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputDataError(f"invalid JSON in {path}: {exc}") from exc


def _resolve_output(path):
    if path is None:
        raise UsageError("an --output path is required")
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(payload, args, csv_rows=None):
    """Write the report; payload always carries the resolved config + version."""
    payload = dict(payload)
    # the output path is where the report goes, not part of what it computes,
    # so it is left out to keep identical configs byte-identical
    payload["config"] = {k: v for k, v in sorted(vars(args).items())
                         if k not in ("func", "output") and v is not None}
    payload["version"] = __version__
    path = _resolve_output(args.output)
    if getattr(args, "format", "json") == "csv":
        if csv_rows is None:
            raise UsageError("this subcommand has no CSV rendering; use --format json")
        with open(path, "w") as fh:
            fh.write("# wickops " + __version__ + "\n")
            for row in csv_rows:
                fh.write(",".join(str(v) for v in row) + "\n")
    else:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return path


def _matrix_csv(M: OperatorMatrix):
    rows = [("row", "col", "re", "im")]
    for i in range(M.entries.shape[0]):
        for j in range(M.entries.shape[1]):
            v = M.entries[i, j]
            rows.append((i, j, repr(float(v.real)), repr(float(v.imag))))
    return rows


def _expression_callback(expr: str, dimension: int):
    """Turn an expression in x0..x{d-1} into a vectorized callback.

    Evaluated with numpy in the namespace; intended for desk use, not as a
    security boundary.
    """
    names = {f"x{j}": j for j in range(dimension)}

    def f(points):
        env = {"np": np, "pi": np.pi, "e": np.e,
               "exp": np.exp, "sin": np.sin, "cos": np.cos, "sqrt": np.sqrt,
               "abs": np.abs, "cosh": np.cosh, "sinh": np.sinh, "tanh": np.tanh}
        for name, j in names.items():
            env[name] = points[:, j]
        try:
            vals = eval(expr, {"__builtins__": {}}, env)  # noqa: S307 - desk tool
        except Exception as exc:
            raise InputDataError(f"cannot evaluate expression {expr!r}: {exc}") from exc
        return np.broadcast_to(np.asarray(vals, dtype=complex), (points.shape[0],))

    return f


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_hermite_coeffs(args):
    data = _load_json(args.input)
    d = int(data.get("dimension", 1))
    degree = args.degree if args.degree is not None else int(data.get("degree", 8))
    if "expression" in data:
        f = _expression_callback(data["expression"], d)
    elif "coeffs" in data:
        base = CoefficientExpansion.from_json_dict(data)
        f = lambda pts: synthesize(base, pts)  # noqa: E731
    else:
        raise InputDataError("input must contain 'expression' or an expansion with 'coeffs'")
    quad_order = args.quad_order if args.quad_order is not None else degree + 20
    exp = hermite_coefficients(f, d, degree, quad_order)
    return _emit({"result": exp.to_json_dict()}, args)


def cmd_bargmann(args):
    exp = CoefficientExpansion.from_json_dict(_load_json(args.input))
    F = bargmann_coeff(exp)
    payload = {"result": F.to_json_dict()}
    if args.cross_check and exp.dimension == 1:
        rng = np.random.default_rng(args.seed)
        rows = []
        quad_order = args.quad_order if args.quad_order is not None else 60
        for _ in range(args.cross_check):
            z = complex(*(rng.uniform(-2, 2, size=2)))
            via_coeff = evaluate_fock(F, z)
            via_integral = bargmann_integral(lambda pts: synthesize(exp, pts), z,
                                             quad_order)
            rows.append({"z": [z.real, z.imag],
                         "coefficient_route": [via_coeff.real, via_coeff.imag],
                         "integral_route": [via_integral.real, via_integral.imag],
                         "abs_diff": abs(via_coeff - via_integral)})
        payload["cross_check"] = rows
    return _emit(payload, args)


def _matrix_command(args, builder, loader):
    symbol = loader(_load_json(args.input))
    degree = args.degree if args.degree is not None else 8
    M = builder(symbol, degree)
    return _emit({"result": M.to_json_dict()}, args, csv_rows=_matrix_csv(M))


def cmd_wick_matrix(args):
    return _matrix_command(args, wick_matrix, WickSymbol.from_json_dict)


def cmd_antiwick_matrix(args):
    return _matrix_command(args, antiwick_matrix, WickSymbol.from_json_dict)


def cmd_kn_matrix(args):
    return _matrix_command(args, kn_matrix, RealSymbol.from_json_dict)


def cmd_weyl_matrix(args):
    return _matrix_command(args, weyl_matrix, RealSymbol.from_json_dict)


def cmd_to_wick(args):
    b = RealSymbol.from_json_dict(_load_json(args.input))
    a = real_to_wick_symbol(b, args.degree)
    return _emit({"result": a.to_json_dict()}, args)


def cmd_expand_antiwick(args):
    a = WickSymbol.from_json_dict(_load_json(args.input))
    decomp = decompose(a, args.order)
    trunc = args.trunc_degree if args.trunc_degree is not None else max(8, a.total_degree + 2)
    deviation = verify_decomposition(a, args.order, trunc)
    return _emit({"result": decomp.to_json_dict(),
                  "verification": {"trunc_degree": trunc, "max_deviation": deviation}},
                 args)


def cmd_garding(args):
    a = WickSymbol.from_json_dict(_load_json(args.input))
    truncations = [int(t) for t in args.truncations.split(",")]
    report = garding_check(a, truncations)
    rows = [("truncation", "min_real_eigenvalue", "max_imag_norm")]
    rows += list(zip(report.truncation_degrees, report.min_real_eigenvalues,
                     report.max_imag_norms))
    return _emit({"result": report.to_json_dict()}, args, csv_rows=rows)


def cmd_classify(args):
    exp = CoefficientExpansion.from_json_dict(_load_json(args.input))
    fit = classify_decay(exp, args.family)
    return _emit({"result": fit.to_json_dict()}, args)


def cmd_bound_check(args):
    a = WickSymbol.from_json_dict(_load_json(args.input))
    grid = pair_grid(a.dimension, radius=args.grid_radius,
                     points_per_axis=args.grid_points)
    if args.mode == "gs":
        report = symbol_bound_check(a, args.s, args.r, args.direction, grid)
    else:
        weight = ShubinWeight(t=args.weight_t, rho=args.rho)
        report = shubin_estimate_check(a, weight, args.max_order, args.n_decay, grid)
    return _emit({"result": report.to_json_dict()}, args)


# ---------------------------------------------------------------------------
# selftest: the quadrature-vs-closed-form oracle suite
# ---------------------------------------------------------------------------

def _selftest_cases():
    checks = []

    def check(name, dev, tol):
        checks.append((name, float(dev), tol, dev <= tol))

    # Gauss-Hermite moments against the analytic double-factorial formula
    rule = gauss_hermite(12)
    for k in range(0, 23, 2):
        exact = math.sqrt(math.pi) * math.prod(range(1, k, 2)) / 2 ** (k // 2)
        approx = float(np.sum(rule.weights * rule.nodes**k))
        check(f"gauss-hermite moment x^{k}", abs(approx - exact) / max(1.0, exact), 1e-12)

    # Bargmann basis map via the kernel integral
    from .hermite import hermite_function
    for n in range(5):
        z = 0.7 + 0.4j
        got = bargmann_integral(
            lambda pts, n=n: np.array([hermite_function((n,), p) for p in pts]), [z], 60)
        want = z**n / math.sqrt(math.factorial(n))
        check(f"bargmann integral h_{n} -> e_{n}", abs(got - want), 1e-8)

    # Wick matrices against quadrature of the defining integral
    zs = [0.5 + 0.3j, -0.8 + 0.1j, 0.2 - 0.6j]
    for p in range(4):
        for q in range(4):
            a = WickSymbol(1, {((p,), (q,)): 1.0})
            M = wick_matrix(a, 6)
            worst = 0.0
            for g in range(0, 7, 3):
                F = CoefficientExpansion(1, "fock", {(g,): 1.0})
                for z in zs:
                    direct = wick_apply_quadrature(a, F, z)
                    closed = matrix_apply_at_point(M, F, z)
                    worst = max(worst, abs(direct - closed))
            check(f"wick matrix z^{p} wbar^{q} vs integral", worst, 1e-8)

    # anti-Wick matrices against quadrature
    for p in range(3):
        for q in range(3):
            a0 = WickSymbol(1, {((p,), (q,)): 1.0}, point_symbol=True)
            M = antiwick_matrix(a0, 6)
            worst = 0.0
            for g in range(0, 7, 3):
                F = CoefficientExpansion(1, "fock", {(g,): 1.0})
                for z in zs:
                    direct = wick_apply_quadrature(a0, F, z)
                    closed = matrix_apply_at_point(M, F, z)
                    worst = max(worst, abs(direct - closed))
            check(f"anti-wick matrix w^{p} wbar^{q} vs integral", worst, 1e-8)

    # Fock inner product: coefficient route vs polar quadrature
    rng = np.random.default_rng(7)
    for trial in range(3):
        coeffs = {(k,): complex(*rng.standard_normal(2)) for k in range(6)}
        F = CoefficientExpansion(1, "fock", coeffs)
        coeff_route = expansion_inner(F, F)
        quad_route = fock_inner_quadrature(F, F)
        check(f"fock inner product trial {trial}", abs(coeff_route - quad_route), 1e-8)

    return checks


def cmd_selftest(args):
    checks = _selftest_cases()
    width = max(len(name) for name, *_ in checks)
    lines = []
    for name, dev, tol, ok in checks:
        status = "PASS" if ok else "FAIL"
        line = f"{name:<{width}}  {dev:12.3e}  (tol {tol:g})  {status}"
        lines.append(line)
        print(line)
    failed = [c for c in checks if not c[3]]
    print(f"{len(checks) - len(failed)}/{len(checks)} oracle checks passed")
    if args.output:
        _emit({"result": [{"name": n, "deviation": d, "tolerance": t, "passed": ok}
                          for n, d, t, ok in checks]}, args)
    if failed:
        raise NumericalError(f"{len(failed)} selftest oracle checks failed")
    return None


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="wickops",
        description="Hermite/Bargmann calculus: quantization matrices, the "
                    "Wick-to-anti-Wick expansion, decay classification and "
                    "spectral lower-bound probes.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, needs_input=True, needs_output=True):
        p = sub.add_parser(name, help=help_)
        if needs_input:
            p.add_argument("--input", required=True, help="input JSON file")
        if needs_output:
            p.add_argument("--output", required=needs_output, help="output report file")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=func)
        return p

    p = add("hermite-coeffs", cmd_hermite_coeffs,
            "expand a sampled function in Hermite functions")
    p.add_argument("--degree", type=int, help="expansion degree bound")
    p.add_argument("--quad-order", type=int)

    p = add("bargmann", cmd_bargmann, "transform a hermite expansion to the Fock side")
    p.add_argument("--cross-check", type=int, default=0,
                   help="compare against the kernel integral at this many random points")
    p.add_argument("--quad-order", type=int)

    for name, func, help_ in [
        ("wick-matrix", cmd_wick_matrix, "matrix of a Wick operator"),
        ("antiwick-matrix", cmd_antiwick_matrix, "matrix of an anti-Wick operator"),
        ("kn-matrix", cmd_kn_matrix, "matrix of a Kohn-Nirenberg quantization"),
        ("weyl-matrix", cmd_weyl_matrix, "matrix of a Weyl quantization"),
    ]:
        p = add(name, func, help_)
        p.add_argument("--degree", type=int, help="domain degree bound (default 8)")

    p = add("to-wick", cmd_to_wick, "Wick symbol of a real quantization")
    p.add_argument("--degree", type=int, help="probe degree (default: symbol degree)")

    p = add("expand-antiwick", cmd_expand_antiwick,
            "Wick-to-anti-Wick decomposition with matrix verification")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--trunc-degree", type=int)

    p = add("garding", cmd_garding, "spectral lower-bound probe across truncations")
    p.add_argument("--truncations", required=True, help="comma-separated degrees, e.g. 8,16,32")

    p = add("classify", cmd_classify, "decay classification of an expansion")
    p.add_argument("--family", choices=("roumieu_s", "flat_sigma"), default="roumieu_s")

    p = add("bound-check", cmd_bound_check, "grid check of symbol-class bounds")
    p.add_argument("--mode", choices=("gs", "shubin"), default="gs")
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--direction", choices=("gain", "loss"), default="loss")
    p.add_argument("--weight-t", type=float, default=2.0)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--max-order", type=int, default=1)
    p.add_argument("--n-decay", type=int, default=0)
    p.add_argument("--grid-radius", type=float, default=4.0)
    p.add_argument("--grid-points", type=int, default=5)

    p = add("selftest", cmd_selftest, "run the quadrature-vs-closed-form oracle suite",
            needs_input=False, needs_output=False)
    p.add_argument("--output", help="optional JSON report path")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        _print_error("usage", exc)
        return EXIT_USAGE
    except InputDataError as exc:
        _print_error("input-data", exc)
        return EXIT_INPUT
    except NumericalError as exc:
        _print_error("numerical", exc)
        return EXIT_NUMERICAL
    except CalculusError as exc:  # pragma: no cover - base-class fallback
        _print_error("error", exc)
        return EXIT_NUMERICAL
    return EXIT_OK


def _print_error(kind, exc):
    json.dump({"error": {"kind": kind, "message": str(exc)}}, sys.stderr)
    sys.stderr.write("\n")


if __name__ == "__main__":
    sys.exit(main())
