"""Command line interface: ``roughfn <subcommand> [flags]``.

Every subcommand writes CSV files (and an SVG plot where useful) into
``--out`` and prints a one-line summary. Errors exit with status 2 and a
message naming the violated condition.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dimension import GraphSample, ScaleLadder, estimate_dim, theoretical_dim
from .errors import InvalidParameterError, RoughFnError
from .functions import parse_spec
from .interp import (InterpolationProblem, continuity_condition, fif_solution, ifs_from_g,
                     interpolation_values, render_attractor)
from .io import fmt, read_xy_csv, write_csv
from .numerics import ACCEPTANCE_RESOLUTION, QuadratureSpec
from .operators import DEFAULT_TOL, EquationParams, solve, solve_b_zero
from .svg import write_plot
from .wfourier import (CLASSICAL, COS, HAT, SIN, TILDE, BasisIndex, WfParams,
                       classical_coeffs, eval_basis, gram_matrix, l2_error_512,
                       quadrature_coeff_fn, synthesize, transform_coeffs)

L2_POINTS = 512


def _p_value(s: str) -> float:
    if s.lower() in ("inf", "infinity"):
        return math.inf
    return float(s)


def _midpoints(n: int) -> np.ndarray:
    if n < 2:
        raise InvalidParameterError(f"--samples must be at least 2, got {n}")
    return (np.arange(n) + 0.5) / n


def _check_tol(tol: float):
    if not tol > 0:
        raise InvalidParameterError(f"--tol must be positive, got {tol!r}")


def _say(*parts):
    print(" ".join(parts))


# -- subcommands ------------------------------------------------------------------

def cmd_solve(args) -> int:
    _check_tol(args.tol)
    g = parse_spec(args.g)
    x = _midpoints(args.samples)
    out = Path(args.out)
    if args.b == 0:
        if args.g0 is None:
            raise InvalidParameterError(
                "b = 0 is outside the dilation setting (f(bx) no longer depends on x); the "
                "solution is f = g + a/(1-a) g(0); pass --g0 <value of g(0)> to use that branch")
        f = solve_b_zero(args.a, g, args.g0)
        write_csv(out / "solve.csv", ["x", "f"], zip(x, f(x)))
        _say(f"b=0 branch: wrote {len(x)} samples to {out / 'solve.csv'}")
        return 0
    params = EquationParams(args.a, args.b, args.p)
    sol = solve(params, g, None, args.tol)
    write_csv(out / "solve.csv", ["x", "f"], zip(x, sol(x)))
    _say(f"regime={sol.regime.value} terms={sol.truncation} tail_bound={fmt(sol.tail_bound)}",
         f"wrote {len(x)} samples to {out / 'solve.csv'}")
    return 0


def cmd_interp(args) -> int:
    _check_tol(args.tol)
    xs, ys = read_xy_csv(args.data)
    prob = InterpolationProblem.from_points(xs, ys, args.a)
    pw = prob.generator(args.construction)
    sol = fif_solution(pw, args.a, args.tol)
    x = _midpoints(args.samples)
    out = Path(args.out)
    fx = sol(x)
    write_csv(out / "interp.csv", ["x", "f"], zip(x, fx))
    nodes = prob.nodes
    closed = interpolation_values(pw, args.a, prob.N)
    write_csv(out / "nodes.csv", ["n", "x", "y", "closed_form", "series"],
              zip(range(prob.N + 1), nodes, prob.y, closed, sol(nodes)))
    ifs = ifs_from_g(pw, args.a)
    write_csv(out / "ifs.csv", ["n", "x_scale", "x_shift", "a", "g_at_0", "g_at_1"],
              ((m.n, 1.0 / m.N, (m.n - 1) / m.N, m.a, float(m.g(0.0)), float(m.g(1.0)))
               for m in ifs.maps))
    verdict = "continuous" if continuity_condition(pw, args.a) else "discontinuous"
    write_csv(out / "interp_summary.csv", ["key", "value"],
              [("a", args.a), ("N", prob.N), ("construction", args.construction),
               ("verdict", verdict), ("terms", sol.truncation)])
    if args.attractor:
        cloud = render_attractor(ifs, args.attractor + 100, (0.0, float(closed[0])), 100, args.seed)
        write_csv(out / "attractor.csv", ["x", "y"], zip(cloud.x, cloud.y))
    write_plot(out / "interp.svg", [(x, fx, "black", "series")],
               f"fractal interpolation, a={fmt(args.a)}", (nodes, prob.y, "red"))
    _say(f"verdict={verdict} N={prob.N} wrote {out / 'interp.csv'}")
    return 0


def cmd_basis(args) -> int:
    _check_tol(args.tol)
    wp = WfParams(args.a)
    idx = BasisIndex(args.kind, 0 if args.kind == "const" else args.k)
    x = _midpoints(args.samples)
    v = np.broadcast_to(eval_basis(args.basis, idx, wp, x, args.tol), x.shape)
    out = Path(args.out)
    write_csv(out / "basis.csv", ["x", "value"], zip(x, v))
    write_plot(out / "basis.svg", [(x, v, "black", f"{args.basis} {idx}")],
               f"{args.basis} basis {idx}, a={fmt(args.a)}")
    _say(f"wrote {len(x)} samples of {args.basis} {idx} to {out / 'basis.csv'}")
    return 0


def cmd_gram(args) -> int:
    _check_tol(args.tol)
    if args.size < 1:
        raise InvalidParameterError(f"--size must be at least 1, got {args.size}")
    wp = WfParams(args.a)
    idx = [BasisIndex(args.family, k) for k in range(1, args.size + 1)]
    q = QuadratureSpec(args.resolution)
    methods = ["analytic", "quadrature"] if args.method == "both" else [args.method]
    mats = {m: gram_matrix(idx, wp, m, args.basis, q, args.tol).matrix for m in methods}
    header = ["k", "l"] + methods
    rows = []
    for i in range(args.size):
        for j in range(args.size):
            rows.append([i + 1, j + 1] + [mats[m][i, j] for m in methods])
    out = Path(args.out)
    if args.method == "both":
        header.append("abs_diff")
        for r in rows:
            r.append(abs(r[2] - r[3]))
    write_csv(out / "gram.csv", header, rows)
    msg = f"wrote {args.size}x{args.size} {args.basis} Gram block to {out / 'gram.csv'}"
    if args.method == "both":
        msg += f" max_abs_diff={fmt(float(np.max(np.abs(mats['analytic'] - mats['quadrature']))))}"
    _say(msg)
    return 0


def cmd_approx(args) -> int:
    if args.terms < 0:
        raise InvalidParameterError(f"--terms must be non-negative, got {args.terms}")
    h = parse_spec(args.target)
    wp = WfParams(args.a)
    q = QuadratureSpec(args.resolution)
    K = args.terms
    cv = classical_coeffs(h, K, q)
    tv = transform_coeffs(cv, wp, coeff_fn=quadrature_coeff_fn(h, q))
    x = (np.arange(L2_POINTS) + 0.5) / L2_POINTS
    hv = np.asarray(h(x), dtype=float)
    cl = np.broadcast_to(synthesize(cv, None, x), x.shape)
    ti = np.broadcast_to(synthesize(tv, wp, x, args.tol), x.shape)
    err_c = l2_error_512(h, lambda t: synthesize(cv, None, t))
    err_t = l2_error_512(h, lambda t: synthesize(tv, wp, t, args.tol))
    out = Path(args.out)
    write_csv(out / "approx.csv", ["x", "h", f"classical_{K}", f"tilde_{K}"], zip(x, hv, cl, ti))
    write_csv(out / "approx_summary.csv",
              ["target", "a", "terms", "classical_l2", "tilde_l2"],
              [(args.target, args.a, K, err_c, err_t)])
    write_csv(out / "approx_coeffs.csv", ["basis", "kind", "k", "value"],
              list(cv.rows()) + list(tv.rows()))
    write_plot(out / "approx.svg",
               [(x, hv, "#1f77b4", "h"), (x, cl, "red", f"classical K={K}"),
                (x, ti, "black", f"tilde K={K}")],
               f"{args.target}, a={fmt(args.a)}, K={K}")
    _say(f"classical_l2={fmt(err_c)} tilde_l2={fmt(err_t)} terms={K} a={fmt(args.a)}")
    return 0


def cmd_dim(args) -> int:
    _check_tol(args.tol)
    g = parse_spec(args.g)
    sol = solve(EquationParams(args.a, args.b, args.p), g, None, args.tol)
    gs = GraphSample.from_function(sol, args.log2_samples)
    est = estimate_dim(gs, ScaleLadder(args.jmin, args.jmax))
    out = Path(args.out)
    write_csv(out / "dim.csv", ["j", "eps", "count", "anchored_mean"],
              zip(est.js, 2.0 ** -est.js.astype(float), est.counts, est.anchored_mean))
    try:
        theo = fmt(theoretical_dim(args.a, args.b))
    except RoughFnError:
        theo = "n/a"
    write_csv(out / "dim_summary.csv", ["a", "b", "estimate", "anchored_estimate", "theoretical"],
              [(args.a, args.b, est.dimension, est.anchored_dimension, theo)])
    _say(f"estimate={fmt(est.dimension)} anchored={fmt(est.anchored_dimension)} theoretical={theo}")
    return 0


# -- parser -----------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, a=True, b=False, samples=None):
    if a:
        p.add_argument("--a", type=float, required=True, help="scale parameter a")
    if b:
        p.add_argument("--b", type=float, required=True, help="dilation factor b")
        p.add_argument("--p", type=_p_value, default=math.inf, help="exponent p of L^p (default inf)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="series tail tolerance")
    if samples is not None:
        p.add_argument("--samples", type=int, default=samples, help="number of midpoint samples")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="random seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="roughfn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve f(x) - a f(bx) = g(x) on [0, 1]")
    _common(p, b=True, samples=512)
    p.add_argument("--g", required=True, help="generator spec, e.g. cospi or step:0.5:0.5")
    p.add_argument("--g0", type=float, default=None, help="value g(0) for the b = 0 branch")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("interp", help="fractal interpolation of x,y data on n/N")
    _common(p, samples=512)
    p.add_argument("--data", required=True, help="CSV with header x,y")
    p.add_argument("--construction", choices=["step", "affine"], default="step")
    p.add_argument("--attractor", type=int, default=0, help="chaos-game points to write (0: none)")
    p.set_defaults(func=cmd_interp)

    p = sub.add_parser("basis", help="sample one basis function")
    _common(p, samples=512)
    p.add_argument("--kind", choices=["const", COS, SIN], default=COS)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--basis", choices=[CLASSICAL, HAT, TILDE], default=TILDE)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("gram", help="Gram block of the hat or tilde basis")
    _common(p)
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--method", choices=["analytic", "quadrature", "both"], default="analytic")
    p.add_argument("--family", choices=[COS, SIN], default=COS)
    p.add_argument("--basis", choices=[HAT, TILDE], default=HAT)
    p.add_argument("--resolution", type=int, default=ACCEPTANCE_RESOLUTION)
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("approx", help="classical and tilde partial sums of a target")
    _common(p)
    p.add_argument("--target", default="xm05", help="target spec, e.g. xm05")
    p.add_argument("--terms", type=int, default=10, help="harmonics K (0: constant only)")
    p.add_argument("--resolution", type=int, default=ACCEPTANCE_RESOLUTION)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("dim", help="box-counting dimension of a solution graph")
    _common(p, b=True)
    p.add_argument("--g", default="cospi")
    p.add_argument("--log2-samples", type=int, default=16)
    p.add_argument("--jmin", type=int, default=4)
    p.add_argument("--jmax", type=int, default=12)
    p.set_defaults(func=cmd_dim)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RoughFnError as exc:
        print(f"roughfn {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
