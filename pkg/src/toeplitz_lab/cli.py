"""Command-line front end.

Every subcommand prints a table (CSV with a header row, or JSON) to stdout
or to ``--output``. Reals use Python's shortest round-trip representation,
so identical arguments give identical bytes.

Exit codes: 0 success, 1 usage error, 2 numerical failure (solver did not
converge, size guard tripped).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import banded, nilpotent, permutations, spectra
from .errors import ConvergenceError, SizeGuardError
from .integral_operator import KernelId, nystrom
from .report import ReportConfig, build_discrepancy_report
from .toeplitz_core import materialize, triangular_symbol

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def render_table(columns, rows, fmt: str) -> str:
    if fmt == "json":
        data = [{c: _jsonable(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(data, indent=2) + "\n"
    lines = [",".join(columns)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonneg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def _seed(text: str) -> int:
    value = _nonneg(text)
    if value >= 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a real number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive real, got {value}")
    return value


def _int_list(text: str) -> list[int]:
    return [_positive(t) for t in text.split(",") if t.strip()]


def _permutation(args) -> permutations.Permutation:
    if args.perm is not None:
        try:
            image = tuple(int(t) for t in args.perm.split(","))
        except ValueError:
            raise UsageError(f"--perm must be comma-separated integers, got {args.perm!r}")
        p = permutations.Permutation(image)
        if args.n is not None and args.n != p.n:
            raise UsageError(f"--n {args.n} disagrees with --perm of length {p.n}")
        return p
    if args.n is None:
        raise UsageError("give --n (with --seed) or --perm")
    return permutations.sample_uniform(args.n, args.seed)


def cmd_displacement(args):
    h = permutations.histogram(_permutation(args))
    return ["k", "d_k"], [list(kv) for kv in h.items()]


def cmd_mc_moments(args):
    est = permutations.mc_moments_dk(args.n, args.k, args.trials, args.seed, args.workers)
    exact = permutations.variance_dk_exact(args.n, args.k) if args.n >= 2 else 0.0
    cols = ["n", "k", "trials", "seed", "workers", "mean", "variance", "stderr",
            "expected_dk", "variance_exact"]
    row = [args.n, args.k, args.trials, args.seed, args.workers, est.mean, est.variance,
           est.stderr, permutations.expected_dk(args.n, args.k), exact]
    return cols, [row]


def cmd_concentration(args):
    res = permutations.concentration_check(
        args.n, args.k, args.epsilon, args.trials, args.seed, args.workers
    )
    cols = ["n", "k", "epsilon", "trials", "empirical_prob", "chebyshev_bound", "allowed",
            "within_bound", "literal_centre_prob"]
    row = [args.n, args.k, args.epsilon, args.trials, res.empirical_prob, res.chebyshev_bound,
           res.allowed, res.within_bound, res.literal_centre_prob]
    return cols, [row]


def cmd_expectation(args):
    return ["n", "k", "expected_dk"], [[args.n, args.k, permutations.expected_dk(args.n, args.k)]]


def cmd_variance(args):
    row = [args.n, args.k, permutations.variance_dk_exact(args.n, args.k),
           permutations.variance_dk_asymptotic(args.n, args.k)]
    return ["n", "k", "variance_exact", "variance_leading"], [row]


def cmd_spectrum(args):
    if args.target == "kn":
        if args.n is None:
            raise UsageError("spectrum --target kn needs --n")
        m, scale = materialize(triangular_symbol(args.n)), args.n
    elif args.target == "pn":
        p = _permutation(args)
        m = materialize(permutations.build_pn(permutations.histogram(p)))
        if args.symmetrize:
            m = 0.5 * (m + m.T)
        elif not np.array_equal(m, m.T):
            raise UsageError("P_n is not symmetric for this permutation; pass --symmetrize")
        scale = p.n
    else:
        if args.m is None:
            raise UsageError("spectrum --target nystrom needs --m")
        m, scale = nystrom(KernelId(args.kernel), args.m), 1
    eig = spectra.jacobi_eigen(m).eigenvalues
    top = len(eig) if args.top is None else min(args.top, len(eig))
    rows = [[i, eig[i], eig[i] / scale] for i in range(top)]
    return ["index", "eigenvalue", "scaled"], rows


def cmd_cosine_approx(args):
    n = args.n
    eig = spectra.jacobi_eigen(materialize(triangular_symbol(n))).eigenvalues
    rows = []
    for k in range(min(args.k_max, n - 1) + 1):
        c = spectra.cosine_symbol_sum(n, k)
        one_sided = 0.5 if k == 0 else (1 - np.cos(np.pi * k)) / (np.pi * k) ** 2
        rows.append([k, c, c / n, float(one_sided), 2 * float(one_sided), eig[k] / n])
    cols = ["k", "cosine_sum", "cosine_sum_over_n", "one_sided_integral",
            "two_sided_integral", "eigenvalue_over_n"]
    return cols, rows


def cmd_trace_powers(args):
    n = args.n
    eig = spectra.jacobi_eigen(materialize(triangular_symbol(n))).eigenvalues
    rows = []
    for p in range(1, args.p + 1):
        limit = spectra.paper_trace_limit(p, args.terms)
        literal = float(np.sum(eig**p)) / n
        rows.append([n, p, literal, float(np.sum((eig / n) ** p)), limit.value, limit.tail_bound])
    return ["n", "p", "trace_over_n", "scaled_trace", "series_limit", "series_tail_bound"], rows


def cmd_banded_det(args):
    if args.x is not None:
        poly = banded.det_recurrence(args.n)
        return ["n", "x", "polynomial", "lu"], [[args.n, args.x, float(poly(args.x)),
                                                 banded.det_numeric(args.n, args.x)]]
    poly = banded.det_recurrence(args.n)
    if args.check:
        oracle = banded.det_leibniz_bounded(args.n)
        size = max(len(poly.coeffs), len(oracle.coeffs))
        pad = lambda c: c + (0,) * (size - len(c))
        rows = [[j, a, b] for j, (a, b) in enumerate(zip(pad(poly.coeffs), pad(oracle.coeffs)))]
        return ["j", "recurrence", "leibniz"], rows
    return ["j", "coefficient"], [[j, c] for j, c in enumerate(poly.coeffs)]


def cmd_nilpotent_pow(args):
    spec = nilpotent.UnipotentSpec(args.n, args.x)
    fn = nilpotent.power_binomial if args.method == "binomial" else nilpotent.power_direct
    m = fn(spec, args.k)
    rows = [[i + 1, j + 1, m[i, j]] for i in range(args.n) for j in range(args.n)]
    return ["i", "j", "value"], rows


def cmd_path_count(args):
    w = nilpotent.path_count(args.n, args.k, args.i, args.j)
    return ["n", "k", "i", "j", "coefficient", "power"], [[args.n, args.k, args.i, args.j,
                                                            w.coefficient, w.power]]


def run_report(args) -> str:
    try:
        cfg = ReportConfig(
            m=args.m, quad_points=args.quad, n_list=tuple(args.n_list), k_max=args.k_max,
            p_max=args.p_max, spectral_tol=args.spectral_tol, quadrature_tol=args.quad_tol,
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    rep = build_discrepancy_report(cfg)
    if args.format == "json":
        return json.dumps(rep.to_dict(), indent=2) + "\n"
    cols = ["quantity", "paper_value", "computed_value", "abs_diff", "rel_diff", "tolerance", "verdict"]
    rows = [[getattr(e, c) for c in cols] for e in rep.entries]
    return render_table(cols, rows, "csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toeplitz-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--output", default=None, help="write here instead of stdout")
        return p

    def perm_args(p):
        p.add_argument("--n", type=_positive)
        p.add_argument("--perm", help="one-line notation, e.g. 2,4,1,3")
        p.add_argument("--seed", type=_seed, default=0)

    def mc_args(p):
        p.add_argument("--n", type=_positive, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--trials", type=_positive, default=10_000)
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--workers", type=_positive, default=1)

    p = add("displacement", cmd_displacement, "displacement counts d_k of a permutation")
    perm_args(p)

    mc_args(add("mc-moments", cmd_mc_moments, "Monte Carlo mean and variance of d_k"))

    p = add("concentration", cmd_concentration, "Chebyshev check for d_k/n")
    mc_args(p)
    p.add_argument("--epsilon", type=_positive_float, required=True)

    for name, func, text in [
        ("expectation", cmd_expectation, "E[d_k] = (n-|k|)/n"),
        ("variance", cmd_variance, "exact and leading-order Var(d_k)"),
    ]:
        p = add(name, func, text)
        p.add_argument("--n", type=_positive, required=True)
        p.add_argument("--k", type=int, required=True)

    p = add("spectrum", cmd_spectrum, "Jacobi eigenvalues of K_n, P_n or a Nystrom matrix")
    p.add_argument("--target", choices=["kn", "pn", "nystrom"], required=True)
    perm_args(p)
    p.add_argument("--m", type=_positive)
    p.add_argument("--kernel", choices=[k.value for k in KernelId], default="triangular")
    p.add_argument("--top", type=_positive)
    p.add_argument("--symmetrize", action="store_true", help="use (P + P^T)/2 for pn")

    p = add("cosine-approx", cmd_cosine_approx, "cosine-sum eigenvalue approximation for K_n")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k-max", type=_nonneg, default=4)

    p = add("trace-powers", cmd_trace_powers, "traces of powers of K_n and the series limit")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--terms", type=_positive, default=10**6)

    p = add("banded-det", cmd_banded_det, "det E_n(x) as a polynomial or at a point")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--x", type=float)
    p.add_argument("--check", action="store_true", help="add the Leibniz enumeration column")

    p = add("nilpotent-pow", cmd_nilpotent_pow, "entries of T_n(x)^k")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_nonneg, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--method", choices=["binomial", "direct"], default="binomial")

    p = add("path-count", cmd_path_count, "weighted path count for entry (i, j) of T_n(x)^k")
    for flag in ("--n", "--i", "--j"):
        p.add_argument(flag, type=_positive, required=True)
    p.add_argument("--k", type=_nonneg, required=True)

    p = add("report", None, "full discrepancy report")
    p.add_argument("--m", type=_positive, default=400)
    p.add_argument("--quad", type=_positive, default=4096)
    p.add_argument("--n-list", type=_int_list, default=[100, 200, 400])
    p.add_argument("--k-max", type=_nonneg, default=4)
    p.add_argument("--p-max", type=_positive, default=3)
    p.add_argument("--spectral-tol", type=_positive_float, default=1e-3)
    p.add_argument("--quad-tol", type=_positive_float, default=1e-8)
    return parser


def run(argv) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        if args.command == "report":
            text = run_report(args)
        else:
            cols, rows = args.func(args)
            text = render_table(cols, rows, args.format)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, SizeGuardError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # DomainError and DimensionError are ValueErrors: bad parameters
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
