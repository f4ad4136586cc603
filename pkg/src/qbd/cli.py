"""Command line interface.

    qbd <subcommand> [flags]

Subcommands: eval, coeffs, kernel, jacobi, eigen, converge, voronovskaya,
derivative, shape, kantorovich.  Output is CSV (default) or JSON on
stdout or --out; identical flags produce byte-identical output.  Exit
codes: 0 success, 1 config error, 2 convergence error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .catalog import get_function
from .durrmeyer import (
    JacobiWeight,
    durrmeyer_coeffs,
    eigenvalue_lambda,
    kernel_phi,
    kernel_eval,
    kernel_truncation_order,
    make_spec,
    operator_function,
)
from .errors import ConfigError, ConvergenceError, QbdError
from .experiments import (
    ExperimentConfig,
    Table,
    convergence_experiment,
    derivative_experiment,
    emit,
    kantorovich_limit_experiment,
    parse_qn,
    QnSequence,
    shape_experiment,
    voronovskaya_experiment,
    _fmt,
)
from .qcore import TailTolerance
from .qjacobi import eigenvalue_mu, qjacobi_norm, qjacobi_rodrigues, qjacobi_series


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # map argparse failures to exit code 1
        raise ConfigError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="qbd", description=__doc__.splitlines()[0] if __doc__ else "")
    sub = p.add_subparsers(dest="command", required=True)
    names = ["eval", "coeffs", "kernel", "jacobi", "eigen", "converge",
             "voronovskaya", "derivative", "shape", "kantorovich"]
    for name in names:
        s = sub.add_parser(name)
        s.add_argument("--n", type=str, default=None, help="degree or comma list")
        s.add_argument("--q", type=float, default=None, help="fixed q in (0,1)")
        s.add_argument("--qn", type=str, default=None,
                       help="q_n rule: cn:c, pow:gamma, nlogn, const:q")
        s.add_argument("--alpha", type=str, default="0")
        s.add_argument("--beta", type=float, default=0.0)
        s.add_argument("--fn", type=str, default="affine")
        s.add_argument("--x", type=str, default=None, help="point or comma list")
        s.add_argument("--grid", type=int, default=101)
        s.add_argument("--tol", type=float, default=1e-14)
        s.add_argument("--format", choices=("csv", "json"), default="csv")
        s.add_argument("--out", type=str, default=None)
    return p


def _int_list(text: str, flag: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(","))
    except (ValueError, AttributeError):
        raise ConfigError(f"{flag} expects an integer or comma list, got {text!r}") from None


def _float_list(text: str, flag: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except (ValueError, AttributeError):
        raise ConfigError(f"{flag} expects a real or comma list, got {text!r}") from None


def _single(values: tuple, flag: str):
    if len(values) != 1:
        raise ConfigError(f"{flag} expects a single value here, got {len(values)}")
    return values[0]


def _need(value, flag: str):
    if value is None:
        raise ConfigError(f"flag {flag} is required for this subcommand")
    return value


def _alpha_scalar(args) -> float:
    vals = _float_list(args.alpha, "--alpha")
    return _single(vals, "--alpha")


def _sequence(args) -> QnSequence:
    if args.q is not None and args.qn is not None:
        raise ConfigError("give either --q or --qn, not both")
    if args.qn is not None:
        return parse_qn(args.qn)
    if args.q is not None:
        return QnSequence("const", args.q)
    raise ConfigError("this subcommand needs --q or --qn")


def _experiment_config(args) -> ExperimentConfig:
    return ExperimentConfig(
        weight=JacobiWeight(_alpha_scalar(args), args.beta),
        fn_id=args.fn,
        ns=_int_list(_need(args.n, "--n"), "--n"),
        seq=_sequence(args),
        xs=_float_list(args.x, "--x") if args.x is not None else (),
        grid=args.grid,
        tol=TailTolerance(eps=args.tol),
    )


def _base_pairs(args, n_text: str, extra: tuple = ()) -> tuple:
    pairs = [("n", n_text), ("q", _fmt(float(args.q))),
             ("alpha", _fmt(_alpha_scalar(args))), ("beta", _fmt(float(args.beta)))]
    return tuple(pairs) + tuple(extra) + (("tol", _fmt(float(args.tol))),)


def _run_eval(args) -> Table:
    n = _single(_int_list(_need(args.n, "--n"), "--n"), "--n")
    _need(args.q, "--q")
    spec = make_spec(n, args.q, _alpha_scalar(args), args.beta, TailTolerance(eps=args.tol))
    f = get_function(args.fn)
    if args.x is not None:
        xs = _float_list(args.x, "--x")
    else:
        xs = tuple(np.linspace(0.0, 1.0, args.grid))
    img = operator_function(f, spec)
    rows = []
    for x in xs:
        cv = float(img(x))
        kv = kernel_eval(f, spec, x)
        fx = float(f(x)) if (0.0 < x < 1.0 or (x == 0.0 and f.at_zero) or (x == 1.0 and f.at_one)) else float("nan")
        rows.append((x, fx, cv, kv, abs(cv - kv), abs(cv - fx) if fx == fx else float("nan")))
    fields = ("x", "f", "coeff_form", "kernel_form", "form_diff", "error")
    extra = (("fn", args.fn), ("grid", str(args.grid)))
    return Table(fields, tuple(rows), "eval", _base_pairs(args, str(n), extra))


def _run_coeffs(args) -> Table:
    n = _single(_int_list(_need(args.n, "--n"), "--n"), "--n")
    _need(args.q, "--q")
    spec = make_spec(n, args.q, _alpha_scalar(args), args.beta, TailTolerance(eps=args.tol))
    coeffs = durrmeyer_coeffs(get_function(args.fn), spec)
    rows = tuple((k, float(c)) for k, c in enumerate(coeffs))
    return Table(("k", "coeff"), rows, "coeffs", _base_pairs(args, str(n), (("fn", args.fn),)))


def _run_kernel(args) -> Table:
    n = _single(_int_list(_need(args.n, "--n"), "--n"), "--n")
    _need(args.q, "--q")
    x = _single(_float_list(_need(args.x, "--x"), "--x"), "--x")
    spec = make_spec(n, args.q, _alpha_scalar(args), args.beta, TailTolerance(eps=args.tol))
    beta = args.beta if not spec.weight.is_endpoint_case else 0.0
    shift = spec.weight.beta + 1.0
    rows = []
    for j in range(kernel_truncation_order(spec)):
        node = args.q ** (j + shift)
        rows.append((j, node, kernel_phi(spec, j, x)))
    fields = ("j", "node", "phi")
    return Table(fields, tuple(rows), "kernel", _base_pairs(args, str(n), (("x", _fmt(x)),)))


def _run_jacobi(args) -> Table:
    _need(args.q, "--q")
    degrees = _int_list(args.n, "--n") if args.n is not None else tuple(range(7))
    w = JacobiWeight(_alpha_scalar(args), args.beta)
    tol = TailTolerance(eps=args.tol)
    rows = []
    for r in degrees:
        ps = qjacobi_series(r, w, args.q).poly
        pr = qjacobi_rodrigues(r, w, args.q).poly
        nu = qjacobi_norm(r, w, args.q, tol)
        for k in range(r + 1):
            rows.append((r, k, ps.coeff(k), pr.coeff(k), abs(ps.coeff(k) - pr.coeff(k)), nu))
    fields = ("r", "k", "series_coeff", "rodrigues_coeff", "coeff_diff", "norm")
    n_text = ",".join(str(r) for r in degrees)
    return Table(fields, tuple(rows), "jacobi", _base_pairs(args, n_text))


def _run_eigen(args) -> Table:
    _need(args.q, "--q")
    ns = _int_list(_need(args.n, "--n"), "--n")
    w = JacobiWeight(_alpha_scalar(args), args.beta)
    rows = []
    for n in ns:
        for r in range(min(n, 8) + 1):
            rows.append((n, r, eigenvalue_lambda(n, r, w, args.q), eigenvalue_mu(r, w, args.q)))
    fields = ("n", "r", "lambda", "mu")
    return Table(fields, tuple(rows), "eigen", _base_pairs(args, ",".join(str(n) for n in ns)))


def _run_kantorovich(args) -> Table:
    n = _single(_int_list(_need(args.n, "--n"), "--n"), "--n")
    _need(args.q, "--q")
    alphas = _float_list(args.alpha, "--alpha")
    if alphas == (0.0,):
        alphas = (-0.5, -0.9, -0.99)
    return kantorovich_limit_experiment(get_function(args.fn), n, args.q, alphas,
                                        grid=args.grid, tol=TailTolerance(eps=args.tol))


_RUNNERS = {
    "eval": _run_eval,
    "coeffs": _run_coeffs,
    "kernel": _run_kernel,
    "jacobi": _run_jacobi,
    "eigen": _run_eigen,
    "converge": lambda args: convergence_experiment(_experiment_config(args)),
    "voronovskaya": lambda args: voronovskaya_experiment(_voron_config(args)),
    "derivative": lambda args: derivative_experiment(_experiment_config(args)),
    "shape": lambda args: shape_experiment(_experiment_config(args)),
    "kantorovich": _run_kantorovich,
}


def _voron_config(args) -> ExperimentConfig:
    if args.x is None:
        args.x = "0.5"
    return _experiment_config(args)


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        table = _RUNNERS[args.command](args)
        emit(table, args.format, args.out)
        return 0
    except ConfigError as exc:
        print(f"qbd: config error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"qbd: convergence error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qbd: i/o error: {exc}", file=sys.stderr)
        return 3
    except QbdError as exc:
        print(f"qbd: config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
