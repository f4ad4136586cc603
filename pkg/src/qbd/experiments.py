"""Experiment harness: q_n sequences, error sweeps, shape reports, emission.

Every experiment is a pure function from an ExperimentConfig to a Table of
rows; identical configs produce byte-identical CSV.  Error metrics use a
fixed uniform grid (interior-only when the target function is not
evaluable at an endpoint).
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .catalog import get_function
from .durrmeyer import (
    JacobiWeight,
    OperatorSpec,
    eval_operator,
    make_spec,
    operator_function,
    operator_moment,
)
from .errors import ConfigError, ConvergenceError
from .qcore import DEFAULT_TOL, RealFunction, TailTolerance, evaluate_on, q_derivative, q_number
from .qbasis import sign_changes

__all__ = [
    "QnSequence",
    "parse_qn",
    "qn_value",
    "PropertySReport",
    "property_s_report",
    "empirical_modulus",
    "ExperimentConfig",
    "Table",
    "convergence_experiment",
    "voronovskaya_experiment",
    "derivative_experiment",
    "shape_experiment",
    "kantorovich_limit_experiment",
    "emit",
    "render",
]

_QN_RANGE = (0.01, 0.999999)  # values outside are rejected, never clamped


@dataclass(frozen=True)
class QnSequence:
    """Rule n -> q_n.  Kinds: cn (1-c/n), pow (1-n^-gamma), nlogn
    (1-1/(n ln n)), const (fixed q)."""

    kind: str
    param: float | None = None

    def __post_init__(self):
        kind = self.kind
        if kind == "cn":
            if self.param is None or not self.param > 0.0:
                raise ConfigError("qn kind cn requires a parameter c > 0")
        elif kind == "pow":
            if self.param is None or not self.param > 0.0:
                raise ConfigError("qn kind pow requires a parameter gamma > 0")
        elif kind == "nlogn":
            if self.param is not None:
                raise ConfigError("qn kind nlogn takes no parameter")
        elif kind == "const":
            if self.param is None or not 0.0 < self.param < 1.0:
                raise ConfigError("qn kind const requires q in (0,1)")
        else:
            raise ConfigError(f"unknown qn kind {kind!r} (use cn, pow, nlogn or const)")

    @property
    def satisfies_s(self) -> bool:
        """Whether 1-q_n < c/n eventually holds for some c > 0."""
        if self.kind == "cn" or self.kind == "nlogn":
            return True
        if self.kind == "pow":
            return self.param >= 1.0
        return False

    def s_constant(self) -> float | None:
        """A witness c for the property when it holds."""
        if self.kind == "cn":
            return self.param
        if self.kind == "nlogn" or (self.kind == "pow" and self.param >= 1.0):
            return 1.0
        return None

    def label(self) -> str:
        if self.kind == "nlogn":
            return "nlogn"
        return f"{self.kind}:{self.param:.17g}"


def parse_qn(text: str) -> QnSequence:
    """Parse CLI syntax: cn:1.0, pow:0.5, nlogn, const:0.5."""
    text = text.strip()
    if text == "nlogn":
        return QnSequence("nlogn")
    if ":" not in text:
        raise ConfigError(f"bad qn spec {text!r}; expected kind:param or nlogn")
    kind, raw = text.split(":", 1)
    try:
        return QnSequence(kind, float(raw))
    except ValueError:
        raise ConfigError(f"bad qn parameter in {text!r}") from None


def qn_value(seq: QnSequence, n: int) -> float:
    """q_n for the sequence; rejects values outside (0.01, 0.999999)."""
    n = int(n)
    if n < 2:
        raise ConfigError(f"qn_value requires n >= 2, got {n}")
    if seq.kind == "cn":
        q = 1.0 - seq.param / n
    elif seq.kind == "pow":
        q = 1.0 - n ** (-seq.param)
    elif seq.kind == "nlogn":
        q = 1.0 - 1.0 / (n * math.log(n))
    else:
        q = seq.param
    lo, hi = _QN_RANGE
    if not lo < q < hi:
        raise ConfigError(f"q_n = {q} at n = {n} outside the accepted range ({lo}, {hi})")
    return q


@dataclass(frozen=True)
class PropertySReport:
    s: bool
    p1: bool
    p2: bool
    c1: float
    c2: float


def property_s_report(seq: QnSequence, n_max: int = 10**4) -> PropertySReport:
    """Sampled check that S, P1 ([n] >= c1 n) and P2 (q_n^n >= c2) agree.

    c1 = (1-e^{-c})/c and c2 = e^{-2c} with c the sequence's witness
    constant (c = 1 for kinds without one, so that P1/P2 fail alongside S).
    A sampled equivalence on n <= n_max, not a proof.
    """
    c = seq.s_constant() or 1.0
    c1 = (1.0 - math.exp(-c)) / c
    c2 = math.exp(-2.0 * c)
    ns = sorted({int(v) for v in np.geomspace(10, n_max, 40)})
    p1 = p2 = True
    for n in ns:
        q = qn_value(seq, n)
        if q_number(n, q) < c1 * n:
            p1 = False
        if q**n < c2:
            p2 = False
    return PropertySReport(seq.satisfies_s, p1, p2, c1, c2)


def empirical_modulus(f, delta: float, grid_size: int = 101) -> float:
    """Grid estimate of the modulus of continuity: max |f(u)-f(v)| over
    grid pairs with |u-v| <= delta.  A lower bound of the true modulus."""
    if not delta > 0.0:
        raise ConfigError(f"delta must be > 0, got {delta}")
    xs = _metric_grid(f, int(grid_size))
    vals = evaluate_on(f, xs)
    best = 0.0
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if xs[j] - xs[i] > delta:
                break
            best = max(best, abs(vals[j] - vals[i]))
    return best


def _metric_grid(f, grid: int) -> np.ndarray:
    """Uniform error grid; interior-only when f skips an endpoint."""
    interior = isinstance(f, RealFunction) and not (f.at_zero and f.at_one)
    if interior:
        return np.arange(1, grid + 1, dtype=float) / (grid + 1)
    return np.linspace(0.0, 1.0, grid)


@dataclass(frozen=True)
class ExperimentConfig:
    weight: JacobiWeight
    fn_id: str
    ns: tuple
    seq: QnSequence
    xs: tuple = ()
    grid: int = 101
    tol: TailTolerance = DEFAULT_TOL

    def __post_init__(self):
        ns = tuple(int(v) for v in self.ns)
        if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigError("n list must be nonempty and strictly increasing")
        xs = tuple(float(v) for v in self.xs)
        if any(not 0.0 <= v <= 1.0 for v in xs):
            raise ConfigError("evaluation points must lie in [0,1]")
        object.__setattr__(self, "ns", ns)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "grid", int(self.grid))

    def function(self):
        return get_function(self.fn_id)

    def spec_for(self, n: int) -> OperatorSpec:
        return make_spec(n, qn_value(self.seq, n), self.weight.alpha, self.weight.beta, self.tol)


@dataclass(frozen=True)
class Table:
    """Ordered experiment output: field names, value rows, and the
    canonical config line echoed as the CSV comment header."""

    fields: tuple
    rows: tuple
    command: str
    config: tuple  # ordered (key, value) pairs

    def config_line(self) -> str:
        parts = " ".join(f"{k}={v}" for k, v in self.config)
        return f"qbd {self.command} {parts}".rstrip()


def _config_pairs(cfg: ExperimentConfig, extra: tuple = ()) -> tuple:
    pairs = [
        ("n", ",".join(str(n) for n in cfg.ns)),
        ("qn", cfg.seq.label()),
        ("alpha", _fmt(cfg.weight.alpha)),
        ("beta", _fmt(cfg.weight.beta)),
        ("fn", cfg.fn_id),
    ]
    if cfg.xs:
        pairs.append(("x", ",".join(_fmt(v) for v in cfg.xs)))
    pairs += [("grid", str(cfg.grid)), ("tol", _fmt(cfg.tol.eps))]
    return tuple(pairs) + tuple(extra)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return format(v + 0.0, ".17g")  # folds -0.0 into 0
    return str(v)


def convergence_experiment(cfg: ExperimentConfig) -> Table:
    """Sup-grid and pointwise errors of M_n f against f along the q_n sweep.

    The ratio column divides the sup error by the empirical modulus at
    1/sqrt([n]); divergent rows are marked and the run continues.
    """
    f = cfg.function()
    xs_grid = _metric_grid(f, cfg.grid)
    fields = ["n", "q_n", "sup_error"]
    fields += [f"err_at_{v:g}" for v in cfg.xs]
    fields += ["scaled_error", "omega", "ratio", "status"]
    bounded = f.at_zero and f.at_one
    rows = []
    for n in cfg.ns:
        q = qn_value(cfg.seq, n)
        ln = q_number(n, q)
        try:
            img = operator_function(f, cfg.spec_for(n))
            errs = np.abs(img(xs_grid) - evaluate_on(f, xs_grid))
            sup = float(np.max(errs))
            pointwise = [abs(img(v) - float(f(v))) for v in cfg.xs]
            omega = empirical_modulus(f, 1.0 / math.sqrt(ln), cfg.grid) if bounded else float("nan")
            ratio = sup / omega if (bounded and omega > 0) else float("nan")
            rows.append((n, q, sup, *pointwise, ln * sup, omega, ratio, "ok"))
        except ConvergenceError:
            nan = float("nan")
            rows.append((n, q, nan, *[nan] * len(cfg.xs), nan, nan, nan, "divergent"))
    return Table(tuple(fields), tuple(rows), "converge", _config_pairs(cfg))


def _voronovskaya_limit(f, w: JacobiWeight, x: float) -> float:
    # d/dx (x^{a+1}(1-x)^{b+1} f'(x)) / (x^a (1-x)^b), expanded
    a, b = w.alpha, w.beta
    d1 = float(f.d1(x))
    d2 = float(f.d2(x))
    return d1 * ((a + 1.0) * (1.0 - x) - (b + 1.0) * x) + x * (1.0 - x) * d2


def voronovskaya_experiment(cfg: ExperimentConfig) -> Table:
    """[n](M_n f - f) at the listed points against the second-order limit.

    Also reports the scaled operator moments [n] M[(x-.)^1,2](x) next to
    their limits (alpha+beta+2)x - alpha - 1 and 2x(1-x).
    """
    f = cfg.function()
    if f.d1 is None or f.d2 is None:
        raise ConfigError(f"function {cfg.fn_id!r} has no analytic f'' for this experiment")
    if not cfg.xs:
        raise ConfigError("voronovskaya experiment needs at least one evaluation point")
    if any(v in (0.0, 1.0) for v in cfg.xs):
        raise ConfigError("evaluation points must be interior for this experiment")
    w = cfg.weight
    fields = ("n", "q_n", "x", "scaled_dev", "limit", "gap",
              "nT1", "nT1_limit", "nT2", "nT2_limit")
    rows = []
    for n in cfg.ns:
        q = qn_value(cfg.seq, n)
        spec = cfg.spec_for(n)
        ln = q_number(n, q)
        img = operator_function(f, spec)
        for x in cfg.xs:
            dev = ln * (img(x) - float(f(x)))
            lim = _voronovskaya_limit(f, w, x)
            t1 = ln * operator_moment(spec, 1, x)
            t2 = ln * operator_moment(spec, 2, x)
            rows.append((n, q, x, dev, lim, abs(dev - lim),
                         t1, (w.alpha + w.beta + 2.0) * x - w.alpha - 1.0,
                         t2, 2.0 * x * (1.0 - x)))
    return Table(fields, tuple(rows), "voronovskaya", _config_pairs(cfg))


def derivative_experiment(cfg: ExperimentConfig) -> Table:
    """Sup error of the q-derivative of the image against f'."""
    f = cfg.function()
    if f.d1 is None:
        raise ConfigError(f"function {cfg.fn_id!r} has no analytic f' for this experiment")
    xs = np.arange(1, cfg.grid + 1, dtype=float) / (cfg.grid + 1)  # q-derivative needs x > 0
    fields = ("n", "q_n", "sup_dq_error", "status")
    rows = []
    for n in cfg.ns:
        q = qn_value(cfg.seq, n)
        if not q > 0.5:
            raise ConfigError(f"derivative experiment requires q_n > 1/2, got {q} at n={n}")
        try:
            img = operator_function(f, cfg.spec_for(n))
            err = max(abs(q_derivative(img, x, q) - float(f.d1(x))) for x in xs)
            rows.append((n, q, err, "ok"))
        except ConvergenceError:
            rows.append((n, q, float("nan"), "divergent"))
    return Table(fields, tuple(rows), "derivative", _config_pairs(cfg))


def _monotone_label(diffs: np.ndarray, tol: float = 1e-10) -> str:
    inc = bool(np.all(diffs >= -tol))
    dec = bool(np.all(diffs <= tol))
    if inc and dec:
        return "flat"
    if inc:
        return "increasing"
    if dec:
        return "decreasing"
    return "mixed"


def shape_experiment(cfg: ExperimentConfig) -> Table:
    """Monotonicity, convexity and sign-change summaries for f and M_n f."""
    f = cfg.function()
    xs = _metric_grid(f, cfg.grid)
    fvals = evaluate_on(f, xs)
    fields = ("n", "q_n", "f_shape", "img_shape", "f_min_d2", "img_min_d2",
              "f_sign_changes", "img_sign_changes")
    rows = []
    for n in cfg.ns:
        q = qn_value(cfg.seq, n)
        spec = cfg.spec_for(n)
        img = operator_function(f, spec)
        ivals = img(xs)
        # f's sign changes are counted on the operator's own sampling nodes
        depth = min(2000, int(math.ceil(math.log(1e-12) / math.log(q))))
        nodes = q ** (np.arange(depth) + cfg.weight.beta + 1.0)
        f_sc = sign_changes(evaluate_on(f, nodes))
        rows.append((
            n, q,
            _monotone_label(np.diff(fvals)),
            _monotone_label(np.diff(ivals)),
            float(np.min(np.diff(fvals, 2))) if len(fvals) > 2 else 0.0,
            float(np.min(np.diff(ivals, 2))) if len(ivals) > 2 else 0.0,
            f_sc,
            sign_changes(ivals),
        ))
    return Table(fields, tuple(rows), "shape", _config_pairs(cfg))


def kantorovich_limit_experiment(f, n: int, q, alphas,
                                 grid: int = 101,
                                 tol: TailTolerance = DEFAULT_TOL) -> Table:
    """Gap between the symmetric-weight operator and its alpha -> -1 limit.

    Rows report sup_x |M^{a,a} f - M^{-1,-1} f| for each a in alphas, plus
    the exact endpoint errors of the limit operator.
    """
    if isinstance(f, str):
        f = get_function(f)
    alphas = tuple(float(a) for a in alphas)
    if any(not -1.0 < a for a in alphas):
        raise ConfigError("alphas must exceed -1")
    xs = np.linspace(0.0, 1.0, int(grid))
    limit_spec = make_spec(n, q, -1.0, -1.0, tol)
    limit_img = operator_function(f, limit_spec)
    lvals = limit_img(xs)
    end0 = abs(limit_img(0.0) - float(f(0.0)))
    end1 = abs(limit_img(1.0) - float(f(1.0)))
    fields = ("alpha", "sup_gap", "end0_err", "end1_err")
    rows = []
    for a in alphas:
        img = operator_function(f, make_spec(n, q, a, a, tol))
        gap = float(np.max(np.abs(img(xs) - lvals)))
        rows.append((a, gap, end0, end1))
    qv = q if isinstance(q, float) else q.q
    config = (("n", str(int(n))), ("q", _fmt(float(qv))),
              ("fn", getattr(f, "name", "") or "custom"),
              ("alpha", ",".join(_fmt(a) for a in alphas)),
              ("grid", str(int(grid))), ("tol", _fmt(tol.eps)))
    return Table(fields, tuple(rows), "kantorovich", config)


def render(table: Table, fmt: str = "csv") -> str:
    """Render a table as CSV (comment header + rows) or JSON."""
    if fmt == "csv":
        lines = [f"# {table.config_line()}", ",".join(table.fields)]
        for row in table.rows:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        obj = {
            "config": {k: v for k, v in (("command", table.command),) + table.config},
            "rows": [dict(zip(table.fields, row)) for row in table.rows],
        }
        return json.dumps(obj, indent=2, allow_nan=True) + "\n"
    raise ConfigError(f"unknown output format {fmt!r} (use csv or json)")


def emit(table: Table, fmt: str = "csv", path=None) -> None:
    """Write a rendered table to a path, or stdout when path is None."""
    text = render(table, fmt)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
