"""q-calculus primitives.

Conventions, for a fixed deformation parameter q in (0,1):

  q-number          [a]_q = (1 - q^a) / (1 - q)
  q-factorial       [n]_q! = [1]_q [2]_q ... [n]_q
  q-Pochhammer      (1-x)_q^a = prod_{j>=0} (1-q^j x) / prod_{j>=0} (1-q^{j+a} x),
                    a finite product of a factors when a is a nonnegative integer
  q-Gamma           G_q(a+1) = (1-q)_q^a / (1-q)^a
  Jackson integral  int_0^a f d_q = a(1-q) sum_{i>=0} q^i f(q^i a)
  q-derivative      D_q f(x) = (f(qx) - f(x)) / ((q-1) x)

Infinite products and series are truncated under a TailTolerance; all
arithmetic is double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "QParam",
    "TailTolerance",
    "RealFunction",
    "DEFAULT_TOL",
    "as_q",
    "as_function",
    "q_number",
    "q_number_product",
    "q_factorial",
    "q_binomial",
    "q_binomial_real",
    "q_pochhammer",
    "q_gamma",
    "q_beta",
    "jackson_integral",
    "q_derivative",
    "newton_expand",
]


@dataclass(frozen=True)
class QParam:
    """Deformation parameter, strictly inside (0,1)."""

    q: float

    def __post_init__(self):
        q = self.q
        if not (isinstance(q, (int, float)) and math.isfinite(q)):
            raise DomainError(f"q must be a finite real, got {q!r}")
        if not 0.0 < q < 1.0:
            raise DomainError(f"q must lie strictly in (0,1), got {q}")
        object.__setattr__(self, "q", float(q))


def as_q(q) -> QParam:
    """Coerce a float or QParam to a validated QParam."""
    return q if isinstance(q, QParam) else QParam(q)


@dataclass(frozen=True)
class TailTolerance:
    """Truncation policy for infinite q-products and Jackson sums.

    eps is an absolute tail threshold; max_terms caps the number of terms
    before the computation is declared divergent.
    """

    eps: float = 1e-14
    max_terms: int = 10**6

    def __post_init__(self):
        if not (self.eps > 0.0 and math.isfinite(self.eps)):
            raise DomainError(f"eps must be a positive real, got {self.eps}")
        if int(self.max_terms) < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")
        object.__setattr__(self, "eps", float(self.eps))
        object.__setattr__(self, "max_terms", int(self.max_terms))


DEFAULT_TOL = TailTolerance()


@dataclass(frozen=True)
class RealFunction:
    """Evaluation contract for a target function on (0,1).

    Wraps a deterministic callable together with flags saying whether the
    endpoints 0 and 1 are evaluable.  The callable should accept numpy
    arrays as well as scalars; evaluate_on falls back to a scalar loop
    when it does not.
    """

    fn: Callable
    at_zero: bool = True
    at_one: bool = True
    name: str = ""

    def __call__(self, x):
        return self.fn(x)


def as_function(f) -> RealFunction:
    """Coerce a plain callable to a RealFunction (endpoints assumed fine)."""
    if isinstance(f, RealFunction):
        return f
    return RealFunction(fn=f, name=getattr(f, "__name__", ""))


def evaluate_on(f, xs: np.ndarray) -> np.ndarray:
    """Evaluate f on an array of points, vectorized when possible."""
    try:
        out = np.asarray(f(xs), dtype=float)
        if out.shape == xs.shape:
            return out
    except Exception:
        pass
    return np.array([float(f(x)) for x in xs])


def q_number(a, q) -> float:
    """[a]_q = (1 - q^a)/(1 - q) for real a."""
    qv = as_q(q).q
    a = float(a)
    if not math.isfinite(a):
        raise DomainError(f"q_number requires finite a, got {a}")
    return (1.0 - qv**a) / (1.0 - qv)


def q_number_product(a, m: int, q) -> float:
    """Product [a]_q [a+1]_q ... [a+m-1]_q, the ratio G_q(a+m)/G_q(a).

    Stable replacement for q-Gamma ratios at integer offsets; exact for
    q arbitrarily close to 1.
    """
    qv = as_q(q).q
    p = 1.0
    for i in range(int(m)):
        p *= (1.0 - qv ** (a + i)) / (1.0 - qv)
    return p


def q_factorial(n: int, q) -> float:
    """[n]_q! for integer n >= 0; empty product is 1."""
    n = int(n)
    if n < 0:
        raise DomainError(f"q_factorial requires n >= 0, got {n}")
    return q_number_product(1.0, n, q)


def q_binomial(n: int, k: int, q) -> float:
    """Gaussian binomial coefficient; 0 when k is outside 0..n."""
    n, k = int(n), int(k)
    if k < 0 or k > n:
        return 0.0
    k = min(k, n - k)
    qv = as_q(q).q
    b = 1.0
    for i in range(1, k + 1):
        b *= (1.0 - qv ** (n - k + i)) / (1.0 - qv**i)
    return b


def q_binomial_real(a, k: int, q) -> float:
    """Generalized q-binomial [a choose k]_q with a real upper argument.

    Equals prod_{i=1}^{k} [a-k+i]_q / [i]_q; reduces to q_binomial for
    integer a.
    """
    k = int(k)
    if k < 0:
        return 0.0
    qv = as_q(q).q
    b = 1.0
    for i in range(1, k + 1):
        b *= (1.0 - qv ** (a - k + i)) / (1.0 - qv**i)
    return b


def _is_integer_valued(a: float) -> bool:
    return float(a).is_integer()


def q_pochhammer(x, a, q, tol: TailTolerance = DEFAULT_TOL) -> float:
    """(1-x)_q^a.

    Integer a >= 0: the exact finite product prod_{j<a} (1-q^j x), with no
    truncation (zero factors are legitimate values there).  Integer a < 0:
    the exact reciprocal finite product.  Otherwise the ratio of infinite
    products, both truncated at the same first index J with q^J |x| < eps
    so that tail errors largely cancel; a zero factor in either truncated
    product raises PoleError.
    """
    qv = as_q(q).q
    x = float(x)
    a = float(a)
    if not (math.isfinite(x) and math.isfinite(a)):
        raise DomainError("q_pochhammer requires finite x and a")
    if _is_integer_valued(a):
        m = int(a)
        if m >= 0:
            p = 1.0
            for j in range(m):
                p *= 1.0 - qv**j * x
            return p
        p = 1.0
        for j in range(-m):
            f = 1.0 - qv ** (j + m) * x
            if f == 0.0:
                raise PoleError(f"zero factor at j={j} in (1-x)_q^{a}")
            p *= f
        return 1.0 / p
    if x == 0.0:
        return 1.0
    ratio = 1.0
    j = 0
    while True:
        num = 1.0 - qv**j * x
        den = 1.0 - qv ** (j + a) * x
        if num == 0.0 or den == 0.0:
            raise PoleError(f"zero factor at j={j} in (1-x)_q^{a}")
        ratio *= num / den
        j += 1
        if qv**j * abs(x) < tol.eps:
            return ratio
        if j >= tol.max_terms:
            raise ConvergenceError(
                f"q_pochhammer did not converge within {tol.max_terms} factors"
            )


def q_gamma(a, q, tol: TailTolerance = DEFAULT_TOL) -> float:
    """q-Gamma function G_q(a+1) = (1-q)_q^a / (1-q)^a.

    For integer a >= 0 this is the exact q-factorial [a]_q!.
    """
    qv = as_q(q).q
    a = float(a)
    if _is_integer_valued(a) and a >= 0:
        return q_factorial(int(a), qv)
    try:
        poch = q_pochhammer(qv, a, qv, tol)
    except PoleError as exc:
        raise DomainError(f"q_gamma pole at a={a}") from exc
    return poch / (1.0 - qv) ** a


def q_beta(u, v, q, tol: TailTolerance = DEFAULT_TOL) -> float:
    """q-Beta function B_q(u,v) = G_q(u) G_q(v) / G_q(u+v) for u, v > 0."""
    u, v = float(u), float(v)
    if not (u > 0.0 and v > 0.0):
        raise DomainError(f"q_beta requires u, v > 0, got ({u}, {v})")
    qv = as_q(q).q
    return q_gamma(u - 1.0, qv, tol) * q_gamma(v - 1.0, qv, tol) / q_gamma(u + v - 1.0, qv, tol)


def jackson_integral(f, a, q, tol: TailTolerance = DEFAULT_TOL) -> float:
    """Jackson integral int_0^a f(t) d_q t = a(1-q) sum_{i>=0} q^i f(q^i a).

    The sum stops at the first i where the running term magnitude drops
    below eps AND q^i < eps; the second clause guards against f growing
    near 0 slower than q^{-i}, which would otherwise truncate too early.
    """
    qv = as_q(q).q
    a = float(a)
    if not 0.0 < a <= 1.0:
        raise DomainError(f"jackson_integral requires a in (0,1], got {a}")
    scale = a * (1.0 - qv)
    total = 0.0
    qi = 1.0
    for _ in range(tol.max_terms):
        term = scale * qi * float(f(qi * a))
        total += term
        qi *= qv
        if abs(term) < tol.eps and qi < tol.eps:
            return total
    raise ConvergenceError(
        f"jackson_integral did not converge within {tol.max_terms} terms"
    )


def q_derivative(f, x, q) -> float:
    """D_q f(x) = (f(qx) - f(x)) / ((q-1) x), for x != 0."""
    qv = as_q(q).q
    x = float(x)
    if x == 0.0:
        raise DomainError("q_derivative is undefined at x = 0")
    return (float(f(qv * x)) - float(f(x))) / ((qv - 1.0) * x)


def newton_expand(m: int, q) -> np.ndarray:
    """Coefficients d_{m,k} expanding (x-t)^m over q-shifted linear factors.

    Returns an array d of length m+1 (index 0 unused) with

        (x-t)^m = sum_{k=1}^{m} d[k] (1-q)^{m-k} x^{m-k} prod_{j<k} (x - q^j t),

    built from d_{1,1} = 1 by the recurrence
    d_{m+1,k} = q^{-k} (q d_{m,k-1} - [k]_q d_{m,k}).  The x^{m-k} factor
    makes the expansion homogeneous of degree m in (x, t).
    """
    m = int(m)
    if m < 1:
        raise DomainError(f"newton_expand requires m >= 1, got {m}")
    qv = as_q(q).q
    d = np.zeros(m + 1)
    d[1] = 1.0
    for cur in range(1, m):
        nd = np.zeros(m + 1)
        for k in range(1, cur + 2):
            nd[k] = qv ** (-k) * (qv * d[k - 1] - q_number(k, qv) * d[k])
        d = nd
    return d
