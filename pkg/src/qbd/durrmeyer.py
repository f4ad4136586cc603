"""The q-Bernstein-Durrmeyer operator with Jacobi weights.

M_n f(x) = sum_k c_k(f) b_{n,k,q}(x), where each coefficient c_k(f) is a
weighted Jackson-integral mean of f against the basis function b_{n,k,q}
for the weight t^alpha (1-qt)_q^beta.  Two evaluation forms are provided
and cross-validated: the coefficient form above and an equivalent kernel
form summing f over the geometric node grid.

Weights: alpha, beta > -1 (regular), or alpha = beta = -1, the
endpoint-interpolating variant whose k=0 and k=n coefficients are f(0)
and f(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DomainError
from .poly import Poly
from .qbasis import BasisSpec, bernstein_all, bernstein_matrix
from .qcore import (
    DEFAULT_TOL,
    QParam,
    RealFunction,
    TailTolerance,
    as_q,
    evaluate_on,
    q_number,
    q_number_product,
    q_pochhammer,
)

__all__ = [
    "JacobiWeight",
    "OperatorSpec",
    "make_spec",
    "inner_product",
    "durrmeyer_coeffs",
    "durrmeyer_coeff",
    "eval_operator",
    "operator_function",
    "kernel_phi",
    "kernel_eval",
    "kernel_truncation_order",
    "apply_to_poly",
    "moment_T",
    "operator_moment",
    "eigenvalue_lambda",
    "q_derivative_of_image",
]


@dataclass(frozen=True)
class JacobiWeight:
    """Weight exponents (alpha, beta); regular when both exceed -1."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError("weight exponents must be finite")
        if not ((a > -1.0 and b > -1.0) or (a == -1.0 and b == -1.0)):
            raise DomainError(
                f"weight must have alpha, beta > -1 or alpha = beta = -1, got ({a}, {b})"
            )
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def is_endpoint_case(self) -> bool:
        return self.alpha == -1.0


@dataclass(frozen=True)
class OperatorSpec:
    """Full configuration of the operator: degree, q, weight, truncation."""

    n: int
    q: QParam
    weight: JacobiWeight
    tol: TailTolerance = DEFAULT_TOL

    def __post_init__(self):
        if int(self.n) < 1:
            raise DomainError(f"operator degree must be >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "q", as_q(self.q))

    @property
    def basis(self) -> BasisSpec:
        return BasisSpec(self.n, self.q)


def make_spec(n, q, alpha, beta, tol: TailTolerance = DEFAULT_TOL) -> OperatorSpec:
    return OperatorSpec(n, as_q(q), JacobiWeight(alpha, beta), tol)


def _chunk_size(q: float, eps: float) -> int:
    return max(64, int(math.ceil(math.log(eps) / math.log(q))) + 1)


def _beta_poch_row(beta: float, q: float, i0: int, count: int) -> np.ndarray:
    """(1-q^{i+1})_q^beta for i = i0 .. i0+count-1, by one product then a recurrence."""
    out = np.empty(count)
    out[0] = q_pochhammer(q ** (i0 + 1), beta, q)
    for r in range(1, count):
        i = i0 + r
        out[r] = out[r - 1] * (1.0 - q ** (i + beta)) / (1.0 - q**i)
    return out


def _weight_chunk(n: int, alpha: float, beta: float, q: float, i0: int, count: int,
                  ks: np.ndarray) -> np.ndarray:
    """W[i-i0, k] = q^{i(k+alpha+1)} (1-q^{i+1})_q^{n-k+beta} for the columns ks."""
    ivec = np.arange(i0, i0 + count, dtype=float)
    if beta == -1.0:
        base = np.ones(count)
        # exponent n-k+beta is then a nonnegative integer for every interior k
        counts = {int(n - k - 1) for k in ks}
        if any(c < 0 for c in counts):
            raise DomainError("integer-exponent weight requires k <= n-1")
    else:
        base = _beta_poch_row(beta, q, i0, count)
    mmax = max(int(n - k) for k in ks)
    fin = np.ones((count, mmax + 1))
    # fin[:, m] carries the finite factor chain of (1-q^{i+1})_q^{m+beta}:
    # m factors (1-q^{i+1+beta+j}) for fractional beta, m-1 factors
    # (1-q^{i+1+j}) when beta = -1 (the exponent m+beta is then integer)
    for m in range(1, mmax + 1):
        if beta == -1.0:
            fin[:, m] = fin[:, m - 1] if m == 1 else fin[:, m - 1] * (1.0 - q ** (ivec + m - 1.0))
        else:
            fin[:, m] = fin[:, m - 1] * (1.0 - q ** (ivec + beta + m))
    W = np.empty((count, len(ks)))
    for col, k in enumerate(ks):
        geo = q ** (ivec * (k + alpha + 1.0))
        W[:, col] = geo * base * fin[:, n - int(k)]
    return W


def _endpoint_value(f, x: float, side: str) -> float:
    if isinstance(f, RealFunction):
        if x == 0.0 and not f.at_zero:
            raise DomainError("function is not evaluable at 0 (required by this weight)")
        if x == 1.0 and not f.at_one:
            raise DomainError("function is not evaluable at 1 (required by this weight)")
    return float(f(x))


def _coeff_sums(f, n: int, alpha: float, beta: float, q: float,
                tol: TailTolerance, ks: np.ndarray) -> np.ndarray:
    """Ratios of Jackson sums num_k / den_k over the columns ks.

    Numerator and denominator share nodes, weights and truncation index, so
    the f = 1 ratio is exactly 1 and truncation errors largely cancel.
    """
    eps = tol.eps
    block = _chunk_size(q, eps)
    num = np.zeros(len(ks))
    den = np.zeros(len(ks))
    i0 = 0
    while True:
        count = min(block, tol.max_terms - i0)
        if count <= 0:
            raise ConvergenceError(
                f"coefficient integrals exceeded {tol.max_terms} terms (is C(alpha) satisfied?)"
            )
        ivec = np.arange(i0, i0 + count, dtype=float)
        snodes = q ** (ivec + beta + 1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            fv = evaluate_on(f, snodes)
        if not np.all(np.isfinite(fv)):
            raise ConvergenceError("function evaluation produced a non-finite value on the node grid")
        W = _weight_chunk(n, alpha, beta, q, i0, count, ks)
        num += W.T @ fv
        # same matmul path as num so that f = 1 yields the ratio 1 bitwise
        den += W.T @ np.ones_like(fv)
        i0 += count
        tail = (1.0 - q) * float(np.max(W[-1])) * max(1.0, abs(float(fv[-1])))
        if tail < eps and q**i0 < eps:
            break
    return num / den


def durrmeyer_coeffs(f, spec: OperatorSpec) -> np.ndarray:
    """All operator coefficients c_k(f), k = 0..n, as one vector."""
    n, q, w, tol = spec.n, spec.q.q, spec.weight, spec.tol
    if w.is_endpoint_case:
        out = np.empty(n + 1)
        out[0] = _endpoint_value(f, 0.0, "left")
        out[n] = _endpoint_value(f, 1.0, "right")
        if n >= 2:
            ks = np.arange(1, n)
            out[1:n] = _coeff_sums(f, n, w.alpha, w.beta, q, tol, ks)
        return out
    return _coeff_sums(f, n, w.alpha, w.beta, q, tol, np.arange(n + 1))


def durrmeyer_coeff(f, spec: OperatorSpec, k: int) -> float:
    """Single coefficient c_k(f) = <b_{n,k}, f> / <b_{n,k}, 1>."""
    if not 0 <= int(k) <= spec.n:
        raise DomainError(f"coefficient index k={k} outside 0..{spec.n}")
    return float(durrmeyer_coeffs(f, spec)[int(k)])


def eval_operator(f, spec: OperatorSpec, x: float) -> float:
    """M_n f(x) in coefficient form; a positive contraction in sup norm."""
    coeffs = durrmeyer_coeffs(f, spec)
    return float(coeffs @ bernstein_all(spec.basis, float(x)))


def operator_function(f, spec: OperatorSpec):
    """M_n f as a reusable function of x (coefficients computed once).

    The returned callable accepts scalars or arrays; use this instead of
    repeated eval_operator calls when sweeping a grid.
    """
    coeffs = durrmeyer_coeffs(f, spec)

    def image(x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        vals = bernstein_matrix(spec.basis, xs) @ coeffs
        return vals if np.ndim(x) else float(vals[0])

    return image


def inner_product(f, g, w: JacobiWeight, q, tol: TailTolerance = DEFAULT_TOL) -> float:
    """The positive bilinear form <f,g> for the Jacobi weight.

    Regular weights: the discrete sum
    q^{(alpha+1)(beta+1)} (1-q) sum_i q^{i(alpha+1)} (1-q^{i+1})_q^beta
    f(q^{i+beta+1}) g(q^{i+beta+1}).  For alpha = beta = -1 the form is
    int_0^1 f g / (t(1-t)) d_q t; its node t=1 carries an infinite atom,
    so f(1) g(1) must vanish (the 0 * inf contribution is taken as 0).
    """
    qv = as_q(q).q
    if w.is_endpoint_case:
        p1 = _endpoint_value(f, 1.0, "right") * _endpoint_value(g, 1.0, "right")
        if p1 != 0.0:
            raise DomainError(
                "endpoint-case inner product requires f(1) g(1) = 0 (infinite atom at t=1)"
            )
        total = 0.0
        qi = qv
        for i in range(1, tol.max_terms):
            s = qi
            term = (1.0 - qv) * float(f(s)) * float(g(s)) / (1.0 - qi)
            total += term
            qi *= qv
            if abs(term) < tol.eps and qi < tol.eps:
                return total
        raise ConvergenceError("endpoint-case inner product did not converge")
    alpha, beta = w.alpha, w.beta
    pref = qv ** ((alpha + 1.0) * (beta + 1.0))
    eps = tol.eps
    block = _chunk_size(qv, eps)
    total = 0.0
    i0 = 0
    while True:
        count = min(block, tol.max_terms - i0)
        if count <= 0:
            raise ConvergenceError(
                f"inner product exceeded {tol.max_terms} terms (is C(alpha) satisfied?)"
            )
        ivec = np.arange(i0, i0 + count, dtype=float)
        snodes = qv ** (ivec + beta + 1.0)
        base = _beta_poch_row(beta, qv, i0, count)
        with np.errstate(over="ignore", invalid="ignore"):
            fv = evaluate_on(f, snodes)
            gv = evaluate_on(g, snodes)
            terms = (1.0 - qv) * qv ** (ivec * (alpha + 1.0)) * base * fv * gv
        if not np.all(np.isfinite(terms)):
            raise ConvergenceError("inner product terms are not finite (is C(alpha) satisfied?)")
        total += float(np.sum(terms))
        i0 += count
        if abs(float(terms[-1])) < eps and qv**i0 < eps:
            return pref * total


class _KernelData(NamedTuple):
    nodes: np.ndarray        # q^{j+beta+1} (regular) or q^j (endpoint case)
    W: np.ndarray            # row j = basis-coefficient vector of Phi_j
    colsum: np.ndarray       # unnormalized column masses (the Beta integrals)
    has_zero_atom: bool      # endpoint case: f(0) rides on b_{n,0}


def _kernel_rows_regular(spec: OperatorSpec, J: int) -> tuple[np.ndarray, np.ndarray]:
    n, q, w = spec.n, spec.q.q, spec.weight
    jvec = np.arange(J, dtype=float)
    u = (1.0 - q) * q ** (jvec * (w.alpha + 1.0)) * _beta_poch_row(w.beta, q, 0, J)
    nodes = q ** (jvec + w.beta + 1.0)
    R = u[:, None] * bernstein_matrix(spec.basis, nodes)
    return nodes, R


def _kernel_rows_endpoint(spec: OperatorSpec, J: int) -> tuple[np.ndarray, np.ndarray]:
    n, q = spec.n, spec.q.q
    jvec = np.arange(J, dtype=float)
    nodes = q**jvec
    R = np.zeros((J, n + 1))
    for k in range(1, n):
        fin = np.ones(J)
        for l in range(n - k - 1):
            fin *= 1.0 - q ** (jvec + 1.0 + l)
        R[:, k] = (1.0 - q) * q ** (jvec * k) * fin
    return nodes, R


@lru_cache(maxsize=16)
def _kernel_data(spec: OperatorSpec) -> _KernelData:
    n, q, w, tol = spec.n, spec.q.q, spec.weight, spec.tol
    endpoint = w.is_endpoint_case
    # slowest column mass decays like rho^j
    rho = q if endpoint else q ** (w.alpha + 1.0)
    J = _chunk_size(q, tol.eps)
    while True:
        nodes, R = (_kernel_rows_endpoint if endpoint else _kernel_rows_regular)(spec, J)
        colsum = R.sum(axis=0)
        active = colsum > 0.0
        tail = 0.0
        if active.any():
            tail = float(np.max(R[-1][active] / colsum[active])) * rho / (1.0 - rho)
        if tail < tol.eps or J >= tol.max_terms:
            break
        J = min(2 * J, tol.max_terms)
    if tail >= tol.eps:
        raise ConvergenceError("kernel mass did not converge within the term cap")
    W = np.zeros_like(R)
    W[:, active] = R[:, active] / colsum[active]
    if endpoint:
        W[0, n] = 1.0  # the node q^0 = 1 coincides with the right endpoint
    return _KernelData(nodes, W, colsum, endpoint)


def kernel_truncation_order(spec: OperatorSpec) -> int:
    """Number of node terms retained by the truncated kernel form."""
    return _kernel_data(spec).W.shape[0]


def _kernel_row(spec: OperatorSpec, j: int) -> np.ndarray:
    data = _kernel_data(spec)
    if j < data.W.shape[0]:
        return data.W[j]
    # beyond the cached range: one row from the defining formulas
    n, q, w = spec.n, spec.q.q, spec.weight
    if data.has_zero_atom:
        row = np.zeros(n + 1)
        for k in range(1, n):
            fin = 1.0
            for l in range(n - k - 1):
                fin *= 1.0 - q ** (j + 1.0 + l)
            row[k] = (1.0 - q) * q ** (float(j) * k) * fin
    else:
        u = (1.0 - q) * q ** (j * (w.alpha + 1.0)) * q_pochhammer(q ** (j + 1), w.beta, q)
        node = q ** (j + w.beta + 1.0)
        row = u * bernstein_all(spec.basis, node)
    out = np.zeros(n + 1)
    active = data.colsum > 0.0
    out[active] = row[active] / data.colsum[active]
    return out


def kernel_phi(spec: OperatorSpec, j: int, x: float) -> float:
    """Kernel mass Phi_j at x: the weight the operator puts on the node
    q^{j+beta+1} (q^j in the endpoint case).  Nonnegative; the masses over
    all j sum to 1 (minus the endpoint atoms in the (-1,-1) case)."""
    if int(j) < 0:
        raise DomainError(f"kernel index must be >= 0, got {j}")
    row = _kernel_row(spec, int(j))
    return float(row @ bernstein_all(spec.basis, float(x)))


def kernel_eval(f, spec: OperatorSpec, x: float) -> float:
    """M_n f(x) in kernel form: sum_j Phi_j(x) f(node_j), truncated.

    Agrees with eval_operator within the combined truncation tolerance.
    """
    data = _kernel_data(spec)
    fv = evaluate_on(f, data.nodes)
    proj = data.W.T @ fv
    if data.has_zero_atom:
        proj = proj.copy()
        proj[0] += _endpoint_value(f, 0.0, "left")
    return float(proj @ bernstein_all(spec.basis, float(x)))


def _monomial_to_newton(coeffs: np.ndarray, nodes: list[float]) -> np.ndarray:
    """Rewrite a monomial-basis polynomial in the Newton basis at nodes."""
    c = list(coeffs)
    out = np.empty(len(nodes) + 1)
    for j, z in enumerate(nodes):
        acc = c[-1]
        quo = [0.0] * (len(c) - 1)
        for p in range(len(c) - 2, -1, -1):
            quo[p] = acc
            acc = c[p] + z * acc
        out[j] = acc
        c = quo if quo else [0.0]
    out[len(nodes)] = c[0]
    return out


def _monomial_image_coeffs(n: int, alpha: float, beta: float, q: float, m: int) -> np.ndarray:
    """Exact monomial coefficients of M_n[t^m] as a degree-m polynomial.

    Uses the closed-form Beta-ratio moments of the coefficients and the
    factorial-moment identities of the q-Bernstein basis; every factor is
    a product of positive q-numbers, so there is no truncation and the
    path is stable for q arbitrarily close to 1.
    """
    if m == 0:
        return np.array([1.0])
    pu = np.array([1.0])
    for i in range(m):
        pu = np.convolve(pu, [q_number(alpha + 1.0 + i, q), q ** (alpha + 1.0 + i)])
    gamma = _monomial_to_newton(pu, [q_number(l, q) for l in range(m)])
    den = q_number_product(n + alpha + beta + 2.0, m, q)
    shift = q ** ((beta + 1.0) * m)
    out = np.empty(m + 1)
    for j in range(m + 1):
        out[j] = gamma[j] * q ** (j * (j - 1) / 2.0) * q_number_product(n - j + 1.0, j, q)
    return out * (shift / den)


def apply_to_poly(p: Poly, spec: OperatorSpec) -> Poly:
    """Exact polynomial image M_n p for deg p <= n; preserves the degree.

    Valid for regular weights and for the (-1,-1) endpoint case (where the
    same Beta-ratio algebra reproduces the endpoint coefficients).
    """
    n, q, w = spec.n, spec.q.q, spec.weight
    if p.degree > n:
        raise DomainError(f"apply_to_poly requires deg p <= n, got {p.degree} > {n}")
    if p.degree < 0:
        return Poly.zero()
    out = np.zeros(p.degree + 1)
    for m, c in enumerate(p.coeffs):
        if c != 0.0:
            out[: m + 1] += c * _monomial_image_coeffs(n, w.alpha, w.beta, q, m)
    return Poly(tuple(out))


def _beta_ratio_moments(n: int, alpha: float, beta: float, q: float, m: int) -> np.ndarray:
    """E[k, j] = prod_{i<j} [k+alpha+1+i]_q / [n+alpha+beta+2+i]_q."""
    E = np.ones((n + 1, m + 1))
    for j in range(1, m + 1):
        for k in range(n + 1):
            E[k, j] = E[k, j - 1] * q_number(k + alpha + j, q) / q_number(n + alpha + beta + 1.0 + j, q)
    return E


def _moment_value(spec: OperatorSpec, m: int, x: float, shift: float) -> float:
    if m == 0:
        return 1.0
    n, q, w = spec.n, spec.q.q, spec.weight
    E = _beta_ratio_moments(n, w.alpha, w.beta, q, m)
    b = bernstein_all(spec.basis, float(x))
    total = 0.0
    for j in range(m + 1):
        mom = float(b @ E[:, j])
        total += math.comb(m, j) * (-1.0) ** j * x ** (m - j) * shift**j * mom
    return total


def moment_T(spec: OperatorSpec, m: int, x: float) -> float:
    """Weighted central moment sum_k b_{n,k}(x) E_k[(x-t)^m].

    t is the Jackson integration variable of the coefficient means (no
    argument shift); computed exactly by binomial expansion and Beta-ratio
    monomial moments.  T_{n,0} = 1; even-order moments obey a
    K_m / [n]^{m/2} envelope.
    """
    if spec.weight.is_endpoint_case:
        raise DomainError("moment_T is defined for regular weights only")
    if int(m) < 0:
        raise DomainError(f"moment order must be >= 0, got {m}")
    return _moment_value(spec, int(m), float(x), 1.0)


def operator_moment(spec: OperatorSpec, m: int, x: float) -> float:
    """The operator's own central moment M_n[(x - .)^m](x), exactly.

    Differs from moment_T by the q^{beta+1} argument shift the operator
    applies to its input; this is the variant whose scaled limits are
    (alpha+beta+2)x - alpha - 1 (m=1) and 2x(1-x) (m=2).
    """
    if spec.weight.is_endpoint_case:
        raise DomainError("operator_moment is defined for regular weights only")
    if int(m) < 0:
        raise DomainError(f"moment order must be >= 0, got {m}")
    q, beta = spec.q.q, spec.weight.beta
    return _moment_value(spec, int(m), float(x), q ** (beta + 1.0))


def eigenvalue_lambda(n: int, r: int, w: JacobiWeight, q) -> float:
    """Operator eigenvalue for the degree-r eigenpolynomial.

    q^{r(r+alpha+beta+1)} [n]!/[n-r]! * G_q(n+a+b+2)/G_q(n+r+a+b+2) for
    r <= n, and 0 for r > n; evaluated as a product of q-number ratios.
    """
    n, r = int(n), int(r)
    if n < 1 or r < 0:
        raise DomainError("eigenvalue_lambda requires n >= 1 and r >= 0")
    if r > n:
        return 0.0
    qv = as_q(q).q
    lam = qv ** (r * (r + w.alpha + w.beta + 1.0))
    for l in range(r):
        lam *= q_number(n - l, qv) / q_number(n + w.alpha + w.beta + 2.0 + l, qv)
    return lam


def q_derivative_of_image(f, spec: OperatorSpec, x: float) -> float:
    """D_q(M_n f)(x) through the degree-lowering identity.

    Regular weights: ([n]/[n+a+b+2]) q^{a+b+2} M_{n-1}^{a+1,b+1}(D_q f(./q))(qx).
    The (-1,-1) case drops the prefactor and lands on the (0,0) weight.
    Must match the direct q-derivative of eval_operator pointwise.
    """
    n, q, w, tol = spec.n, spec.q.q, spec.weight, spec.tol
    x = float(x)

    def inner(t):
        # D_q f evaluated at t/q; stays on (0,1) for the inner operator's nodes
        return (f(t) - f(t / q)) / ((q - 1.0) * (t / q))

    if w.is_endpoint_case:
        alpha2 = beta2 = 0.0
        pref = 1.0
    else:
        alpha2, beta2 = w.alpha + 1.0, w.beta + 1.0
        pref = q_number(n, q) / q_number(n + w.alpha + w.beta + 2.0, q) * q ** (w.alpha + w.beta + 2.0)
    m = n - 1
    if m == 0:
        ratios = _coeff_sums(inner, 0, alpha2, beta2, q, tol, np.arange(1))
        return pref * float(ratios[0])
    sub = OperatorSpec(m, QParam(q), JacobiWeight(alpha2, beta2), tol)
    return pref * eval_operator(inner, sub, q * x)
