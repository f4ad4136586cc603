"""Little q-Jacobi orthogonal polynomials and the q-Jacobi second-order operator.

P_r denotes the degree-r orthogonal polynomial for the bilinear form of
the regular Jacobi weight, normalized by P_r(0) = [r+alpha choose r]_q.
The family diagonalizes both the degree-n operator (eigenvalues
lambda_{n,r}) and the second-order q-differential operator implemented
here (eigenvalues mu_r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .durrmeyer import JacobiWeight, eigenvalue_lambda, inner_product
from .errors import DomainError
from .poly import Poly
from .qcore import (
    DEFAULT_TOL,
    QParam,
    TailTolerance,
    as_q,
    q_binomial,
    q_binomial_real,
    q_number,
    q_number_product,
)

__all__ = [
    "QJacobiPoly",
    "SpectralExpansion",
    "qjacobi_series",
    "qjacobi_rodrigues",
    "u_operator",
    "u_operator_poly",
    "eigenvalue_mu",
    "qjacobi_norm",
    "q_derivative_relation_check",
    "spectral_expand",
    "spectral_limit",
    "classical_jacobi",
]


@dataclass(frozen=True)
class QJacobiPoly:
    r: int
    weight: JacobiWeight
    q: QParam
    poly: Poly

    def __call__(self, x):
        return self.poly(x)


def _require_regular(w: JacobiWeight, what: str):
    if w.is_endpoint_case:
        raise DomainError(f"{what} requires a regular weight (alpha, beta > -1)")


def qjacobi_series(r: int, w: JacobiWeight, q) -> QJacobiPoly:
    """P_r built from its terminating coefficient recurrence.

    a_0 = [r+alpha choose r]_q and
    a_{k+1}/a_k = -q^{-r-beta} ([r]-[k]) [k+r+alpha+beta+1] / ([k+1][k+alpha+1]);
    the ratio vanishes at k = r, so the series terminates at degree r.
    """
    r = int(r)
    if r < 0:
        raise DomainError(f"degree must be >= 0, got {r}")
    _require_regular(w, "qjacobi_series")
    qp = as_q(q)
    qv = qp.q
    alpha, beta = w.alpha, w.beta
    coeffs = np.empty(r + 1)
    coeffs[0] = q_binomial_real(r + alpha, r, qv)
    for k in range(r):
        ratio = (
            -(qv ** (-r - beta))
            * (q_number(r, qv) - q_number(k, qv))
            * q_number(k + r + alpha + beta + 1.0, qv)
            / (q_number(k + 1, qv) * q_number(k + alpha + 1.0, qv))
        )
        coeffs[k + 1] = coeffs[k] * ratio
    return QJacobiPoly(r, w, qp, Poly(tuple(coeffs)))


def qjacobi_rodrigues(r: int, w: JacobiWeight, q) -> QJacobiPoly:
    """P_r from the Rodrigues-type finite sum, expanded to monomials.

    P_r = A(x)/[r]! with
    A(x) = sum_k [r choose k]_q (prod of q-number Gamma ratios)
           (-1)^k q^{c_k} x^k prod_{j<r-k} (1 - q^{j-beta-r+k} x),
    c_k = k(k + alpha - beta - r + (k-1)/2).  Matches qjacobi_series
    coefficientwise.
    """
    r = int(r)
    if r < 0:
        raise DomainError(f"degree must be >= 0, got {r}")
    _require_regular(w, "qjacobi_rodrigues")
    qp = as_q(q)
    qv = qp.q
    alpha, beta = w.alpha, w.beta
    total = Poly.zero()
    for k in range(r + 1):
        gratio = q_number_product(alpha + k + 1.0, r - k, qv) * q_number_product(
            beta + r - k + 1.0, k, qv
        )
        ck = k * (k + alpha - beta - r + (k - 1) / 2.0)
        coef = q_binomial(r, k, qv) * gratio * (-1.0) ** k * qv**ck
        term = Poly.monomial(k, coef)
        for j in range(r - k):
            term = term * Poly((1.0, -(qv ** (j - beta - r + k))))
        total = total + term
    fact = q_number_product(1.0, r, qv)
    return QJacobiPoly(r, w, qp, total.scale(1.0 / fact))


def _second_q_derivative(f, y: float, q: float) -> float:
    return (float(f(q * q * y)) - (1.0 + q) * float(f(q * y)) + q * float(f(y))) / (
        q * (q - 1.0) ** 2 * y * y
    )


def u_operator(f, w: JacobiWeight, q, x: float) -> float:
    """Second-order q-differential operator of Jacobi type, pointwise.

    Evaluated through its expanded two-term form
    (-q^{alpha-beta}[beta+1] x + [alpha+1](1 - q^{-beta-1} x)) D_q f(x)
      + (1 - q^{-beta-1} x) (x/q) D_q^2 f(x/q),
    which avoids dividing by the weight at nodes where it vanishes.  Needs
    f at qx, x and x/q, so f must extend past 1 when x > q.
    """
    _require_regular(w, "u_operator")
    qv = as_q(q).q
    x = float(x)
    if x == 0.0:
        raise DomainError("u_operator is undefined at x = 0")
    alpha, beta = w.alpha, w.beta
    df = (float(f(qv * x)) - float(f(x))) / ((qv - 1.0) * x)
    d2 = _second_q_derivative(f, x / qv, qv)
    lin = -(qv ** (alpha - beta)) * q_number(beta + 1.0, qv) * x + q_number(alpha + 1.0, qv) * (
        1.0 - qv ** (-beta - 1.0) * x
    )
    return lin * df + (1.0 - qv ** (-beta - 1.0) * x) * (x / qv) * d2


def u_operator_poly(p: Poly, w: JacobiWeight, q) -> Poly:
    """Exact polynomial image of the q-Jacobi operator; preserves degree."""
    _require_regular(w, "u_operator_poly")
    qv = as_q(q).q
    alpha, beta = w.alpha, w.beta
    lin = Poly((q_number(alpha + 1.0, qv),)) + Poly(
        (0.0, -(qv ** (alpha - beta)) * q_number(beta + 1.0, qv)
         - q_number(alpha + 1.0, qv) * qv ** (-beta - 1.0))
    )
    dp = p.q_derivative(qv)
    d2_shift = p.q_derivative(qv).q_derivative(qv).scale_arg(1.0 / qv)
    quad = Poly((1.0, -(qv ** (-beta - 1.0)))) * Poly((0.0, 1.0 / qv))
    return lin * dp + quad * d2_shift


def eigenvalue_mu(r: int, w: JacobiWeight, q) -> float:
    """mu_r = -q^{-beta-r} [r]_q [r+alpha+beta+1]_q; zero at r = 0."""
    r = int(r)
    if r < 0:
        raise DomainError(f"degree must be >= 0, got {r}")
    qv = as_q(q).q
    return -(qv ** (-w.beta - r)) * q_number(r, qv) * q_number(r + w.alpha + w.beta + 1.0, qv)


def qjacobi_norm(r: int, w: JacobiWeight, q, tol: TailTolerance = DEFAULT_TOL) -> float:
    """nu_r = <P_r, P_r>^{1/2}, computed numerically (no closed form used)."""
    p = qjacobi_series(r, w, q).poly
    val = inner_product(p, p, w, as_q(q), tol)
    if val <= 0.0:
        raise DomainError(f"norm computation produced a nonpositive square: {val}")
    return math.sqrt(val)


def q_derivative_relation_check(r: int, w: JacobiWeight, q) -> float:
    """Max coefficient residual of the degree-lowering derivative relation.

    (D_q P_r)(x/q) = -q^{-beta-r} [r+alpha+beta+1] P_{r-1}(x) for the
    weight (alpha+1, beta+1); the derivative is taken first and then
    evaluated at x/q.  Both sides are built as exact polynomials.
    """
    r = int(r)
    if r < 1:
        raise DomainError(f"the derivative relation needs r >= 1, got {r}")
    _require_regular(w, "q_derivative_relation_check")
    qv = as_q(q).q
    lhs = qjacobi_series(r, w, qv).poly.q_derivative(qv).scale_arg(1.0 / qv)
    wl = JacobiWeight(w.alpha + 1.0, w.beta + 1.0)
    scale = -(qv ** (-w.beta - r)) * q_number(r + w.alpha + w.beta + 1.0, qv)
    rhs = qjacobi_series(r - 1, wl, qv).poly.scale(scale)
    m = max(lhs.degree, rhs.degree) + 1
    if m == 0:
        return 0.0
    return float(np.max(np.abs(lhs.as_array(m) - rhs.as_array(m))))


@dataclass(frozen=True)
class SpectralExpansion:
    """Projection of f on P_0..P_R: c_r = <f, P_r> / nu_r^2."""

    weight: JacobiWeight
    q: QParam
    coefficients: tuple
    norms: tuple
    polys: tuple

    @property
    def degree_cap(self) -> int:
        return len(self.coefficients) - 1

    def operator_image(self, n: int) -> Poly:
        """sum_r lambda_{n,r} c_r P_r: the degree-n operator applied to f."""
        out = Poly.zero()
        for r, (c, pr) in enumerate(zip(self.coefficients, self.polys)):
            lam = eigenvalue_lambda(n, r, self.weight, self.q)
            if lam != 0.0 and c != 0.0:
                out = out + pr.poly.scale(lam * c)
        return out

    def limit_image(self) -> Poly:
        """sum_r q^{r(r+alpha+beta+1)} c_r P_r: the fixed-q limit operator."""
        qv = self.q.q
        s = self.weight.alpha + self.weight.beta + 1.0
        out = Poly.zero()
        for r, (c, pr) in enumerate(zip(self.coefficients, self.polys)):
            if c != 0.0:
                out = out + pr.poly.scale(qv ** (r * (r + s)) * c)
        return out


def spectral_expand(f, R: int, w: JacobiWeight, q,
                    tol: TailTolerance = DEFAULT_TOL) -> SpectralExpansion:
    """Coefficients of f against P_0..P_R under the weight's bilinear form."""
    if int(R) < 0:
        raise DomainError(f"degree cap must be >= 0, got {R}")
    _require_regular(w, "spectral_expand")
    qp = as_q(q)
    polys, coeffs, norms = [], [], []
    for r in range(int(R) + 1):
        pr = qjacobi_series(r, w, qp)
        nsq = inner_product(pr.poly, pr.poly, w, qp, tol)
        if nsq <= 0.0:
            raise DomainError(f"nonpositive squared norm at degree {r}")
        c = inner_product(f, pr.poly, w, qp, tol) / nsq
        polys.append(pr)
        coeffs.append(c)
        norms.append(math.sqrt(nsq))
    return SpectralExpansion(w, qp, tuple(coeffs), tuple(norms), tuple(polys))


def spectral_limit(f, R: int, w: JacobiWeight, q,
                   tol: TailTolerance = DEFAULT_TOL) -> Poly:
    """Truncated fixed-q limit of the operator images of f.

    For a polynomial f of degree <= R the projection is exact and the sum
    terminates at deg f; the only fixed points are the constants.
    """
    return spectral_expand(f, R, w, q, tol).limit_image()


def classical_jacobi(r: int, alpha: float, beta: float) -> Poly:
    """Classical Jacobi polynomial on [0,1] for the weight x^a (1-x)^b.

    Same finite Rodrigues sum as qjacobi_rodrigues with q = 1; normalized
    by P_r(0) = binom(r+alpha, r).  Serves as the q -> 1 oracle.
    """
    r = int(r)
    total = Poly.zero()
    for k in range(r + 1):
        gratio = math.gamma(alpha + r + 1.0) * math.gamma(beta + r + 1.0) / (
            math.gamma(alpha + k + 1.0) * math.gamma(beta + r - k + 1.0)
        )
        coef = math.comb(r, k) * gratio * (-1.0) ** k
        term = Poly.monomial(k, coef)
        for _ in range(r - k):
            term = term * Poly((1.0, -1.0))
        total = total + term
    return total.scale(1.0 / math.factorial(r))
