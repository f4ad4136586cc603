"""Dense real-coefficient polynomials in the monomial basis.

The exact vehicle for operator images of polynomials: coefficient
arithmetic only, no sampling.  coeffs[p] multiplies x^p; trailing zeros
are normalized away and the zero polynomial has an empty coefficient
tuple.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .qcore import as_q, q_number

__all__ = ["Poly"]


def _normalize(coeffs) -> tuple:
    cs = [float(c) for c in coeffs]
    while cs and cs[-1] == 0.0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class Poly:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _normalize(self.coeffs))

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def one() -> "Poly":
        return Poly((1.0,))

    @staticmethod
    def x() -> "Poly":
        return Poly((0.0, 1.0))

    @staticmethod
    def monomial(p: int, c: float = 1.0) -> "Poly":
        return Poly((0.0,) * p + (float(c),))

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __call__(self, x):
        if not self.coeffs:
            return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
        return np.polynomial.polynomial.polyval(x, np.asarray(self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(tuple(out))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly.zero()
            return Poly(tuple(np.convolve(self.coeffs, other.coeffs)))
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c: float) -> "Poly":
        return Poly(tuple(float(c) * v for v in self.coeffs))

    def scale_arg(self, s: float) -> "Poly":
        """The polynomial x -> p(s x)."""
        return Poly(tuple(c * float(s) ** p for p, c in enumerate(self.coeffs)))

    def q_derivative(self, q) -> "Poly":
        """Exact q-derivative: sum_p c_p [p]_q x^{p-1}."""
        qv = as_q(q).q
        return Poly(tuple(c * q_number(p, qv) for p, c in enumerate(self.coeffs) if p >= 1))

    def derivative(self) -> "Poly":
        """Classical derivative."""
        return Poly(tuple(p * c for p, c in enumerate(self.coeffs) if p >= 1))

    def coeff_norm(self) -> float:
        """Max absolute coefficient; 0 for the zero polynomial."""
        return max((abs(c) for c in self.coeffs), default=0.0)

    def coeff(self, p: int) -> float:
        return self.coeffs[p] if 0 <= p < len(self.coeffs) else 0.0

    def as_array(self, length: int | None = None) -> np.ndarray:
        n = len(self.coeffs) if length is None else int(length)
        if n < len(self.coeffs):
            raise DomainError("requested length shorter than the coefficient list")
        out = np.zeros(n)
        out[: len(self.coeffs)] = self.coeffs
        return out
