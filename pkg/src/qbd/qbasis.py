"""q-Bernstein basis polynomials and total-positivity checks.

b_{n,k,q}(x) = [n choose k]_q x^k (1-x)_q^{n-k} with the finite
q-Pochhammer; the family is a nonnegative partition of unity on [0,1].
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CapabilityError, DomainError
from .qcore import QParam, as_q, q_binomial

__all__ = [
    "BasisSpec",
    "SortedNodes",
    "bernstein_basis",
    "bernstein_all",
    "bernstein_matrix",
    "collocation_matrix",
    "MinorCheck",
    "all_minors_nonneg",
    "sign_changes",
]


@dataclass(frozen=True)
class BasisSpec:
    n: int
    q: QParam

    def __post_init__(self):
        if int(self.n) < 0:
            raise DomainError(f"basis degree must be >= 0, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "q", as_q(self.q))


@dataclass(frozen=True)
class SortedNodes:
    nodes: tuple

    def __post_init__(self):
        nodes = tuple(float(t) for t in self.nodes)
        if any(not 0.0 <= t <= 1.0 for t in nodes):
            raise DomainError("collocation nodes must lie in [0,1]")
        if any(b <= a for a, b in zip(nodes, nodes[1:])):
            raise DomainError("collocation nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)


def bernstein_matrix(spec: BasisSpec, xs) -> np.ndarray:
    """All basis values at the points xs: shape (len(xs), n+1).

    Column k holds b_{n,k,q}; rows follow xs.  Built from prefix products
    of the factors (1 - q^j x), so each row costs O(n).
    """
    n, q = spec.n, spec.q.q
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    m = xs.shape[0]
    pref = np.ones((m, n + 1))
    for j in range(1, n + 1):
        pref[:, j] = pref[:, j - 1] * (1.0 - q ** (j - 1) * xs)
    powers = np.ones((m, n + 1))
    for k in range(1, n + 1):
        powers[:, k] = powers[:, k - 1] * xs
    binom = np.array([q_binomial(n, k, q) for k in range(n + 1)])
    out = np.empty((m, n + 1))
    for k in range(n + 1):
        out[:, k] = binom[k] * powers[:, k] * pref[:, n - k]
    return out


def bernstein_all(spec: BasisSpec, x: float) -> np.ndarray:
    """Vector (b_{n,0}(x), ..., b_{n,n}(x)); sums to 1."""
    return bernstein_matrix(spec, [x])[0]


def bernstein_basis(spec: BasisSpec, k: int, x: float) -> float:
    """Single basis value b_{n,k,q}(x) for 0 <= k <= n, 0 <= x <= 1."""
    if not 0 <= int(k) <= spec.n:
        raise DomainError(f"basis index k={k} outside 0..{spec.n}")
    if not 0.0 <= float(x) <= 1.0:
        raise DomainError(f"basis argument x={x} outside [0,1]")
    return float(bernstein_all(spec, float(x))[int(k)])


def collocation_matrix(funcs: Sequence, nodes: SortedNodes) -> np.ndarray:
    """Matrix with entry (i,j) = funcs[j](nodes[i])."""
    if not funcs:
        raise DomainError("collocation_matrix requires at least one function")
    return np.array([[float(f(t)) for f in funcs] for t in nodes.nodes])


class MinorCheck(NamedTuple):
    ok: bool
    rows: tuple | None = None
    cols: tuple | None = None
    det: float | None = None


def all_minors_nonneg(M, max_order: int, tol_det: float = 1e-10) -> MinorCheck:
    """Enumerate every square minor of order <= max_order and test det >= -tol_det.

    Returns the first violating minor's row/column index sets and its
    determinant when one exists.  max_order is capped at 4: full minor
    enumeration blows up combinatorially beyond that.
    """
    if int(max_order) < 1:
        raise DomainError(f"max_order must be >= 1, got {max_order}")
    if int(max_order) > 4:
        raise CapabilityError("minor enumeration is limited to orders <= 4")
    M = np.asarray(M, dtype=float)
    r, c = M.shape
    for order in range(1, min(int(max_order), r, c) + 1):
        for rows in combinations(range(r), order):
            sub = M[np.ix_(rows, range(c))]
            for cols in combinations(range(c), order):
                det = float(np.linalg.det(sub[:, cols])) if order > 1 else float(sub[0, cols[0]])
                if det < -tol_det:
                    return MinorCheck(False, rows, cols, det)
    return MinorCheck(True)


def sign_changes(values) -> int:
    """Strict sign alternations after deleting exact zeros.

    Callers quantize first if near-zero noise should count as zero.
    """
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)
