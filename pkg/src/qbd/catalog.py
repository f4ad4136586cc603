"""Named test-function catalog used by the experiments and the CLI.

Ids: const, affine, square, cube, absdev, sin6, powneg:p (= x^{-p}).
Each entry is a RealFunction with optional analytic first and second
derivatives for the experiments that need them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError
from .qcore import RealFunction

__all__ = ["CatalogFunction", "get_function", "catalog_ids"]


@dataclass(frozen=True)
class CatalogFunction(RealFunction):
    d1: Callable | None = None
    d2: Callable | None = None


def _ones(x):
    return np.ones_like(np.asarray(x, dtype=float))


def _zeros(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def _ident(x):
    return np.asarray(x, dtype=float) + 0.0


_FIXED = {
    "const": CatalogFunction(fn=_ones, name="const", d1=_zeros, d2=_zeros),
    "affine": CatalogFunction(fn=_ident, name="affine", d1=_ones, d2=_zeros),
    "square": CatalogFunction(
        fn=lambda x: np.asarray(x, dtype=float) ** 2,
        name="square",
        d1=lambda x: 2.0 * np.asarray(x, dtype=float),
        d2=lambda x: 2.0 * _ones(x),
    ),
    "cube": CatalogFunction(
        fn=lambda x: np.asarray(x, dtype=float) ** 3,
        name="cube",
        d1=lambda x: 3.0 * np.asarray(x, dtype=float) ** 2,
        d2=lambda x: 6.0 * np.asarray(x, dtype=float),
    ),
    # kink at 1/2: no analytic derivatives
    "absdev": CatalogFunction(fn=lambda x: np.abs(np.asarray(x, dtype=float) - 0.5), name="absdev"),
    "sin6": CatalogFunction(
        fn=lambda x: np.sin(6.0 * np.asarray(x, dtype=float)),
        name="sin6",
        d1=lambda x: 6.0 * np.cos(6.0 * np.asarray(x, dtype=float)),
        d2=lambda x: -36.0 * np.sin(6.0 * np.asarray(x, dtype=float)),
    ),
}


def catalog_ids() -> list[str]:
    return sorted(_FIXED) + ["powneg:p"]


def get_function(fn_id: str) -> CatalogFunction:
    """Look up a catalog function by id, e.g. "absdev" or "powneg:0.25"."""
    fn_id = fn_id.strip()
    if fn_id in _FIXED:
        return _FIXED[fn_id]
    if fn_id.startswith("powneg:"):
        try:
            p = float(fn_id.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad powneg parameter in {fn_id!r}") from None
        if not p > 0.0:
            raise ConfigError(f"powneg exponent must be > 0, got {p}")
        return CatalogFunction(
            fn=lambda x, p=p: np.asarray(x, dtype=float) ** (-p),
            at_zero=False,
            name=f"powneg:{p:g}",
            d1=lambda x, p=p: -p * np.asarray(x, dtype=float) ** (-p - 1.0),
            d2=lambda x, p=p: p * (p + 1.0) * np.asarray(x, dtype=float) ** (-p - 2.0),
        )
    raise ConfigError(f"unknown function id {fn_id!r}; known: {', '.join(catalog_ids())}")
