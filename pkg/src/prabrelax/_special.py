"""Small special-function helpers shared across modules."""

from __future__ import annotations

import math

import numpy as np
from scipy import special

EPS = float(np.finfo(float).eps)


def rgamma(z):
    """Reciprocal gamma function as an entire function (zero at the poles)."""
    return special.rgamma(z)


def poch(a: float, r: int) -> float:
    """Rising factorial ``(a)_r`` for real ``a`` and integer ``r >= 0``.

    Uses the product for small ``r`` and a signed log-gamma ratio otherwise,
    so negative non-integer ``a`` keeps its sign without overflow in the
    intermediate gamma values.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if r <= 64:
        out = 1.0
        for i in range(r):
            out *= a + i
        return out
    if a <= 0 and float(a).is_integer():
        return 0.0 if r > -a else math.prod(a + i for i in range(r))
    sign = special.gammasgn(a + r) * special.gammasgn(a)
    return float(sign * math.exp(special.gammaln(a + r) - special.gammaln(a)))


def as_negative_integer(nu: float) -> int | None:
    """Return ``n`` when ``nu == -n`` for an integer ``n >= 0``, else None."""
    if nu <= 0 and float(nu).is_integer():
        return int(-nu)
    return None
