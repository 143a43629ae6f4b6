"""Quadrature rules for the Bromwich integral.

Every rule takes a vectorised image ``F`` (complex ndarray in, complex ndarray
out) and a single time ``t > 0`` and returns the real inverse transform.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial, log

import numpy as np


def talbot(F, t: float, n: int = 32, shift: float = 0.0) -> float:
    """Fixed Talbot rule of Abate and Valko.

    Parameters
    ----------
    F : callable
        Vectorised Laplace image.
    t : float
        Time, ``t > 0``.
    n : int
        Number of contour nodes.
    shift : float
        The contour is moved right by ``shift`` so that singularities with
        positive real part stay inside.
    """
    r = 2.0 * n / (5.0 * t)
    theta = np.arange(1, n) * np.pi / n
    cot = 1.0 / np.tan(theta)
    s = shift + r * theta * (cot + 1j)
    sigma = theta + (theta * cot - 1.0) * cot
    s0 = shift + r
    with np.errstate(over="ignore", invalid="ignore"):
        head = 0.5 * np.exp(s0 * t) * F(np.array([s0 + 0j]))[0]
        body = np.exp(t * s) * F(s) * (1.0 + 1j * sigma)
        total = head.real + body.real.sum()
    return float(r / n * total)


@lru_cache(maxsize=8)
def _stehfest_weights(n: int) -> tuple:
    half = n // 2
    out = []
    for k in range(1, n + 1):
        acc = 0
        for j in range((k + 1) // 2, min(k, half) + 1):
            acc += (j**half * factorial(2 * j)) / (
                factorial(half - j) * factorial(j) * factorial(j - 1)
                * factorial(k - j) * factorial(2 * j - k)
            )
        out.append((-1) ** (k + half) * acc)
    return tuple(out)


def stehfest(F, t: float, n: int = 14, shift: float = 0.0) -> float:
    """Gaver-Stehfest rule on the real axis (``n`` even).

    A positive ``shift`` uses ``f(t) = exp(shift t) L^{-1}[F(s + shift)]``.
    """
    if n % 2:
        raise ValueError("Stehfest needs an even node count")
    w = np.array(_stehfest_weights(n), dtype=float)
    ln2t = log(2.0) / t
    s = ln2t * np.arange(1, n + 1) + shift
    vals = np.real(F(s.astype(complex)))
    return float(np.exp(shift * t) * ln2t * np.dot(w, vals))


def parabolic(F, t: float, n: int = 48) -> float:
    """Trapezoid rule on the parabola of Weideman and Trefethen.

    Suitable when the image is analytic off the negative real axis.
    """
    h = 3.0 / n
    u = np.arange(-n, n + 1) * h
    z = n / t * (0.1309 - 0.1194 * u**2 + 0.25j * u)
    dz = n / t * (-0.2388 * u + 0.25j)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        v = np.exp(z * t) * F(z) * dz
    return float((h / (2j * np.pi) * v.sum()).real)


@lru_cache(maxsize=256)
def _hyperbola_params(n: int, delta: float) -> tuple:
    """Scale, angle and step of the hyperbola for ``n`` nodes.

    The contour family ``z(w) = mu (1 - sin(a - i w))`` maps the strip
    ``|Im w| < d`` onto hyperbolas with angles ``a - d .. a + d``. The
    log-error model balances discretisation ``A(1 - sin(a-d)) - 2 pi d / h``,
    truncation ``A(1 - sin(a) cosh(n h))`` and rounding ``log(eps) + A(1 - sin a)``
    with ``A = mu t``; the minimum is found on a grid.
    """
    frac = np.linspace(0.05, 0.6, 12)[:, None, None]
    A = np.linspace(0.5, 3.0 * n, 200)[None, :, None]
    h = (np.linspace(0.05, 6.0, 200) / n * np.pi)[None, None, :]
    a1 = frac * delta
    ac = 0.5 * (delta + a1)
    d = 0.5 * (delta - a1)
    with np.errstate(over="ignore"):
        e1 = A * (1.0 - np.sin(a1)) - 2.0 * np.pi * d / h
        e2 = A * (1.0 - np.sin(ac) * np.cosh(h * n))
    e3 = np.log(np.finfo(float).eps) + A * (1.0 - np.sin(ac))
    err = np.maximum(np.maximum(e1, e2), e3)
    i, j, k = np.unravel_index(np.argmin(err), err.shape)
    return float(err[i, j, k]), float(ac[i, 0, 0]), float(A[0, j, 0]), float(h[0, 0, k])


def hyperbolic(F, t: float, delta: float, n: int | None = None,
               target: float = 1e-14, n_max: int = 1024) -> float:
    """Trapezoid rule on a left-opening hyperbola.

    Parameters
    ----------
    F : callable
        Vectorised image, analytic and decaying in the sector
        ``|arg s| < pi/2 + delta``.
    delta : float
        Opening of that sector beyond the imaginary axis, ``0 < delta <= pi/2``.
        Images such as ``exp(-u s**alpha)`` with ``alpha > 1/2`` only decay in
        a narrow sector, which the Talbot and parabolic contours leave.
    n : int, optional
        Half the number of nodes; by default doubled from 32 until the
        modelled error is below ``target``.
    """
    delta = float(min(delta, np.pi / 2))
    if n is None:
        n = 32
        while np.exp(_hyperbola_params(n, round(delta, 12))[0]) > target and n < n_max:
            n *= 2
    _, ac, A, h = _hyperbola_params(n, round(delta, 12))
    mu = A / t
    u = np.arange(-n, n + 1) * h
    z = mu * (1.0 - np.sin(ac - 1j * u))
    dz = 1j * mu * np.cos(ac - 1j * u)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        v = np.exp(z * t) * F(z) * dz
        v = np.where(np.isfinite(v), v, 0.0)
    return float((h / (2j * np.pi) * v.sum()).real)
