"""Mittag-Leffler functions of one, two and three parameters.

The three-parameter function is

    E^nu_{alpha,mu}(x) = sum_r (nu)_r x^r / (r! Gamma(alpha r + mu)),

and the Prabhakar function is ``e^nu_{alpha,mu}(a, t) = t^(mu-1) E^nu_{alpha,mu}(a t^alpha)``.
Negative integer ``nu = -n`` gives the Mittag-Leffler polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy import special

from . import _contour
from ._special import EPS, as_negative_integer, poch, rgamma
from .errors import DenominatorTooLarge, InvalidParam, NonConvergent, NumericalOverflow

DEFAULT_TOL = 1e-13
MAX_TERMS = 10_000
# ratio sum|terms| / |sum| above which the direct series is refused;
# 1e6 bounds the rounding error near 2e-10 relative
MAX_CANCELLATION = 1e6
RATIONAL_KMAX = 12


@dataclass(frozen=True)
class MLParams:
    """Parameters of ``E^nu_{alpha,mu}``; ``mu = 1 + d`` in polynomial notation."""

    alpha: float
    mu: float = 1.0
    nu: float = 1.0

    @property
    def d(self) -> float:
        return self.mu - 1.0

    @property
    def degree(self) -> int | None:
        """Polynomial degree ``n`` when ``nu = -n``, otherwise None."""
        return as_negative_integer(self.nu)


@dataclass(frozen=True)
class RationalAlpha:
    """A rational ``alpha = l/k`` in lowest terms."""

    l: int
    k: int

    def __post_init__(self):
        if self.l < 1 or self.k < 1:
            raise InvalidParam(f"l and k must be positive, got {self.l}/{self.k}")
        if math.gcd(self.l, self.k) != 1:
            raise InvalidParam(f"{self.l}/{self.k} is not in lowest terms")

    @property
    def value(self) -> float:
        return self.l / self.k

    @classmethod
    def from_float(cls, alpha: float, kmax: int = RATIONAL_KMAX, tol: float = 1e-12):
        """Best rational approximation with denominator at most ``kmax``.

        Raises
        ------
        DenominatorTooLarge
            If no fraction with ``k <= kmax`` is within ``tol`` of ``alpha``.
        """
        if isinstance(alpha, RationalAlpha):
            return alpha
        if isinstance(alpha, Fraction):
            frac = alpha
        else:
            frac = Fraction(alpha).limit_denominator(kmax)
            if abs(float(frac) - alpha) > tol * max(1.0, abs(alpha)):
                raise DenominatorTooLarge(
                    f"alpha={alpha!r} has no rational form with denominator <= {kmax}"
                )
        if frac.denominator > kmax:
            raise DenominatorTooLarge(f"denominator {frac.denominator} exceeds {kmax}")
        return cls(frac.numerator, frac.denominator)


def _first_stop(terms: np.ndarray, tol: float, jmin: int) -> np.ndarray:
    """Per-row index of the last term kept, or -1 if the rule is not met.

    The rule asks for three consecutive terms that are each below
    ``tol * |partial sum|`` and non-increasing in magnitude.
    """
    mag = np.abs(terms)
    part = np.abs(np.cumsum(terms, axis=1))
    ok = mag <= tol * part
    ok[:, 1:] &= mag[:, 1:] <= mag[:, :-1]
    ok3 = ok[:, 2:] & ok[:, 1:-1] & ok[:, :-2]
    if jmin > 2:
        ok3[:, : jmin - 2] = False
    hit = ok3.any(axis=1)
    idx = np.argmax(ok3, axis=1) + 2
    return np.where(hit, idx, -1)


def _ml_terms(alpha, mu, nu, x, j):
    """Term matrix ``(nu)_j x^j / (j! Gamma(alpha j + mu))`` for each row.

    Terms are built directly up to the first index with ``alpha j + mu > 0``
    and by the ratio ``(nu+j) x / ((j+1) (alpha j + mu)_alpha)`` afterwards,
    so neither ``x^j`` nor ``Gamma`` overflow on their own.
    """
    cplx = np.iscomplexobj(x)
    dtype = complex if cplx else float
    rows, q = mu.size, j.size
    arg = alpha * j[None, :] + mu[:, None]
    j0 = np.argmax(arg > 0, axis=1)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        step = (nu[:, None] + j[None, :-1]) * (x / (j[None, 1:]))
        coef = np.empty((rows, q), dtype=dtype)
        coef[:, 0] = 1.0
        coef[:, 1:] = np.cumprod(step, axis=1)
        direct = coef * special.rgamma(arg)
        gam = 1.0 / special.poch(np.where(arg[:, :-1] > 0, arg[:, :-1], 1.0), alpha)
        ratio = np.where(j[None, :-1] >= j0[:, None], step * gam, 1.0)
        prod = np.empty((rows, q), dtype=dtype)
        prod[:, 0] = 1.0
        prod[:, 1:] = np.cumprod(ratio, axis=1)
        start = direct[np.arange(rows), j0]
        rec = start[:, None] * prod
    return np.where(j[None, :] < j0[:, None], direct, rec)


def _series_rows(alpha, mu, nu, x, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    """Sum several three-parameter series sharing ``alpha`` and ``x``.

    Parameters
    ----------
    mu, nu : array_like
        One entry per row.

    Returns
    -------
    S, A : ndarray
        Partial sums and the sums of absolute term values (used for
        rounding-error estimates).
    """
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    mu, nu = np.broadcast_arrays(mu, nu)
    rows = mu.size
    # the Gamma poles must be passed before a stop is accepted
    jmin = max(3, int(math.ceil(max(0.0, -mu.min()) / alpha)) + 3)
    q = max(32, jmin + 8)
    while True:
        j = np.arange(q)
        terms = _ml_terms(alpha, mu, nu, x, j)
        stop = _first_stop(np.nan_to_num(terms, nan=np.inf), tol, jmin)
        if (stop >= 0).all():
            break
        if not np.isfinite(terms).all():
            raise NumericalOverflow("series terms overflow double precision")
        if q >= max_terms:
            raise NonConvergent(f"series did not settle within {max_terms} terms")
        q = min(2 * q, max_terms)
    keep = j[None, :] <= stop[:, None]
    kept = np.where(keep, terms, 0.0)
    if not np.isfinite(kept).all():
        raise NumericalOverflow("series terms overflow double precision")
    return kept.sum(axis=1), np.abs(kept).sum(axis=1)


def ml3(params: MLParams, x, tol: float = DEFAULT_TOL, max_terms: int = MAX_TERMS,
        max_cancellation: float = MAX_CANCELLATION):
    """Three-parameter Mittag-Leffler function by direct summation.

    Parameters
    ----------
    params : MLParams
        ``alpha > 0``, ``mu``, ``nu``.
    x : float or complex
        Argument.
    tol : float
        Relative size of the terms at which summation stops.
    max_cancellation : float
        Largest tolerated ratio ``sum|terms| / |sum|``; above it the result
        would lose too many digits and NonConvergent is raised.

    Returns
    -------
    float or complex

    Examples
    --------
    >>> round(ml3(MLParams(1.0, 1.0, 1.0), 1.0), 9)
    2.718281828
    """
    alpha, mu, nu = params.alpha, params.mu, params.nu
    if not alpha > 0:
        raise InvalidParam(f"alpha must be positive, got {alpha}")
    if tol <= 0:
        raise InvalidParam("tol must be positive")
    n = as_negative_integer(nu)
    if n is not None:
        return ml_poly(alpha, mu - 1.0, n, x)
    if x == 0:
        return float(rgamma(mu))
    S, A = _series_rows(alpha, mu, nu, x, tol, max_terms)
    S, A = S[0], A[0]
    if A > max_cancellation * abs(S):
        raise NonConvergent(
            f"direct series loses digits: sum|terms|/|sum| = {A / abs(S) if S else np.inf:.3g}"
        )
    return S.item() if hasattr(S, "item") else S


def ml_poly(alpha: float, d: float, n: int, x):
    """Mittag-Leffler polynomial ``E^{-n}_{alpha,1+d}(x)``.

    ``sum_{r=0}^n C(n,r) (-x)^r / Gamma(alpha r + 1 + d)``; ``x`` may be an array.
    """
    if n < 0 or int(n) != n:
        raise InvalidParam("n must be a non-negative integer")
    n = int(n)
    x = np.asarray(x)
    r = np.arange(n + 1)
    c = np.array([math.comb(n, i) for i in r], dtype=float) * rgamma(alpha * r + 1.0 + d)
    # Horner in (-x)
    out = np.zeros(np.broadcast(x).shape, dtype=np.result_type(x, float))
    for ci in c[::-1]:
        out = out * (-x) + ci
    return out.item() if out.ndim == 0 else out


def _pfq_rows(upper, lower, reg_lower, z, tol=DEFAULT_TOL, max_terms=MAX_TERMS):
    """Generalised hypergeometric series with some regularised lower parameters.

    Sums ``sum_q prod(upper)_q / prod(lower)_q * prod 1/Gamma(c + q) * z^q / q!``
    where ``c`` runs over ``reg_lower``. Returns ``(S, A)`` as scalars.
    """
    upper = np.asarray(upper, dtype=float)
    lower = np.asarray(lower, dtype=float)
    reg_lower = np.asarray(reg_lower, dtype=float)
    jmin = 3
    if reg_lower.size:
        jmin = max(3, int(math.ceil(max(0.0, -reg_lower.min()))) + 3)
    # first index from which every regularised parameter c + j is positive
    j0 = int(math.ceil(max(0.0, -reg_lower.min()))) + 1 if reg_lower.size else 0
    q = max(32, jmin + 8, j0 + 8)
    dtype = complex if np.iscomplexobj(z) else float
    while True:
        j = np.arange(q, dtype=float)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
            step = (np.prod(upper[:, None] + j[None, :-1], axis=0)
                    / np.prod(lower[:, None] + j[None, :-1], axis=0) * (z / j[1:]))
            head = np.ones(j0 + 1, dtype=dtype)
            head[1:] = np.cumprod(step[:j0])
            head = head * np.prod(rgamma(reg_lower[:, None] + j[None, : j0 + 1]), axis=0)
            # past j0 the factor 1/Gamma(c + j) advances by 1/(c + j)
            tail = step[j0:] / np.prod(reg_lower[:, None] + j[None, j0:-1], axis=0)
            coef = np.empty(q, dtype=dtype)
            coef[:j0] = head[:j0]
            coef[j0] = head[j0]
            coef[j0 + 1:] = head[j0] * np.cumprod(tail)
        stop = _first_stop(np.nan_to_num(coef, nan=np.inf)[None, :], tol, jmin)[0]
        if stop >= 0:
            break
        if not np.isfinite(coef).all():
            raise NumericalOverflow("hypergeometric terms overflow double precision")
        if q >= max_terms:
            raise NonConvergent(f"hypergeometric series did not settle within {max_terms} terms")
        q = min(2 * q, max_terms)
    kept = coef[: stop + 1]
    return kept.sum(), np.abs(kept).sum()


def ml_hypergeom(alpha, d: float, nu: float, x, tol: float = DEFAULT_TOL,
                 max_terms: int = MAX_TERMS, max_cancellation: float = MAX_CANCELLATION):
    """Three-parameter function for rational ``alpha = l/k`` as a sum of pFq.

    ``E^nu_{l/k,1+d}(x) = sum_{j<k} x^j (nu)_j / (j! Gamma(b_j))
    * 1+kF_{l+k}(1, Delta(k, nu+j); Delta(k, 1+j), Delta(l, b_j); x^k / l^l)``
    with ``b_j = 1 + d + l j / k`` and ``Delta(m, c) = (c/m, (c+1)/m, ...,
    (c+m-1)/m)``. The factor ``1/Gamma(b_j)`` is absorbed into the
    ``Delta(l, b_j)`` parameters by the Gauss multiplication formula, which
    keeps the expression finite when ``b_j`` is a pole. For ``nu = -n`` the
    outer sum stops at ``j = min(n, k-1)``.

    Parameters
    ----------
    alpha : RationalAlpha or float
        Floats are converted with denominator cap ``k <= 12``.
    """
    ra = RationalAlpha.from_float(alpha)
    l, k = ra.l, ra.k
    if ra.value > 1:
        raise InvalidParam("hypergeometric reduction needs alpha in (0, 1]")
    n = as_negative_integer(nu)
    jmax = k - 1 if n is None else min(n, k - 1)
    z = x**k / l**l
    total = 0.0
    err = 0.0
    for j in range(jmax + 1):
        pj = poch(nu, j) / math.factorial(j)
        if pj == 0.0:
            continue
        b = 1.0 + d + l * j / k
        upper = [1.0] + [(nu + j + i) / k for i in range(k)]
        lower = [(1.0 + j + i) / k for i in range(k)]
        reg = [(b + i) / l for i in range(l)]
        S, A = _pfq_rows(upper, lower, reg, z, tol, max_terms)
        pref = pj * x**j * (2.0 * math.pi) ** ((l - 1) / 2.0) * float(l) ** (0.5 - b)
        total = total + pref * S
        err += abs(pref) * A
    if err > max_cancellation * abs(total):
        raise NonConvergent("hypergeometric sum loses digits to cancellation")
    return total


def _ml_inversion(alpha: float, mu: float, nu: float, x: float, n: int = 48) -> float:
    """E^nu_{alpha,mu}(x) for real ``x < 0`` by contour inversion at t = 1.

    Uses ``L[t^(mu-1) E^nu_{alpha,mu}(-z t^alpha)] = s^(alpha nu - mu) (s^alpha + z)^(-nu)``
    on a parabolic contour; valid for ``0 < alpha <= 1``.
    """
    z = -float(x)

    def image(s):
        return s ** (alpha * nu - mu) * (s**alpha + z) ** (-nu)

    return _contour.parabolic(image, 1.0, n)


def mittag_leffler(alpha: float, mu: float = 1.0, nu: float = 1.0, x=0.0,
                   tol: float = DEFAULT_TOL):
    """Robust three-parameter Mittag-Leffler function.

    Tries the direct series and, for real negative arguments with
    ``0 < alpha <= 1`` where the series would cancel catastrophically, falls
    back to numerical inversion of the Laplace pair.
    """
    try:
        return ml3(MLParams(alpha, mu, nu), x, tol)
    except (NonConvergent, NumericalOverflow):
        if np.iscomplexobj(x) or x >= 0 or not (0 < alpha <= 1):
            raise
        return _ml_inversion(alpha, mu, nu, x)


def prabhakar(params: MLParams, a: float, t: float, tol: float = DEFAULT_TOL):
    """Prabhakar function ``e^nu_{alpha,mu}(a, t) = t^(mu-1) E^nu_{alpha,mu}(a t^alpha)``.

    Examples
    --------
    >>> round(prabhakar(MLParams(1.0, 1.0, 1.0), -1.0, 2.0), 12) == round(math.exp(-2.0), 12)
    True
    """
    alpha, mu, nu = params.alpha, params.mu, params.nu
    if t < 0:
        raise InvalidParam("t must be non-negative")
    if t == 0:
        if mu < 1:
            raise InvalidParam("the Prabhakar function is singular at t=0 for mu < 1")
        return float(rgamma(mu)) if mu == 1 else 0.0
    return t ** (mu - 1.0) * mittag_leffler(alpha, mu, nu, a * t**alpha, tol)


def prabhakar_derivative(params: MLParams, a: float, t: float, n: int = 1,
                         tol: float = DEFAULT_TOL):
    """n-th time derivative of the Prabhakar function by parameter shift.

    ``d^n/dt^n [t^(mu-1) E^nu_{alpha,mu}(a t^alpha)] = t^(mu-1-n) E^nu_{alpha,mu-n}(a t^alpha)``.
    For ``mu - n <= 0`` the right side is the term-wise derivative, which is
    still exact for ``t > 0``.
    """
    if n < 1 or int(n) != n:
        raise InvalidParam("n must be a positive integer")
    if t <= 0:
        raise InvalidParam("t must be positive")
    shifted = MLParams(params.alpha, params.mu - n, params.nu)
    return prabhakar(shifted, a, t, tol)


class Asymptotic(NamedTuple):
    value: float
    regime: str  # "small" or "large"


def ml_asymptotic(alpha: float, A: float, t: float, branch: str | None = None) -> Asymptotic:
    """Leading asymptotics of ``E_alpha(-A t^alpha)``.

    ``1 - A t^alpha / Gamma(1+alpha)`` for ``A^(1/alpha) t << 1`` and
    ``(A t^alpha)^(-1) / Gamma(1-alpha)`` for ``A^(1/alpha) t >> 1``.

    Parameters
    ----------
    branch : {"small", "large"}, optional
        Force a branch; by default it is chosen from ``A^(1/alpha) t``
        against 1.
    """
    if not 0 < alpha < 1:
        raise InvalidParam("alpha must lie in (0, 1)")
    scale = A ** (1.0 / alpha) * t
    regime = branch or ("small" if scale < 1.0 else "large")
    if regime == "small":
        value = 1.0 - A * t**alpha / math.gamma(1.0 + alpha)
    elif regime == "large":
        value = 1.0 / (A * t**alpha * math.gamma(1.0 - alpha))
    else:
        raise InvalidParam(f"unknown branch {branch!r}")
    return Asymptotic(value, regime)


def ml_reflection(alpha: float, x: float, form: str = "zero"):
    """``E_{-alpha,0}(x)`` through the negative-index relation.

    ``E_{-alpha,0}(x) = -E_{alpha,0}(1/x) = -x^(-1) E_{alpha,alpha}(1/x)``.

    Parameters
    ----------
    form : {"zero", "alpha"}
        Which right-hand side to evaluate.
    """
    if x == 0:
        raise InvalidParam("x must be non-zero")
    y = 1.0 / x
    if form == "zero":
        return -mittag_leffler(alpha, 0.0, 1.0, y)
    if form == "alpha":
        return -y * mittag_leffler(alpha, alpha, 1.0, y)
    raise InvalidParam(f"unknown form {form!r}")
