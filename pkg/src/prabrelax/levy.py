"""One-sided Levy stable laws and the h / g functions.

``h_{alpha,lambda}(u, t)`` is the inverse Laplace transform (in ``t``) of
``s^(-lambda) exp(-u s^alpha)``. Its special cases are the one-sided stable
density ``h_{alpha,0}`` and its primitive ``h_{alpha,1}``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import _contour
from ._special import EPS, rgamma
from .errors import (
    DenominatorTooLarge,
    InvalidParam,
    NonConvergent,
    QuadratureFailure,
    RouteUnavailable,
)
from .mlfun import RationalAlpha, _pfq_rows

ROUTES = ("auto", "series", "hypergeometric", "inversion", "integral")
# refusal threshold of the series route: max|term| / |sum|
SERIES_GUARD = 1e12
# the automatic route only keeps the series when it loses fewer digits
AUTO_GUARD = 1e4


@dataclass(frozen=True)
class LevyQuery:
    """Arguments of ``h_{alpha,lambda}(u, t)``."""

    alpha: float
    u: float
    t: float
    lam: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise InvalidParam(f"alpha must lie in (0, 1], got {self.alpha}")
        if not (self.u > 0 and self.t > 0):
            raise InvalidParam("u and t must be positive")

    @property
    def y(self) -> float:
        """Similarity variable ``u t^(-alpha)``."""
        return self.u * self.t ** (-self.alpha)


def _heaviside_family(q: LevyQuery) -> float:
    # alpha = 1: the image s^(-lam) exp(-u s) inverts to (t-u)_+^(lam-1) / Gamma(lam)
    if q.t > q.u:
        return float((q.t - q.u) ** (q.lam - 1.0) * rgamma(q.lam))
    if q.t < q.u:
        return 0.0
    if q.lam == 1.0:
        return 0.5
    raise RouteUnavailable("h_{1,lambda} is not a function value at t = u")


def _series(q: LevyQuery, guard: float) -> float:
    """Alternating series ``t^(lam-1) sum (-y)^r / (r! Gamma(lam - alpha r))``."""
    y, lam, al = q.y, q.lam, q.alpha
    n = 64
    while True:
        r = np.arange(n)
        with np.errstate(over="ignore", invalid="ignore"):
            c = np.ones(n)
            c[1:] = np.cumprod(-y / r[1:])
            terms = c * rgamma(lam - al * r)
        if not np.isfinite(terms).all():
            raise NonConvergent("Levy series terms overflow double precision")
        mag = np.abs(terms)
        part = np.abs(np.cumsum(terms))
        ok = (mag <= 1e-17 * np.maximum(part, 1e-300)) | (mag == 0)
        # the zeros of 1/Gamma are not a stop signal; ask for eight quiet terms
        win = np.convolve(ok.astype(int), np.ones(8, dtype=int), mode="valid") == 8
        if win[2:].any():
            stop = int(np.argmax(win[2:])) + 2 + 8
            break
        if n >= 8192:
            raise NonConvergent("Levy series did not settle in double precision")
        n *= 2
    kept = terms[:stop]
    S = kept.sum()
    if np.abs(kept).max() > guard * abs(S):
        raise NonConvergent(
            f"Levy series cancels: max term / sum = {np.abs(kept).max() / abs(S):.3g}"
        )
    return float(q.t ** (lam - 1.0) * S)


def _hypergeometric(q: LevyQuery) -> float:
    """Finite sum of ``l+1 F_k`` functions for rational ``alpha = l/k``.

    Grouping the series terms ``r = k m + j`` with ``b_j = lam - l j / k`` gives
    ``sum_j (-y)^j / (j! Gamma(b_j)) * l+1F_k(1, Delta(l, 1-b_j); Delta(k, 1+j);
    (-1)^(k+l) y^k l^l / k^k)``.
    """
    try:
        ra = RationalAlpha.from_float(q.alpha)
    except DenominatorTooLarge as exc:
        raise RouteUnavailable(str(exc)) from exc
    l, k = ra.l, ra.k
    y = q.y
    z = (-1.0) ** (k + l) * y**k * float(l) ** l / float(k) ** k
    total, err = 0.0, 0.0
    for j in range(k):
        b = q.lam - l * j / k
        pref = (-y) ** j / math.factorial(j) * float(rgamma(b))
        if pref == 0.0:
            continue
        upper = [1.0] + [(1.0 - b + i) / l for i in range(l)]
        lower = [(1.0 + j + i) / k for i in range(k)]
        S, A = _pfq_rows(upper, lower, [], z, tol=1e-16)
        total += pref * S
        err += abs(pref) * A
    if err > 1e6 * abs(total):
        raise NonConvergent("hypergeometric form cancels in double precision")
    return float(q.t ** (q.lam - 1.0) * total)


def _sector(alpha: float) -> float:
    # exp(-u s^alpha) decays for |arg s| < pi/(2 alpha); stay inside with margin
    return 0.9 * min(math.pi / 2.0, math.pi / (2.0 * alpha) - math.pi / 2.0)


def _inversion(q: LevyQuery) -> float:
    al, lam, u = q.alpha, q.lam, q.u

    def F(s):
        return s ** (-lam) * np.exp(-u * s**al)

    return _contour.hyperbolic(F, q.t, _sector(al))


def _kanter_A(phi, al):
    return (np.sin(al * phi) / np.sin(phi)) ** (1.0 / (1.0 - al)) * (
        np.sin((1.0 - al) * phi) / np.sin(al * phi)
    )


def _integral(q: LevyQuery) -> float:
    """Kanter's representation, for ``lambda`` in {0, 1}.

    With ``x = t u^(-1/alpha)`` and ``p = alpha / (1 - alpha)``,
    ``Phi = (1/pi) int_0^pi exp(-A(phi) x^-p) dphi`` and the density is
    ``u^(-1/alpha) (p / x) (1/pi) int_0^pi A x^-p exp(-A x^-p) dphi``.
    """
    al = q.alpha
    if q.lam not in (0.0, 1.0):
        raise RouteUnavailable("the integral route covers lambda = 0 and 1 only")
    x = q.t * q.u ** (-1.0 / al)
    p = al / (1.0 - al)
    xp = x ** (-p)
    if q.lam == 1.0:
        def g(phi):
            return math.exp(-_kanter_A(phi, al) * xp)
    else:
        def g(phi):
            w = _kanter_A(phi, al) * xp
            return w * math.exp(-w)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(g, 0.0, math.pi, epsabs=1e-15, epsrel=1e-12, limit=200)[:2]
    if err > 1e-8 * max(abs(val), 1e-300) and err > 1e-14:
        raise QuadratureFailure(f"Kanter integral error estimate {err:.2e}")
    val /= math.pi
    if q.lam == 0.0:
        val *= p / x * q.u ** (-1.0 / al)
    return float(val)


def h_function(q: LevyQuery, route: str = "auto") -> float:
    """``h_{alpha,lambda}(u, t) = L^{-1}[s^(-lambda) exp(-u s^alpha)](t)``.

    Parameters
    ----------
    q : LevyQuery
    route : {"auto", "series", "hypergeometric", "inversion", "integral"}
        ``series`` sums the alternating power series in ``y = u t^(-alpha)``;
        ``hypergeometric`` regroups it into ``l+1F_k`` functions for rational
        alpha; ``inversion`` integrates the image along a hyperbolic contour;
        ``integral`` is Kanter's representation (``lambda`` in {0, 1}).
        ``auto`` keeps the series while it is well conditioned.

    Notes
    -----
    At ``alpha = 1`` every route returns the shifted power
    ``(t-u)_+^(lambda-1) / Gamma(lambda)``, with the midpoint value 1/2 for
    the step at ``t = u``.

    Raises
    ------
    NonConvergent, RouteUnavailable
    """
    if route not in ROUTES:
        raise InvalidParam(f"unknown route {route!r}")
    if q.alpha == 1.0:
        return _heaviside_family(q)
    if route == "series":
        return _series(q, SERIES_GUARD)
    if route == "hypergeometric":
        return _hypergeometric(q)
    if route == "inversion":
        return _inversion(q)
    if route == "integral":
        return _integral(q)
    try:
        return _series(q, AUTO_GUARD)
    except NonConvergent:
        pass
    if q.lam in (0.0, 1.0):
        return _integral(q)
    return _inversion(q)


def levy_density(alpha: float, u: float, t: float, route: str = "auto") -> float:
    """One-sided stable density ``h_{alpha,0}(u, t)`` (image ``exp(-u s^alpha)``).

    Examples
    --------
    >>> v = levy_density(0.5, 1.0, 1.0)
    >>> abs(v - math.exp(-0.25) / (2 * math.sqrt(math.pi))) < 1e-14
    True
    """
    return h_function(LevyQuery(alpha, u, t, 0.0), route)


def levy_cdf(alpha: float, u: float, t: float, route: str = "auto") -> float:
    """Distribution function ``h_{alpha,1}(u, t)``, the time primitive of the density."""
    return h_function(LevyQuery(alpha, u, t, 1.0), route)


def g_function(alpha: float, beta: float, gamma: float, u: float, t: float,
               route: str = "auto") -> float:
    """``g^gamma_{alpha,beta}(u, t) = u^(gamma - beta/alpha) h_{alpha, beta - alpha gamma}(u, t)``."""
    return u ** (gamma - beta / alpha) * h_function(LevyQuery(alpha, u, t, beta - alpha * gamma), route)


def _y_cutoff(alpha: float) -> float:
    # beyond this y the h functions are below exp(-40) of their scale:
    # they decay like exp(-c y^(1/(1-alpha))) with c = (1-alpha) alpha^(alpha/(1-alpha))
    c = (1.0 - alpha) * alpha ** (alpha / (1.0 - alpha))
    return (40.0 / c) ** (1.0 - alpha)


def ml_integral_rep(alpha: float, beta: float, gamma: float, a: float, t: float,
                    path: str = "general", route: str = "auto") -> float:
    """``E^gamma_{alpha,beta}(-a t^alpha)`` from its integral over stable laws.

    ``(1/Gamma(gamma)) int_0^inf exp(-a u) t^(1-beta) u^(beta/alpha - 1) g^gamma_{alpha,beta}(u, t) du``.

    Parameters
    ----------
    path : {"general", "levy"}
        ``levy`` uses the stable density directly and needs ``beta = alpha gamma``.

    Notes
    -----
    The substitution ``u = t^alpha v^(1/gamma)`` removes the ``u^(gamma-1)``
    endpoint behaviour; the upper limit is where ``h`` has decayed below
    ``exp(-40)`` of its scale.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidParam("alpha must lie in (0, 1)")
    if beta <= 0 or gamma <= 0 or t <= 0:
        raise InvalidParam("beta, gamma and t must be positive")
    if a < 0:
        raise InvalidParam("a must be non-negative so that the integrand is damped")
    if path == "levy" and abs(beta - alpha * gamma) > 1e-14:
        raise InvalidParam("the Levy-density path needs beta = alpha * gamma")
    ta = t**alpha
    vmax = _y_cutoff(alpha) ** gamma
    if a > 0:
        vmax = min(vmax, (60.0 / (a * ta)) ** gamma)

    def integrand(v):
        if v == 0.0:
            v = 1e-300
        u = ta * v ** (1.0 / gamma)
        # Jacobian: u^(gamma-1) du = t^(alpha gamma) / gamma dv
        jac = ta**gamma / gamma * u ** (1.0 - gamma)
        if path == "levy":
            core = u ** (gamma - 1.0) * levy_density(alpha, u, t, route)
        else:
            core = u ** (beta / alpha - 1.0) * g_function(alpha, beta, gamma, u, t, route)
        return math.exp(-a * u) * core * jac

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(integrand, 0.0, vmax, epsabs=1e-13, epsrel=1e-11, limit=200,
                             full_output=1)
    val, err = res[0], res[1]
    if len(res) > 3 and err > 1e-8 * max(abs(val), 1.0):
        raise QuadratureFailure(f"integral representation: error estimate {err:.2e}")
    return float(t ** (1.0 - beta) * val * rgamma(gamma))
