"""Relaxation equations with a Prabhakar memory kernel.

The homogeneous integro-differential form

    int_0^t k(t - xi) f'(xi) dxi + B f(t) = 0,    f(0) = f0,

has the Laplace-domain solution ``f_hat = k_hat f0 / (s k_hat + B)``. The
equivalent integral equation is

    f(t) = f0 - B int_0^t kappa(t - xi) f(xi) dxi,

with ``kappa = L^{-1}[1 / (s k_hat)] = t^(mu-1) E^nu_{alpha,mu}(-a t^alpha)``.
Each solver below reaches ``f`` by a different route.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate

from ._special import EPS, rgamma
from .errors import GridTooCoarse, InvalidParam, NonConvergent, NumericalOverflow, QuadratureFailure
from .laplace import LaplaceImage, PrabhakarKernel, inverse_laplace
from .levy import _y_cutoff, levy_cdf
from .mlfun import MLParams, _series_rows, mittag_leffler, prabhakar

METHODS = ("series_f1", "series_f2", "closed_cc", "integral_rep", "laplace_numeric", "integral_eq1")
SERIES_TOL = 1e-13
# relative rounding-error estimate above which a series result is refused
SERIES_GUARD = 1e-10
EQ1_TOL = 1e-4


@dataclass(frozen=True)
class VolterraProblem:
    """Kernel, coupling ``B`` (units time^-mu) and initial value ``f0``."""

    kernel: PrabhakarKernel
    B: float
    f0: float = 1.0

    def __post_init__(self):
        if not self.B >= 0:
            raise InvalidParam(f"B must be non-negative, got {self.B}")

    @classmethod
    def from_tau(cls, kernel: PrabhakarKernel, tau: float, f0: float = 1.0) -> "VolterraProblem":
        """Use the convention ``B = tau^(-mu)``."""
        return cls(kernel, tau ** (-kernel.mu), f0)


@dataclass
class RelaxationCurve:
    """Values of ``f`` on an ascending time grid with the producing method."""

    t_grid: np.ndarray
    values: np.ndarray
    method: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t_grid = np.asarray(self.t_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.t_grid.shape != self.values.shape:
            raise InvalidParam("t_grid and values differ in length")
        if self.method not in METHODS:
            raise InvalidParam(f"unknown method {self.method!r}")


class SeriesResult(NamedTuple):
    value: float
    error: float  # rounding estimate plus first omitted term
    terms: int


def _outer_series(rows, prefactor, t, tol, max_terms, guard, asymptotic):
    """Sum ``sum_r prefactor(r) * rows(r)`` with the three-small-terms rule.

    ``rows(r_array)`` returns inner sums and absolute sums; the rounding
    error is estimated as ``eps * sum |prefactor_r| * sum_j |inner term|``.
    """
    total = 0.0
    err = 0.0
    quiet = 0
    prev = math.inf
    smallest = math.inf
    r0 = 0
    chunk = 16
    while r0 < max_terms:
        r = np.arange(r0, min(r0 + chunk, max_terms))
        with np.errstate(over="ignore", invalid="ignore"):
            pref = prefactor(r)
        S, A = rows(r)
        with np.errstate(over="ignore", invalid="ignore"):
            terms = pref * S
            errs = np.abs(pref) * A
        for i in range(r.size):
            term = terms[i]
            if not math.isfinite(term) or not math.isfinite(errs[i]):
                raise NonConvergent("series terms overflow before the stopping rule")
            total += term
            err += EPS * errs[i]
            mag = abs(term)
            if mag <= tol * abs(total) and mag <= prev:
                quiet += 1
            else:
                quiet = 0
            if quiet >= 3:
                est = err + mag
                if est > guard * abs(total):
                    raise NonConvergent(
                        f"series lost digits: estimated relative error {est / abs(total):.2e}"
                    )
                return SeriesResult(float(total), float(est), int(r[i]) + 1)
            if asymptotic and mag > 1e3 * smallest:
                raise NonConvergent("asymptotic series started to diverge before the tolerance")
            if mag > 0:
                smallest = min(smallest, mag)
                prev = mag
        r0 += r.size
        chunk = min(2 * chunk, 128)
    raise NonConvergent(f"series not converged within {max_terms} terms")


def solve_series_f1(p: VolterraProblem, t: float, max_terms: int = 200, tol: float = SERIES_TOL,
                    guard: float = SERIES_GUARD, full_output: bool = False):
    """Small-time series ``sum_r (-B)^r t^(mu r) E^{nu r}_{alpha,1+mu r}(-a t^alpha) f0``.

    Raises
    ------
    NonConvergent
        When the terms have not settled within ``max_terms`` or the rounding
        estimate exceeds ``guard`` (the large-time regime).
    """
    k = p.kernel
    if t < 0:
        raise InvalidParam("t must be non-negative")
    if t == 0 or p.B == 0:
        res = SeriesResult(float(p.f0), 0.0, 1)
        return res if full_output else res.value
    x = -k.a * t**k.alpha
    logc = math.log(p.B * t**k.mu)

    def prefactor(r):
        return (-1.0) ** r * np.exp(r * logc)

    def rows(r):
        if x == 0:
            v = rgamma(1.0 + k.mu * r)
            return v, np.abs(v)
        return _series_rows(k.alpha, 1.0 + k.mu * r, k.nu * r, x, 1e-16)

    res = _outer_series(rows, prefactor, t, tol, max_terms, guard, asymptotic=False)
    res = SeriesResult(res.value * p.f0, res.error * abs(p.f0), res.terms)
    return res if full_output else res.value


def solve_series_f2(p: VolterraProblem, t: float, max_terms: int = 200, tol: float = SERIES_TOL,
                    guard: float = SERIES_GUARD, full_output: bool = False):
    """Large-time series ``-sum_{n>=1} (-B)^(-n) t^(-mu n) E^{-nu n}_{alpha,1-mu n}(-a t^alpha) f0``.

    For ``alpha < 1`` this is an asymptotic expansion; it is accepted only
    if the terms fall below ``tol`` before they start growing again.
    """
    k = p.kernel
    if t <= 0:
        raise InvalidParam("t must be positive")
    if p.B == 0:
        raise NonConvergent("the large-time series needs B > 0")
    x = -k.a * t**k.alpha
    logc = -math.log(p.B * t**k.mu)

    def prefactor(r):
        n = r + 1
        return -((-1.0) ** n) * np.exp(n * logc)

    def rows(r):
        n = r + 1
        return _series_rows(k.alpha, 1.0 - k.mu * n, -k.nu * n, x, 1e-16)

    res = _outer_series(rows, prefactor, t, tol, max_terms, guard, asymptotic=True)
    res = SeriesResult(res.value * p.f0, res.error * abs(p.f0), res.terms)
    return res if full_output else res.value


def solve_series(p: VolterraProblem, t: float, max_terms: int = 200) -> tuple[float, str]:
    """Try the small-time series, then the large-time one; report which converged."""
    try:
        return solve_series_f1(p, t, max_terms), "series_f1"
    except (NonConvergent, NumericalOverflow):
        return solve_series_f2(p, t, max_terms), "series_f2"


def solve_closed_cc(p: VolterraProblem, t: float) -> float:
    """Closed form for ``nu = 1, mu = alpha``.

    ``f = f0 [a/(B+a) + B/(B+a) E_alpha(-(B+a) t^alpha)]``.
    """
    k = p.kernel
    if not k.is_cole_cole:
        raise InvalidParam("the closed form needs nu = 1 and mu = alpha")
    if t < 0:
        raise InvalidParam("t must be non-negative")
    A = p.B + k.a
    if A == 0:
        return float(p.f0)
    e = mittag_leffler(k.alpha, 1.0, 1.0, -A * t**k.alpha) if t > 0 else 1.0
    return float(p.f0 * (k.a / A + p.B / A * e))


def solve_integral_rep(p: VolterraProblem, t: float, epsabs: float = 1e-12) -> float:
    """Subordination integral for ``mu = alpha nu``.

    ``f = f0 - B f0 int_0^inf exp(-a xi) xi^(nu-1) E_{nu,nu}(-B xi^nu) Phi_alpha(xi, t) dxi``,
    the same as ``f0 + f0 int exp(-a xi) xi^-1 E_{nu,0}(-B xi^nu) Phi_alpha dxi``.
    With ``xi = w^(1/nu)`` the weakly singular factor disappears. The upper
    limit is where ``Phi_alpha`` (or ``exp(-a xi)``) drops below ``exp(-40)``.
    """
    k = p.kernel
    if abs(k.mu - k.alpha * k.nu) > 1e-12:
        raise InvalidParam("the integral representation needs mu = alpha * nu")
    if t <= 0:
        raise InvalidParam("t must be positive")
    if p.B == 0:
        return float(p.f0)
    al, nu, a, B = k.alpha, k.nu, k.a, p.B
    if al == 1.0:
        xi_max = t
    else:
        xi_max = t**al * _y_cutoff(al)
    if a > 0:
        xi_max = min(xi_max, 40.0 / a)
    w_max = xi_max**nu

    def integrand(w):
        xi = w ** (1.0 / nu)
        e = mittag_leffler(nu, nu, 1.0, -B * w)
        phi = 1.0 if al == 1.0 else (levy_cdf(al, xi, t) if xi > 0 else 1.0)
        return math.exp(-a * xi) * e * phi

    # the stable CDF changes fastest around xi ~ t^alpha
    pts = [min(w_max * 0.5, (t**al) ** nu)] if al < 1.0 else None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(integrand, 0.0, w_max, epsabs=epsabs, epsrel=1e-10, limit=200,
                             points=pts, full_output=1)
    val, err = res[0], res[1]
    if len(res) > 3 and err > 1e-7:
        raise QuadratureFailure(f"subordination integral: error estimate {err:.2e}")
    return float(p.f0 * (1.0 - B / nu * val))


def solution_image(p: VolterraProblem) -> LaplaceImage:
    """``f_hat(s) = f0 k_hat / (s k_hat + B)``."""
    k = p.kernel

    def F(s):
        kh = k.image(s)
        return p.f0 * kh / (s * kh + p.B)

    return LaplaceImage(F, f"relaxation image alpha={k.alpha} nu={k.nu} mu={k.mu} a={k.a} B={p.B}")


def solve_laplace_numeric(p: VolterraProblem, t, method: str = "talbot", n_nodes: int | None = None,
                          gate: float = 1e-4):
    """Numerical inversion of ``f0 k_hat / (s k_hat + B)``; valid for every kernel."""
    return inverse_laplace(solution_image(p), t, method, n_nodes, gate)


def _memory_moments(k: PrabhakarKernel, s: np.ndarray):
    """``K1 = int_0^s kappa`` and ``G = int_0^s sigma kappa(sigma) dsigma`` on a grid."""
    p1 = MLParams(k.alpha, k.mu + 1.0, k.nu)
    p2 = MLParams(k.alpha, k.mu + 2.0, k.nu)
    if k.a == 0:
        K1 = s**k.mu * rgamma(k.mu + 1.0)
        K2 = s ** (k.mu + 1.0) * rgamma(k.mu + 2.0)
    else:
        K1 = np.array([prabhakar(p1, -k.a, x) for x in s])
        K2 = np.array([prabhakar(p2, -k.a, x) for x in s])
    return K1, s * K1 - K2


def _eq1_uniform(p: VolterraProblem, T: float, n: int) -> np.ndarray:
    """Product trapezoid rule on ``n`` equal steps of ``[0, T]``.

    ``f`` is taken piecewise linear and the weakly singular memory is
    integrated exactly through its first two moments.
    """
    h = T / n
    s = h * np.arange(n + 1)
    K1, G = _memory_moments(p.kernel, s)
    M0 = np.diff(K1)
    M1 = np.diff(G)
    i = np.arange(n)
    c = ((i + 1) * h * M0 - M1) / h  # weight of the node at lag i
    d = (M1 - i * h * M0) / h  # weight of the node at lag i + 1
    W = np.empty(n + 1)
    W[0] = c[0]
    W[1:n] = c[1:] + d[:-1]
    f = np.empty(n + 1)
    f[0] = p.f0
    B = p.B
    denom = 1.0 + B * W[0]
    for m in range(1, n + 1):
        hist = np.dot(W[1:m], f[m - 1:0:-1]) + d[m - 1] * f[0]
        f[m] = (p.f0 - B * hist) / denom
    return f


def solve_integral_eq1(p: VolterraProblem, t_grid, tol: float = EQ1_TOL, n_start: int | None = None,
                       n_max: int = 1 << 15) -> RelaxationCurve:
    """Solve ``f = f0 - B kappa * f`` on a grid by product integration.

    The internal uniform step is halved until the solution on ``t_grid``
    changes by at most ``tol``; the finer solution is returned.

    Raises
    ------
    GridTooCoarse
        If the change is still above ``tol`` when ``n_max`` steps are reached.
    """
    tg = np.asarray(t_grid, dtype=float)
    if tg.ndim != 1 or tg.size < 1 or np.any(np.diff(tg) <= 0) or tg[0] < 0:
        raise InvalidParam("t_grid must be ascending and non-negative")
    T = float(tg[-1])
    if p.B == 0 or T == 0:
        return RelaxationCurve(tg, np.full(tg.shape, float(p.f0)), "integral_eq1", {"steps": 0})
    if n_start is None:
        uniform = tg[0] == 0 and np.allclose(np.diff(tg), T / (tg.size - 1), rtol=1e-9, atol=0)
        n_start = tg.size - 1 if uniform and tg.size > 1 else 2 * tg.size
        n_start = max(n_start, 16)
    n = n_start
    fine_t = np.linspace(0.0, T, n + 1)
    prev = np.interp(tg, fine_t, _eq1_uniform(p, T, n))
    while True:
        n *= 2
        if n > n_max:
            raise GridTooCoarse(f"step halving did not reach {tol:g} with {n // 2} steps")
        fine_t = np.linspace(0.0, T, n + 1)
        cur = np.interp(tg, fine_t, _eq1_uniform(p, T, n))
        change = float(np.max(np.abs(cur - prev)))
        if change <= tol:
            return RelaxationCurve(tg, cur, "integral_eq1", {"steps": n, "last_change": change})
        prev = cur


def caputo_derivative(f: Callable[[float], float], alpha: float, t: float,
                      df: Callable[[float], float] | None = None,
                      epsabs: float = 1e-12, epsrel: float = 1e-11) -> float:
    """Caputo derivative of order ``alpha`` in (0, 1) at time ``t``.

    With ``df`` the definition ``(1/Gamma(1-alpha)) int_0^t (t-xi)^-alpha f'(xi) dxi``
    is integrated after ``xi = t - w^(1/(1-alpha))``, which removes the
    endpoint singularity. Without ``df`` the equivalent Marchaud form
    ``[t^-alpha (f(t) - f(0)) + alpha int_0^t (f(t) - f(xi)) (t-xi)^(-alpha-1) dxi] / Gamma(1-alpha)``
    is used, so no numerical differentiation is needed.
    """
    if not 0 < alpha < 1:
        raise InvalidParam("alpha must lie in (0, 1)")
    if t <= 0:
        raise InvalidParam("t must be positive")
    q = 1.0 / (1.0 - alpha)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if df is not None:
            res = integrate.quad(lambda w: df(t - w**q), 0.0, t ** (1.0 - alpha), epsabs=epsabs,
                                 epsrel=epsrel, limit=200, full_output=1)
            val = res[0] * q
        else:
            ft, f0 = f(t), f(0.0)

            def g(xi):
                # (f(t) - f(xi)) / (t - xi); the (t-xi)^-alpha factor is the weight
                return (ft - f(xi)) / (t - xi) if xi < t else 0.0

            res = integrate.quad(g, 0.0, t, weight="alg", wvar=(0.0, -alpha), epsabs=epsabs,
                                 epsrel=epsrel, limit=200, full_output=1)
            val = t ** (-alpha) * (ft - f0) + alpha * res[0]
    if len(res) > 3 and res[1] > 1e-8 * max(1.0, abs(res[0])):
        raise QuadratureFailure(f"Caputo quadrature: error estimate {res[1]:.2e}")
    return float(val * rgamma(1.0 - alpha))


def rl_fractional_integral(f: Callable[[float], float], eta: float, t: float,
                           epsabs: float = 1e-12, epsrel: float = 1e-11) -> float:
    """Riemann-Liouville integral ``(1/Gamma(eta)) int_0^t (t-xi)^(eta-1) f(xi) dxi``."""
    if not 0 < eta:
        raise InvalidParam("eta must be positive")
    if t <= 0:
        raise InvalidParam("t must be positive")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(f, 0.0, t, weight="alg", wvar=(0.0, eta - 1.0), epsabs=epsabs,
                             epsrel=epsrel, limit=200, full_output=1)
    if len(res) > 3 and res[1] > 1e-8 * max(1.0, abs(res[0])):
        raise QuadratureFailure(f"fractional integral: error estimate {res[1]:.2e}")
    return float(res[0] * rgamma(eta))


def relaxation_curve(p: VolterraProblem, t_grid, method: str) -> RelaxationCurve:
    """Evaluate one route on a grid (``integral_eq1`` solves the whole grid at once)."""
    tg = np.asarray(t_grid, dtype=float)
    if method == "integral_eq1":
        return solve_integral_eq1(p, tg)
    single = {
        "series_f1": solve_series_f1,
        "series_f2": solve_series_f2,
        "closed_cc": solve_closed_cc,
        "integral_rep": solve_integral_rep,
        "laplace_numeric": solve_laplace_numeric,
    }
    if method not in single:
        raise InvalidParam(f"unknown method {method!r}")
    fn = single[method]
    vals = np.array([p.f0 if (x == 0 and method != "closed_cc") else fn(p, float(x)) for x in tg])
    return RelaxationCurve(tg, vals, method)


FIG_TAUS = (0.2, 0.4, 0.6, 0.8, 1.0)


def cole_cole_family(taus=FIG_TAUS, t_grid=None, alpha: float = 0.75, a: float = 3.0,
                     f0: float = 1.0) -> dict:
    """Closed-form curves for ``B = (1 - alpha)/tau`` over several ``tau``.

    At ``alpha = 3/4`` this is ``B = (4 tau)^-1``. Returns a mapping from
    ``tau`` to a :class:`RelaxationCurve`; the default grid is 201 points on
    ``[0, 10]``.
    """
    tg = np.linspace(0.0, 10.0, 201) if t_grid is None else np.asarray(t_grid, dtype=float)
    kernel = PrabhakarKernel.cole_cole(alpha, a)
    out = {}
    for tau in taus:
        p = VolterraProblem(kernel, (1.0 - alpha) / tau, f0)
        out[tau] = RelaxationCurve(tg, [solve_closed_cc(p, float(x)) for x in tg], "closed_cc",
                                   {"tau": tau, "B": p.B})
    return out
