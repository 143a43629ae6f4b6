"""Cross-route acceptance checks.

Each ``check_*`` function runs one acceptance criterion at its stated
tolerance and returns a :class:`CheckResult`. Runtime budgets count toward
the verdict.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import NonConvergent, NumericalOverflow
from .laplace import (PrabhakarKernel, forward_laplace, inverse_laplace, ml_poly_moment,
                      ml_poly_moment_factored, prabhakar_image)
from .levy import LevyQuery, h_function, levy_density, ml_integral_rep
from .mlfun import (MLParams, ml3, ml_poly, ml_reflection, prabhakar,
                    prabhakar_derivative)
from .spectral import expected_jonscher, jonscher_exponents, spectrum
from .volterra import (FIG_TAUS, VolterraProblem, caputo_derivative, cole_cole_family,
                       solve_closed_cc, solve_integral_eq1, solve_integral_rep,
                       solve_laplace_numeric, solve_series_f1, solve_series_f2)

CC_CONFIG = dict(alpha=0.75, a=3.0, B=1.25)


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float | None = None
    parts: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.number}. {self.title}: {self.detail} ({self.seconds:.2f} s)"


def _timed(number: int, title: str, budget: float | None, body: Callable[[], tuple]) -> CheckResult:
    t0 = time.perf_counter()
    ok, detail, parts = body()
    dt = time.perf_counter() - t0
    if budget is not None and dt >= budget:
        ok = False
        detail += f"; runtime {dt:.2f} s exceeds {budget:g} s"
    return CheckResult(number, title, bool(ok), detail, dt, budget, parts)


def _rel(x: float, ref: float) -> float:
    return abs(x - ref) / abs(ref) if ref != 0 else abs(x)


def _cc(alpha: float, a: float, B: float) -> VolterraProblem:
    return VolterraProblem(PrabhakarKernel.cole_cole(alpha, a), B)


def check_closed_form() -> CheckResult:
    """Small-time series against the closed form on ``[0.01, t_conv]``."""

    def body():
        worst, compared, tconv = 0.0, 0, {}
        grid = np.geomspace(0.01, 20.0, 25)
        for al in (0.5, 0.75):
            for a in (0.0, 3.0):
                for B in (0.25, 1.25):
                    p = _cc(al, a, B)
                    last = None
                    for t in grid:
                        try:
                            v = solve_series_f1(p, float(t), max_terms=200)
                        except (NonConvergent, NumericalOverflow):
                            break
                        worst = max(worst, _rel(v, solve_closed_cc(p, float(t))))
                        compared += 1
                        last = float(t)
                    tconv[(al, a, B)] = last
        ok = worst <= 1e-8 and all(v is not None for v in tconv.values())
        return ok, f"max rel err {worst:.2e} over {compared} points (tol 1e-8)", {"t_conv": tconv}

    return _timed(1, "series vs closed form", 1.0, body)


def check_laplace_oracle() -> CheckResult:
    """Talbot inversion (32 nodes) of the solution image against the closed form."""

    def body():
        t = np.geomspace(0.01, 20.0, 50)
        worst = 0.0
        for al, a, B in ((0.75, 3.0, 1.25), (0.75, 0.0, 1.25), (0.5, 3.0, 0.25)):
            p = _cc(al, a, B)
            num = solve_laplace_numeric(p, t, n_nodes=32)
            ref = np.array([solve_closed_cc(p, float(x)) for x in t])
            worst = max(worst, float(np.max(np.abs(num - ref) / np.abs(ref))))
        return worst <= 1e-6, f"max rel err {worst:.2e} on 50 log points x 3 configs (tol 1e-6)", {}

    return _timed(2, "Laplace inversion vs closed form", 5.0, body)


def check_integral_rep() -> CheckResult:
    """Subordination integral against the small-time series where it converges."""

    def body():
        worst, compared, skipped = 0.0, 0, []
        for al, nu in ((0.5, 0.5), (0.75, 2.0 / 3.0)):
            for a in (0.0, 1.0):
                p = VolterraProblem(PrabhakarKernel(al, nu, al * nu, a), 1.0)
                for t in (0.1, 1.0, 5.0):
                    try:
                        ref = solve_series_f1(p, t)
                    except (NonConvergent, NumericalOverflow):
                        skipped.append((al, nu, a, t))
                        continue
                    worst = max(worst, _rel(solve_integral_rep(p, t), ref))
                    compared += 1
        detail = f"max rel err {worst:.2e} over {compared} points (tol 1e-5)"
        if skipped:
            detail += f"; small-time series refused at {len(skipped)} points"
        return worst <= 1e-5 and compared > 0, detail, {"skipped": skipped}

    return _timed(3, "integral representation vs series", 30.0, body)


def check_fig1() -> CheckResult:
    """Five closed-form curves start at 1, decrease and settle near 3/(B+3)."""

    def body():
        curves = cole_cole_family(FIG_TAUS)
        bad = []
        for tau, c in curves.items():
            B = c.meta["B"]
            f = c.values
            if abs(f[0] - 1.0) > 1e-6:
                bad.append(f"tau={tau}: f(0)={f[0]!r}")
            if abs(f[-1] - 3.0 / (B + 3.0)) > 0.05:
                bad.append(f"tau={tau}: f(10)={f[-1]:.4f} vs {3 / (B + 3):.4f}")
            if np.any(np.diff(f) > 0):
                bad.append(f"tau={tau}: not monotone")
        detail = "5 curves: f(0)=1, monotone, f(10) within 0.05 of 3/(B+3)" if not bad else "; ".join(bad)
        return not bad, detail, {}

    return _timed(4, "Cole-Cole family curves", None, body)


def _fd4(g: Callable[[float], float], t: float) -> float:
    h = max(1e-4, 1e-4 * t)
    return (-g(t + 2 * h) + 8 * g(t + h) - 8 * g(t - h) + g(t - 2 * h)) / (12 * h)


def check_propositions() -> CheckResult:
    """Transform pair, Caputo eigenfunction, derivative rules, reflection,
    integral representation, polynomial moments and the polynomial recurrence."""

    def body():
        parts = {}
        # transform pair: forward quadrature and inversion against the closed image
        tuples = [(0.5, 1.0, 1.0, -1.0), (0.75, 0.6, 0.8, -2.0), (0.3, 1.5, 2.0, -0.5),
                  (0.9, 1.2, -0.5, -1.0), (0.6, 2.0, 1.5, 0.5)]
        e = 0.0
        for al, mu, nu, a in tuples:
            par = MLParams(al, mu, nu)
            img = prabhakar_image(par, a)
            s = 3.0 + 1.0j
            fw = forward_laplace(lambda t: prabhakar(par, a, t), s, mu=mu)
            e = max(e, abs(fw - img(s)) / abs(img(s)))
            for t in (0.3, 1.0, 3.0):
                e = max(e, _rel(float(inverse_laplace(img, t)), prabhakar(par, a, t)))
        parts["transform pair"] = (e, 1e-6)
        # Caputo eigenfunction E_alpha(a t^alpha)
        e = 0.0
        for al, a, t in ((0.5, -1.0, 1.0), (0.75, -2.0, 0.5), (0.3, 0.5, 2.0), (0.8, 1.0, 1.5),
                         (0.6, -0.7, 3.0)):
            par = MLParams(al, 1.0, 1.0)
            lhs = caputo_derivative(lambda x: prabhakar(par, a, x), al, t,
                                    df=lambda x: prabhakar_derivative(par, a, x))
            e = max(e, abs(lhs - a * prabhakar(par, a, t)))
        parts["Caputo eigenfunction"] = (e, 1e-4)
        # derivative rule against 4th-order differences (Prabhakar and ML polynomials)
        e = 0.0
        for al, mu, nu, a, t in ((0.5, 1.5, 1.0, -1.0, 1.0), (0.75, 2.0, 0.6, 0.5, 2.0),
                                 (0.3, 1.2, 2.0, -0.5, 0.7), (0.9, 3.0, -0.5, 1.0, 1.3),
                                 (0.6, 1.8, 1.3, -0.3, 4.0)):
            par = MLParams(al, mu, nu)
            e = max(e, _rel(prabhakar_derivative(par, a, t), _fd4(lambda x: prabhakar(par, a, x), t)))
        for al, d, n, x in ((0.5, 0.3, 3, 1.2), (0.75, 0.0, 4, 0.8), (1 / 3, 1.0, 2, 2.0),
                            (0.9, 0.5, 5, 0.6), (0.6, 2.0, 1, 1.7)):
            xa = x**al
            deriv = -n * al * x ** (al - 1) * ml_poly(al, d + al, n - 1, xa)
            e = max(e, _rel(deriv, _fd4(lambda y: ml_poly(al, d, n, y**al), x)))
            # x d/dx E^{-n} = n alpha (E^{-n} - E^{1-n})
            e = max(e, _rel(x * deriv, n * al * (ml_poly(al, d, n, xa) - ml_poly(al, d, n - 1, xa))))
        parts["derivative rules"] = (e, 1e-6)
        # reflection: both right-hand forms, and the exponential case
        e = abs(ml_reflection(1.0, 2.0) + 0.5 * math.exp(0.5))
        for al, x in ((0.5, 4.0), (0.75, -2.0), (0.3, 0.7), (1.2, 3.0), (0.9, -0.4)):
            e = max(e, _rel(ml_reflection(al, x, "zero"), ml_reflection(al, x, "alpha")))
        parts["reflection"] = (e, 1e-12)
        # stable-law integral representation against the series
        e = 0.0
        for al, be, ga, a, t in ((0.75, 0.6, 0.8, 2.0, 0.5), (0.5, 0.5, 1.0, 1.0, 1.0),
                                 (0.5, 1.0, 1.0, 1.0, 2.0), (2 / 3, 0.9, 1.5, 0.5, 1.0),
                                 (0.4, 0.7, 0.6, 3.0, 0.8)):
            e = max(e, _rel(ml_integral_rep(al, be, ga, a, t), ml3(MLParams(al, be, ga), -a * t**al)))
        parts["integral representation"] = (e, 1e-5)
        # polynomial moments: closed forms and vanishing at a = b
        e, v = 0.0, 0.0
        for al, d, n, b, a in ((0.5, 0.3, 3, 1.0, 2.0), (0.75, 0.0, 4, 2.0, 1.5),
                               (1 / 3, 1.2, 2, 1.0, 0.7), (0.9, 0.5, 5, 0.8, 1.1),
                               (0.6, 2.0, 1, 1.5, 3.0)):
            for m in (0, 1):
                num = forward_laplace(lambda x: x ** (d + m) * ml_poly(al, d, n, (b * x) ** al), a,
                                      mu=1 + d + m).real
                e = max(e, _rel(num, ml_poly_moment_factored(al, d, n, b, a, m)),
                        _rel(ml_poly_moment(al, d, n, b, a, m), ml_poly_moment_factored(al, d, n, b, a, m)))
                at_b = forward_laplace(lambda x: x ** (d + m) * ml_poly(al, d, n, (b * x) ** al), b,
                                       mu=1 + d + m).real
                if n > m:  # the m-th moment vanishes only for polynomials of degree above m
                    v = max(v, abs(at_b), abs(ml_poly_moment(al, d, n, b, b, m)))
        parts["polynomial moments"] = (e, 1e-8)
        parts["vanishing at a=b"] = (v, 1e-10)
        # recurrence of the polynomials
        e = 0.0
        for al, d, x in ((0.5, 0.3, 0.8), (0.75, 0.0, 1.3), (1 / 3, 1.0, 2.0), (0.9, 0.5, 0.4),
                         (0.6, 2.0, 1.7)):
            for n in range(0, 9):
                xa = x**al
                lhs = xa * ml_poly(al, d + al, n, xa) + ml_poly(al, d, n + 1, xa)
                rhs = ml_poly(al, d, n, xa)
                e = max(e, abs(lhs - rhs) / max(1.0, abs(rhs)))
        parts["polynomial recurrence"] = (e, 1e-12)
        failed = [k for k, (err, tol) in parts.items() if not err <= tol]
        detail = ", ".join(f"{k} {err:.1e}/{tol:.0e}" for k, (err, tol) in parts.items())
        return not failed, detail, parts

    return _timed(5, "proposition suite", 60.0, body)


def check_levy() -> CheckResult:
    """Series against inversion for h, the alpha=1 step, and density normalisation."""

    def body():
        worst = 0.0
        for al in (1 / 3, 0.5, 2 / 3):
            for lam in (0.0, 1.0):
                for x in np.geomspace(0.2, 5.0, 7):
                    u = 1.0
                    t = x * u ** (1.0 / al)
                    q = LevyQuery(al, u, float(t), lam)
                    worst = max(worst, _rel(h_function(q, "series"), h_function(q, "inversion")))
        step_ok = all(
            h_function(LevyQuery(1.0, u, t, 1.0)) == (1.0 if t > u else 0.0)
            for u, t in ((0.5, 1.0), (2.0, 1.0), (1.0, 0.999), (1.0, 1.001), (3.0, 10.0))
        )
        # normalisation: quadrature up to T and the exact series tail beyond it
        al, u = 0.5, 1.0
        T = (u / 0.1) ** (1.0 / al)
        head = integrate.quad(lambda t: levy_density(al, u, t), 0.0, T, epsabs=1e-13, epsrel=1e-12,
                              limit=200, points=[u ** (1 / al)])[0]
        tail = sum((-u) ** r * T ** (-al * r) / (al * r * math.factorial(r) * math.gamma(-al * r))
                   for r in range(1, 40) if (al * r) % 1 != 0)
        norm = head + tail
        ok = worst <= 1e-6 and step_ok and abs(norm - 1.0) <= 1e-6
        detail = (f"series vs inversion max rel {worst:.1e} (tol 1e-6); step exact: {step_ok}; "
                  f"normalisation {norm:.12f}")
        return ok, detail, {}

    return _timed(6, "stable-law functions", None, body)


def check_eq1() -> CheckResult:
    """Product-integration solution of the memory form against the closed form."""

    def body():
        c = CC_CONFIG
        p = _cc(c["alpha"], c["a"], c["B"])
        tg = np.linspace(0.0, 10.0, 200)
        curve = solve_integral_eq1(p, tg)
        ref = np.array([solve_closed_cc(p, float(x)) for x in tg])
        err = float(np.max(np.abs(curve.values - ref)))
        return err <= 1e-4, f"max abs err {err:.2e} with {curve.meta['steps']} steps (tol 1e-4)", {}

    return _timed(7, "memory-form equation vs closed form", None, body)


def check_jonscher() -> CheckResult:
    """Fitted spectral exponents against their analytic values."""

    def body():
        rows = []
        ok = True
        for k in (PrabhakarKernel(0.75, 1.0, 0.75, 0.0), PrabhakarKernel(0.5, 1.0, 0.9, 1.0)):
            tau = 1.0
            fit = jonscher_exponents(spectrum(k, tau ** (-k.mu), tau=tau), tau)
            exp = expected_jonscher(k)
            good = abs(fit.m - exp.m) <= 0.02 and abs(fit.one_minus_n - exp.one_minus_n) <= 0.02
            ok &= good
            rows.append(f"mu={k.mu}, alpha nu={k.alpha * k.nu}, a={k.a}: "
                        f"(1-n, m)=({fit.one_minus_n:.4f}, {fit.m:.4f}) vs ({exp.one_minus_n}, {exp.m:g})")
        return ok, "; ".join(rows), {}

    return _timed(8, "Jonscher exponents", None, body)


F12_CONFIGS = (
    ("Cole-Cole a=3", PrabhakarKernel(0.75, 1.0, 0.75, 3.0), 1.25),
    ("Cole-Cole a=0.2", PrabhakarKernel(0.75, 1.0, 0.75, 0.2), 2.0),
    ("general mu", PrabhakarKernel(0.75, 0.5, 0.6, 0.5), 1.0),
)


def check_f1_f2() -> CheckResult:
    """Equality of the two series where both converge; oracle match elsewhere."""

    def body():
        both_ok, one_ok = True, True
        rows = []
        worst_one = 0.0
        for name, k, B in F12_CONFIGS:
            p = VolterraProblem(k, B)
            n_both = n_one = 0
            worst_both = 0.0
            for t in np.geomspace(0.05, 50.0, 25):
                t = float(t)
                vals = {}
                for label, fn in (("f1", solve_series_f1), ("f2", solve_series_f2)):
                    try:
                        vals[label] = fn(p, t)
                    except (NonConvergent, NumericalOverflow):
                        pass
                if len(vals) == 2:
                    n_both += 1
                    worst_both = max(worst_both, abs(vals["f1"] - vals["f2"]))
                elif len(vals) == 1:
                    n_one += 1
                    ref = float(solve_laplace_numeric(p, t, n_nodes=32))
                    worst_one = max(worst_one, _rel(next(iter(vals.values())), ref))
            if n_both < 3 or worst_both > 1e-8:
                both_ok = False
            rows.append(f"{name}: both converge at {n_both} t, one at {n_one}")
        one_ok = worst_one <= 1e-5
        detail = ("; ".join(rows) + f"; single-series vs inversion max rel {worst_one:.1e} (tol 1e-5)"
                  + ("" if both_ok else "; fewer than 3 overlap points, equality clause unmet"))
        return both_ok and one_ok, detail, {"both": both_ok, "single": one_ok}

    return _timed(9, "small/large-time series equality", None, body)


CHECKS = (check_closed_form, check_laplace_oracle, check_integral_rep, check_fig1,
          check_propositions, check_levy, check_eq1, check_jonscher, check_f1_f2)


def run_all(only: list[int] | None = None) -> list[CheckResult]:
    """Run the acceptance checks (optionally a subset by number) in order."""
    out = []
    for i, fn in enumerate(CHECKS, start=1):
        if only is None or i in only:
            out.append(fn())
    return out
