import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from prabrelax.errors import GridTooCoarse, InvalidParam, NonConvergent
from prabrelax.laplace import LaplaceImage, PrabhakarKernel, inverse_laplace
from prabrelax.mlfun import MLParams, mittag_leffler, prabhakar, prabhakar_derivative
from prabrelax.volterra import (RelaxationCurve, VolterraProblem, caputo_derivative,
                                cole_cole_family, relaxation_curve, rl_fractional_integral,
                                solve_closed_cc, solve_integral_eq1, solve_integral_rep,
                                solve_laplace_numeric, solve_series, solve_series_f1,
                                solve_series_f2)

# small-time series summed with mpmath at 60 digits
F_ORACLE = {
    (0.75, 0.5, 0.375, 1.0, 1.0, 0.5): 0.57986342190287159804,
    (2 / 3, 0.75, 0.5, 1.0, 1.0, 1.0): 0.58139306664746133549,
    (0.75, 0.5, 0.6, 0.5, 1.0, 1.0): 0.47443832439495487683,
    (0.75, 0.5, 0.6, 0.5, 1.0, 0.3): 0.6388849493002763528,
}
CC = VolterraProblem(PrabhakarKernel.cole_cole(0.75, 3.0), 1.25)


def _problem(al, nu, mu, a, B):
    return VolterraProblem(PrabhakarKernel(al, nu, mu, a), B)


def test_problem_validation():
    with pytest.raises(InvalidParam):
        VolterraProblem(PrabhakarKernel.cole_cole(0.5), -1.0)
    p = VolterraProblem.from_tau(PrabhakarKernel.cole_cole(0.5), 4.0)
    assert p.B == pytest.approx(0.5)
    with pytest.raises(InvalidParam):
        RelaxationCurve([0, 1], [1.0], "closed_cc")


@pytest.mark.parametrize("key", list(F_ORACLE))
def test_series_f1_against_oracle(key):
    al, nu, mu, a, B, t = key
    p = _problem(al, nu, mu, a, B)
    assert_allclose(solve_series_f1(p, t), F_ORACLE[key], rtol=1e-12)
    assert_allclose(solve_laplace_numeric(p, t), F_ORACLE[key], rtol=1e-6)


def test_series_f1_small_time_and_closed_form():
    assert solve_series_f1(CC, 0.0) == 1.0
    for t in (0.01, 0.3, 1.0):
        assert_allclose(solve_series_f1(CC, t), solve_closed_cc(CC, t), rtol=1e-10)
    # cancellation between large alternating terms is caught by the rounding guard
    with pytest.raises(NonConvergent, match="lost digits"):
        solve_series_f1(CC, 2.0)
    res = solve_series_f1(CC, 1.0, full_output=True)
    assert res.error < 1e-12 and res.terms > 3


def test_series_regimes():
    with pytest.raises(NonConvergent):
        solve_series_f1(CC, 20.0)
    # with a > B the large-time series has a divergent geometric part
    with pytest.raises(NonConvergent):
        solve_series_f2(CC, 20.0)
    p = VolterraProblem(PrabhakarKernel.cole_cole(0.75, 0.2), 2.0)
    with pytest.raises(NonConvergent):
        solve_series_f2(p, 0.5)
    for t in (20.0, 50.0):
        assert_allclose(solve_series_f2(p, t), solve_closed_cc(p, t), rtol=1e-10)
    assert solve_series(p, 0.5)[1] == "series_f1"
    assert solve_series(p, 50.0)[1] == "series_f2"


def test_series_f2_approaches_residual_level():
    p = VolterraProblem(PrabhakarKernel.cole_cole(0.75, 0.2), 2.0)
    assert_allclose(solve_series_f2(p, 1e8), 0.2 / 2.2, rtol=1e-5)


@pytest.mark.parametrize("t", [1e2, 1e3, 1e5])
def test_series_f2_general_mu_against_inversion(t):
    p = _problem(0.75, 0.5, 0.6, 0.0, 1.0)
    assert_allclose(solve_series_f2(p, t), solve_laplace_numeric(p, t), rtol=1e-8)


def test_series_f2_refuses_large_rate_argument():
    # the inner functions at -a t^alpha are too large for their own series
    with pytest.raises(NonConvergent):
        solve_series_f2(_problem(0.75, 0.5, 0.6, 0.5, 1.0), 1e3)


def test_closed_form_examples():
    assert solve_closed_cc(CC, 0.0) == 1.0
    p0 = VolterraProblem(PrabhakarKernel.cole_cole(0.75, 0.0), 1.0)
    assert_allclose(solve_closed_cc(p0, 1.0), mittag_leffler(0.75, 1.0, 1.0, -1.0), rtol=1e-15)
    assert_allclose(solve_closed_cc(CC, 1e8), 3 / 4.25, rtol=1e-4)
    with pytest.raises(InvalidParam):
        solve_closed_cc(_problem(0.75, 0.5, 0.375, 1.0, 1.0), 1.0)


def test_integral_rep_step_case():
    p = _problem(1.0, 1.0, 1.0, 0.7, 1.3)
    for t in (0.2, 1.0, 3.0):
        assert_allclose(solve_integral_rep(p, t), solve_closed_cc(p, t), rtol=1e-8)


@pytest.mark.parametrize("t", [0.1, 1.0, 5.0])
def test_integral_rep_cole_cole(t):
    assert_allclose(solve_integral_rep(CC, t), solve_closed_cc(CC, t), rtol=1e-5)


def test_integral_rep_generic():
    key = (2 / 3, 0.75, 0.5, 1.0, 1.0, 1.0)
    p = _problem(*key[:5])
    assert_allclose(solve_integral_rep(p, 1.0), F_ORACLE[key], rtol=1e-8)
    assert_allclose(solve_integral_rep(p, 1.0), solve_laplace_numeric(p, 1.0), rtol=1e-6)
    with pytest.raises(InvalidParam):
        solve_integral_rep(_problem(0.75, 0.5, 0.6, 0.5, 1.0), 1.0)


def test_laplace_numeric_matches_closed_form():
    t = np.geomspace(0.01, 20.0, 40)
    ref = np.array([solve_closed_cc(CC, x) for x in t])
    assert_allclose(solve_laplace_numeric(CC, t), ref, rtol=1e-6)


def test_laplace_numeric_pure_cole_cole():
    mu, B = 0.6, 0.8
    p = _problem(0.75, mu / 0.75, mu, 0.0, B)
    for t in (0.1, 1.0, 10.0):
        assert_allclose(solve_laplace_numeric(p, t), mittag_leffler(mu, 1.0, 1.0, -B * t**mu),
                        rtol=1e-8)


def test_laplace_numeric_dual_method():
    p = _problem(0.7, 0.4, 0.9, 1.0, 1.5)
    for t in (0.5, 2.0):
        v = solve_laplace_numeric(p, t, method="both", gate=1e-4)
        assert_allclose(v, solve_laplace_numeric(p, t), rtol=1e-12)


def test_eq1_matches_closed_form():
    tg = np.linspace(0.0, 10.0, 200)
    curve = solve_integral_eq1(CC, tg)
    ref = np.array([solve_closed_cc(CC, x) for x in tg])
    assert np.max(np.abs(curve.values - ref)) <= 1e-4
    assert curve.method == "integral_eq1"


def test_eq1_pure_cole_cole_and_trivial_coupling():
    p = _problem(0.5, 1.0, 0.5, 0.0, 1.0)
    tg = np.linspace(0.0, 4.0, 41)
    curve = solve_integral_eq1(p, tg)
    ref = np.array([mittag_leffler(0.5, 1.0, 1.0, -(x**0.5)) for x in tg])
    assert np.max(np.abs(curve.values - ref)) <= 1e-4
    flat = solve_integral_eq1(VolterraProblem(p.kernel, 0.0, 2.5), tg)
    assert np.all(flat.values == 2.5)


def test_eq1_grid_cap():
    with pytest.raises(GridTooCoarse):
        solve_integral_eq1(CC, np.linspace(0.0, 10.0, 20), tol=1e-9, n_max=256)


def test_four_route_agreement():
    t_small = [0.05, 0.5, 1.5]
    t_all = np.array([0.05, 0.5, 1.5, 5.0, 15.0])
    closed = np.array([solve_closed_cc(CC, x) for x in t_all])
    assert_allclose(solve_laplace_numeric(CC, t_all), closed, atol=1e-4)
    assert_allclose([solve_series_f1(CC, x) for x in t_small], closed[:3], atol=1e-4)
    eq1 = solve_integral_eq1(CC, np.concatenate([[0.0], t_all]))
    assert_allclose(eq1.values[1:], closed, atol=1e-4)


def test_boundary_values_all_routes():
    tau = CC.B ** (-1 / CC.kernel.mu)
    t = 1e-3 * tau
    for v in (solve_closed_cc(CC, t), solve_series_f1(CC, t), solve_laplace_numeric(CC, t),
              solve_integral_rep(CC, t)):
        assert abs(v - 1.0) <= 1e-3 * 60  # f drops like t^alpha; within the first 1e-3 tau
    assert abs(solve_closed_cc(CC, 1e-9) - 1.0) <= 1e-3


def test_monotone_for_zero_rate():
    curve = relaxation_curve(VolterraProblem(PrabhakarKernel.cole_cole(0.6), 1.0),
                             np.linspace(0.0, 20.0, 100), "laplace_numeric")
    assert np.all(np.diff(curve.values) < 0)


def test_closed_form_residual_of_fractional_equation():
    # C D^alpha f + (B+a) f - a f0 = 0 along the closed form
    al, a, B = 0.75, 3.0, 1.25
    A = a + B
    par = MLParams(al, 1.0, 1.0)
    f = lambda x: solve_closed_cc(CC, x)
    df = lambda x: B / A * prabhakar_derivative(par, -A, x)
    for t in (0.2, 1.0, 4.0):
        res = caputo_derivative(f, al, t, df=df) + A * f(t) - a
        assert abs(res) <= 1e-4


def test_memory_equation_residual_general_kernel():
    # int_0^t k(t-xi) f'(xi) dxi + B f(t) = 0 for the numeric solution
    k = PrabhakarKernel(0.7, 0.6, 0.8, 1.0)
    B = 1.2
    p = VolterraProblem(k, B)
    dimg = LaplaceImage(lambda s: -B / (s * k.image(s) + B), "f'")
    mu = k.mu
    for t in (0.5, 2.0):
        g = lambda xi: (k(t - xi) * (t - xi) ** mu if xi < t else
                        mittag_leffler(k.alpha, 1 - mu, -k.nu, 0.0)) * \
            (inverse_laplace(dimg, xi) * xi ** (1 - mu) if xi > 0 else -B / math.gamma(mu))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            conv = integrate.quad(g, 0.0, t, weight="alg", wvar=(mu - 1, -mu), limit=200)[0]
        assert abs(conv + B * solve_laplace_numeric(p, t)) <= 1e-3


def test_caputo_elementary():
    al = 0.4
    assert abs(caputo_derivative(lambda x: 3.0, al, 1.7)) < 1e-14
    for df in (None, lambda x: 1.0):
        assert_allclose(caputo_derivative(lambda x: x, al, 2.0, df=df), 2.0 ** (1 - al) / math.gamma(2 - al),
                        rtol=1e-9)


@pytest.mark.parametrize("al, a, t", [(0.5, -1.0, 1.0), (0.75, -2.0, 0.5), (0.3, 0.5, 2.0)])
def test_mittag_leffler_is_caputo_eigenfunction(al, a, t):
    par = MLParams(al, 1.0, 1.0)
    lhs = caputo_derivative(lambda x: prabhakar(par, a, x), al, t,
                            df=lambda x: prabhakar_derivative(par, a, x))
    assert abs(lhs - a * prabhakar(par, a, t)) <= 1e-8


@pytest.mark.parametrize("d", [0.5, 1.0])
def test_shifted_function_picks_up_power_term(d):
    # C D^alpha [t^d E_{alpha,1+d}(a t^alpha)] = a f + t^(d-alpha) / Gamma(1+d-alpha)
    al, a, t = 0.6, -1.5, 1.2
    par = MLParams(al, 1 + d, 1.0)
    lhs = caputo_derivative(lambda x: prabhakar(par, a, x), al, t,
                            df=lambda x: prabhakar_derivative(par, a, x))
    rhs = a * prabhakar(par, a, t) + t ** (d - al) / math.gamma(1 + d - al)
    assert_allclose(lhs, rhs, rtol=1e-8)
    assert abs(lhs - a * prabhakar(par, a, t)) > 0.1


def test_caputo_marchaud_form_matches_definition():
    f = lambda x: math.exp(-x) * x**2
    df = lambda x: math.exp(-x) * (2 * x - x**2)
    assert_allclose(caputo_derivative(f, 0.35, 1.5), caputo_derivative(f, 0.35, 1.5, df=df), rtol=1e-8)


def test_rl_integral():
    eta, t = 0.3, 2.0
    assert_allclose(rl_fractional_integral(lambda x: 1.0, eta, t), t**eta / math.gamma(1 + eta), rtol=1e-12)
    assert_allclose(rl_fractional_integral(lambda x: x, eta, t), t ** (1 + eta) / math.gamma(2 + eta),
                    rtol=1e-12)


def test_semigroup_caputo_of_rl_integral():
    eta = 0.4
    f = lambda x: 1.0 + x * x
    g = lambda x: rl_fractional_integral(f, eta, x) if x > 0 else 0.0
    for t in (0.5, 1.5):
        assert_allclose(caputo_derivative(g, eta, t), f(t), rtol=1e-6)


def test_cole_cole_family():
    curves = cole_cole_family(t_grid=np.linspace(0, 10, 21))
    assert sorted(curves) == [0.2, 0.4, 0.6, 0.8, 1.0]
    for tau, c in curves.items():
        assert c.meta["B"] == pytest.approx(1 / (4 * tau))
        assert c.values[0] == 1.0
        assert abs(c.values[-1] - 3 / (c.meta["B"] + 3)) <= 0.05
