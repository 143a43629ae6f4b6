import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from prabrelax.errors import GridTooNarrow, InvalidParam
from prabrelax.laplace import PrabhakarKernel, forward_laplace, kernel_image
from prabrelax.spectral import (ComplexSpectrum, expected_jonscher, jonscher_exponents,
                                kappa_image, kappa_kernel, laplace_exponent, omega_grid,
                                relaxation_from_spectrum, spectral_function, spectral_value,
                                spectrum)
from prabrelax.volterra import VolterraProblem, solve_closed_cc, solve_laplace_numeric

KERNELS = [
    PrabhakarKernel.cole_cole(0.6),
    PrabhakarKernel.cole_cole(0.75, 3.0),
    PrabhakarKernel(0.7, 0.5, 0.8, 0.0),
    PrabhakarKernel(0.7, 0.5, 0.8, 1.0),
    PrabhakarKernel(0.5, 0.6, 0.9, 2.0),
]


def test_debye_and_cole_cole_forms():
    w = np.geomspace(1e-2, 1e2, 9)
    assert_allclose(spectral_function(PrabhakarKernel(1.0, 1.0, 1.0), 2.0, w), 2.0 / (2.0 + 1j * w),
                    rtol=1e-14)
    al, B = 0.6, 1.5
    assert_allclose(spectral_function(PrabhakarKernel.cole_cole(al), B, w),
                    B / (B + (1j * w) ** al), rtol=1e-14)


def test_validation():
    k = PrabhakarKernel.cole_cole(0.5)
    with pytest.raises(InvalidParam):
        spectral_function(k, 1.0, [0.0, 1.0])
    with pytest.raises(InvalidParam):
        spectral_value(k, 0.0, 1.0)
    with pytest.raises(InvalidParam):
        spectral_value(k, 1.0, -2.0)
    with pytest.raises(InvalidParam):
        ComplexSpectrum([2.0, 1.0], [1, 1])
    with pytest.raises(InvalidParam):
        ComplexSpectrum([1.0, 2.0], [1])


@pytest.mark.parametrize("kernel", KERNELS)
def test_low_frequency_limit_and_symmetry(kernel):
    B = 1.3
    # s k_hat tends to a^nu when mu = alpha nu and a > 0, otherwise to zero
    psi0 = kernel.a**kernel.nu if abs(kernel.mu - kernel.alpha * kernel.nu) < 1e-12 else 0.0
    assert abs(spectral_function(kernel, B, 1e-12) - B / (B + psi0)) < 1e-4
    s = 0.4 + 2.0j
    assert_allclose(spectral_value(kernel, B, s.conjugate()), np.conj(spectral_value(kernel, B, s)),
                    rtol=1e-14)
    assert abs(spectral_function(kernel, B, 1e12)) < 1e-4


def test_spectral_value_matches_kernel_image():
    k = PrabhakarKernel(0.7, 0.5, 0.8, 1.0)
    s = 1.2 + 0.7j
    assert_allclose(spectral_value(k, 0.9, s), 0.9 / (0.9 + s * kernel_image(k, s)), rtol=1e-14)


def test_omega_grid():
    w = omega_grid(2.0, per_decade=10, decades=3)
    assert w.size == 61
    assert_allclose([w[0], w[-1]], [1e-3 / 2, 1e3 / 2], rtol=1e-14)


@pytest.mark.parametrize("kernel", KERNELS)
def test_jonscher_fit_matches_expected(kernel):
    tau = 1.0
    spec = spectrum(kernel, tau ** (-kernel.mu), tau=tau)
    fit, exp = jonscher_exponents(spec, tau), expected_jonscher(kernel)
    assert abs(fit.m - exp.m) <= 0.02
    assert abs(fit.one_minus_n - exp.one_minus_n) <= 0.02


def test_jonscher_zero_rate_uses_full_mu():
    assert expected_jonscher(PrabhakarKernel(0.7, 0.5, 0.8, 0.0)).m == 0.8
    assert expected_jonscher(PrabhakarKernel(0.7, 0.5, 0.8, 1.0)).m == pytest.approx(0.45)


def test_jonscher_scales_with_tau():
    k = PrabhakarKernel.cole_cole(0.75, 3.0)
    tau = 5.0
    spec = spectrum(k, tau ** (-k.mu), tau=tau)
    assert abs(jonscher_exponents(spec, tau).one_minus_n - 0.75) <= 0.02


def test_jonscher_needs_wide_grid():
    k = PrabhakarKernel.cole_cole(0.6)
    spec = spectrum(k, 1.0, omega_grid(1.0, decades=1.5))
    with pytest.raises(GridTooNarrow):
        jonscher_exponents(spec, 1.0)
    with pytest.raises(InvalidParam):
        jonscher_exponents(spectrum(k, 1.0), 0.0)


def test_laplace_exponent():
    k = PrabhakarKernel(0.7, 0.5, 0.8, 1.0)
    s = 2.0 + 1.0j
    assert_allclose(laplace_exponent(k, s), s * kernel_image(k, s), rtol=1e-14)
    assert laplace_exponent(PrabhakarKernel.cole_cole(0.5), 4.0) == pytest.approx(2.0)
    with pytest.raises(InvalidParam):
        laplace_exponent(k, -1.0 + 1.0j)


@pytest.mark.parametrize("kernel", KERNELS[1:])
def test_memory_closed_form_against_inversion(kernel):
    for t in (0.1, 1.0, 5.0):
        assert_allclose(kappa_kernel(kernel, t, "inversion"), kappa_kernel(kernel, t), rtol=1e-8)


def test_memory_reduces_to_power_law():
    k = PrabhakarKernel(0.7, 0.5, 0.8, 0.0)
    assert_allclose(kappa_kernel(k, 2.0), 2.0 ** (-0.2) / math.gamma(0.8), rtol=1e-14)
    with pytest.raises(InvalidParam):
        kappa_kernel(k, 0.0)
    with pytest.raises(InvalidParam):
        kappa_kernel(k, 1.0, "series")


def test_memory_forward_transform():
    k = PrabhakarKernel(0.7, 0.5, 0.8, 1.0)
    s = 1.5
    num = forward_laplace(lambda t: kappa_kernel(k, t), s, mu=k.mu).real
    assert_allclose(num, kappa_image(k)(s).real, rtol=1e-8)


def test_relaxation_from_spectrum():
    k = PrabhakarKernel.cole_cole(0.75, 3.0)
    p = VolterraProblem(k, 1.25)
    for t in (0.1, 1.0, 10.0):
        assert_allclose(relaxation_from_spectrum(k, 1.25, t), solve_closed_cc(p, t), rtol=1e-8)
    g = PrabhakarKernel(0.7, 0.5, 0.8, 1.0)
    assert_allclose(relaxation_from_spectrum(g, 0.9, 2.0),
                    solve_laplace_numeric(VolterraProblem(g, 0.9), 2.0), rtol=1e-10)
