"""Spectral functions, Jonscher exponents and the memory/Laplace-exponent pair.

With ``f(0) = 1`` the spectral function of the relaxation equation is

    phi(i omega) = B / (B + (i omega)^(mu - alpha nu) (a + (i omega)^alpha)^nu),

and ``1 - phi(s)`` over ``s`` is the Laplace image of the relaxation curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GridTooNarrow, InvalidParam
from .laplace import LaplaceImage, PrabhakarKernel, inverse_laplace
from .mlfun import MLParams, prabhakar


@dataclass
class ComplexSpectrum:
    """Samples of ``phi`` on an ascending grid of angular frequencies."""

    omega_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.omega_grid = np.asarray(self.omega_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.omega_grid.shape != self.values.shape:
            raise InvalidParam("omega_grid and values differ in length")
        if np.any(self.omega_grid <= 0) or np.any(np.diff(self.omega_grid) <= 0):
            raise InvalidParam("omega_grid must be positive and ascending")


class JonscherFit(NamedTuple):
    m: float  # low-frequency exponent of |1 - phi|
    one_minus_n: float  # high-frequency exponent of 1/|phi|


def spectral_value(kernel: PrabhakarKernel, B: float, s):
    """``B / (B + s k_hat(s))`` at complex ``s`` off the negative real axis (vectorised)."""
    if not B > 0:
        raise InvalidParam("B must be positive")
    s = np.asarray(s, dtype=complex)
    if np.any(s == 0) or np.any((s.imag == 0) & (s.real < 0)):
        raise InvalidParam("s must avoid the branch cut (-inf, 0]")
    psi = s ** (kernel.mu - kernel.alpha * kernel.nu) * (s**kernel.alpha + kernel.a) ** kernel.nu
    out = B / (B + psi)
    return out.item() if out.ndim == 0 else out


def spectral_function(kernel: PrabhakarKernel, B: float, omega):
    """Spectral function at ``s = i omega`` for ``omega > 0`` (principal branches).

    Examples
    --------
    >>> k = PrabhakarKernel(1.0, 1.0, 1.0)
    >>> complex(spectral_function(k, 1.0, 1.0))
    (0.5-0.5j)
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise InvalidParam("omega must be positive")
    return spectral_value(kernel, B, 1j * omega)


def omega_grid(tau: float = 1.0, per_decade: int = 20, decades: float = 4.0) -> np.ndarray:
    """Log-spaced grid over ``[10^-decades / tau, 10^decades / tau]``."""
    n = int(round(2 * decades * per_decade)) + 1
    return np.logspace(-decades, decades, n) / tau


def spectrum(kernel: PrabhakarKernel, B: float, omega=None, tau: float = 1.0) -> ComplexSpectrum:
    """Sample the spectral function; by default on ``omega_grid(tau)``."""
    w = omega_grid(tau) if omega is None else np.asarray(omega, dtype=float)
    return ComplexSpectrum(w, np.atleast_1d(spectral_function(kernel, B, w)))


def _slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def jonscher_exponents(spec: ComplexSpectrum, tau: float) -> JonscherFit:
    """Fit the power laws ``|1 - phi| ~ omega^m`` and ``|phi| ~ omega^-(1-n)``.

    Each slope is a least-squares fit of log magnitudes over the outermost
    decade of the grid on its side of ``1/tau``.

    Raises
    ------
    GridTooNarrow
        If the grid does not reach two decades below and above ``1/tau``.
    """
    if not tau > 0:
        raise InvalidParam("tau must be positive")
    w = spec.omega_grid
    lo, hi = w[0] * tau, w[-1] * tau
    if lo > 1e-2 * (1 + 1e-9) or hi < 1e2 * (1 - 1e-9):
        raise GridTooNarrow(
            f"grid spans [{lo:.3g}, {hi:.3g}] / tau; two decades on each side are needed"
        )
    low = w <= w[0] * 10 * (1 + 1e-12)
    high = w >= w[-1] / 10 * (1 - 1e-12)
    if low.sum() < 2 or high.sum() < 2:
        raise GridTooNarrow("fewer than two samples in an outer decade")
    m = _slope(w[low], np.abs(1.0 - spec.values[low]))
    one_minus_n = -_slope(w[high], np.abs(spec.values[high]))
    return JonscherFit(m, one_minus_n)


def expected_jonscher(kernel: PrabhakarKernel) -> JonscherFit:
    """Analytic exponents: ``1 - n = mu``; ``m = mu - alpha nu`` for ``a > 0`` and ``mu`` for ``a = 0``.

    For ``a = 0`` the factor ``(i omega)^(alpha nu)`` no longer tends to a
    constant, so the low-frequency exponent is the full ``mu``.
    """
    m = kernel.mu if kernel.a == 0 else kernel.mu - kernel.alpha * kernel.nu
    return JonscherFit(m, kernel.mu)


def laplace_exponent(kernel: PrabhakarKernel, s):
    """``Psi(s) = s k_hat(s) = s^(mu - alpha nu) (s^alpha + a)^nu`` for ``Re s > 0``.

    Examples
    --------
    >>> complex(laplace_exponent(PrabhakarKernel(1.0, 1.0, 1.0), 3.0))
    (3+0j)
    """
    s = np.asarray(s, dtype=complex)
    if np.any(s.real <= 0):
        raise InvalidParam("Re s must be positive")
    out = s ** (kernel.mu - kernel.alpha * kernel.nu) * (s**kernel.alpha + kernel.a) ** kernel.nu
    return out.item() if out.ndim == 0 else out


def kappa_image(kernel: PrabhakarKernel) -> LaplaceImage:
    """``kappa_hat = 1 / Psi``."""
    return LaplaceImage(
        lambda s: 1.0 / (s ** (kernel.mu - kernel.alpha * kernel.nu) * (s**kernel.alpha + kernel.a) ** kernel.nu),
        "memory image 1/(s k_hat)",
    )


def kappa_kernel(kernel: PrabhakarKernel, t: float, method: str = "closed") -> float:
    """Memory ``kappa(t) = L^{-1}[1/(s k_hat)]``.

    ``method="closed"`` uses ``t^(mu-1) E^nu_{alpha,mu}(-a t^alpha)``, which
    reduces to ``t^(mu-1) / Gamma(mu)`` at ``a = 0``; ``method="inversion"``
    inverts ``1/Psi`` numerically.
    """
    if not t > 0:
        raise InvalidParam("t must be positive")
    if method == "closed":
        return float(prabhakar(MLParams(kernel.alpha, kernel.mu, kernel.nu), -kernel.a, t))
    if method == "inversion":
        return float(inverse_laplace(kappa_image(kernel), t))
    raise InvalidParam(f"unknown method {method!r}")


def relaxation_from_spectrum(kernel: PrabhakarKernel, B: float, t, method: str = "talbot"):
    """Relaxation curve ``L^{-1}[(1 - phi(s)) / s]`` reconstructed from the spectral function."""
    img = LaplaceImage(lambda s: (1.0 - spectral_value(kernel, B, s)) / s, "(1 - phi)/s")
    return inverse_laplace(img, t, method)
