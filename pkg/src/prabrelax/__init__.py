"""Prabhakar-kernel relaxation: Mittag-Leffler functions, transforms and solvers."""

from .errors import (DenominatorTooLarge, GridTooCoarse, GridTooNarrow, InvalidParam,
                     MethodDisagreement, NonConvergent, NumericalOverflow, PrabhakarError,
                     QuadratureFailure, RationalCap, RouteUnavailable)
from .laplace import (LaplaceImage, PrabhakarKernel, SolvabilityReport, forward_laplace,
                      inverse_laplace, kernel_image, ml_poly_moment, prabhakar_image,
                      solvability_check)
from .levy import (LevyQuery, g_function, h_function, levy_cdf, levy_density,
                   ml_integral_rep)
from .mlfun import (MLParams, RationalAlpha, ml3, ml_asymptotic, ml_hypergeom, ml_poly,
                    ml_reflection, mittag_leffler, prabhakar, prabhakar_derivative)
from .spectral import (ComplexSpectrum, jonscher_exponents, kappa_kernel, laplace_exponent,
                       spectral_function, spectrum)
from .volterra import (RelaxationCurve, VolterraProblem, caputo_derivative, rl_fractional_integral,
                       solve_closed_cc, solve_integral_eq1, solve_integral_rep,
                       solve_laplace_numeric, solve_series, solve_series_f1, solve_series_f2)

__version__ = "0.1.0"
