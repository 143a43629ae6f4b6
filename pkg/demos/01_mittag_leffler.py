"""Evaluating the three-parameter Mittag-Leffler function.

The power series is used for moderate arguments; for large negative ones
it refuses (cancellation would destroy every digit) and ``mittag_leffler``
switches to a contour-integral inversion of the Laplace pair.
"""

import math

from prabrelax import (MLParams, NonConvergent, ml3, ml_asymptotic, ml_hypergeom, ml_poly,
                       mittag_leffler, prabhakar)

print("E_1(1) =", ml3(MLParams(1.0), 1.0), " e =", math.e)
print("E_1/2(-1) =", mittag_leffler(0.5, 1.0, 1.0, -1.0),
      " exp(1) erfc(1) =", math.exp(1) * math.erfc(1))

# the series gives up far out on the negative axis; the dispatcher does not
try:
    ml3(MLParams(0.75), -40.0)
except NonConvergent as exc:
    print("series:", exc)
print("E_3/4(-40) via inversion =", mittag_leffler(0.75, 1.0, 1.0, -40.0))
print("leading asymptotic term  =", ml_asymptotic(0.75, 1.0, 40.0 ** (4 / 3)).value)

# rational alpha: a finite sum of generalised hypergeometric functions
print("E^0.4_{2/3,1.3}(0.8): series", ml3(MLParams(2 / 3, 1.3, 0.4), 0.8),
      " hypergeometric", ml_hypergeom(2 / 3, 0.3, 0.4, 0.8))

# negative integer nu gives a polynomial in x
print("E^-3_{1/2,1.5}(2) =", ml_poly(0.5, 0.5, 3, 2.0))

# the Prabhakar function used as relaxation memory
for t in (0.1, 1.0, 10.0):
    print(f"t={t:5}: t^(mu-1) E^nu_(alpha,mu)(-t^alpha) =", prabhakar(MLParams(0.7, 0.8, 0.5), -1.0, t))
