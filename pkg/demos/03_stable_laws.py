"""One-sided stable laws and the subordination form of the relaxation.

``h_function`` returns the density (lam=0) or the distribution function
(lam=1) of the stable subordinator through several routes.
"""

import math

from prabrelax import LevyQuery, h_function, levy_cdf, levy_density, ml3, MLParams, ml_integral_rep

# alpha = 1/2 is the Levy-Smirnov law with closed forms
u, t = 1.0, 0.7
print("density:", levy_density(0.5, u, t),
      " closed form:", u * math.exp(-u * u / (4 * t)) / (2 * math.sqrt(math.pi) * t**1.5))
print("cdf    :", levy_cdf(0.5, u, t), " erfc:", math.erfc(u / (2 * math.sqrt(t))))

# the routes agree where they overlap
q = LevyQuery(1 / 3, 1.0, 1.0, 0.0)
for route in ("series", "hypergeometric", "inversion", "integral"):
    print(f"{route:>15}: {h_function(q, route):.15g}")

# alpha -> 1 degenerates to a step at t = u
print("alpha=1 step:", [levy_cdf(1.0, 1.0, x) for x in (0.5, 1.0, 2.0)])

# the Mittag-Leffler function as an average over the stable law
al, be, ga, a, t = 0.75, 0.6, 0.8, 2.0, 0.5
print("integral representation:", ml_integral_rep(al, be, ga, a, t),
      " series:", ml3(MLParams(al, be, ga), -a * t**al))
