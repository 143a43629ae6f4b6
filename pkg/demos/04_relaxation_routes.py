"""Solving the relaxation equation five ways.

The Cole-Cole configuration with a relaxation rate (alpha = 3/4, a = 3,
B = 1.25) has a closed form, so every route can be checked against it.
The small-time series stops converging near t ~ 2; the large-time series
never converges here because a > B; the Laplace inversion, the
subordination integral and the product-integration solver cover the rest.
"""

import numpy as np

from prabrelax import (NonConvergent, PrabhakarKernel, VolterraProblem, solve_closed_cc,
                       solve_integral_eq1, solve_integral_rep, solve_laplace_numeric,
                       solve_series_f1)
from prabrelax.volterra import cole_cole_family

p = VolterraProblem(PrabhakarKernel.cole_cole(0.75, 3.0), 1.25)
t_grid = np.array([0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
eq1 = solve_integral_eq1(p, t_grid)
print(f"{'t':>5} {'closed':>12} {'series':>12} {'laplace':>12} {'integral':>12} {'eq1':>12}")
for i, t in enumerate(t_grid):
    try:
        ser = f"{solve_series_f1(p, t):12.8f}"
    except NonConvergent:
        ser = f"{'refused':>12}"
    lap = solve_laplace_numeric(p, t) if t > 0 else p.f0
    rep = solve_integral_rep(p, t) if t > 0 else p.f0
    print(f"{t:5.1f} {solve_closed_cc(p, t):12.8f} {ser} {lap:12.8f} {rep:12.8f} {eq1.values[i]:12.8f}")
print("eq1 grid refinement:", eq1.meta)

# the five-curve family with B = (1 - alpha) / tau
t = np.linspace(0.0, 10.0, 6)
for tau, curve in cole_cole_family(t_grid=t).items():
    print(f"tau={tau}: " + " ".join(f"{v:.4f}" for v in curve.values),
          f" -> 3/(B+3) = {3 / (curve.meta['B'] + 3):.4f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

t = np.linspace(0.0, 10.0, 201)
fig, ax = plt.subplots()
for tau, curve in cole_cole_family(t_grid=t).items():
    ax.plot(t, curve.values, label=f"tau = {tau}")
ax.set_xlabel("t")
ax.set_ylabel("f(t)")
ax.legend()
fig.savefig("cole_cole_family.png", dpi=120)
print("wrote cole_cole_family.png")
