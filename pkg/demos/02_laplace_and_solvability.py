"""The Prabhakar kernel in the Laplace domain.

``k_hat(s) = s^(-1+mu-alpha nu) (s^alpha + a)^nu``. The relaxation equation
is well posed when ``k`` is singular at 0, fades at infinity and ``s k_hat``
behaves correctly at both ends; ``solvability_check`` probes all four.
"""

from prabrelax import MLParams, PrabhakarKernel, inverse_laplace, prabhakar, prabhakar_image
from prabrelax import solvability_check

for kernel in (PrabhakarKernel.cole_cole(0.75), PrabhakarKernel.cole_cole(0.75, 3.0),
               PrabhakarKernel(0.7, 0.5, 0.8, 1.0)):
    rep = solvability_check(kernel)
    print(kernel)
    print("   conditions:", rep.conditions)
    for note in rep.notes:
        print("   note:", note)

# transform pair: invert the image and compare with the time-domain function
par, a = MLParams(0.6, 0.9, 1.4), -2.0
img = prabhakar_image(par, a)
for t in (0.05, 0.5, 5.0):
    print(f"t={t}: Talbot {inverse_laplace(img, t):.15g}  direct {prabhakar(par, a, t):.15g}")

# Talbot and Gaver-Stehfest cross-check each other when asked to
print("both methods:", inverse_laplace(lambda s: 1 / (s * (s**0.5 + 1)), 2.0, "both"))
