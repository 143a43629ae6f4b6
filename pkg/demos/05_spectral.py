"""Frequency-domain view: spectral function, Jonscher exponents and memory.

The spectral function ``B / (B + s k_hat(s))`` at ``s = i omega`` follows
Jonscher's power laws with ``1 - n = mu`` at high frequency and
``m = mu - alpha nu`` (or ``mu`` when ``a = 0``) at low frequency.
"""

from prabrelax import PrabhakarKernel, jonscher_exponents, kappa_kernel, spectrum
from prabrelax.spectral import expected_jonscher, relaxation_from_spectrum

for kernel in (PrabhakarKernel.cole_cole(0.75), PrabhakarKernel(0.5, 1.0, 0.9, 1.0),
               PrabhakarKernel.cole_cole(0.75, 3.0)):
    fit = jonscher_exponents(spectrum(kernel, 1.0), 1.0)
    exp = expected_jonscher(kernel)
    print(kernel)
    print(f"   fitted m={fit.m:.4f} 1-n={fit.one_minus_n:.4f}   expected m={exp.m:.4f} 1-n={exp.one_minus_n:.4f}")

# the memory function: closed form against inversion of 1 / (s k_hat)
k = PrabhakarKernel(0.7, 0.5, 0.8, 1.0)
for t in (0.1, 1.0, 10.0):
    print(f"kappa({t}) closed {kappa_kernel(k, t):.12g}  inverted {kappa_kernel(k, t, 'inversion'):.12g}")

# and back to the time domain from the spectral function alone
print("f(1) from the spectrum:", relaxation_from_spectrum(k, 0.9, 1.0))
