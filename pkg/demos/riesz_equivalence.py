# coding: utf-8

# # Wolff potentials and the Riesz potential
#
# With gamma = 2 the Wolff potential is linear in f, and with beta = alpha/2
# it is a multiple of the Riesz potential: (n - alpha) W = I_alpha f.
# We check this on a Gaussian in R^3 against a brute force Riesz integral.

import numpy as np
from scipy import integrate

from wolffkit import RadialDensity, wolff_profile

n, alpha = 3, 2.0
f = RadialDensity(lambda r: np.exp(-r * r), n)
radii = np.array([0.0, 0.5, 1.0, 2.0, 5.0])

wolff = wolff_profile(f, alpha / 2, 2.0, radii) * (n - alpha)


# In R^3 with alpha = 2 the kernel is 1/|x - y|, and the shell theorem gives
# I f(x) = 4 pi (int_0^rho s^2 f(s) ds / rho + int_rho^inf s f(s) ds).

def newton(rho):
    outer = integrate.quad(lambda s: s * np.exp(-s * s), rho, np.inf)[0]
    if rho == 0:
        return 4 * np.pi * outer
    inner = integrate.quad(lambda s: s * s * np.exp(-s * s), 0, rho)[0]
    return 4 * np.pi * (inner / rho + outer)


for rho, w in zip(radii, wolff):
    ref = newton(rho)
    print(f"rho={rho:4.1f}  wolff*(n-alpha)={w:.12f}  riesz={ref:.12f}  rel={abs(w - ref) / ref:.1e}")

# At the origin the value is 2 pi, the integral of |y|^-1 e^{-|y|^2}.
print("2 pi =", 2 * np.pi)
