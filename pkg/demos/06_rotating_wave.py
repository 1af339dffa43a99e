"""
How good is the rotating-wave approximation?
============================================

A linearly polarized transverse field is two counter-rotating circular
components.  Keeping only the co-rotating one is the rotating-wave
approximation; the error it makes shrinks as Omega_0 / omega_c.
"""

import math

from coopres.multilevel import rabi_frequency, rwa_validation, zeeman_frequency

b_s = 1e-6  # tesla
w0 = rabi_frequency(b_s)
period = 2 * math.pi / (w0 / 2)
print(f"Omega_0 = {w0:.3e} rad/s")
for factor in (10, 100, 1000):
    rep = rwa_validation(b_s, factor * w0, factor * w0, (0.0, period))
    print(f"omega_c = {factor:5d} Omega_0: max population deviation {rep.max_deviation:.2e}")

print(f"for scale, a 500 G field splits the spin levels by {zeeman_frequency(0.05):.3e} rad/s")
