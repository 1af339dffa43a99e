"""
From a spin sample to a tuned pickup coil
=========================================

A precessing magnetisation at the centre of a single-turn loop induces an
EMF, the tuned LC circuit turns it into a current, and the current's field
acts back on the spins.  Closing the loop gives the cooperative frequency.
"""

import math

import numpy as np

from coopres.circuit import (
    biot_savart_field,
    circuit_response,
    coil_field,
    cooperative_frequency_optical,
    cooperative_frequency_rf,
    dipole_emf,
    nmr_estimate,
    reference_coil,
    reference_sample,
    svea_consistency_check,
    unit_audit,
)

coil = reference_coil(2e9)
print(f"coil: a={coil.radius_a_s} m, L={coil.inductance_l_s:.3e} H, C={coil.capacitance_c_s:.3e} F")

# Centre field two ways.
print("Biot-Savart:", biot_savart_field(coil, 1.0)[2], " closed form:", coil_field(coil, 1.0)[2])

# EMF from a single Bohr magneton precessing at the coil frequency.
print(f"EMF per mu_B: {abs(dipole_emf(9.274e-24, 2e9 / 299792458.0, coil)):.3e} V")

# Collective coupling for 1e13 spins/cm^3 filling the coil.
sample = reference_sample(coil, density_n=1e19)
oa = cooperative_frequency_rf(coil, sample)
print(f"Omega_a = {oa:.3e} rad/s from {sample.n_spins:.2e} spins; Omega_a / 3e3 s^-1 = {oa / 3e3:.1f}")
print(f"Gaussian-unit optical estimate, same density: {cooperative_frequency_optical(2e9, 9.274e-21, 1e13):.3e} rad/s")

nmr = nmr_estimate(1e29, 1.0546e-34 * 2 * math.pi * 400e6, 300.0)
print(f"proton NMR at 400 MHz, 300 K: polarization {nmr.polarization:.2e}, Omega_a ~ {nmr.omega_a_hint:.2e} rad/s")

# Resonant drive of the bare tank: the current amplitude grows as V0 t / 2L.
v0, w = 1e-6, coil.omega_s
periods = 200
traj = circuit_response(coil, lambda t: v0 * math.sin(w * t), (0.0, periods * 2 * math.pi / w), samples=periods * 20)
current = np.abs(traj.states[:, 0]).reshape(-1)[1:].reshape(-1, 20).max(axis=1)
for n in (49, 99, 199):
    t = (n + 1) * 2 * math.pi / w
    print(f"  after {n + 1:3d} periods: |I| = {current[n]:.4e} A, V0 t / 2L = {v0 * t / (2 * coil.inductance_l_s):.4e} A")

# Is the slowly varying envelope adequate for this coil?
rep = svea_consistency_check(coil, sample, max_cycles=500)
print(f"envelope check: ratio {rep.ratio:.1e}, deviation {rep.max_deviation:.1e}, valid={rep.valid}")

for entry in unit_audit():
    print(f"  [{'ok' if entry.ok else '!!'}] {entry.stage}")
