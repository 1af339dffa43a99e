"""
Hyperfine ground states of hydrogen and rubidium-87
===================================================

Hyperfine states |F, M> are composed from electron and nuclear spins with
exact Clebsch-Gordan algebra.  The electron raising operator mu_+ is then
tabulated in units of mu_S, and the time-dependent coupling matrix follows.
"""

import math

import numpy as np

from coopres.multilevel import build_l_matrix, build_mu_plus, dump_model, reference_l_matrix, simulate_atom

for kind in ("H", "Rb"):
    model = build_mu_plus(kind)
    print(f"{kind}: levels {[lev.label for lev in model.levels]}")
    for key, val in dump_model(model)["mu_plus"].items():
        print(f"  {key:>18} = {val}")

# Two independent constructions of the Rb coupling matrix agree.
rb = build_mu_plus("Rb")
rng = np.random.default_rng(0)
worst = max(
    np.max(np.abs(build_l_matrix(rb, t, nu, wc) - reference_l_matrix("Rb", t, nu, wc)))
    for t, nu, wc in rng.uniform(0, 5, size=(100, 3))
)
print(f"Rb: generated vs tabulated coupling matrix, worst entry difference {worst:.1e}")

# Hydrogen Rabi oscillation |0,0> <-> |1,1>, driven at nu = omega_c with the
# other transitions 100 Rabi frequencies away.
h = build_mu_plus("H")
y0 = np.zeros(4, complex)
y0[h.index(0, 0)] = 1
coupling = math.sqrt(2) / 2
period = 2 * math.pi / coupling
traj = simulate_atom(h, 1.0, 50.0, 50.0, y0, (0.0, period), sample_every=period / 8)
for t, a in zip(traj.times, traj.states):
    print(f"  t={t:6.2f}  P(1,1)={abs(a[h.index(1, 1)])**2:.4f}  two-level {math.sin(coupling * t)**2:.4f}")
