"""
Saturation level versus drive detuning
======================================

Every grid point is an independent run of the closed two-level system; the
sweep reports max |Omega_s| / Omega_a against d = (Omega_a - nu) / Omega_a.
Results are sorted by detuning and do not depend on the worker count.
"""

import os

from coopres.parametric import detuning_sweep
from coopres.two_level import DriveSpec, SimConfig

detunings = [-0.5, -0.25, -0.1, -0.05, 0.0, 0.05, 0.1, 0.25, 0.5]
base = SimConfig(drive=DriveSpec(0.01, 1.0), initial_rho_aa=0.1, t_end=5000.0, sample_every=0.5)
points = detuning_sweep(1.0, 0.01, [1 - d for d in detunings], run_cfg=base, workers=min(4, os.cpu_count() or 1))

peak = max(p.max_field for p in points)
for p in points:
    bar = "#" * int(40 * p.max_field / peak)
    print(f"d={p.detuning:+.2f}  {p.max_field:.3f}  {bar}")
