"""Cooperative parametric resonance of driven spin ensembles.

Submodules
----------
numerics    explicit Runge-Kutta integration of complex state vectors
two_level   coupled atom-field equations for a two-level ensemble
parametric  Mathieu form, envelope equations and detuning sweeps
multilevel  spin-1/2, hydrogen and 87Rb hyperfine models
circuit     pickup coil / LC chain and cooperative-frequency calculators
scenario    unit-aware scenario files used by the command line tool
"""

__version__ = "0.1.0"
