"""Gas pulses in a pipe with a periodically varying cross-section.

Reference variable-coefficient finite-volume solver, effective-medium
coefficient tables, linear dispersion relations, a pseudospectral solver
for the effective dispersive system, and the comparison harness.
"""

from .medium import (
    CrossSectionProfile,
    GasModel,
    PiecewiseConstantProfile,
    SampledProfile,
    SinusoidalProfile,
    VacuumError,
    constant_profile,
)
from .averaging import PeriodicFunction, bracket, fluctuation, mean, pointwise
from .homogenize import (
    BracketCoefficients,
    HomogCoefficients,
    bracket_coefficients,
    effective_coefficients,
    homog_coefficients,
    mean_area_pair,
)
from .dispersion import DispersionSample, StabilityReport, omega_xxt, omega_xxx, stability_scan
from .harness import Scenario, Snapshot, build_scenario, compare, emit_csv, load_config

__version__ = "0.1.0"

__all__ = [
    "CrossSectionProfile", "GasModel", "PiecewiseConstantProfile",
    "SampledProfile", "SinusoidalProfile", "VacuumError", "constant_profile",
    "PeriodicFunction", "bracket", "fluctuation", "mean", "pointwise",
    "BracketCoefficients", "HomogCoefficients", "bracket_coefficients",
    "effective_coefficients", "homog_coefficients", "mean_area_pair",
    "DispersionSample", "StabilityReport", "omega_xxt", "omega_xxx", "stability_scan",
    "Scenario", "Snapshot", "build_scenario", "compare", "emit_csv", "load_config",
    "__version__",
]
