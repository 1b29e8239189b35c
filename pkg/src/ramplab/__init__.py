"""Constant-speed ramps under a central force with Coulomb friction."""

from .analytic import FamilyKind, RampFamily, classify_asymptotics, sample_family
from .forces import CentralForce, icho
from .geometry import ArcCurve, reparam_arclength
from .ramp_law import RampConfig, RampReport, ramp_residual
from .treadmillsled import tms_forward, tms_inverse

__version__ = "0.1.0"

__all__ = [
    "ArcCurve",
    "CentralForce",
    "FamilyKind",
    "RampConfig",
    "RampFamily",
    "RampReport",
    "classify_asymptotics",
    "icho",
    "ramp_residual",
    "reparam_arclength",
    "sample_family",
    "tms_forward",
    "tms_inverse",
    "__version__",
]
