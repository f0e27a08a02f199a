"""Tire load and slip-angle estimation from inner-liner accelerometer signals.

The package pairs the estimation pipeline (per-turn segmentation,
drift-free double integration, footprint features, recursive load
estimation, slip regression) with a physics-grounded synthetic trace
generator whose exact per-turn ground truth makes every stage testable at
desk scale.
"""

__version__ = "0.1.0"

from .errors import (
    DenominatorError,
    EdgeOrderError,
    GeometryError,
    InvalidCutoffError,
    NoPeakError,
    RankDeficiencyError,
    ResolutionError,
    ScenarioError,
    SchemaError,
    TireSenseError,
    TooShortError,
)
from .geometry import TireGeometry, derive_geometry
from .scenario import SensorSpec, TireScenario
from .simulate import AccelTrace, GroundTruth, simulate, wheel_period

__all__ = [
    "AccelTrace",
    "DenominatorError",
    "EdgeOrderError",
    "GeometryError",
    "GroundTruth",
    "InvalidCutoffError",
    "NoPeakError",
    "RankDeficiencyError",
    "ResolutionError",
    "ScenarioError",
    "SchemaError",
    "SensorSpec",
    "TireGeometry",
    "TireScenario",
    "TireSenseError",
    "TooShortError",
    "derive_geometry",
    "simulate",
    "wheel_period",
    "__version__",
]
