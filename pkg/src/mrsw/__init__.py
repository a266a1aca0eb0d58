"""Well-balanced central-upwind solver for magnetic rotating shallow water."""

from .core import (ConfigInvalid, DegenerateEquilibrium, DepthTooSmall, Flat, Gaussian, Grid1D,
                   Grid2D, MRSWError, ModelConfig, Tabulated, UnknownDescriptor, grid_2d)
from .presets import ComplexRoot, Problem, balanced_vortex_velocity, build_problem

__all__ = [
    "ComplexRoot", "ConfigInvalid", "DegenerateEquilibrium", "DepthTooSmall", "Flat", "Gaussian",
    "Grid1D", "Grid2D", "MRSWError", "ModelConfig", "Problem", "Tabulated", "UnknownDescriptor",
    "balanced_vortex_velocity", "build_problem", "grid_2d",
]
__version__ = "0.1.0"
