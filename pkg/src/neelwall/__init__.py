"""Nonlocal Neel-wall energy: minimization over phase lifts of prescribed winding
number and numerical checks of its structural properties."""

from .anisotropy import GAMMA, potential, w_value
from .constructions import conjugate, glue, localize, reflect, split_parts
from .energy import EnergyBreakdown, el_residual, energy, residual_max
from .estimators import LambdaTransformer, TailDecayRegressor, WallMinimizer
from .halfline import (SpectralPlan, h_half_inner, h_half_norm_sq, harmonic_extension_V,
                       lambda_fourier, lambda_pv, stray_energy_pde)
from .minimizer import (MinimizeConfig, MinimizeReport, dichotomy_probe, minimize, passages,
                        scan, start_profile, symmetrize, wall_centers)
from .profile import (AnisotropyParams, Grid, Profile, degree, initial_guess,
                      limits_for_degree, make_profile, read_profile, resample, write_profile)

__version__ = "0.1.0"

__all__ = [
    "AnisotropyParams", "EnergyBreakdown", "GAMMA", "Grid", "LambdaTransformer",
    "MinimizeConfig", "MinimizeReport", "Profile", "SpectralPlan", "TailDecayRegressor",
    "WallMinimizer", "conjugate", "degree", "dichotomy_probe", "el_residual", "energy",
    "glue", "h_half_inner", "h_half_norm_sq", "harmonic_extension_V", "initial_guess",
    "lambda_fourier", "lambda_pv", "limits_for_degree", "localize", "make_profile",
    "minimize", "passages", "potential", "read_profile", "reflect", "resample",
    "residual_max", "scan", "split_parts", "start_profile", "stray_energy_pde",
    "symmetrize", "w_value", "wall_centers", "write_profile",
]
