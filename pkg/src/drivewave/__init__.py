"""drivewave: a numerical laboratory for 1D invasion waves with demographic
feedback (gene drives and Wolbachia), their speed measurement and
classification, and cross-validation against closed-form sign results."""

__version__ = "0.1.0"

from .backend import backend_name
from .demography import Demography, DemographyVariant, bistability_threshold, carrying_capacity, is_eradication_drive
from .models import (
    GenotypeParams,
    Model,
    SystemKind,
    WolbachiaParams,
    fecundity_drive_model,
    survival_drive_model,
    wolbachia_equilibrium,
)
from .solver import Grid1D, InitialCondition, SimConfig, default_config, simulate
from .wave import WaveClass, WaveReport, classify_wave

__all__ = [
    "__version__",
    "backend_name",
    "Demography",
    "DemographyVariant",
    "bistability_threshold",
    "carrying_capacity",
    "is_eradication_drive",
    "GenotypeParams",
    "Model",
    "SystemKind",
    "WolbachiaParams",
    "fecundity_drive_model",
    "survival_drive_model",
    "wolbachia_equilibrium",
    "Grid1D",
    "InitialCondition",
    "SimConfig",
    "default_config",
    "simulate",
    "WaveClass",
    "WaveReport",
    "classify_wave",
]
