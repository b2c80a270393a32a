"""Spectral and bifurcation analysis of three-dimensional internal gravity-capillary waves."""

from iwave._kernels import BACKEND
from iwave.errors import NumericalError, ValidationError
from iwave.params import BifurcationOffsets, ModelParams, WaveVector

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BifurcationOffsets",
    "ModelParams",
    "NumericalError",
    "ValidationError",
    "WaveVector",
]
