"""Blockade statistics of a driven PT-symmetric cavity-magnon system."""
from .errors import (
    ConfigError,
    DegenerateTransformError,
    DivergenceError,
    NoSteadyStateError,
    NotFoundError,
    ParameterError,
    PositivityError,
    PTMagnonError,
    SingularSystemError,
    UndefinedStatisticsError,
)
from .params import LabFrameParams, PhysicalConstants, SystemParams

__version__ = "0.1.0"

__all__ = [
    "SystemParams",
    "PhysicalConstants",
    "LabFrameParams",
    "PTMagnonError",
    "ParameterError",
    "ConfigError",
    "NotFoundError",
    "DegenerateTransformError",
    "SingularSystemError",
    "UndefinedStatisticsError",
    "NoSteadyStateError",
    "PositivityError",
    "DivergenceError",
]
