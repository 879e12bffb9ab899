"""Complexified quantum signal processing over SL(2,C)."""

from .errors import (
    CalibrationError,
    ConsistencyError,
    DegenerateChannelError,
    DegenerateParameterError,
    DomainError,
    PoleError,
    ResourceLimitError,
)
from .qsp import ComplexSignal, evaluate, fit_entry_polynomials

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "ComplexSignal",
    "ConsistencyError",
    "DegenerateChannelError",
    "DegenerateParameterError",
    "DomainError",
    "PoleError",
    "ResourceLimitError",
    "evaluate",
    "fit_entry_polynomials",
]
