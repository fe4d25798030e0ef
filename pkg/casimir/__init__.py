"""Precision computation of the sphere-plate Casimir force.

The package evaluates the Lifshitz force for metals described by several
permittivity models, applies roughness, thermal, patch-potential and
finite-size corrections, and compares theory with repeated force scans.
"""

from __future__ import annotations

from .const import VERSION as __version__
from .exceptions import CasimirError, InputError, NumericalError

__all__ = ["CasimirError", "InputError", "NumericalError", "__version__"]
