"""Exceptions raised by the Casimir precision toolkit.

Input problems (bad arguments, malformed files, invalid geometry) derive from
InputError; failures of the numerical machinery derive from NumericalError.
The CLI maps the two families onto distinct exit statuses.
"""

from __future__ import annotations

from pathlib import Path

from .const import EXIT_INPUT, EXIT_NUMERICAL


class CasimirError(Exception):
    """Base class for all toolkit errors."""

    exit_status: int = EXIT_INPUT


class InputError(CasimirError):
    """Invalid input: arguments, files or configuration."""

    exit_status = EXIT_INPUT


class DomainError(InputError, ValueError):
    """Argument outside the domain of an operation."""


class RegimeError(InputError):
    """Frequency outside the regime where a model applies."""


class LookupRangeError(InputError):
    """Argument outside the range covered by a lookup table."""


class ConfigError(InputError):
    """Run configuration is invalid or references missing files."""


class FormatError(InputError):
    """Malformed data file or table."""

    def __init__(
        self, message: str, path: Path | str | None = None, line: int | None = None
    ) -> None:
        """Initialize with optional location information."""
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class DegenerateProfileError(DomainError):
    """Height profile has no variation to analyse."""


class ContactError(InputError):
    """A roughness-shifted separation reached contact."""

    def __init__(self, separation: float, plate_bin: int, sphere_bin: int) -> None:
        """Initialize with the offending bin pair."""
        self.separation = separation
        self.plate_bin = plate_bin
        self.sphere_bin = sphere_bin
        super().__init__(
            f"surfaces in contact for plate bin {plate_bin} and sphere bin "
            f"{sphere_bin} (shifted separation {separation:.6g} m)"
        )


class NumericalError(CasimirError):
    """Numerical procedure failed to reach its accuracy target."""

    exit_status = EXIT_NUMERICAL


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge."""

    def __init__(self, message: str, estimate: float, error_bound: float) -> None:
        """Initialize with the achieved estimate and its error bound."""
        self.estimate = estimate
        self.error_bound = error_bound
        super().__init__(
            f"{message} (estimate {estimate:.10g}, error bound {error_bound:.3g})"
        )


class SummationError(NumericalError):
    """Series did not converge."""


class ModelValidityError(NumericalError):
    """A permittivity model left its domain of validity."""

    def __init__(self, message: str, xi: float | None = None) -> None:
        """Initialize with the offending imaginary frequency, if any."""
        self.xi = xi
        if xi is not None:
            message = f"{message} at xi = {xi:.6g} rad/s"
        super().__init__(message)
