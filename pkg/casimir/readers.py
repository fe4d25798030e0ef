"""Readers for the optical, roughness, profile, lookup and scan files.

All files are comma-separated text with ``#`` comment lines. Errors name the
file and the 1-based line number.
"""

from __future__ import annotations

from collections.abc import Iterator
from importlib import resources
import logging
from pathlib import Path
import re

from .const import FrequencyUnit
from .exceptions import CasimirError, FormatError
from .optics import DrudeParams, OpticalTable, energy_to_omega, table_from_nk
from .roughness import DiffractionLookup, HeightProfile, RoughnessHistogram
from .stats import ScanSet

_LOGGER = logging.getLogger(__name__)

_UNITS_DIRECTIVE = re.compile(r"^#\s*units\s*:\s*(\S+)\s*$", re.IGNORECASE)


def shipped_data(name: str) -> Path:
    """Return the path of a data file shipped with the package."""
    return Path(str(resources.files("casimir") / "data" / name))


def _read_lines(path: Path | str) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as err:
        raise FormatError(f"cannot read file ({err.strerror})", path) from err


def _data_rows(
    path: Path | str,
    lines: list[str],
    columns: int | None = None,
    first_line: int = 1,
) -> Iterator[tuple[int, list[float]]]:
    """Yield (line number, values) for every data line."""
    for number, raw in enumerate(lines, start=first_line):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if columns is not None and len(fields) != columns:
            raise FormatError(
                f"expected {columns} columns, found {len(fields)}", path, number
            )
        try:
            values = [float(f) for f in fields]
        except ValueError as err:
            raise FormatError(f"non-numeric value in '{line}'", path, number) from err
        yield number, values


def read_optical_table(
    path: Path | str, extension: DrudeParams | None = None
) -> OpticalTable:
    """Read (frequency or energy, n, k) rows into an optical table."""
    lines = _read_lines(path)
    unit = FrequencyUnit.EV
    for raw in lines:
        match = _UNITS_DIRECTIVE.match(raw.strip())
        if match:
            try:
                unit = FrequencyUnit(match.group(1))
            except ValueError as err:
                raise FormatError(f"unknown units '{match.group(1)}'", path) from err

    rows: list[tuple[float, float, float]] = []
    for _, (first, n, k) in _data_rows(path, lines, columns=3):
        omega = energy_to_omega(first) if unit is FrequencyUnit.EV else first
        rows.append((omega, n, k))
    try:
        table = table_from_nk(rows, extension)
    except FormatError as err:
        raise FormatError(str(err), path, err.line) from err
    _LOGGER.debug("Read %d optical samples (%s) from %s", len(rows), unit, path)
    return table


def read_histogram(path: Path | str) -> RoughnessHistogram:
    """Read (height_nm, fraction) rows into a roughness histogram."""
    rows = [values for _, values in _data_rows(path, _read_lines(path), columns=2)]
    try:
        return RoughnessHistogram.from_fractions(
            [r[0] for r in rows], [r[1] for r in rows]
        )
    except CasimirError as err:
        raise FormatError(str(err), path) from err


def read_profile(path: Path | str) -> HeightProfile:
    """Read (position_nm, height_nm) rows into a height profile."""
    rows = [values for _, values in _data_rows(path, _read_lines(path), columns=2)]
    try:
        return HeightProfile(
            positions=tuple(r[0] for r in rows), heights=tuple(r[1] for r in rows)
        )
    except CasimirError as err:
        raise FormatError(str(err), path) from err


def read_diffraction_lookup(path: Path | str) -> DiffractionLookup:
    """Read (z_over_lcorr, c_corr) rows into a diffraction lookup."""
    rows = [values for _, values in _data_rows(path, _read_lines(path), columns=2)]
    try:
        return DiffractionLookup(points=tuple((r[0], r[1]) for r in rows))
    except CasimirError as err:
        raise FormatError(str(err), path) from err


def read_scans(path: Path | str) -> ScanSet:
    """Read a scan file: header ``z_nm, scan_1, ...`` then one row per z.

    Scans are identified by their 1-based column position.
    """
    lines = _read_lines(path)
    header_line = None
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            header_line = number
            break
    if header_line is None:
        raise FormatError("scan file has no header", path)
    header = [h.strip() for h in lines[header_line - 1].split(",")]
    if len(header) < 2:
        raise FormatError(
            "scan header needs z_nm and at least one scan", path, header_line
        )

    separations: list[float] = []
    columns: list[list[float]] = [[] for _ in header[1:]]
    rows = _data_rows(
        path, lines[header_line:], columns=len(header), first_line=header_line + 1
    )
    for number, values in rows:
        separations.append(values[0])
        for column, value in zip(columns, values[1:], strict=True):
            column.append(value)
        if len(separations) > 1 and separations[-1] <= separations[-2]:
            raise FormatError("separations must be increasing", path, number)
    if not separations:
        raise FormatError("scan file has no data rows", path)
    return ScanSet(
        separations=tuple(separations),
        scans=tuple(tuple(column) for column in columns),
    )
