"""Rendering and writing of result tables, text reports and diagnostics."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
import csv
from dataclasses import dataclass
import io
import json
import logging
import os
from pathlib import Path
import tempfile
from typing import Any

import numpy as np

from .config import RunConfig
from .const import NM, PN, VERSION, Command
from .coordinator import AnalysisData, BudgetData, ForceRunData, RoughnessData
from .optics import plasma_wavelength
from .tables import (
    BUDGET_COLUMNS,
    COMPARISON_COLUMNS,
    FORCE_COLUMNS,
    QUANTITY_COLUMNS,
    BudgetRow,
    ComparisonRow,
    QuantityRow,
    as_records,
    format_eta,
    format_force,
    format_percent,
    render_rows,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class RenderedOutput:
    """All files of one command, rendered and ready to write."""

    command: Command
    table: str
    report: str
    diagnostics: dict[str, Any]

    def files(self) -> dict[str, str]:
        """Return file names mapped to their contents."""
        return {
            f"{self.command}.csv": self.table,
            f"{self.command}_report.txt": self.report,
            f"{self.command}_diagnostics.json": json.dumps(
                self.diagnostics, indent=2, sort_keys=True
            )
            + "\n",
        }


def to_csv(rows: Sequence[Sequence[str]]) -> str:
    """Return rows as comma-delimited text with Unix line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def _jsonable(value: Any) -> Any:
    """Convert numpy values, paths and containers into JSON types."""
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_jsonable(v) for v in items]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    return value


def config_diagnostics(config: RunConfig) -> dict[str, Any]:
    """Return the validated configuration as a diagnostics dictionary."""
    return {
        "version": VERSION,
        "source": str(config.source) if config.source else None,
        "sections": _jsonable(config.data),
    }


def render_force(config: RunConfig, data: ForceRunData) -> RenderedOutput:
    """Render the force table, report and diagnostics."""
    table = to_csv(render_rows(FORCE_COLUMNS, data.rows))
    lines = [
        "Casimir force, sphere-plate",
        f"model: {data.model}",
        f"temperature: {data.temperature:g} K",
        f"sphere radius: {config.radius / 1e-6:g} um",
        f"plasma wavelength: {plasma_wavelength(config.omega_p) / NM:.4g} nm",
    ]
    if data.A_st is not None:
        lines.append(f"stochastic roughness amplitude: {data.A_st / NM:.4g} nm")
    lines.append("")
    for row in data.rows:
        lines.append(
            f"z = {row.z / NM:g} nm: F = {format_force(row.f_final / PN)} pN, "
            f"eta_c = {format_eta(row.eta_c)}, eta_cr = {format_eta(row.eta_cr)}"
        )
    for z, corrections in data.thermal.items():
        parts = ", ".join(
            f"{kind} {format_percent(c.delta_rel)}%"
            for kind, c in corrections.items()
        )
        lines.append(f"thermal correction at {z / NM:g} nm: {parts}")
    lines.extend(f"notice: {notice}" for notice in data.notices)

    diagnostics = {
        "config": config_diagnostics(config),
        "data": {
            "model": str(data.model),
            "temperature": data.temperature,
            "A_st": data.A_st,
            "rows": [_jsonable(vars(row)) for row in data.rows],
            "thermal": {
                f"{z / NM:g}": {
                    str(kind): {"delta_abs": c.delta_abs, "delta_rel": c.delta_rel}
                    for kind, c in corrections.items()
                }
                for z, corrections in data.thermal.items()
            },
            "notices": data.notices,
        },
    }
    return RenderedOutput(Command.FORCE, table, "\n".join(lines) + "\n", diagnostics)


def render_analysis(config: RunConfig, data: AnalysisData) -> RenderedOutput:
    """Render the comparison table, analysis report and diagnostics."""
    z = data.scans.z
    theory = data.theory if data.theory is not None else np.full(z.shape, np.nan)
    rows = [
        ComparisonRow(z_nm=float(zi), mean_pn=float(mi), theory_pn=float(ti))
        for zi, mi, ti in zip(z, data.mean, theory, strict=True)
    ]
    table = to_csv(render_rows(COMPARISON_COLUMNS, rows))

    c = data.confidence
    lines = [
        "Experiment versus theory",
        f"scans: {c.n} ({len(data.scans.excluded_scan_ids)} excluded)",
        f"confidence level: {c.beta:g}",
        f"standard deviation of the mean: {c.s_mean:.4g} pN",
        f"Student threshold: {c.t_value:.4f}",
        f"random error: {c.random_error:.4g} pN",
        f"systematic error: {c.systematic_error:.4g} pN",
        f"total error: {c.total_error:.4g} pN",
    ]
    for z_report, rel in data.relative_errors.items():
        lines.append(f"relative error at {z_report:g} nm: {format_percent(rel)}%")
    if data.fit is not None:
        fit = data.fit
        lines.extend(
            [
                f"best separation offset: {fit.offset:+.3f} nm "
                f"(z0 = {fit.z0_best:.3f} nm)",
                f"RMS deviation at best offset: {fit.sigma_best:.4g} pN",
                "offsets within 10% of the minimum: "
                f"+-{fit.equivalence_halfwidth:.3f} nm",
            ]
        )
        lines.extend(
            f"RMS deviation ({label}): {sigma:.4g} pN"
            for label, sigma in fit.sigma_by_region.items()
        )
    if data.coverage is not None:
        lines.append(
            f"coverage of the random-error interval: {format_percent(data.coverage)}% "
            f"over {config.coverage_trials} trials"
        )
    lines.extend(f"notice: {notice}" for notice in data.notices)

    diagnostics = {
        "config": config_diagnostics(config),
        "data": {
            "scan_ids": _jsonable(data.scans.scan_ids),
            "excluded_scan_ids": _jsonable(data.scans.excluded_scan_ids),
            "confidence": _jsonable(vars(c)),
            "relative_errors": {f"{k:g}": v for k, v in data.relative_errors.items()},
            "fit": None
            if data.fit is None
            else {
                "z0_best": data.fit.z0_best,
                "offset": data.fit.offset,
                "sigma_best": data.fit.sigma_best,
                "equivalence_halfwidth": data.fit.equivalence_halfwidth,
                "sigma_by_region": data.fit.sigma_by_region,
            },
            "coverage": data.coverage,
            "notices": data.notices,
        },
    }
    return RenderedOutput(
        Command.ANALYZE, table, "\n".join(lines) + "\n", diagnostics
    )


def render_budget(config: RunConfig, data: BudgetData) -> RenderedOutput:
    """Render the itemized budget, report and diagnostics."""
    rows = [
        BudgetRow(label=label, value=value, source=data.sources.get(label, "computed"))
        for label, value in data.budget.contributions
    ]
    rows.append(BudgetRow(label="total", value=data.budget.total, source="sum"))
    table = to_csv(render_rows(BUDGET_COLUMNS, rows))
    lines = [f"Theoretical error budget at z = {data.z_nm:g} nm"]
    lines.extend(
        f"{row.label}: {format_percent(row.value)}% ({row.source})" for row in rows
    )
    diagnostics = {
        "config": config_diagnostics(config),
        "data": {
            "z_nm": data.z_nm,
            "contributions": data.budget.as_dict(),
            "sources": data.sources,
            "rows": as_records(BUDGET_COLUMNS, rows),
            "total": data.budget.total,
        },
    }
    return RenderedOutput(Command.BUDGET, table, "\n".join(lines) + "\n", diagnostics)


def render_roughness(config: RunConfig, data: RoughnessData) -> RenderedOutput:
    """Render roughness statistics, report and diagnostics."""
    rows = [
        QuantityRow("H0_nm", data.plate.H0),
        QuantityRow("A_nm", data.plate.A),
        QuantityRow("delta_st_nm", data.plate.delta_st),
        QuantityRow("A_st_nm", data.plate.A_st),
    ]
    if data.sphere is not None:
        rows.extend(
            [
                QuantityRow("sphere_H0_nm", data.sphere.H0),
                QuantityRow("sphere_A_nm", data.sphere.A),
                QuantityRow("sphere_delta_st_nm", data.sphere.delta_st),
                QuantityRow("sphere_A_st_nm", data.sphere.A_st),
            ]
        )
    if data.dominant_period_nm is not None:
        rows.append(QuantityRow("dominant_period_nm", data.dominant_period_nm))
    table = to_csv(render_rows(QUANTITY_COLUMNS, rows))
    lines = ["Surface roughness"]
    lines.extend(f"{row.name}: {row.value:.6g}" for row in rows)
    lines.extend(f"notice: {notice}" for notice in data.notices)
    diagnostics = {
        "config": config_diagnostics(config),
        "data": {
            "plate": _jsonable(vars(data.plate)),
            "sphere": _jsonable(vars(data.sphere)) if data.sphere else None,
            "renormalized": data.renormalized,
            "dominant_period_nm": data.dominant_period_nm,
            "notices": data.notices,
        },
    }
    return RenderedOutput(
        Command.ROUGHNESS, table, "\n".join(lines) + "\n", diagnostics
    )


def write_atomic(path: Path, text: str) -> None:
    """Write text to path through a temporary file in the same directory."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(temp_name, path)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise


def write_outputs(output: RenderedOutput, directory: Path) -> list[Path]:
    """Write every file of a rendered output and return the paths."""
    written = []
    for name, text in output.files().items():
        path = directory / name
        write_atomic(path, text)
        written.append(path)
        _LOGGER.info("Wrote %s", path)
    return written

