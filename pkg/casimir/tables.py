"""Column descriptions for the result tables."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

from .const import ETA_DECIMALS, FORCE_SIGNIFICANT_DIGITS, NM, PN
from .coordinator import ForceRow


def format_force(value: float) -> str:
    """Format a force in pN with a fixed number of significant digits."""
    return f"{value:.{FORCE_SIGNIFICANT_DIGITS}g}"


def format_eta(value: float) -> str:
    """Format a correction factor with a fixed number of decimals."""
    return f"{value:.{ETA_DECIMALS}f}"


def format_separation(value: float) -> str:
    """Format a separation in nm."""
    return f"{value:g}"


def format_percent(value: float) -> str:
    """Format a fraction as a percentage with four significant digits."""
    return f"{100.0 * value:.4g}"


@dataclass(frozen=True, kw_only=True)
class ColumnDescription[RowT]:
    """Describes one column of a result table."""

    key: str
    value_fn: Callable[[RowT], float | str]
    format_fn: Callable[[float], str] = format_force

    def render(self, row: RowT) -> str:
        """Return the formatted cell for a row."""
        value = self.value_fn(row)
        return value if isinstance(value, str) else self.format_fn(value)


FORCE_COLUMNS: tuple[ColumnDescription[ForceRow], ...] = (
    ColumnDescription(
        key="z_nm", value_fn=lambda r: r.z / NM, format_fn=format_separation
    ),
    ColumnDescription(key="F_ideal_pN", value_fn=lambda r: r.f_ideal / PN),
    ColumnDescription(key="F_model_pN", value_fn=lambda r: r.f_model / PN),
    ColumnDescription(key="eta_c", value_fn=lambda r: r.eta_c, format_fn=format_eta),
    ColumnDescription(key="eta_r", value_fn=lambda r: r.eta_r, format_fn=format_eta),
    ColumnDescription(
        key="eta_cr", value_fn=lambda r: r.eta_cr, format_fn=format_eta
    ),
    ColumnDescription(key="F_final_pN", value_fn=lambda r: r.f_final / PN),
    ColumnDescription(key="error_pN", value_fn=lambda r: r.error / PN),
)


@dataclass(frozen=True)
class ComparisonRow:
    """Experiment and theory at one separation, pN and nm."""

    z_nm: float
    mean_pn: float
    theory_pn: float


COMPARISON_COLUMNS: tuple[ColumnDescription[ComparisonRow], ...] = (
    ColumnDescription(
        key="z_nm", value_fn=lambda r: r.z_nm, format_fn=format_separation
    ),
    ColumnDescription(key="mean_pN", value_fn=lambda r: r.mean_pn),
    ColumnDescription(key="theory_pN", value_fn=lambda r: r.theory_pn),
    ColumnDescription(
        key="deviation_pN", value_fn=lambda r: r.theory_pn - r.mean_pn
    ),
)


@dataclass(frozen=True)
class BudgetRow:
    """One itemized contribution of an error budget."""

    label: str
    value: float
    source: str


BUDGET_COLUMNS: tuple[ColumnDescription[BudgetRow], ...] = (
    ColumnDescription(key="contribution", value_fn=lambda r: r.label),
    ColumnDescription(
        key="percent", value_fn=lambda r: r.value, format_fn=format_percent
    ),
    ColumnDescription(key="source", value_fn=lambda r: r.source),
)


@dataclass(frozen=True)
class QuantityRow:
    """A named scalar result."""

    name: str
    value: float


QUANTITY_COLUMNS: tuple[ColumnDescription[QuantityRow], ...] = (
    ColumnDescription(key="quantity", value_fn=lambda r: r.name),
    ColumnDescription(
        key="value", value_fn=lambda r: r.value, format_fn=lambda v: f"{v:.6g}"
    ),
)


def render_rows[RowT](
    columns: Sequence[ColumnDescription[RowT]], rows: Sequence[RowT]
) -> list[list[str]]:
    """Return the header row followed by one formatted row per item."""
    table: list[list[str]] = [[column.key for column in columns]]
    table.extend([column.render(row) for column in columns] for row in rows)
    return table


def as_records[RowT](
    columns: Sequence[ColumnDescription[RowT]], rows: Sequence[RowT]
) -> list[dict[str, Any]]:
    """Return unformatted values keyed by column, for diagnostics."""
    return [{column.key: column.value_fn(row) for column in columns} for row in rows]
