"""Parameter sweeps over (rho, SNR) written as stable CSV.

One row per grid point, fixed column order, '.' decimals, LF line endings,
full double precision (shortest round-trip float repr). The dstar column
is filled only where the SNR is at or below the uncoded-optimality
threshold; above it the exact optimum is unknown and the cell stays blank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .bounds import below_snr_threshold, dstar_below_threshold, minimax_lower_bound, uncoded_distortion
from .model import ParameterError, SourceParams, snr_threshold

COLUMNS = (
    "rho",
    "snr",
    "threshold_snr",
    "below_threshold",
    "lower_bound",
    "rho_star",
    "d_uncoded",
    "dstar_or_blank",
)


@dataclass(frozen=True)
class SweepSpec:
    """Grid of correlations and SNRs to evaluate at fixed sigma2, n0."""

    rho_grid: tuple[float, ...]
    snr_grid: tuple[float, ...]
    sigma2: float = 1.0
    n0: float = 1.0
    columns: tuple[str, ...] = field(default=COLUMNS)

    def __post_init__(self) -> None:
        if not self.rho_grid or not self.snr_grid:
            raise ParameterError("rho and snr grids must be nonempty")
        for rho in self.rho_grid:
            if not (math.isfinite(rho) and 0.0 <= rho < 1.0):
                raise ParameterError("rho grid values must lie in [0, 1)")
        for snr in self.snr_grid:
            if not (math.isfinite(snr) and snr > 0.0):
                raise ParameterError("snr grid values must be positive and finite")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0.0):
            raise ParameterError("sigma2 must be positive and finite")
        if not (math.isfinite(self.n0) and self.n0 > 0.0):
            raise ParameterError("n0 must be positive and finite")
        unknown = set(self.columns) - set(COLUMNS)
        if unknown or not self.columns:
            raise ParameterError(f"unknown sweep columns: {sorted(unknown)}")


def sweep_rows(spec: SweepSpec) -> list[dict]:
    """Evaluate the grid; one dict per (rho, snr) with all column values."""
    rows = []
    for rho in spec.rho_grid:
        source = SourceParams(spec.sigma2, rho)
        thr = snr_threshold(source)
        for snr in spec.snr_grid:
            p = snr * spec.n0
            below = below_snr_threshold(source, p, spec.n0)
            bound = minimax_lower_bound(source, p, spec.n0)
            rows.append({
                "rho": rho,
                "snr": snr,
                "threshold_snr": thr,
                "below_threshold": below,
                "lower_bound": bound.lower_bound,
                "rho_star": bound.rho_star,
                "d_uncoded": uncoded_distortion(source, p, spec.n0),
                "dstar_or_blank": dstar_below_threshold(source, p, spec.n0) if below else None,
            })
    return rows


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_csv(spec: SweepSpec, rows: list[dict]) -> str:
    lines = [",".join(spec.columns)]
    for row in rows:
        lines.append(",".join(_cell(row[col]) for col in spec.columns))
    return "\n".join(lines) + "\n"


def write_sweep_csv(spec: SweepSpec, path: str | Path) -> list[dict]:
    """Run the sweep and write it to path; returns the rows for reuse."""
    rows = sweep_rows(spec)
    text = format_csv(spec, rows)
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc
    return rows
