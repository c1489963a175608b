"""Figure rendering for SFN link-simulation CSV output."""

from sfnplots.curves import (
    CurveSpec,
    config_hash,
    gap_lines,
    load_rows,
    plot_ber,
    plot_required_ebn0,
    render,
)

__all__ = [
    "CurveSpec",
    "config_hash",
    "gap_lines",
    "load_rows",
    "plot_ber",
    "plot_required_ebn0",
    "render",
]
