"""Curve rendering from link-simulation CSV files.

Two kinds of figure are supported:

* ``required-ebn0`` — required Eb/N0 versus power imbalance (one panel
  per spectral efficiency, one line per scheme, imbalance decreasing
  left to right), with the scheme gaps at -12 dB printed and annotated.
* ``ber`` — BER waterfalls versus Eb/N0 on a log scale, one line per
  (scheme, imbalance) pair.

Values are read from the CSVs and plotted as-is; nothing is recomputed.
The rendered figure carries a short hash of the configuration columns so
an image can be traced back to the run that produced it.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

# CSV contracts of the simulator's two writers.
REQUIRED_COLUMNS = [
    "scheme",
    "eta",
    "beta_db",
    "required_ebn0_db",
    "target_ber",
    "censored",
    "iters",
    "seed",
    "nc",
    "channel",
    "alpha_prop",
    "d1_m",
    "low_confidence",
]

SWEEP_COLUMNS = [
    "scheme",
    "eta",
    "beta_db",
    "ebn0_db",
    "ber",
    "fer",
    "bits",
    "errors",
    "iters",
    "seed",
    "nc",
    "channel",
    "alpha_prop",
    "d1_m",
    "ber_ci95",
    "low_confidence",
]

_SCHEMA = {"required-ebn0": REQUIRED_COLUMNS, "ber": SWEEP_COLUMNS}

CONFIG_COLUMNS = ["eta", "iters", "seed", "nc", "channel", "alpha_prop", "d1_m"]

GAP_BETA_DB = -12.0


@dataclass(frozen=True)
class CurveSpec:
    """One figure request: input CSVs, figure kind and output path."""

    csv_paths: tuple[str, ...]
    kind: str = "required-ebn0"
    out_path: str = "figure.png"
    include_censored: bool = False

    def __post_init__(self):
        if self.kind not in _SCHEMA:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.csv_paths:
            raise ValueError("at least one CSV path is required")


def load_rows(paths: tuple[str, ...], kind: str) -> list[dict]:
    """Read and validate CSV rows against the schema for `kind`.

    Raises ValueError naming the offending column on schema mismatch and
    on files without data rows.
    """
    columns = _SCHEMA[kind]
    rows: list[dict] = []
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise ValueError(f"{path}: empty file")
            for col in columns:
                if col not in header:
                    raise ValueError(f"{path}: missing column {col!r}")
            for col in header:
                if col not in columns:
                    raise ValueError(f"{path}: unexpected column {col!r}")
            index = {col: header.index(col) for col in columns}
            file_rows = [{col: raw[index[col]] for col in columns} for raw in reader]
        if not file_rows:
            raise ValueError(f"{path}: no data rows")
        rows.extend(file_rows)
    return rows


def _flagged(row: dict) -> bool:
    if row["low_confidence"] not in ("0", "1"):
        raise ValueError(f"unparseable low_confidence value {row['low_confidence']!r}")
    censored = row.get("censored", "0") == "1"
    return censored or row["low_confidence"] == "1"


def filter_rows(rows: list[dict], include_censored: bool) -> list[dict]:
    """Drop censored/low-confidence rows, or admit them when asked.

    Refuses to plot silently-unreliable data: if flagged rows are
    present and not admitted, that is an error, not a warning.
    """
    flagged = [r for r in rows if _flagged(r)]
    if flagged and not include_censored:
        raise ValueError(
            f"{len(flagged)} censored/low-confidence rows present; "
            "pass --include-censored to plot them anyway"
        )
    return [r for r in rows if _finite(r)]


def _finite(row: dict) -> bool:
    value = row.get("required_ebn0_db", row.get("ber", "0"))
    try:
        return float(value) == float(value) and abs(float(value)) != float("inf")
    except ValueError:
        raise ValueError(f"unparseable numeric value {value!r}")


def config_hash(rows: list[dict]) -> str:
    """Short digest of the configuration columns across all rows."""
    tuples = sorted({tuple(r[c] for c in CONFIG_COLUMNS) for r in rows})
    digest = hashlib.sha256(repr(tuples).encode()).hexdigest()
    return digest[:12]


def _series(rows: list[dict], x_col: str, y_col: str) -> tuple[list[float], list[float]]:
    pairs = sorted((float(r[x_col]), float(r[y_col])) for r in rows)
    return [p[0] for p in pairs], [p[1] for p in pairs]


def gap_lines(rows: list[dict], beta_db: float = GAP_BETA_DB) -> list[str]:
    """Scheme-vs-best gaps at one imbalance, one line per (eta, scheme).

    The printed numbers are plain differences of the CSV values, so they
    can be checked against the file contents exactly.
    """
    lines = []
    for eta in sorted({r["eta"] for r in rows}, key=float):
        at_beta = {
            r["scheme"]: float(r["required_ebn0_db"])
            for r in rows
            if r["eta"] == eta and float(r["beta_db"]) == beta_db
        }
        if len(at_beta) < 2:
            continue
        best = min(at_beta, key=at_beta.get)
        for scheme, value in sorted(at_beta.items()):
            if scheme == best:
                continue
            gap = value - at_beta[best]
            lines.append(
                f"gap at beta={beta_db:g} dB (eta={eta}): "
                f"{scheme} - {best} = {gap!r} dB"
            )
    return lines


def plot_required_ebn0(spec: CurveSpec) -> list[str]:
    """Render required-Eb/N0-vs-imbalance curves; returns the gap lines."""
    rows = filter_rows(load_rows(spec.csv_paths, "required-ebn0"), spec.include_censored)
    if not rows:
        raise ValueError("no plottable rows after filtering")
    etas = sorted({r["eta"] for r in rows}, key=float)
    fig, axes = plt.subplots(
        1, len(etas), figsize=(5.5 * len(etas), 4.2), squeeze=False, sharey=False
    )
    for ax, eta in zip(axes[0], etas):
        panel = [r for r in rows if r["eta"] == eta]
        for scheme in sorted({r["scheme"] for r in panel}):
            x, y = _series(
                [r for r in panel if r["scheme"] == scheme], "beta_db", "required_ebn0_db"
            )
            ax.plot(x, y, marker="o", label=scheme)
        ax.invert_xaxis()  # balanced (0 dB) on the left, deep imbalance right
        ax.set_xlabel("power imbalance beta (dB)")
        ax.set_ylabel("required Eb/N0 (dB)")
        target = sorted({r["target_ber"] for r in panel})
        ax.set_title(f"eta = {eta} b/s/Hz, target BER {', '.join(target)}")
        ax.grid(True, alpha=0.4)
        ax.legend()
        betas = {float(r["beta_db"]) for r in panel}
        if GAP_BETA_DB in betas:
            ax.axvline(GAP_BETA_DB, color="gray", linestyle=":", linewidth=1)
    lines = gap_lines(rows)
    caption = f"config {config_hash(rows)}"
    if lines:
        caption += "  |  " + "; ".join(lines)
    fig.text(0.01, 0.01, caption, fontsize=6, va="bottom")
    fig.tight_layout(rect=(0, 0.04, 1, 1))
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return lines


def plot_ber(spec: CurveSpec) -> list[str]:
    """Render BER waterfalls (log BER versus Eb/N0); returns no lines."""
    rows = filter_rows(load_rows(spec.csv_paths, "ber"), spec.include_censored)
    rows = [r for r in rows if float(r["ber"]) > 0]
    if not rows:
        raise ValueError("no plottable rows after filtering")
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    keys = sorted({(r["scheme"], r["eta"], r["beta_db"]) for r in rows})
    for scheme, eta, beta in keys:
        x, y = _series(
            [
                r
                for r in rows
                if (r["scheme"], r["eta"], r["beta_db"]) == (scheme, eta, beta)
            ],
            "ebn0_db",
            "ber",
        )
        ax.semilogy(x, y, marker="o", label=f"{scheme}, eta={eta}, beta={beta} dB")
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.4)
    ax.legend(fontsize=8)
    fig.text(0.01, 0.01, f"config {config_hash(rows)}", fontsize=6, va="bottom")
    fig.tight_layout(rect=(0, 0.04, 1, 1))
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return []


def render(spec: CurveSpec) -> list[str]:
    """Dispatch on figure kind; returns printable annotation lines."""
    if spec.kind == "required-ebn0":
        return plot_required_ebn0(spec)
    return plot_ber(spec)
