"""Render throughput figures from crmid experiment CSV files.

The input contract is the crmid CLI's CSV schema: one row per (network, K)
with at least the columns ``network, K, quantity, mean`` and optionally
``std_error``.  Two figures are supported:

* fig1 — normalized ergodic throughput versus the number of users K
  (quantity ``normalized_throughput``), with 3-sigma error bars.
* fig2 — ergodic throughput versus the asymptotic scale log2(ln K)
  (quantity ``throughput``), for the large-K sweep.

Both figures require all four network series; anything else is rejected
with a diagnostic naming what is missing.  Rendering is a pure function of
the CSV contents, so identical inputs plot identical data.
"""

from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = ["Figure", "FigureDataError", "FigureJob", "load_series", "render"]

REQUIRED_NETWORKS = ("C-MAC", "C-BC", "C-PAC", "Reference")
_REQUIRED_COLUMNS = ("network", "K", "quantity", "mean")

# Fixed styling per network so every run is comparable at a glance.
_STYLES = {
    "C-MAC": ("tab:blue", "o"),
    "C-BC": ("tab:orange", "s"),
    "C-PAC": ("tab:green", "^"),
    "Reference": ("tab:red", "d"),
}


class Figure(enum.Enum):
    FIG1 = "fig1"
    FIG2 = "fig2"


_FIGURE_QUANTITY = {
    Figure.FIG1: "normalized_throughput",
    Figure.FIG2: "throughput",
}


class FigureDataError(ValueError):
    """The input CSV does not match the requested figure's schema."""


@dataclass(frozen=True)
class FigureJob:
    """One rendering task: which CSV, which figure, where to write the image."""

    input_csv: str
    figure: Figure
    output_image: str


@dataclass(frozen=True)
class Series:
    """One network's curve, sorted by ascending K."""

    network: str
    K: tuple[int, ...]
    mean: tuple[float, ...]
    std_error: tuple[float, ...] | None


def load_series(input_csv: str, figure: Figure) -> dict[str, Series]:
    """Parse and validate a crmid CSV into per-network series.

    Args:
        input_csv: path to the CSV file.
        figure: which figure the data must serve; its quantity column is
            enforced.

    Returns:
        Mapping network label -> Series, one entry per required network.

    Raises:
        FigureDataError: on missing columns, a quantity mismatch, rows that
            fail to parse, or absent network series.
    """
    try:
        with open(input_csv, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            fieldnames = reader.fieldnames or []
            missing = [c for c in _REQUIRED_COLUMNS if c not in fieldnames]
            if missing:
                raise FigureDataError(f"{input_csv}: missing required columns {missing}")
            rows = list(reader)
    except OSError as exc:
        raise FigureDataError(f"cannot read {input_csv!r}: {exc}") from None
    if not rows:
        raise FigureDataError(f"{input_csv}: no data rows")

    expected_quantity = _FIGURE_QUANTITY[figure]
    found = {row["quantity"] for row in rows}
    if found != {expected_quantity}:
        raise FigureDataError(
            f"{input_csv}: {figure.value} needs quantity={expected_quantity!r}, "
            f"found {sorted(found)}"
        )

    has_se = "std_error" in fieldnames
    if not has_se:
        warnings.warn(
            f"{input_csv}: no std_error column; rendering without error bars",
            stacklevel=2,
        )

    grouped: dict[str, list[tuple[int, float, float]]] = {}
    for row in rows:
        try:
            K = int(row["K"])
            mean = float(row["mean"])
            se = float(row["std_error"]) if has_se else 0.0
        except (TypeError, ValueError):
            raise FigureDataError(f"{input_csv}: unparseable row {row!r}") from None
        grouped.setdefault(row["network"], []).append((K, mean, se))

    absent = [name for name in REQUIRED_NETWORKS if name not in grouped]
    if absent:
        raise FigureDataError(f"{input_csv}: missing network series {absent}")

    series: dict[str, Series] = {}
    for name in REQUIRED_NETWORKS:
        points = sorted(grouped[name])
        series[name] = Series(
            network=name,
            K=tuple(p[0] for p in points),
            mean=tuple(p[1] for p in points),
            std_error=tuple(p[2] for p in points) if has_se else None,
        )
    return series


def draw(series: dict[str, Series], figure: Figure):
    """Build the matplotlib Figure for validated series (no file output)."""
    fig, ax = plt.subplots(figsize=(7.5, 5.0))
    for name in REQUIRED_NETWORKS:
        data = series[name]
        color, marker = _STYLES[name]
        if figure is Figure.FIG1:
            x = data.K
        else:
            x = [math.log2(math.log(k)) for k in data.K]
        yerr = [3.0 * se for se in data.std_error] if data.std_error is not None else None
        ax.errorbar(
            x,
            data.mean,
            yerr=yerr,
            color=color,
            marker=marker,
            capsize=3.0,
            label=name,
        )
    if figure is Figure.FIG1:
        ax.set_xlabel("Number of users K")
        ax.set_ylabel("Normalized ergodic throughput")
        ax.set_title("Normalized ergodic throughput vs. number of users")
    else:
        ax.set_xlabel("log2(ln K)")
        ax.set_ylabel("Ergodic throughput (bits/channel use)")
        ax.set_title("Asymptotic ergodic throughput growth")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig


def render(job: FigureJob) -> str:
    """Render one figure job to an image file.

    Args:
        job: input CSV, figure choice, and output path.

    Returns:
        The output image path.

    Raises:
        FigureDataError: if the CSV does not fit the figure.
        OSError: if the image cannot be written.
    """
    series = load_series(job.input_csv, job.figure)
    fig = draw(series, job.figure)
    try:
        fig.savefig(job.output_image, dpi=150)
    finally:
        plt.close(fig)
    return job.output_image
