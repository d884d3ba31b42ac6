"""
Tables and figure series as deterministic CSV or JSON text.

CSV uses a comma delimiter, a header line and LF line endings. JSON is a
single document with sorted keys. Identical inputs give identical bytes.
"""

__all__ = [
    "Series",
    "Table",
    "figure_table",
    "histogram_table",
    "lengths_table",
    "rates_table",
    "search_table",
]

import json
from dataclasses import dataclass
from decimal import Decimal

from ._coreutils import BaseEnum
from ._templates import figure_series
from .utils.numeric import log2_int


class Series(BaseEnum):
    """The named figure series."""

    density = "density"  #: Percentage of unreached odd residues per step.
    non_conversion = "non-conversion"  #: Percentage of remaining classes not converted.
    sigma_by_iteration = "sigma-by-iteration"  #: Stopping time per search iteration.
    sigma_by_log2 = "sigma-by-log2"  #: Stopping time against log2 of n.


def _cell(value):
    if value is None:
        return ""
    elif isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _json_value(value):
    if isinstance(value, Decimal):
        return float(value)
    elif isinstance(value, int) and not isinstance(value, bool) and value.bit_length() > 53:
        return str(value)
    return value


@dataclass(frozen=True)
class Table:
    """Column names plus rows of plain values."""

    header: tuple
    rows: tuple

    def to_csv(self):
        lines = [",".join(self.header)]
        lines.extend(",".join(_cell(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def to_json(self):
        records = [
            {key: _json_value(v) for key, v in zip(self.header, row)}
            for row in self.rows
        ]
        return json.dumps(records, sort_keys=True, indent=1) + "\n"

    def to_pretty(self):
        cells = [list(self.header)] + [[_cell(v) for v in row] for row in self.rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(self.header))]
        lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
        return "\n".join(line.rstrip() for line in lines) + "\n"

    def render(self, output_format):
        if output_format == "csv":
            return self.to_csv()
        elif output_format == "json":
            return self.to_json()
        return self.to_pretty()


def figure_table(which, source):
    """The named series as a Table.

    ``source`` is a conversion table for the density and non-conversion
    series, and a SearchReport for the other two. An empty source gives a
    table without rows.
    """
    Series.check(which, "series")
    if which in (Series.density, Series.non_conversion):
        header = ("step", "density_pct" if which == Series.density else "non_conversion_pct")
        if not source:
            return Table(header, ())
        density, non_conversion = figure_series(source)
        points = density if which == Series.density else non_conversion
        return Table(header, tuple(points))
    rows = [r for r in source.rows if r.sigma is not None]
    if which == Series.sigma_by_iteration:
        return Table(("iteration", "sigma"), tuple((r.iteration, r.sigma) for r in rows))
    return Table(("log2_n", "sigma"), tuple((log2_int(r.n), r.sigma) for r in rows))


def histogram_table(rows):
    """Rows from ``histogram_report()`` as a Table."""
    return Table(
        ("m", "count", "observed_pct", "theoretical_pct"),
        tuple((r.m, r.count, r.observed_pct, r.theoretical_pct) for r in rows),
    )


def rates_table(table):
    """A conversion table with its counts and both percentages."""
    return Table(
        ("step", "unreached", "total_odd", "density_pct", "remaining", "non_conversion_pct"),
        tuple(
            (r.step, r.unreached, r.total_odd, r.density_pct, r.remaining, r.non_conversion_pct)
            for r in table
        ),
    )


def lengths_table(rows):
    return Table(("step", "exponent", "modulus"), tuple(rows))


def search_table(report):
    """Search rows with the addend in its simplest form."""
    return Table(
        ("iteration", "addend", "sigma", "bits"),
        tuple(
            (r.iteration, r.addend_label(), r.sigma, r.bit_length) for r in report.rows
        ),
    )
