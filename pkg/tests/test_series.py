"""
Test the figure series and the CSV/JSON rendering of tables.
"""

import json

from collatzlab import (
    Mode,
    Series,
    conversion_table,
    figure_table,
    geometric_reference,
    histogram_report,
    pow2_histogram,
    run_search,
)
from collatzlab._search import SearchReport
from collatzlab._series import Table, histogram_table, rates_table, search_table
from testutils import run_tests
import pytest


def test_series_names():
    assert list(Series) == [
        "density",
        "non-conversion",
        "sigma-by-iteration",
        "sigma-by-log2",
    ]
    with pytest.raises(ValueError):
        figure_table("figure-5", [])


def test_density_series():
    table = conversion_table(10)
    csv = figure_table(Series.density, table).to_csv()
    lines = csv.split("\n")
    assert lines[0] == "step,density_pct"
    assert lines[1] == "1,50.0"
    assert lines[10] == "10,6.5"
    assert lines[11] == ""
    assert len(lines) == 12

    csv = figure_table(Series.non_conversion, table).to_csv()
    lines = csv.splitlines()
    assert lines[0] == "step,non_conversion_pct"
    assert lines[2] == "2,75.0"


def test_search_series():
    report = run_search(27, 5)
    csv = figure_table(Series.sigma_by_iteration, report).to_csv()
    assert csv == "iteration,sigma\n1,48\n2,51\n3,52\n4,59\n5,92\n"

    lines = figure_table(Series.sigma_by_log2, report).to_csv().splitlines()
    assert lines[0] == "log2_n,sigma"
    assert lines[1] == "57.000000,48"
    assert len(lines) == 6


def test_empty_series():
    assert figure_table(Series.density, []).to_csv() == "step,density_pct\n"
    empty = SearchReport(27, 37)
    assert figure_table(Series.sigma_by_log2, empty).to_csv() == "log2_n,sigma\n"


def test_histogram_csv():
    rows = histogram_report(pow2_histogram(27), geometric_reference(6))
    lines = histogram_table(rows).to_csv().splitlines()
    assert lines[0] == "m,count,observed_pct,theoretical_pct"
    assert lines[1] == "1,22,59.5,50.0"
    assert lines[2] == "2,10,27.0,25.0"
    assert len(lines) == 7

    # Columns beyond the reference stay empty
    rows = histogram_report(pow2_histogram(27 + 2**51, Mode.total), geometric_reference(7))
    assert histogram_table(rows).to_csv().splitlines()[-1].endswith(",")


def test_rates_csv():
    lines = rates_table(conversion_table(3)).to_csv().splitlines()
    assert lines[0] == "step,unreached,total_odd,density_pct,remaining,non_conversion_pct"
    assert lines[1] == "1,1,2,50.0,2,50.0"
    assert lines[2] == "2,3,8,37.5,4,75.0"


def test_outputs_are_deterministic():
    table = rates_table(conversion_table(5))
    assert table.to_csv() == rates_table(conversion_table(5)).to_csv()
    assert table.to_json() == rates_table(conversion_table(5)).to_json()


def test_json():
    report = run_search(27, 2)
    table = Table(("n", "sigma"), tuple((r.n, r.sigma) for r in report.rows))
    text = table.to_json()
    data = json.loads(text)
    assert data[0] == {"n": str(27 + 2**57), "sigma": 48}
    assert text.index('"n"') < text.index('"sigma"')

    data = json.loads(rates_table(conversion_table(2)).to_json())
    assert data[1]["non_conversion_pct"] == 75.0


def test_pretty():
    text = search_table(run_search(27, 2)).to_pretty()
    lines = text.splitlines()
    assert lines[0].split() == ["iteration", "addend", "sigma", "bits"]
    assert lines[1].split() == ["1", "2^57", "48", "58"]
    assert len({len(line) for line in lines}) == 1

    table = Table(("a",), ((1,),))
    assert table.render("csv") == "a\n1\n"
    assert table.render("pretty") == "a\n1\n"


if __name__ == "__main__":
    run_tests(globals())
