"""
The published record list for the search from 27, and a row-by-row diff
of a search report against it.
"""

__all__ = ["PUBLISHED_START", "PublishedRow", "RowDiff", "compare_published", "published_rows"]

from dataclasses import dataclass


PUBLISHED_START = 27

# One entry per iteration: "k e sigma", with the addend k * 2**e as printed.
_PUBLISHED = """
1 57 48, 3 75 51, 1 78 52, 3 81 59, 3 92 92, 3 143 101, 2 158 107, 2 167 112,
2 176 119, 1 186 120, 3 189 125, 1 197 138, 1 216 141, 1 222 148, 2 233 158,
1 249 160, 3 251 163, 1 257 177, 2 279 183, 3 289 195, 3 308 198, 3 311 211,
1 333 226, 2 357 244, 3 384 256, 3 403 258, 3 406 264, 3 417 270, 3 425 272,
3 430 280, 3 441 282, 3 444 284, 3 449 307, 1 485 358, 2 566 374, 3 590 383,
1 606 394, 3 623 438, 1 693 441, 1 696 448, 1 709 455, 1 720 463, 1 731 464,
1 734 467, 1 739 470, 3 742 475, 1 750 483, 3 764 495, 1 783 534, 2 845 551,
3 872 575, 2 910 579, 2 915 591, 2 934 598, 2 945 600, 3 948 601, 1 951 619,
1 980 624, 3 988 649, 1 1026 660, 3 1045 680, 3 1075 681, 2 1078 689,
1 1091 696, 1 1102 710, 1 1124 723, 1 1143 740, 2 1170 743, 1 1175 744,
3 1178 751, 2 1189 762, 3 1205 773, 1 1224 777, 1 1230 782, 3 1238 792,
3 1254 800, 3 1265 803, 2 1270 817, 1 1292 823, 1 1303 828, 3 1311 841,
3 1330 852, 3 1349 870, 3 1376 875, 1 1384 894, 1 1414 931, 1 1473 933,
1 1476 942, 3 1492 952, 3 1506 986, 2 1560 988, 3 1563 991, 3 1568 1013,
1 1604 1022, 3 1617 1023, 1 1620 1036, 1 1641 1041, 3 1647 1055, 3 1671 1075,
2 1701 1139, 3 1804 1148, 3 1818 1155, 1 1828 1163, 1 1842 1178, 1 1866 1180,
3 1869 1204, 1 1907 1211, 3 1918 1218, 1 1929 1222, 3 1934 1229, 2 1945 1242,
2 1967 1249, 2 1977 1281, 1 2029 1285, 1 2034 1286, 3 2037 1295, 1 2051 1302,
1 2061 1307, 1 2070 1313, 1 2080 1326, 3 2099 1331, 1 2107 1345, 1 2129 1368,
3 2167 1383, 1 2191 1392, 3 2205 1403, 1 2221 1407, 1 2229 1410, 3 2232 1436,
3 2275 1449, 2 2294 1459, 1 2311 1474, 3 2335 1492, 3 2362 1497, 1 2370 1507,
3 2387 1530, 3 2422 1546, 3 2449 1569, 3 2484 1594, 3 2525 1622, 3 2568 1625,
1 2574 1630, 3 2582 1735, 2 2747 1738, 1 2752 1745, 2 2763 1764, 3 2793 1785,
1 2828 1788, 1 2831 1814, 1 2874 1816, 3 2877 1842, 3 2918 1858, 3 2942 1865,
2 2953 1876, 3 2972 1890, 3 2994 1904, 2 3015 1919, 1 3040 1969, 2 3118 2003,
2 3172 2012
"""


@dataclass(frozen=True)
class PublishedRow:
    iteration: int
    k: int
    exponent: int
    sigma: int

    @property
    def addend(self):
        return self.k << self.exponent


@dataclass(frozen=True)
class RowDiff:
    """Comparison of one iteration. Missing sides are None."""

    iteration: int
    published_sigma: object
    observed_sigma: object
    published_addend: object
    observed_addend: object

    @property
    def matches(self):
        return (
            self.published_sigma == self.observed_sigma
            and self.published_addend == self.observed_addend
        )


def published_rows():
    """The published rows, iteration 1 first."""
    entries = [e.split() for e in _PUBLISHED.replace("\n", " ").split(",")]
    return [
        PublishedRow(i, int(k), int(e), int(sigma))
        for i, (k, e, sigma) in enumerate(entries, 1)
    ]


def compare_published(report):
    """Diff each iteration of a report against the published rows.

    Addends are compared by value, so ``2 * 2**56`` matches ``2**57``. Only
    iterations present in the report are returned.
    """
    if report.start != PUBLISHED_START:
        raise ValueError(f"Published rows start at {PUBLISHED_START}, not {report.start}.")
    published = {row.iteration: row for row in published_rows()}
    diffs = []
    for row in report.rows:
        ref = published.get(row.iteration)
        diffs.append(
            RowDiff(
                row.iteration,
                ref.sigma if ref else None,
                row.sigma,
                ref.addend if ref else None,
                row.addend,
            )
        )
    return diffs
