"""
Statistics of the powers of 2 divided out along odd-map sequences.
"""

__all__ = [
    "GeometricReference",
    "HistogramRow",
    "PowHistogram",
    "geometric_reference",
    "histogram_report",
    "pooled_histogram",
    "pow2_histogram",
]

from collections import Counter
from decimal import ROUND_HALF_UP
from dataclasses import dataclass

from ._coreutils import CapExceededError
from ._dynamics import (
    DEFAULT_CAP,
    CapExceeded,
    Mode,
    TrivialCycle,
    _check_int,
    trace,
)
from .utils.numeric import percentage, round_pct


@dataclass(frozen=True)
class PowHistogram:
    """How often each power ``2**m`` occurs along a sequence.

    ``n`` is None for histograms pooled over many starting values.
    """

    n: object
    mode: str
    counts: dict
    total_steps: int

    @property
    def max_m(self):
        return max(self.counts) if self.counts else 0

    def count(self, m):
        return self.counts.get(m, 0)


@dataclass(frozen=True)
class GeometricReference:
    """Expected percentage of each m if the divisions behaved like random even numbers."""

    percentages: tuple

    @property
    def max_m(self):
        return len(self.percentages)


@dataclass(frozen=True)
class HistogramRow:
    m: int
    count: int
    observed_pct: object
    theoretical_pct: object


def pow2_histogram(n, mode=Mode.stopping, cap=DEFAULT_CAP):
    """Count the m of every step in the trace of n. All observed m are kept."""
    t = trace(n, mode, cap)
    if isinstance(t.outcome, CapExceeded):
        raise CapExceededError(f"Trace of {n} did not complete within {cap} steps.")
    if isinstance(t.outcome, TrivialCycle):
        raise ValueError("1 has no stopping time; use the total mode.")
    counts = Counter(r.twos for r in t.records)
    return PowHistogram(n, mode, dict(sorted(counts.items())), len(t.records))


def pooled_histogram(limit, mode=Mode.stopping, cap=DEFAULT_CAP):
    """Pool the m counts over the sequences of all odd n with 3 <= n < limit."""
    _check_int(limit, "limit", 3)
    Mode.check(mode, "mode")
    _check_int(cap, "cap", 1)
    counts = Counter()
    total = 0
    for n in range(3, limit, 2):
        value = n
        for _ in range(cap):
            v = 3 * value + 1
            twos = (v & -v).bit_length() - 1
            value = v >> twos
            counts[twos] += 1
            total += 1
            if mode == Mode.total:
                if value == 1:
                    break
            elif value < n:
                break
        else:
            raise CapExceededError(f"Trace of {n} did not complete within {cap} steps.")
    return PowHistogram(None, mode, dict(sorted(counts.items())), total)


def geometric_reference(max_m):
    """Percentages ``100 / 2**m`` for m = 1..max_m."""
    _check_int(max_m, "max_m", 1)
    return GeometricReference(tuple(100 / 2**m for m in range(1, max_m + 1)))


def histogram_report(h, ref):
    """Rows comparing observed and theoretical percentages for each m.

    Rows cover every observed m and every m of the reference. The
    theoretical column rounds the reference half-up (6.25 shows as 6.3),
    and is None for m beyond the reference.
    """
    if h.total_steps == 0:
        return []
    rows = []
    for m in range(1, max(h.max_m, ref.max_m) + 1):
        count = h.count(m)
        theoretical = None
        if m <= ref.max_m:
            theoretical = round_pct(ref.percentages[m - 1], ROUND_HALF_UP)
        rows.append(
            HistogramRow(m, count, percentage(count, h.total_steps), theoretical)
        )
    return rows
