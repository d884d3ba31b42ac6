"""
Residue templates: the classification of odd residues mod 2**y by whether
the stopping time is reached within x steps, and what can be derived from
them (patterns, template lengths, conversion rates, congruence checks).
"""

__all__ = [
    "DEFAULT_BUDGET",
    "CheckResult",
    "Classification",
    "Expectation",
    "RateRow",
    "SuiteReport",
    "Template",
    "build_template",
    "classify_residue",
    "congruence_check",
    "conversion_table",
    "figure_series",
    "pattern_string",
    "pattern_table",
    "template_lengths",
    "theorem_suite",
]

import random
from dataclasses import dataclass
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ._coreutils import (
    BaseEnum,
    BudgetExceededError,
    PreconditionError,
    logger,
    report_finding,
)
from ._dynamics import (
    DEFAULT_CAP,
    Stopped,
    _check_int,
    _check_odd,
    required_twos,
    stopping_time,
    trace,
)
from .utils.numeric import percentage


DEFAULT_BUDGET = 2**21

# Residues are classified in chunks of this many, to bound memory use.
CHUNK_SIZE = 2**20

REACHED_MARK = "+"
UNREACHED_MARK = "−"


class Classification(BaseEnum):
    """Whether a residue class has reached its stopping time at a given step."""

    reached = None
    unreached = None


class Expectation(BaseEnum):
    """What a congruence check expects of the lifted integer."""

    equal = None  #: Same stopping time as n0.
    greater = None  #: Stopping time greater than x.


# %% Templates


@dataclass(frozen=True)
class Template:
    """Classification bitmap of the odd residues mod ``2**modulus_exponent``.

    Bit j (least significant bit first within each byte) stands for residue
    ``2*j + 1``. A set bit means unreached.
    """

    step: int
    modulus_exponent: int
    bitmap: bytes
    unreached_count: int

    @property
    def total_odd(self):
        return 1 << (self.modulus_exponent - 1)

    @property
    def modulus(self):
        return 1 << self.modulus_exponent

    def classify(self, n):
        """Look up the classification of any odd n via its residue."""
        j = (n % self.modulus) >> 1
        bit = (self.bitmap[j >> 3] >> (j & 7)) & 1
        return Classification.unreached if bit else Classification.reached

    def unreached_residues(self):
        """The unreached odd residues, ascending."""
        bits = np.unpackbits(
            np.frombuffer(self.bitmap, np.uint8), bitorder="little"
        )[: self.total_odd]
        return [2 * int(j) + 1 for j in np.flatnonzero(bits)]


def _representative(r, y):
    # The class of 1 contains the trivial cycle; any larger member stands in.
    return r + (1 << y) if r == 1 else r


def classify_residue(r, x, cap=DEFAULT_CAP):
    """Classify the odd residue r mod ``2**required_twos(x)`` at step x."""
    _check_int(x, "x", 1)
    _check_odd(r, "r")
    y = required_twos(x)
    if r >= 1 << y:
        raise ValueError(f"Residue {r} out of range for modulus 2**{y}.")
    outcome = stopping_time(_representative(r, y), cap)
    return Classification.unreached if outcome.exceeds(x) else Classification.reached


def _classify_chunk(x, y, lo, hi, cap):
    """Return a bool array, True for unreached, for residue indices lo..hi-1."""
    steps = min(x, cap)
    if y + steps + 2 < 63:
        # Values stay below 2**(y + steps + 1), so int64 is exact.
        reps = np.arange(lo, hi, dtype=np.int64) * 2 + 1
        if lo == 0:
            reps[0] += 1 << y
        values = reps.copy()
        stopped = np.zeros(reps.shape, bool)
        for _ in range(steps):
            v = 3 * values + 1
            values = v // (v & -v)
            stopped |= values < reps
        return ~stopped
    flags = np.zeros(hi - lo, bool)
    for j in range(lo, hi):
        rep = _representative(2 * j + 1, y)
        flags[j - lo] = stopping_time(rep, steps).exceeds(x)
    return flags


def build_template(x, cap=DEFAULT_CAP, budget=DEFAULT_BUDGET, workers=1):
    """Build the template for step x.

    The odd residues are split into disjoint chunks that are classified
    independently (in worker processes if ``workers > 1``) and merged
    by bitmap union.
    """
    _check_int(x, "x", 1)
    _check_int(workers, "workers", 1)
    y = required_twos(x)
    count = 1 << (y - 1)
    if count > budget:
        raise BudgetExceededError(
            f"Template for step {x} has {count} residues, budget is {budget}."
        )

    bounds = [(lo, min(lo + CHUNK_SIZE, count)) for lo in range(0, count, CHUNK_SIZE)]
    if workers > 1 and len(bounds) == 1:
        size = -(-count // workers)
        bounds = [(lo, min(lo + size, count)) for lo in range(0, count, size)]

    flags = np.zeros(count, bool)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                (lo, pool.submit(_classify_chunk, x, y, lo, hi, cap))
                for lo, hi in bounds
            ]
            for lo, future in futures:
                part = future.result()
                flags[lo : lo + len(part)] |= part
    else:
        for lo, hi in bounds:
            flags[lo:hi] |= _classify_chunk(x, y, lo, hi, cap)

    bitmap = np.packbits(flags, bitorder="little").tobytes()
    template = Template(x, y, bitmap, int(flags.sum()))
    logger.info(
        f"Built template for step {x}: {template.unreached_count} of {count} unreached."
    )
    return template


def template_lengths(max_x):
    """Rows ``(x, y, 2**y)`` for x = 1..max_x."""
    _check_int(max_x, "max_x", 1)
    return [(x, required_twos(x), 1 << required_twos(x)) for x in range(1, max_x + 1)]


# %% Patterns


def pattern_string(x, span, cap=DEFAULT_CAP):
    """Render reached/unreached marks for the first ``span`` relevant odd integers.

    Step 1 covers all odd integers from 1; later steps cover the integers
    ``n = 3 (mod 4)`` from 3, since all others have stopped at step 1.
    """
    _check_int(x, "x", 1)
    _check_int(span, "span", 1)
    modulus = 1 << required_twos(x)
    if x == 1:
        numbers = range(1, 2 * span, 2)
    else:
        numbers = range(3, 4 * span, 4)
    marks = []
    for n in numbers:
        kind = classify_residue(n % modulus, x, cap)
        marks.append(REACHED_MARK if kind == Classification.reached else UNREACHED_MARK)
    return " ".join(marks)


def pattern_table(max_x, span, cap=DEFAULT_CAP):
    """Rows ``(x, pattern)`` for x = 1..max_x."""
    _check_int(max_x, "max_x", 1)
    return [(x, pattern_string(x, span, cap)) for x in range(1, max_x + 1)]


# %% Conversion rates


@dataclass(frozen=True)
class RateRow:
    """Counts for one step of the conversion table. Percentages derive from them."""

    step: int
    unreached: int
    total_odd: int
    remaining: int

    @property
    def density_pct(self):
        return percentage(self.unreached, self.total_odd)

    @property
    def non_conversion_pct(self):
        return percentage(self.unreached, self.remaining)


def conversion_table(
    max_x, cap=DEFAULT_CAP, budget=DEFAULT_BUDGET, workers=1, loader=None
):
    """Rows for steps 1..max_x with exact unreached/remaining counts.

    ``loader`` may be given to supply templates (e.g. from a cache); it is
    called as ``loader(x)`` and must return a Template or None.
    """
    _check_int(max_x, "max_x", 1)
    rows = []
    previous = None
    for x in range(1, max_x + 1):
        template = loader(x) if loader is not None else None
        if template is None:
            template = build_template(x, cap, budget, workers)
        if previous is None:
            remaining = template.total_odd
        else:
            shift = template.modulus_exponent - previous.modulus_exponent
            remaining = previous.unreached_count << shift
        rows.append(RateRow(x, template.unreached_count, template.total_odd, remaining))
        previous = template
    return rows


def figure_series(table):
    """Split a conversion table into the density and the non-conversion series."""
    if not table:
        raise ValueError("figure_series() needs a non-empty table.")
    density = [(row.step, row.density_pct) for row in table]
    non_conversion = [(row.step, row.non_conversion_pct) for row in table]
    return density, non_conversion


# %% Congruence checks


@dataclass(frozen=True)
class CheckResult:
    n0: int
    k: int
    x: int
    y: int
    expected: str
    observed_sigma_n0: object
    observed_sigma_lifted: object
    passed: bool

    @property
    def lifted(self):
        return self.n0 + self.k * (1 << self.y)


def congruence_check(n0, k, x, expected, cap=DEFAULT_CAP):
    """Check that ``n0 + k * 2**y`` behaves like n0 at step x.

    With ``expected == "equal"`` (n0 stops at exactly x) the lifted integer
    must stop at x too; with ``"greater"`` (n0 has not stopped at x) the
    lifted integer must not have stopped at x either. A failure is reported
    as a finding, with the lifted ledger, and returned, not raised.
    """
    _check_odd(n0, "n0")
    _check_int(k, "k", 1)
    _check_int(x, "x", 1)
    Expectation.check(expected, "expectation")
    y = required_twos(x)

    sigma_n0 = stopping_time(n0, cap)
    if expected == Expectation.equal and sigma_n0 != Stopped(x):
        raise PreconditionError(f"stopping time of {n0} is {sigma_n0}, not {x}.")
    if expected == Expectation.greater and not sigma_n0.exceeds(x):
        raise PreconditionError(f"stopping time of {n0} is {sigma_n0}, not > {x}.")

    lifted = n0 + k * (1 << y)
    sigma_lifted = stopping_time(lifted, cap)
    if expected == Expectation.equal:
        passed = sigma_lifted == Stopped(x)
    else:
        passed = sigma_lifted.exceeds(x)

    if not passed:
        ledger = trace(lifted, cap=min(cap, x + 1))
        rows = "; ".join(
            f"{r.index}:{r.value}/m={r.twos}/deficit={r.deficit}" for r in ledger.records
        )
        report_finding(
            "Congruence counterexample",
            f"n0={n0} k={k} x={x} y={y} expected={expected} "
            f"sigma(n0)={sigma_n0} sigma(lifted)={sigma_lifted} ledger: {rows}",
        )
    return CheckResult(n0, k, x, y, expected, sigma_n0, sigma_lifted, passed)


@dataclass(frozen=True)
class SuiteReport:
    expected: str
    samples: int
    passed: int
    failures: tuple

    @property
    def pass_rate(self):
        return self.passed / self.samples if self.samples else 1.0


def theorem_suite(
    expected, samples=500, seed=0, cap=DEFAULT_CAP, n_max=10**6, k_max=50
):
    """Run ``samples`` random congruence checks, reproducibly for a given seed."""
    Expectation.check(expected, "expectation")
    _check_int(samples, "samples", 0)
    rng = random.Random(seed)
    passed = 0
    failures = []
    for _ in range(samples):
        while True:
            n0 = rng.randrange(3, n_max, 2)
            sigma = stopping_time(n0, cap)
            if sigma.steps is None:
                continue
            if expected == Expectation.equal:
                x = sigma.steps
                break
            elif sigma.steps >= 2:
                x = rng.randint(1, sigma.steps - 1)
                break
        k = rng.randint(1, k_max)
        result = congruence_check(n0, k, x, expected, cap)
        if result.passed:
            passed += 1
        else:
            failures.append(result)
    return SuiteReport(expected, samples, passed, tuple(failures))
