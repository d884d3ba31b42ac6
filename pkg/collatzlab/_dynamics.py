"""
Exact big-integer Collatz dynamics: the raw map, the odd map, traces with
their 2s ledger, the stopping-time variants, and the raw-map oracle.

All functions are pure and operate on Python ints, so values of any size
are exact.
"""

__all__ = [
    "DEFAULT_CAP",
    "CapExceeded",
    "FirstDrop",
    "Mode",
    "ReachedOne",
    "SequenceTrace",
    "StepRecord",
    "StopOutcome",
    "Stopped",
    "TrivialCycle",
    "check_agreement",
    "coefficient_stopping_time",
    "collatz_step",
    "odd_step",
    "oracle_first_drop",
    "required_twos",
    "stopping_time",
    "total_stopping_time",
    "trace",
]

import math
from functools import lru_cache
from dataclasses import dataclass

from ._coreutils import BaseEnum, report_finding


DEFAULT_CAP = 10**6


class Mode(BaseEnum):
    """Where a trace ends."""

    stopping = None  #: Halt at the first value below the start.
    total = None  #: Halt when the value reaches 1.


# %% Outcomes


@dataclass(frozen=True)
class StopOutcome:
    """Base class for the result of a stopping-time computation."""

    @property
    def steps(self):
        """The step count, or None when no finite count is known."""
        return None

    def exceeds(self, x):
        """Whether this outcome proves a stopping time strictly greater than x."""
        return self.steps is None or self.steps > x

    def rank(self):
        """Sort key: finite counts by size, an exceeded cap above any of them."""
        return math.inf if self.steps is None else self.steps


@dataclass(frozen=True)
class Stopped(StopOutcome):
    sigma: int

    @property
    def steps(self):
        return self.sigma

    def __str__(self):
        return str(self.sigma)


@dataclass(frozen=True)
class ReachedOne(StopOutcome):
    total_sigma: int

    @property
    def steps(self):
        return self.total_sigma

    def __str__(self):
        return str(self.total_sigma)


@dataclass(frozen=True)
class CapExceeded(StopOutcome):
    cap: int

    def __str__(self):
        return f">{self.cap}"


@dataclass(frozen=True)
class TrivialCycle(StopOutcome):
    def exceeds(self, x):
        return False

    def rank(self):
        return -1

    def __str__(self):
        return "trivial-cycle"


@dataclass(frozen=True)
class FirstDrop:
    """First iterate of the raw map below the start, and the raw step count."""

    value: int
    steps: int


# %% Trace types


@dataclass(frozen=True)
class StepRecord:
    """One row of the 2s ledger."""

    index: int
    value: int
    twos: int
    twos_accum: int
    twos_required: int

    @property
    def deficit(self):
        return self.twos_required - self.twos_accum


@dataclass(frozen=True)
class SequenceTrace:
    """The odd-map sequence of ``start`` with a full ledger per step."""

    start: int
    mode: str
    records: tuple
    outcome: StopOutcome

    def __len__(self):
        return len(self.records)

    @property
    def values(self):
        return [r.value for r in self.records]

    @property
    def last(self):
        return self.records[-1] if self.records else None


# %% Validation


def _check_int(value, name, minimum):
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an int, got {value!r}.")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}.")
    return value


def _check_odd(n, name="n"):
    _check_int(n, name, 1)
    if not n & 1:
        raise ValueError(f"{name} must be odd, got {n}.")
    return n


# %% Maps


def collatz_step(n):
    """One step of the raw Collatz map: 3n+1 for odd n, n/2 for even n."""
    _check_int(n, "n", 1)
    return 3 * n + 1 if n & 1 else n >> 1


def odd_step(n):
    """One step of the odd map. Returns ``(value, twos)`` with
    ``value * 2**twos == 3*n + 1`` and value odd.
    """
    _check_odd(n)
    v = 3 * n + 1
    twos = (v & -v).bit_length() - 1
    return v >> twos, twos


@lru_cache(maxsize=4096)
def required_twos(x):
    """The smallest y with ``2**y > 3**x``, by exact integer arithmetic."""
    _check_int(x, "x", 1)
    # 3**x is never a power of two, so its bit length is exactly that y.
    return (3**x).bit_length()


# %% Traces and stopping times


def trace(n, mode=Mode.stopping, cap=DEFAULT_CAP):
    """Run the odd map from n, recording the 2s ledger for every step."""
    _check_odd(n)
    Mode.check(mode, "mode")
    _check_int(cap, "cap", 1)

    if mode == Mode.total and n == 1:
        return SequenceTrace(n, mode, (), ReachedOne(0))

    records = []
    value, accum, pow3 = n, 0, 1
    outcome = CapExceeded(cap)
    for index in range(1, cap + 1):
        v = 3 * value + 1
        twos = (v & -v).bit_length() - 1
        value = v >> twos
        accum += twos
        pow3 *= 3
        records.append(StepRecord(index, value, twos, accum, pow3.bit_length()))
        if mode == Mode.stopping:
            if value < n:
                outcome = Stopped(index)
                break
            elif value == n == 1:
                outcome = TrivialCycle()
                break
        elif value == 1:
            outcome = ReachedOne(index)
            break

    return SequenceTrace(n, mode, tuple(records), outcome)


def stopping_time(n, cap=DEFAULT_CAP):
    """Number of odd-map steps until the sequence of n first drops below n."""
    _check_odd(n)
    _check_int(cap, "cap", 1)
    if n == 1:
        return TrivialCycle()
    value = n
    for index in range(1, cap + 1):
        v = 3 * value + 1
        value = v >> ((v & -v).bit_length() - 1)
        if value < n:
            return Stopped(index)
    return CapExceeded(cap)


def total_stopping_time(n, cap=DEFAULT_CAP):
    """Number of odd-map steps until the sequence of n reaches 1."""
    _check_odd(n)
    _check_int(cap, "cap", 1)
    value = n
    for index in range(1, cap + 1):
        if value == 1:
            return ReachedOne(index - 1)
        v = 3 * value + 1
        value = v >> ((v & -v).bit_length() - 1)
    return ReachedOne(cap) if value == 1 else CapExceeded(cap)


def coefficient_stopping_time(n, cap=DEFAULT_CAP):
    """First step i at which ``3**i < 2**sum(m_1..m_i)``."""
    _check_odd(n)
    _check_int(cap, "cap", 1)
    if n == 1:
        return TrivialCycle()
    value, accum, pow3 = n, 0, 1
    for index in range(1, cap + 1):
        v = 3 * value + 1
        twos = (v & -v).bit_length() - 1
        value = v >> twos
        accum += twos
        pow3 *= 3
        if pow3.bit_length() <= accum:
            return Stopped(index)
    return CapExceeded(cap)


def oracle_first_drop(n, cap=DEFAULT_CAP):
    """Iterate the raw map until the first iterate below n.

    Independent of the odd map, so it serves as a check on it.
    Returns a ``FirstDrop`` or ``CapExceeded``.
    """
    _check_int(n, "n", 2)
    _check_int(cap, "cap", 1)
    value = n
    for steps in range(1, cap + 1):
        value = 3 * value + 1 if value & 1 else value >> 1
        if value < n:
            return FirstDrop(value, steps)
    return CapExceeded(cap)


def check_agreement(numbers, cap=DEFAULT_CAP):
    """Compare the first-passage and the coefficient stopping times.

    Every odd n in ``numbers`` where they differ is reported as a finding.
    Returns the list of ``(n, true_outcome, coefficient_outcome)`` disagreements.
    """
    disagreements = []
    for n in numbers:
        true = stopping_time(n, cap)
        coefficient = coefficient_stopping_time(n, cap)
        if true != coefficient:
            report_finding(
                "Stopping times disagree",
                f"n={n}: first passage {true}, coefficient {coefficient}",
            )
            disagreements.append((n, true, coefficient))
    return disagreements
