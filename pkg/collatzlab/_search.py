"""
Search for integers with ever-greater stopping times.

Starting from n, find the step s* closest below the stopping time where the
template modulus grows by a factor of 4, try ``n + k * 2**y(s*)`` for
k = 1, 2, 3, keep the candidate with the greatest stopping time, and repeat.
"""

__all__ = [
    "FALLBACK_ATTEMPTS",
    "RULE",
    "Candidate",
    "CandidateSet",
    "Exhausted",
    "RecordSearch",
    "SearchReport",
    "SearchRow",
    "SearchState",
    "SlopeFit",
    "factor4_step",
    "factor4_steps",
    "fit_slope",
    "predict_magnitude",
    "propose_candidates",
    "run_search",
    "run_search_async",
    "search_step",
]

import math
from itertools import count
from dataclasses import dataclass
from inspect import iscoroutinefunction

import numpy as np

from ._coreutils import FormatError, log_exception, logger, report_finding
from ._dynamics import (
    DEFAULT_CAP,
    CapExceeded,
    Stopped,
    _check_int,
    _check_odd,
    required_twos,
    stopping_time,
)
from .utils.asyncs import run_sync_in_worker_thread, sleep
from .utils.numeric import log2_int


RULE = "largest-factor4/1"
FALLBACK_ATTEMPTS = 8
MULTIPLIERS = (1, 2, 3)


# %% Types


@dataclass(frozen=True)
class SearchRow:
    """One accepted iteration: ``n = previous n + k * 2**exponent``.

    ``sigma`` is None when the candidate exceeded the cap. ``attempts`` is
    the number of boundaries tried, so anything above 1 marks a fallback.
    """

    iteration: int
    k: int
    exponent: int
    sigma: object
    n: int
    attempts: int = 1

    @property
    def bit_length(self):
        return self.n.bit_length()

    @property
    def addend(self):
        return self.k << self.exponent

    def addend_label(self):
        """The addend in its simplest form, e.g. ``2^57`` for 2 * 2**56."""
        if self.k == 2:
            return f"2^{self.exponent + 1}"
        elif self.k == 1:
            return f"2^{self.exponent}"
        return f"{self.k}·2^{self.exponent}"


@dataclass(frozen=True)
class SearchState:
    iteration: int
    n: int
    sigma: int
    history: tuple = ()
    boundary_attempts: int = 1

    @property
    def last_exponent(self):
        return self.history[-1][1] if self.history else 0


@dataclass(frozen=True)
class Candidate:
    k: int
    n: int
    outcome: object


@dataclass(frozen=True)
class CandidateSet:
    base_step: int
    exponent: int
    candidates: tuple

    def best(self):
        """Candidate with the greatest stopping time; ties go to the smallest k."""
        return max(self.candidates, key=lambda c: (c.outcome.rank(), -c.k))


@dataclass(frozen=True)
class Exhausted:
    """No boundary produced a greater stopping time."""

    state: SearchState
    attempts: tuple

    def describe(self):
        lines = [f"search exhausted at iteration {self.state.iteration} (sigma {self.state.sigma}):"]
        for attempt in self.attempts:
            sigmas = ", ".join(f"k={c.k}: {c.outcome}" for c in attempt.candidates)
            lines.append(f"  s*={attempt.base_step} y={attempt.exponent}: {sigmas}")
        return "\n".join(lines)


@dataclass(frozen=True)
class SearchReport:
    start: int
    start_sigma: int
    rows: tuple = ()
    exhausted: object = None

    @property
    def fallbacks(self):
        """Iterations that needed a fallback boundary."""
        return tuple(r.iteration for r in self.rows if r.attempts > 1)

    @property
    def final_sigma(self):
        return self.rows[-1].sigma if self.rows else self.start_sigma

    @property
    def open_candidate(self):
        """The last row if its candidate exceeded the cap, else None."""
        if self.rows and self.rows[-1].sigma is None:
            return self.rows[-1]
        return None


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    max_abs_residual: float


# %% Boundaries


def factor4_steps(below=None, above=None):
    """Yield the steps s where ``y(s+1) - y(s) == 2``.

    With ``below`` given, yield s < below in descending order; with
    ``above`` given, yield s >= above in ascending order (without end).
    """
    if below is not None:
        for s in range(below - 1, 0, -1):
            if required_twos(s + 1) - required_twos(s) == 2:
                yield s
    elif above is not None:
        for s in count(max(above, 1)):
            if required_twos(s + 1) - required_twos(s) == 2:
                yield s


def factor4_step(t):
    """Return ``(s*, y(s*))`` for a trace that stopped at sigma >= 2."""
    if not isinstance(t.outcome, Stopped):
        raise ValueError(f"factor4_step() needs a stopped trace, got {t.outcome}.")
    sigma = t.outcome.sigma
    if sigma < 2:
        raise ValueError("factor4_step() needs a stopping time of at least 2.")
    for s in factor4_steps(below=sigma):
        return s, required_twos(s)
    raise ValueError(f"No factor-4 step below {sigma}.")  # no-cover


def _candidates(n, base_step, cap):
    y = required_twos(base_step)
    candidates = []
    for k in MULTIPLIERS:
        m = n + (k << y)
        outcome = stopping_time(m, cap)
        if isinstance(outcome, CapExceeded):
            report_finding(
                "Candidate exceeded the cap",
                f"n + {k}*2^{y} (0x{m:x}) has not stopped after {cap} steps; "
                "potential counterexample candidate",
            )
        candidates.append(Candidate(k, m, outcome))
    logger.info(
        f"s*={base_step} y={y}: "
        + ", ".join(f"k={c.k} sigma={c.outcome}" for c in candidates)
    )
    return CandidateSet(base_step, y, tuple(candidates))


def propose_candidates(state, base_step, cap=DEFAULT_CAP):
    """The three integers ``n + k * 2**y(s*)`` with their stopping times."""
    _check_int(base_step, "base_step", 1)
    if base_step >= state.sigma:
        raise ValueError(f"s* must be below sigma ({base_step} >= {state.sigma}).")
    return _candidates(state.n, base_step, cap)


def _boundaries(state):
    """The primary boundary followed by the fallback sweep, alternating
    below the primary and above the stopping time.
    """
    def usable(s):
        return required_twos(s) > state.last_exponent

    below = (s for s in factor4_steps(below=state.sigma) if usable(s))
    above = (s for s in factor4_steps(above=state.sigma) if usable(s))
    primary = next(below, None)
    if primary is not None:
        yield primary
    attempts = 0
    sources = [below, above]
    while attempts < FALLBACK_ATTEMPTS and sources:
        for source in list(sources):
            s = next(source, None)
            if s is None:
                sources.remove(source)
                continue
            yield s
            attempts += 1
            if attempts >= FALLBACK_ATTEMPTS:
                break


def search_step(state, cap=DEFAULT_CAP):
    """Advance the search by one accepted candidate.

    Returns the new SearchState, or an Exhausted object when no boundary
    gives a greater stopping time.
    """
    attempts = []
    for i, base_step in enumerate(_boundaries(state)):
        candidate_set = _candidates(state.n, base_step, cap)
        attempts.append(candidate_set)
        best = candidate_set.best()
        if best.outcome.rank() > state.sigma:
            if i > 0:
                logger.warning(
                    f"Iteration {state.iteration + 1} needed fallback boundary s*={base_step}."
                )
            new_state = SearchState(
                state.iteration + 1,
                best.n,
                best.outcome.steps,
                (*state.history, (best.k, candidate_set.exponent)),
                i + 1,
            )
            return new_state
    return Exhausted(state, tuple(attempts))


# %% The search loop


class RecordSearch:
    """Iterated search for greater stopping times, one accepted row at a time.

    Arguments:
        start (int): odd start value with stopping time >= 2.
        cap (int): step cap for every stopping-time computation.
        sink (callable | None): called with each accepted ``SearchRow``.
            Errors from the sink (e.g. I/O) abort the search.
    """

    def __init__(self, start, cap=DEFAULT_CAP, sink=None):
        _check_odd(start, "start")
        _check_int(cap, "cap", 1)
        sigma = stopping_time(start, cap)
        if not isinstance(sigma, Stopped) or sigma.sigma < 2:
            raise ValueError(f"start must have a stopping time >= 2, got {sigma}.")
        self._start = start
        self._start_sigma = sigma.sigma
        self._cap = cap
        self._sink = sink
        self._handlers = []
        self._state = SearchState(0, start, sigma.sigma)
        self._rows = []
        self._exhausted = None

    @classmethod
    def resume(cls, start, rows, cap=DEFAULT_CAP, sink=None):
        """Continue a search from previously accepted rows (e.g. a checkpoint)."""
        search = cls(start, cap, sink)
        if rows:
            last = rows[-1]
            if last.sigma is None:
                raise FormatError("Cannot resume after a candidate that exceeded the cap.")
            sigma = stopping_time(last.n, cap)
            if sigma != Stopped(last.sigma):
                raise FormatError(
                    f"Checkpoint row {last.iteration} claims sigma {last.sigma}, "
                    f"but its n has {sigma}."
                )
            search._rows = list(rows)
            search._state = SearchState(
                last.iteration,
                last.n,
                last.sigma,
                tuple((r.k, r.exponent) for r in rows),
            )
        return search

    @property
    def sink(self):
        """Callable that receives each accepted row before it is committed.

        Errors from the sink (e.g. I/O) abort the search.
        """
        return self._sink

    @sink.setter
    def sink(self, sink):
        if sink is not None and not callable(sink):
            raise TypeError("The sink must be callable or None.")
        self._sink = sink

    @property
    def state(self):
        return self._state

    @property
    def finished(self):
        return self._exhausted is not None or (
            bool(self._rows) and self._rows[-1].sigma is None
        )

    def add_handler(self, callback):
        """Register a callback that receives each accepted row.

        Unlike the sink, errors in handlers are logged and do not stop the search.
        """
        if not callable(callback) or iscoroutinefunction(callback):
            raise TypeError("add_handler() expects a normal callable.")
        self._handlers.append(callback)

    def step(self):
        """Perform one iteration. Returns the accepted row, or None when finished."""
        if self.finished:
            return None
        new_state = search_step(self._state, self._cap)
        if isinstance(new_state, Exhausted):
            self._exhausted = new_state
            report_finding("Search exhausted", new_state.describe())
            return None
        k, exponent = new_state.history[-1]
        row = SearchRow(
            new_state.iteration,
            k,
            exponent,
            new_state.sigma,
            new_state.n,
            new_state.boundary_attempts,
        )
        if self._sink is not None:
            self._sink(row)
        self._state = new_state
        self._rows.append(row)
        for callback in self._handlers:
            with log_exception(f"Error in search handler {callback!r}:"):
                callback(row)
        return row

    def run(self, iterations):
        """Perform up to ``iterations`` more iterations and return the report."""
        _check_int(iterations, "iterations", 0)
        for _ in range(iterations):
            if self.step() is None:
                break
        return self.report()

    async def run_async(self, iterations):
        """Like ``run()``, but each iteration runs in a worker thread.

        Works under asyncio and trio, so the host event loop stays responsive.
        """
        _check_int(iterations, "iterations", 0)
        for _ in range(iterations):
            row = await run_sync_in_worker_thread(self.step)
            if row is None:
                break
            await sleep(0)
        return self.report()

    def report(self):
        return SearchReport(
            self._start,
            self._start_sigma,
            tuple(self._rows),
            self._exhausted,
        )


def run_search(start, iterations, cap=DEFAULT_CAP, sink=None):
    """Run the search from start for the given number of iterations."""
    return RecordSearch(start, cap, sink).run(iterations)


async def run_search_async(start, iterations, cap=DEFAULT_CAP, sink=None):
    """Async variant of ``run_search()`` for asyncio or trio."""
    return await RecordSearch(start, cap, sink).run_async(iterations)


# %% Analysis


def fit_slope(report):
    """Least-squares line of sigma against log2(n) over the report rows."""
    rows = [r for r in report.rows if r.sigma is not None]
    if len(rows) < 2:
        raise ValueError("fit_slope() needs at least 2 rows.")
    x = np.array([log2_int(r.n) for r in rows])
    y = np.array([r.sigma for r in rows], float)
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    return SlopeFit(float(slope), float(intercept), float(np.abs(residuals).max()))


def predict_magnitude(target_sigma):
    """Approximate bit length of an n with the given stopping time."""
    _check_int(target_sigma, "target_sigma", 1)
    return round(target_sigma * math.log(3) / math.log(2))

