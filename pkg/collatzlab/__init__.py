"""
collatzlab: exact Collatz stopping times, residue templates and record search.
"""

# ruff: noqa: F401

from ._version import __version__, version_info
from . import _coreutils
from ._coreutils import (
    BudgetExceededError,
    CapExceededError,
    FormatError,
    PreconditionError,
)
from ._dynamics import (
    CapExceeded,
    Mode,
    ReachedOne,
    SequenceTrace,
    StepRecord,
    Stopped,
    TrivialCycle,
    check_agreement,
    coefficient_stopping_time,
    collatz_step,
    odd_step,
    oracle_first_drop,
    required_twos,
    stopping_time,
    total_stopping_time,
    trace,
)
from ._templates import (
    Classification,
    Expectation,
    Template,
    build_template,
    classify_residue,
    congruence_check,
    conversion_table,
    figure_series,
    pattern_string,
    pattern_table,
    template_lengths,
    theorem_suite,
)
from ._divisors import (
    geometric_reference,
    histogram_report,
    pooled_histogram,
    pow2_histogram,
)
from ._search import (
    RecordSearch,
    factor4_step,
    fit_slope,
    predict_magnitude,
    propose_candidates,
    run_search,
    run_search_async,
    search_step,
)
from ._checkpoint import CheckpointWriter, read_checkpoint, write_checkpoint
from ._cache import TemplateCache, read_template_cache, write_template_cache
from ._config import Config, OutputFormat
from ._series import Series, figure_table
from ._published import compare_published

__all__ = [
    "BudgetExceededError",
    "CapExceeded",
    "CapExceededError",
    "CheckpointWriter",
    "Classification",
    "Config",
    "Expectation",
    "FormatError",
    "Mode",
    "OutputFormat",
    "PreconditionError",
    "ReachedOne",
    "RecordSearch",
    "SequenceTrace",
    "Series",
    "StepRecord",
    "Stopped",
    "Template",
    "TemplateCache",
    "TrivialCycle",
    "build_template",
    "check_agreement",
    "classify_residue",
    "coefficient_stopping_time",
    "collatz_step",
    "compare_published",
    "congruence_check",
    "conversion_table",
    "factor4_step",
    "figure_series",
    "figure_table",
    "fit_slope",
    "geometric_reference",
    "histogram_report",
    "odd_step",
    "oracle_first_drop",
    "pattern_string",
    "pattern_table",
    "pooled_histogram",
    "pow2_histogram",
    "predict_magnitude",
    "propose_candidates",
    "read_checkpoint",
    "read_template_cache",
    "required_twos",
    "run_search",
    "run_search_async",
    "search_step",
    "stopping_time",
    "template_lengths",
    "theorem_suite",
    "total_stopping_time",
    "trace",
    "write_checkpoint",
    "write_template_cache",
]
