"""
Command-line workbench: ``collatzlab <command> ...`` or ``python -m collatzlab``.

Exit codes: 0 success, 1 usage or domain error, 2 step cap exceeded,
3 I/O error or corrupt file.
"""

import re
import sys
import logging
import argparse
from pathlib import Path
from contextlib import contextmanager

from ._coreutils import CapExceededError, FormatError, logger
from ._config import Config, OutputFormat
from ._dynamics import (
    CapExceeded,
    Mode,
    coefficient_stopping_time,
    stopping_time,
    total_stopping_time,
    trace,
)
from ._templates import (
    Expectation,
    conversion_table,
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
from ._search import RecordSearch, fit_slope, predict_magnitude
from ._checkpoint import CheckpointWriter, read_checkpoint
from ._cache import TemplateCache, read_template_cache, write_template_cache
from ._series import (
    Series,
    Table,
    figure_table,
    histogram_table,
    lengths_table,
    rates_table,
    search_table,
)
from ._published import compare_published
from ._version import __version__


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAP = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


_re_term = re.compile(r"^(?:(\d+)\*)?(\d+)\^(\d+)$|^(0x[0-9a-fA-F]+|\d+)$")


def parse_int(text):
    """Parse an integer like ``27``, ``0x1b``, ``2^57`` or ``27+3*2^75``."""
    total = 0
    for term in text.replace(" ", "").split("+"):
        match = _re_term.match(term)
        if not match:
            raise argparse.ArgumentTypeError(f"invalid integer: {text!r}")
        k, base, exp, plain = match.groups()
        if plain is not None:
            total += int(plain, 0)
        else:
            total += int(k or 1) * int(base) ** int(exp)
    return total


# %% Commands


def cmd_trace(args, config):
    mode = Mode.total if args.total else Mode.stopping
    t = trace(args.n, mode, config.cap)
    table = Table(
        ("step", "value", "m", "twos_accum", "twos_required", "deficit"),
        tuple(
            (r.index, r.value, r.twos, r.twos_accum, r.twos_required, r.deficit)
            for r in t.records
        ),
    )
    _emit(table.render(config.output_format))
    logger.info(f"Trace of {args.n} ended with {t.outcome!r}.")
    return EXIT_CAP if isinstance(t.outcome, CapExceeded) else EXIT_OK


def cmd_sigma(args, config):
    if args.total:
        outcome = total_stopping_time(args.n, config.cap)
    elif args.coefficient:
        outcome = coefficient_stopping_time(args.n, config.cap)
    else:
        outcome = stopping_time(args.n, config.cap)
    _emit(f"{outcome}\n")
    return EXIT_CAP if isinstance(outcome, CapExceeded) else EXIT_OK


def cmd_template(args, config):
    template = None
    if args.out is not None and args.out.is_file():
        cached = read_template_cache(args.out)
        if cached.step == args.step:
            logger.info(f"Using cached template {args.out}.")
            template = cached
    if template is None:
        template = _cache(config).get(args.step, **_build_kwargs(config))
    if args.out is not None:
        write_template_cache(args.out, template)
    table = Table(
        ("step", "exponent", "unreached", "total_odd"),
        (
            (
                template.step,
                template.modulus_exponent,
                template.unreached_count,
                template.total_odd,
            ),
        ),
    )
    _emit(table.render(config.output_format))
    return EXIT_OK


def cmd_rates(args, config):
    table = conversion_table(
        args.max_step, loader=_cache(config).load, **_build_kwargs(config)
    )
    _emit(rates_table(table).render(config.output_format))
    return EXIT_OK


def cmd_pow2(args, config):
    mode = Mode.total if args.total else Mode.stopping
    if args.pooled is not None:
        h = pooled_histogram(args.pooled, mode, config.cap)
    elif args.n is not None:
        h = pow2_histogram(args.n, mode, config.cap)
    else:
        raise UsageError("pow2: give N or --pooled LIMIT")
    rows = histogram_report(h, geometric_reference(max(h.max_m, 1)))
    _emit(histogram_table(rows).render(config.output_format))
    return EXIT_OK


def cmd_search(args, config):
    rows = ()
    if args.resume and args.checkpoint.is_file():
        previous = read_checkpoint(args.checkpoint, config.cap)
        if previous.start != args.start:
            raise FormatError(
                f"Checkpoint {args.checkpoint} starts at {previous.start}, not {args.start}."
            )
        rows = previous.rows

    search = RecordSearch.resume(args.start, rows, config.cap)
    with CheckpointWriter(args.checkpoint, args.start, rows) as writer:
        search.sink = writer
        report = search.run(max(args.iters - len(rows), 0))

    _emit(search_table(report).render(config.output_format))
    if report.exhausted is not None:
        logger.warning(report.exhausted.describe())
    if report.open_candidate is not None:
        return EXIT_CAP
    return EXIT_OK


def cmd_slope(args, config):
    report = read_checkpoint(args.checkpoint, config.cap)
    fit = fit_slope(report)
    table = Table(
        ("slope", "intercept", "max_abs_residual", "predicted_bits"),
        (
            (
                fit.slope,
                fit.intercept,
                fit.max_abs_residual,
                predict_magnitude(report.final_sigma),
            ),
        ),
    )
    _emit(table.render(config.output_format))
    return EXIT_OK


def cmd_lengths(args, config):
    _emit(lengths_table(template_lengths(args.max_step)).render(config.output_format))
    return EXIT_OK


def cmd_patterns(args, config):
    rows = pattern_table(args.max_step, args.span, config.cap)
    _emit(Table(("step", "pattern"), tuple(rows)).render(config.output_format))
    return EXIT_OK


def cmd_theorems(args, config):
    report = theorem_suite(args.kind, args.samples, args.seed, config.cap)
    table = Table(
        ("kind", "samples", "passed", "pass_pct"),
        ((report.expected, report.samples, report.passed, 100 * report.pass_rate),),
    )
    _emit(table.render(config.output_format))
    return EXIT_OK


def cmd_series(args, config):
    if args.name in (Series.density, Series.non_conversion):
        if args.max_step is None:
            raise UsageError(f"series {args.name} needs --max-step")
        source = conversion_table(
            args.max_step, loader=_cache(config).load, **_build_kwargs(config)
        )
    else:
        if args.checkpoint is None:
            raise UsageError(f"series {args.name} needs --checkpoint")
        source = read_checkpoint(args.checkpoint, config.cap)
    _emit(figure_table(args.name, source).render(config.output_format))
    return EXIT_OK


def cmd_diff(args, config):
    report = read_checkpoint(args.checkpoint, config.cap)
    diffs = compare_published(report)
    table = Table(
        ("iteration", "published_sigma", "observed_sigma", "addend_match", "match"),
        tuple(
            (
                d.iteration,
                d.published_sigma,
                d.observed_sigma,
                int(d.published_addend == d.observed_addend),
                int(d.matches),
            )
            for d in diffs
        ),
    )
    _emit(table.render(config.output_format))
    mismatches = [d.iteration for d in diffs if not d.matches]
    if mismatches:
        logger.warning(
            f"{len(mismatches)} of {len(diffs)} rows differ, first at iteration {mismatches[0]}."
        )
    return EXIT_OK


# %% Plumbing


def _emit(text):
    sys.stdout.write(text)


def _cache(config):
    return TemplateCache(config.cache_dir)


def _build_kwargs(config):
    return {
        "cap": config.cap,
        "budget": config.enumeration_budget,
        "workers": config.workers,
    }


def _global_options():
    # Defaults are suppressed so the options can be given before or after the command.
    parser = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    parser.add_argument("--cap", type=int, help="step cap for every trace")
    parser.add_argument("--format", choices=list(OutputFormat), help="output format")
    parser.add_argument("--budget", type=int, help="max residues per template")
    parser.add_argument("--workers", type=int, help="worker processes for templates")
    parser.add_argument("--cache-dir", help="template cache directory")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    parser.add_argument("-q", "--quiet", action="store_true", help="log errors only")
    return parser


def make_parser():
    options = _global_options()
    parser = _Parser(prog="collatzlab", parents=[options], description=__doc__.split("\n")[1])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[options], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("trace", cmd_trace, "odd-map sequence with its 2s ledger")
    p.add_argument("n", type=parse_int)
    p.add_argument("--total", action="store_true", help="run until 1")

    p = add("sigma", cmd_sigma, "stopping time")
    p.add_argument("n", type=parse_int)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--total", action="store_true", help="total stopping time")
    group.add_argument("--coefficient", action="store_true", help="coefficient stopping time")

    p = add("template", cmd_template, "build or load a residue template")
    p.add_argument("--step", type=int, required=True)
    p.add_argument("--out", type=Path)

    p = add("rates", cmd_rates, "density and non-conversion table")
    p.add_argument("--max-step", type=int, required=True)

    p = add("pow2", cmd_pow2, "histogram of the powers of 2 divided out")
    p.add_argument("n", type=parse_int, nargs="?")
    p.add_argument("--total", action="store_true", help="run until 1")
    p.add_argument("--pooled", type=int, metavar="LIMIT", help="pool all odd n < LIMIT")

    p = add("search", cmd_search, "search for greater stopping times")
    p.add_argument("--start", type=parse_int, required=True)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--checkpoint", type=Path, required=True)
    p.add_argument("--resume", action="store_true")

    p = add("slope", cmd_slope, "fit sigma against log2(n) of a checkpoint")
    p.add_argument("--checkpoint", type=Path, required=True)

    p = add("lengths", cmd_lengths, "template lengths per step")
    p.add_argument("--max-step", type=int, required=True)

    p = add("patterns", cmd_patterns, "reached/unreached patterns per step")
    p.add_argument("--max-step", type=int, required=True)
    p.add_argument("--span", type=int, default=16)

    p = add("theorems", cmd_theorems, "randomized congruence checks")
    p.add_argument("--kind", choices=list(Expectation), required=True)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)

    p = add("series", cmd_series, "figure data series as a table")
    p.add_argument("name", choices=list(Series))
    p.add_argument("--max-step", type=int)
    p.add_argument("--checkpoint", type=Path)

    p = add("diff", cmd_diff, "compare a checkpoint from 27 with the published records")
    p.add_argument("--checkpoint", type=Path, required=True)

    return parser


@contextmanager
def _cli_logging(verbose=False, quiet=False):
    """Log to stderr for the duration of a command, then restore the logger."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    previous_level = logger.level
    if quiet:
        logger.setLevel(logging.ERROR)
    elif verbose:
        logger.setLevel(logging.INFO)
    logger.addHandler(handler)
    try:
        yield
    finally:
        logger.removeHandler(handler)
        logger.setLevel(previous_level)


def main(argv=None):
    """Run the CLI and return the exit code."""
    try:
        args = make_parser().parse_args(argv)
    except UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE

    with _cli_logging(getattr(args, "verbose", False), getattr(args, "quiet", False)):
        try:
            config = Config.from_env(
                cap=getattr(args, "cap", None),
                enumeration_budget=getattr(args, "budget", None),
                workers=getattr(args, "workers", None),
                cache_dir=getattr(args, "cache_dir", None),
                output_format=getattr(args, "format", None),
            )
            return args.func(args, config)
        except UsageError as err:
            print(err, file=sys.stderr)
            return EXIT_USAGE
        except FormatError as err:
            print(f"collatzlab: corrupt file: {err}", file=sys.stderr)
            return EXIT_IO
        except (ValueError, TypeError) as err:
            print(f"collatzlab: error: {err}", file=sys.stderr)
            return EXIT_USAGE
        except CapExceededError as err:
            print(f"collatzlab: cap exceeded: {err}", file=sys.stderr)
            return EXIT_CAP
        except OSError as err:
            print(f"collatzlab: I/O error: {err}", file=sys.stderr)
            return EXIT_IO


def cli_dispatch(argv=None):
    """Console entry point."""
    sys.exit(main(argv))
