"""
Run configuration: step cap, enumeration budget, cache location, output
format and worker count. Values come from defaults, then the environment,
then explicit overrides (e.g. CLI flags).
"""

__all__ = ["Config", "OutputFormat"]

from pathlib import Path
from dataclasses import dataclass, replace

from ._coreutils import BaseEnum, get_env_var, logger
from ._dynamics import DEFAULT_CAP, _check_int
from ._templates import DEFAULT_BUDGET


DEFAULT_CACHE_DIR = "./.collatz-cache"


class OutputFormat(BaseEnum):
    """How the CLI renders tables."""

    pretty = None  #: Aligned columns for humans.
    csv = None  #: Comma-separated, LF line endings, header line.
    json = None  #: One JSON document with sorted keys.


@dataclass(frozen=True)
class Config:
    cap: int = DEFAULT_CAP
    enumeration_budget: int = DEFAULT_BUDGET
    cache_dir: Path = Path(DEFAULT_CACHE_DIR)
    output_format: str = OutputFormat.pretty
    workers: int = 1

    def __post_init__(self):
        _check_int(self.cap, "cap", 1)
        _check_int(self.enumeration_budget, "budget", 2)
        _check_int(self.workers, "workers", 1)
        OutputFormat.check(self.output_format, "output format")
        if not isinstance(self.cache_dir, Path):
            object.__setattr__(self, "cache_dir", Path(self.cache_dir))

    @classmethod
    def from_env(cls, **overrides):
        """Create a config from the environment, with overrides applied last.

        ``COLLATZ_LAB_CACHE`` sets the cache directory and
        ``COLLATZ_LAB_WORKERS`` the number of worker processes. Invalid
        values are ignored with a warning.
        """
        kwargs = {}

        cache_dir, _ = get_env_var("COLLATZ_LAB_CACHE")
        kwargs["cache_dir"] = Path(cache_dir or DEFAULT_CACHE_DIR)

        workers, varname = get_env_var("COLLATZ_LAB_WORKERS")
        if workers:
            if workers.isdigit() and int(workers) >= 1:
                kwargs["workers"] = int(workers)
            else:
                logger.warning(
                    f"Ignoring invalid {varname} '{workers}', must be a positive int."
                )

        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)

    def with_overrides(self, **overrides):
        """Return a copy with the given non-None fields replaced."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})
