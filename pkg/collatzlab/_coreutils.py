"""
Core utilities that are loaded into the root namespace or used internally.
"""

import os
import re
import sys
import types
import logging
from contextlib import contextmanager


# %% Logging


logger = logging.getLogger("collatzlab")
logger.setLevel(logging.WARNING)


err_hashes = {}
finding_hashes = {}

# Big integers make messages unique, which defeats the de-duplication.
_re_bigint = re.compile(r"\b[0-9]{16,}\b|\b0x[0-9a-f]{16,}\b")


def error_message_hash(message):
    message = _re_bigint.sub("BIGINT", message)
    return hash(message)


def _one_liner(kind, msg, count):
    msg = kind + ": " + msg.split("\n")[0].strip()
    msg = msg if len(msg) <= 70 else msg[:69] + "…"
    return msg + f" ({count})"


@contextmanager
def log_exception(kind):
    """Context manager to log any exceptions, but only log a one-liner
    for subsequent occurrences of the same error, so that a search that
    keeps failing in the same way does not flood the log.
    """
    try:
        yield
    except Exception as err:
        # Store exc info for postmortem debugging
        exc_info = list(sys.exc_info())
        exc_info[2] = exc_info[2].tb_next  # skip *this* function
        sys.last_type, sys.last_value, sys.last_traceback = exc_info
        msg = str(err)
        msgh = error_message_hash(msg)
        if msgh not in err_hashes:
            err_hashes[msgh] = 1
            logger.error(kind, exc_info=err)
        else:
            err_hashes[msgh] = count = err_hashes[msgh] + 1
            logger.error(_one_liner(kind, msg, count))


def report_finding(kind, message):
    """Log an empirical finding (e.g. a counterexample) at warning level.

    Findings are never raised. The first occurrence is logged in full,
    repeats of the same message as a counted one-liner. Returns the message.
    """
    msgh = error_message_hash(kind + message)
    if msgh not in finding_hashes:
        finding_hashes[msgh] = 1
        logger.warning(f"{kind}: {message}")
    else:
        finding_hashes[msgh] = count = finding_hashes[msgh] + 1
        logger.warning(_one_liner(kind, message, count))
    return message


# %% Enum

# Enums are plain classes whose fields are strings. That keeps values
# JSON-friendly (they end up in checkpoints and CSV) and lets us test
# membership with ``value in Mode``.


class EnumType(type):
    """Metaclass for string enums."""

    def __new__(cls, name, bases, dct):
        member_map = {}
        for key, val in dct.items():
            if not key.startswith("_"):
                val = key if val is None else val
                if not isinstance(val, str):
                    raise TypeError("Enum fields must be str.")
                member_map[key] = val
        dct.update(member_map)
        klass = super().__new__(cls, name, bases, dct)
        klass.__fields__ = tuple(member_map)
        klass.__members__ = types.MappingProxyType(member_map)
        return klass

    def __iter__(cls):
        return iter([getattr(cls, key) for key in cls.__fields__])

    def __contains__(cls, value):
        return value in cls.__members__.values()

    def __getitem__(cls, key):
        return cls.__members__[key]

    def __repr__(cls):
        if cls is BaseEnum:
            return "<collatzlab.BaseEnum>"
        options = ", ".join(f"'{val}'" for val in cls)
        return f"<collatzlab.{cls.__name__} enum with options: {options}>"

    def __setattr__(cls, name, value):
        if name.startswith("_"):
            super().__setattr__(name, value)
        else:
            raise RuntimeError("Cannot set values on an enum.")

    def check(cls, value, what=None):
        """Return value if it is a member, raise ValueError otherwise."""
        if value not in cls:
            what = what or cls.__name__
            raise ValueError(f"Invalid {what} '{value}', must be in {list(cls)}.")
        return value


class BaseEnum(metaclass=EnumType):
    """Base class for enums. Fields are simply strings."""

    def __init__(self):
        raise RuntimeError("Cannot instantiate an enum.")


# %% Environment


def get_env_var(*varnames):
    """Get the first non-empty value from the given env vars.

    Returns (value, varname). If none is set, value is "" and varname the first name.
    """
    for varname in varnames:
        value = os.getenv(varname, "").strip()
        if value:
            return value, varname
    return "", varnames[0]


# %% Errors


class BudgetExceededError(ValueError):
    """An enumeration would exceed the configured residue budget."""


class PreconditionError(ValueError):
    """The inputs of a check do not satisfy its hypothesis."""


class FormatError(ValueError):
    """A cache or checkpoint file is corrupt or has an unexpected format."""


class CapExceededError(RuntimeError):
    """A computation that needs a finite trace hit the step cap."""
