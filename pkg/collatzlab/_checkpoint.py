"""
Append-only JSONL checkpoints for the record search.

The first line is a header object, each following line one accepted row::

    {"format":"collatz-search/1","start":"27","rule":"largest-factor4/1"}
    {"iter":1,"k":2,"exp":56,"sigma":48,"n_hex":"20000000000001b"}

``exp`` is the template exponent ``y(s*)``, so the addend is ``k * 2**exp``.
Rows that needed a fallback boundary carry an extra ``"attempts"`` key.
"""

__all__ = [
    "CHECKPOINT_FORMAT",
    "CheckpointWriter",
    "read_checkpoint",
    "write_checkpoint",
]

import os
import json
from pathlib import Path

from ._coreutils import CapExceededError, FormatError, logger
from ._dynamics import DEFAULT_CAP, Stopped, stopping_time
from ._search import RULE, SearchReport, SearchRow


CHECKPOINT_FORMAT = "collatz-search/1"


def _dumps(obj):
    return json.dumps(obj, separators=(",", ":"))


def _header(start):
    return {"format": CHECKPOINT_FORMAT, "start": str(start), "rule": RULE}


def _encode_row(row):
    d = {
        "iter": row.iteration,
        "k": row.k,
        "exp": row.exponent,
        "sigma": row.sigma,
        "n_hex": format(row.n, "x"),
    }
    if row.attempts > 1:
        d["attempts"] = row.attempts
    return _dumps(d)


def _decode_row(d):
    try:
        sigma = d["sigma"]
        fields = (d["iter"], d["k"], d["exp"], int(d["n_hex"], 16))
        attempts = d.get("attempts", 1)
    except (KeyError, TypeError, ValueError) as err:
        raise FormatError(f"Invalid checkpoint row {d!r}: {err}") from None
    if not all(isinstance(i, int) for i in (*fields, attempts)):
        raise FormatError(f"Invalid checkpoint row {d!r}.")
    if sigma is not None and not isinstance(sigma, int):
        raise FormatError(f"Invalid sigma in checkpoint row {d!r}.")
    iteration, k, exponent, n = fields
    return SearchRow(iteration, k, exponent, sigma, n, attempts)


def _parse_header(line):
    try:
        header = json.loads(line)
    except ValueError:
        header = None
    if not isinstance(header, dict) or header.get("format") != CHECKPOINT_FORMAT:
        raise FormatError(f"Not a {CHECKPOINT_FORMAT} checkpoint.")
    if header.get("rule") != RULE:
        raise FormatError(
            f"Checkpoint was made with rule {header.get('rule')!r}, expected {RULE!r}."
        )
    start = header.get("start")
    if not isinstance(start, str) or not start.isdigit():
        raise FormatError(f"Invalid start {start!r} in checkpoint header.")
    return int(start)


def _write_lines(path, start, rows):
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    lines = [_dumps(_header(start))]
    lines.extend(_encode_row(row) for row in rows)
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def write_checkpoint(path, report):
    """Write a complete checkpoint for the given report.

    The file is written next to its destination and then moved in place.
    """
    _write_lines(path, report.start, report.rows)


def read_checkpoint(path, cap=DEFAULT_CAP):
    """Read a checkpoint into a SearchReport.

    A partial trailing line (e.g. from a crash during a write) is discarded
    with a warning. Any other damage raises FormatError.
    """
    with open(path, "rb") as f:
        data = f.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise FormatError(f"Checkpoint {path} is not UTF-8.") from None

    lines = text.split("\n")
    tail = lines.pop()  # Empty if the file ends with a newline
    if not lines:
        raise FormatError(f"Checkpoint {path} has no header.")
    start = _parse_header(lines[0])

    rows = []
    for i, line in enumerate(lines[1:], 1):
        try:
            d = json.loads(line)
        except ValueError:
            raise FormatError(f"Corrupt line {i + 1} in checkpoint {path}.") from None
        row = _decode_row(d)
        if row.iteration != i:
            raise FormatError(
                f"Checkpoint {path} line {i + 1} has iteration {row.iteration}, expected {i}."
            )
        rows.append(row)
    if tail:
        logger.warning(
            f"Discarding partial last line of checkpoint {path} ({len(tail)} characters)."
        )

    sigma = stopping_time(start, cap)
    if not isinstance(sigma, Stopped):
        raise CapExceededError(
            f"Stopping time of checkpoint start {start} not reached within {cap} steps."
        )
    return SearchReport(start, sigma.sigma, tuple(rows))


class CheckpointWriter:
    """Search sink that appends each accepted row to a checkpoint file.

    On creation the file is (re)written with the header and the given rows,
    which also drops any partial line left by an earlier crash. Use as a
    context manager, or call ``close()``.
    """

    def __init__(self, path, start, rows=()):
        self._path = Path(path)
        _write_lines(self._path, start, rows)
        self._file = open(self._path, "a", encoding="utf-8", newline="\n")

    @property
    def path(self):
        return self._path

    def __call__(self, row):
        self._file.write(_encode_row(row) + "\n")
        self._file.flush()

    def close(self):
        if not self._file.closed:
            self._file.close()

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()
