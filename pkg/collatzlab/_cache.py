"""
Binary template cache.

Layout: the magic ``b"CZTPL1\\n"``, the step x as ``<I``, the modulus
exponent y as ``<I``, the unreached count as ``<Q``, then the bitmap with
bit j standing for residue ``2j + 1``, least significant bit first,
zero-padded to a whole byte.
"""

__all__ = [
    "TemplateCache",
    "read_template_cache",
    "write_template_cache",
]

import os
import struct
from pathlib import Path

import numpy as np

from ._coreutils import FormatError, logger
from ._dynamics import required_twos
from ._templates import Template, build_template


MAGIC = b"CZTPL1\n"
_HEADER = struct.Struct("<IIQ")


def _bitmap_size(y):
    return ((1 << (y - 1)) + 7) // 8


def write_template_cache(path, template):
    """Write a template to path."""
    path = Path(path)
    data = MAGIC
    data += _HEADER.pack(
        template.step, template.modulus_exponent, template.unreached_count
    )
    data += template.bitmap
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as f:
        f.write(data)
    os.replace(tmp, path)


def read_template_cache(path):
    """Read a template from path. Raises FormatError when the file is damaged."""
    with open(path, "rb") as f:
        data = f.read()
    if not data.startswith(MAGIC):
        raise FormatError(f"Template cache {path} has a bad magic.")
    offset = len(MAGIC)
    if len(data) < offset + _HEADER.size:
        raise FormatError(f"Template cache {path} is truncated.")
    x, y, unreached = _HEADER.unpack_from(data, offset)
    bitmap = data[offset + _HEADER.size :]
    # Bound y and x by the data size before any big arithmetic
    if (
        not 2 <= y <= (8 * len(bitmap)).bit_length() + 1
        or not 1 <= x < y
        or y != required_twos(x)
    ):
        raise FormatError(f"Template cache {path} has step {x} with exponent {y}.")
    if len(bitmap) != _bitmap_size(y):
        raise FormatError(
            f"Template cache {path} has {len(bitmap)} bitmap bytes, expected {_bitmap_size(y)}."
        )
    total_odd = 1 << (y - 1)
    bits = np.unpackbits(np.frombuffer(bitmap, np.uint8), bitorder="little")
    if bits[total_odd:].any():
        raise FormatError(f"Template cache {path} has bits set in the padding.")
    counted = int(bits[:total_odd].sum())
    if unreached != counted:
        raise FormatError(
            f"Template cache {path} claims {unreached} unreached residues, the bitmap has {counted}."
        )
    return Template(x, y, bitmap, unreached)


class TemplateCache:
    """A directory of cached templates, one file per step."""

    def __init__(self, directory):
        self._dir = Path(directory)

    @property
    def directory(self):
        return self._dir

    def path_for(self, x):
        return self._dir / f"template-{x}.bin"

    def load(self, x):
        """Return the cached template for step x, or None if absent or invalid."""
        path = self.path_for(x)
        if not path.is_file():
            return None
        try:
            template = read_template_cache(path)
        except FormatError as err:
            logger.warning(f"Ignoring invalid template cache: {err}")
            return None
        if template.step != x:
            logger.warning(f"Ignoring template cache {path}: holds step {template.step}.")
            return None
        return template

    def store(self, template):
        self._dir.mkdir(parents=True, exist_ok=True)
        path = self.path_for(template.step)
        write_template_cache(path, template)
        return path

    def get(self, x, **kwargs):
        """Load the template for step x, or build and store it.

        Keyword arguments are passed to ``build_template()``.
        """
        template = self.load(x)
        if template is None:
            template = build_template(x, **kwargs)
            self.store(template)
        else:
            logger.info(f"Using cached template for step {x}.")
        return template
