"""Input validation helpers shared by the estimator, the CLI and the kernels."""

from __future__ import annotations

import numbers

import numpy as np


class SeparatorCollisionError(ValueError):
    """The separator byte occurs in the text."""


class QueryBoundsError(ValueError):
    """A query asks for a longer pattern or more edits than the index supports."""


def as_byte_array(data) -> np.ndarray:
    """View bytes-like input (or a uint8 array) as a contiguous uint8 array.

    ``str`` is rejected: the index works on raw bytes and any implicit
    encoding choice would silently shift positions.
    """
    if isinstance(data, str):
        raise TypeError("expected bytes-like data, got str; encode it first")
    if isinstance(data, np.ndarray):
        if data.dtype != np.uint8 or data.ndim != 1:
            raise TypeError("expected a 1-D uint8 array")
        return np.ascontiguousarray(data)
    try:
        return np.frombuffer(memoryview(data).cast("B"), dtype=np.uint8)
    except TypeError:
        raise TypeError(f"expected bytes-like data, got {type(data).__name__}") from None


def as_bytes(data) -> bytes:
    if isinstance(data, bytes):
        return data
    return as_byte_array(data).tobytes()


def check_text(text) -> bytes:
    text = as_bytes(text)
    if not text:
        raise ValueError("empty text")
    return text


def check_int(value, name: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_pattern(pattern, k: int, max_length: int, max_edits: int) -> bytes:
    pattern = as_bytes(pattern)
    k = check_int(k, "k")
    if not pattern:
        raise ValueError("empty pattern")
    if len(pattern) > max_length or k > max_edits:
        raise QueryBoundsError(
            f"query exceeds index bounds: pattern length {len(pattern)} (max {max_length}), "
            f"k={k} (max {max_edits})")
    return pattern


def choose_separator(text, preferred: int = ord("#")) -> int:
    """Pick a byte absent from ``text``: ``preferred`` if free, else the smallest free byte."""
    counts = np.bincount(as_byte_array(text), minlength=256)
    if counts[preferred] == 0:
        return preferred
    free = np.flatnonzero(counts == 0)
    if free.size == 0:
        raise SeparatorCollisionError("separator collision: all 256 byte values occur in the text")
    return int(free[0])
