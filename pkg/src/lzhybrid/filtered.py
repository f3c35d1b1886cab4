"""The kernel (filtered) text and its coordinate mapping back to the text.

The kernel keeps, for every phrase, its first and last ``M + K - 1`` bytes
and replaces each dropped stretch by ``sep_count`` copies of a separator byte.
Two aligned lists map between the two coordinate systems: ``L`` holds phrase
starts in the text (plus the sentinel ``n + 1``) and ``L_MK`` the positions
of the same bytes in the kernel.

A kernel range free of separators is *primary* when the text range it stands
for crosses a phrase boundary or contains the first occurrence of a byte.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numba import njit

from .lz77 import Parse, phrase_starts
from .packed import GapList, gl_access, gl_successor
from .validation import SeparatorCollisionError, as_byte_array, check_int


class Classification(enum.Enum):
    PRIMARY = "primary"
    NON_PRIMARY = "non-primary"
    CONTAINS_SEPARATOR = "contains-separator"


_CODES = (Classification.PRIMARY, Classification.NON_PRIMARY,
          Classification.CONTAINS_SEPARATOR)


@dataclass(frozen=True)
class FilterParams:
    """Bounds the kernel is built for.

    ``sep_count`` defaults to ``max_edits + 1``; fewer copies are allowed.
    """

    max_length: int = 100
    max_edits: int = 0
    sep: int = ord("#")
    sep_count: Optional[int] = None

    def __post_init__(self):
        check_int(self.max_length, "max_length", 1)
        check_int(self.max_edits, "max_edits", 0)
        if not 0 <= self.sep <= 255:
            raise ValueError("sep must be a byte value")
        if self.sep_count is None:
            object.__setattr__(self, "sep_count", self.max_edits + 1)
        check_int(self.sep_count, "sep_count", 1)

    @property
    def halo(self) -> int:
        return self.max_length + self.max_edits - 1


@njit(cache=True)
def _classify(kernel, sep, lmk, marked, i, j):
    """Classify kernel[i..j] (1-based). Returns (code, successor rank)."""
    for p in range(i - 1, j):
        if kernel[p] == sep:
            return 2, -1
    s, v = gl_successor(lmk, i)
    if s < 0 or v > j:
        return 1, s
    if v > i:
        return 0, s
    # the range starts exactly on a phrase start
    t = np.searchsorted(marked, s)
    if t < marked.shape[0] and marked[t] == s:
        return 0, s
    if s + 1 < lmk[3] and gl_access(lmk, s + 1) <= j:
        return 0, s
    return 1, s


@njit(cache=True)
def _primary_ranges(kernel, sep, lmk, marked, ell, starts, ends):
    """Keep the primary kernel ranges and map them to text coordinates."""
    m = starts.shape[0]
    out_l = np.empty(m, np.int64)
    out_r = np.empty(m, np.int64)
    cnt = 0
    for t in range(m):
        i = starts[t]
        j = ends[t]
        code, s = _classify(kernel, sep, lmk, marked, i, j)
        if code != 0:
            continue
        lo = gl_access(ell, s) - gl_access(lmk, s) + i
        out_l[cnt] = lo
        out_r[cnt] = lo + (j - i)
        cnt += 1
    return out_l[:cnt].copy(), out_r[:cnt].copy()


class FilteredText:
    """Kernel text plus the lists mapping it onto the original text.

    Attributes:
        kernel: the kernel bytes.
        L: phrase starts in the text with the sentinel ``n + 1`` appended.
        L_MK: kernel positions of the phrase-start bytes.
        first_occ: 0-based ranks into ``L_MK`` of the literal phrases (the
            first occurrence of each distinct byte), in order of appearance.
        n: text length.
    """

    def __init__(self, kernel: bytes, L: GapList, L_MK: GapList, first_occ,
                 n: int, params: FilterParams):
        self.kernel = bytes(kernel)
        self.L = L
        self.L_MK = L_MK
        self.first_occ = np.ascontiguousarray(first_occ, dtype=np.int64)
        self.n = int(n)
        self.params = params
        self._kernel_arr = np.frombuffer(self.kernel, dtype=np.uint8)

    @property
    def z(self) -> int:
        return len(self.L_MK)

    @property
    def sep(self) -> int:
        return self.params.sep

    @property
    def kernel_array(self) -> np.ndarray:
        return self._kernel_arr

    def __repr__(self) -> str:
        return f"FilteredText(n={self.n}, z={self.z}, kernel={len(self.kernel)} bytes)"

    def _check_range(self, i: int, j: int):
        if not 1 <= i <= j <= len(self.kernel):
            raise IndexError(f"kernel range [{i}, {j}] out of bounds")

    def classify(self, i: int, j: int) -> Classification:
        self._check_range(i, j)
        code, _ = _classify(self._kernel_arr, self.sep, self.L_MK.state,
                            self.first_occ, i, j)
        return _CODES[code]

    def map_to_original(self, i: int, j: int) -> Tuple[int, int]:
        """Text interval equal to the primary kernel range ``[i, j]``."""
        self._check_range(i, j)
        code, s = _classify(self._kernel_arr, self.sep, self.L_MK.state,
                            self.first_occ, i, j)
        if code != 0:
            raise ValueError("not primary")
        lo = self.L.access(s + 1) - self.L_MK.access(s + 1) + i
        return lo, lo + (j - i)

    def primary_ranges(self, starts, ends) -> Tuple[np.ndarray, np.ndarray]:
        """Vectorized classify-and-map over 1-based kernel ranges."""
        return _primary_ranges(self._kernel_arr, self.sep, self.L_MK.state,
                               self.first_occ, self.L.state,
                               np.ascontiguousarray(starts, dtype=np.int64),
                               np.ascontiguousarray(ends, dtype=np.int64))


def build_filtered(text, parse: Parse, params: FilterParams,
                   g: int = 32, b: int = 512) -> FilteredText:
    """Build the kernel for ``text`` and its parse.

    Each phrase keeps its first ``max(halo, 1)`` and last ``halo`` bytes,
    ``halo = M + K - 1``. The phrase's first byte is always kept so that
    ``L_MK`` is defined even at ``M = 1, K = 0``.
    """
    arr = as_byte_array(text)
    n = arr.size
    if n != parse.n:
        raise ValueError("parse does not match text length")
    if np.any(arr == params.sep):
        raise SeparatorCollisionError(f"separator collision: byte {params.sep:#04x} occurs in the text")
    starts = phrase_starts(parse) - 1
    lengths = parse.length
    head, tail = max(params.halo, 1), params.halo
    pid = np.repeat(np.arange(len(parse), dtype=np.int64), lengths)
    off = np.arange(n, dtype=np.int64) - starts[pid]
    keep = (off < head) | (off >= lengths[pid] - tail)
    del pid, off
    kept = np.flatnonzero(keep)
    del keep
    gaps = np.zeros(kept.size, dtype=np.int64)
    gaps[1:] = np.diff(kept) > 1
    kpos = np.arange(kept.size, dtype=np.int64) + np.cumsum(gaps) * params.sep_count
    kernel = np.full(kept.size + int(gaps.sum()) * params.sep_count, params.sep, dtype=np.uint8)
    kernel[kpos] = arr[kept]
    lmk = kpos[np.searchsorted(kept, starts)] + 1
    L = GapList(np.append(starts + 1, n + 1), g, b, universe=n + 1)
    L_MK = GapList(lmk, g, b, universe=kernel.size)
    first_occ = np.flatnonzero(parse.is_literal)
    return FilteredText(kernel.tobytes(), L, L_MK, first_occ, n, params)
