"""Conventional index over the kernel text.

The default inner index is a plain suffix array searched by binary search.
Approximate matching is a column-wise edit-distance scan over the kernel
(Sellers' algorithm with Ukkonen's cut-off), followed by a short backward
DP at each qualifying end position to enumerate every start position.
"""

from __future__ import annotations

import struct
from bisect import bisect_left, bisect_right
from typing import List, NamedTuple, Tuple

import numpy as np
from numba import njit
from pydivsufsort import divsufsort

from .validation import as_byte_array, as_bytes, check_int, check_pattern


def suffix_array(arr: np.ndarray) -> np.ndarray:
    """0-based suffix array of a uint8 array (int32)."""
    if not arr.flags.writeable:
        arr = arr.copy()
    return divsufsort(arr)


class KernelMatch(NamedTuple):
    i: int
    j: int
    dist: int


class SuffixArrayIndex:
    """Suffix array over a byte string.

    Entries are stored 1-based; on disk each takes
    ``ceil(ceil(log2(len + 1)) / 8)`` bytes.
    """

    def __init__(self, text, *, sa=None):
        self.text = as_bytes(text)
        if not self.text:
            raise ValueError("empty kernel")
        if sa is None:
            sa = suffix_array(np.frombuffer(self.text, dtype=np.uint8))
        self._sa = np.ascontiguousarray(sa, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.text)

    @property
    def suffix_array(self) -> np.ndarray:
        """1-based suffix array."""
        return self._sa + 1

    @property
    def entry_bytes(self) -> int:
        return ((len(self.text) + 1).bit_length() + 7) // 8

    def search(self, pattern: bytes) -> Tuple[int, int]:
        """Half-open suffix-array interval of suffixes starting with ``pattern``."""
        m = len(pattern)
        text = self.text

        def key(p):
            return text[p:p + m]

        lo = bisect_left(self._sa, pattern, key=key)
        hi = bisect_right(self._sa, pattern, lo=lo, key=key)
        return lo, hi

    def exact_starts(self, pattern) -> np.ndarray:
        """Sorted 1-based start positions of ``pattern``."""
        pattern = as_bytes(pattern)
        if not pattern:
            raise ValueError("empty pattern")
        lo, hi = self.search(pattern)
        return np.sort(self._sa[lo:hi]) + 1

    def locate_exact(self, pattern) -> List[KernelMatch]:
        m = len(pattern)
        return [KernelMatch(i, i + m - 1, 0) for i in self.exact_starts(pattern).tolist()]

    def sa_bytes(self) -> bytes:
        w = self.entry_bytes
        raw = (self._sa + 1).astype("<u8").view(np.uint8).reshape(-1, 8)[:, :w]
        return raw.tobytes()

    @classmethod
    def from_sa_bytes(cls, text: bytes, buf) -> "SuffixArrayIndex":
        n = len(text)
        w = ((n + 1).bit_length() + 7) // 8
        if len(buf) != n * w:
            raise ValueError("suffix array section has the wrong size")
        raw = np.zeros((n, 8), dtype=np.uint8)
        raw[:, :w] = np.frombuffer(bytes(buf), dtype=np.uint8).reshape(n, w)
        sa = raw.view("<u8").ravel().astype(np.int64) - 1
        return cls(text, sa=sa)

    def to_bytes(self) -> bytes:
        """Standalone serialization: text length, text, suffix array."""
        return struct.pack("<Q", len(self.text)) + self.text + self.sa_bytes()


def build_inner(kernel) -> SuffixArrayIndex:
    return SuffixArrayIndex(kernel)


def locate_exact(idx: SuffixArrayIndex, pattern) -> List[KernelMatch]:
    return idx.locate_exact(as_bytes(pattern))


@njit(cache=True)
def _approx_scan(text, pat, k):
    n = text.shape[0]
    m = pat.shape[0]
    cap = 1024
    out_i = np.empty(cap, np.int64)
    out_j = np.empty(cap, np.int64)
    out_d = np.empty(cap, np.int64)
    cnt = 0
    col = np.arange(m + 1).astype(np.int64)
    back = np.empty(m + 1, np.int64)
    last = min(k, m)
    for j in range(n):
        c = text[j]
        top = min(last + 1, m)
        diag = 0
        for i in range(1, top + 1):
            old = col[i] if i <= last else k + 1
            v = old + 1
            if col[i - 1] + 1 < v:
                v = col[i - 1] + 1
            d = diag + (0 if pat[i - 1] == c else 1)
            if d < v:
                v = d
            diag = old
            col[i] = v
        last = top
        while last > 0 and col[last] > k:
            last -= 1
        if last < m:
            continue
        # every start for this end: DP of the reversed pattern against
        # text[j], text[j-1], ...
        for a in range(m + 1):
            back[a] = a
        for w in range(1, min(m + k, j + 1) + 1):
            t = text[j - w + 1]
            diag = back[0]
            back[0] = w
            low = back[0]
            for a in range(1, m + 1):
                old = back[a]
                v = old + 1
                if back[a - 1] + 1 < v:
                    v = back[a - 1] + 1
                d = diag + (0 if pat[m - a] == t else 1)
                if d < v:
                    v = d
                diag = old
                back[a] = v
                if v < low:
                    low = v
            if back[m] <= k:
                if cnt == cap:
                    cap *= 2
                    out_i = _grow(out_i, cap)
                    out_j = _grow(out_j, cap)
                    out_d = _grow(out_d, cap)
                out_i[cnt] = j - w + 2
                out_j[cnt] = j + 1
                out_d[cnt] = back[m]
                cnt += 1
            if low > k:
                break
    return out_i[:cnt].copy(), out_j[:cnt].copy(), out_d[:cnt].copy()


@njit(cache=True)
def _grow(arr, cap):
    out = np.empty(cap, arr.dtype)
    out[:arr.shape[0]] = arr
    return out


def approx_intervals(text, pattern, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All intervals within edit distance ``k`` of ``pattern``, sorted by (i, j).

    Returns 1-based ``(starts, ends, distances)`` arrays.
    """
    arr = as_byte_array(text)
    pat = as_byte_array(pattern)
    if pat.size == 0:
        raise ValueError("empty pattern")
    k = check_int(k, "k")
    i, j, d = _approx_scan(arr, pat, k)
    order = np.lexsort((j, i))
    return i[order], j[order], d[order]


def locate_approx(kernel, pattern, k: int, *, max_length: int = None,
                  max_edits: int = None) -> List[KernelMatch]:
    """Every kernel interval within edit distance ``k`` of ``pattern``.

    When index bounds are given, a query beyond them is rejected.
    """
    if max_length is not None or max_edits is not None:
        check_pattern(pattern, k,
                      len(pattern) if max_length is None else max_length,
                      k if max_edits is None else max_edits)
    i, j, d = approx_intervals(kernel, pattern, k)
    return [KernelMatch(*t) for t in zip(i.tolist(), j.tolist(), d.tolist())]
