"""Direct scans over the full text, used to verify index answers.

These deliberately share no code with the query pipeline. Exact search
repeatedly calls ``bytes.find``; patterns shorter than three bytes use a
vectorized byte filter instead. Approximate search uses the pigeonhole
principle: a match with at most ``k`` edits contains one of ``k + 1``
disjoint pattern pieces verbatim, so only starts near a piece occurrence are
verified, each by an anchored edit-distance DP.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np
from numba import njit

from .validation import as_byte_array, check_int


def _find_all(data: bytes, pat: bytes) -> np.ndarray:
    """0-based starts of every (possibly overlapping) occurrence, via bytes.find."""
    out = []
    pos = data.find(pat)
    while pos >= 0:
        out.append(pos)
        pos = data.find(pat, pos + 1)
    return np.array(out, dtype=np.int64)


def _exact(data: bytes, arr: np.ndarray, pat: np.ndarray) -> np.ndarray:
    m = pat.size
    if m > arr.size:
        return np.zeros(0, np.int64)
    if m >= 3:
        return _find_all(data, pat.tobytes())
    # short patterns occur densely: filter candidates byte by byte
    cand = np.flatnonzero(arr[:arr.size - m + 1] == pat[0])
    for off in range(1, m):
        cand = cand[arr[cand + off] == pat[off]]
    return cand.astype(np.int64)


def find_exact(text, pattern) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted 1-based (starts, ends) of every occurrence of ``pattern``."""
    arr = as_byte_array(text)
    pat = as_byte_array(pattern)
    if pat.size == 0:
        raise ValueError("empty pattern")
    data = text if isinstance(text, bytes) else arr.tobytes()
    starts = _exact(data, arr, pat) + 1
    return starts, starts + (pat.size - 1)


@njit(cache=True)
def _verify(text, pat, k, cands):
    n = text.shape[0]
    m = pat.shape[0]
    out_i = []
    out_j = []
    col = np.empty(m + 1, np.int64)
    for i in cands:
        for a in range(m + 1):
            col[a] = a
        for w in range(1, min(m + k, n - i) + 1):
            c = text[i + w - 1]
            diag = col[0]
            col[0] = w
            low = w
            for a in range(1, m + 1):
                old = col[a]
                v = min(old + 1, col[a - 1] + 1, diag + (pat[a - 1] != c))
                diag = old
                col[a] = v
                low = min(low, v)
            if col[m] <= k:
                out_i.append(i + 1)
                out_j.append(i + w)
            if low > k:
                break
    return np.array(out_i, np.int64), np.array(out_j, np.int64)


def find_approx(text, pattern, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted 1-based (starts, ends) of every non-empty interval within ``k`` edits."""
    arr = as_byte_array(text)
    pat = as_byte_array(pattern)
    k = check_int(k, "k")
    m = pat.size
    if m == 0:
        raise ValueError("empty pattern")
    if k == 0:
        return find_exact(text, pattern)
    data = text if isinstance(text, bytes) else arr.tobytes()
    if m <= k:
        cands = np.arange(arr.size, dtype=np.int64)
    else:
        bounds = np.linspace(0, m, k + 2).astype(np.int64)
        found = []
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            base = _exact(data, arr, pat[lo:hi]) - lo
            found.append((base[:, None] + np.arange(-k, k + 1)).ravel())
        cands = np.unique(np.concatenate(found))
        cands = cands[(cands >= 0) & (cands < arr.size)]
    return _verify(arr, pat, k, cands)
