"""Synthetic repetitive corpora and query sampling.

A corpus is a random base string followed by ``copies - 1`` copies of it,
each mutated independently by point substitutions, insertions and
deletions, which mimics a collection of closely related genomes.
"""

from __future__ import annotations

from typing import List

import numpy as np

from .validation import as_byte_array, check_int

DNA = b"ACGT"


def _alphabet(alphabet) -> np.ndarray:
    alpha = np.unique(as_byte_array(alphabet))
    if alpha.size < 2:
        raise ValueError("alphabet needs at least two distinct bytes")
    return alpha


def mutate(codes: np.ndarray, rate: float, sigma: int, rng: np.random.Generator) -> np.ndarray:
    """Mutate alphabet codes; each position is hit with probability ``rate``."""
    hit = rng.random(codes.size) < rate
    kind = rng.integers(0, 3, codes.size)
    sub = hit & (kind == 0)
    ins = hit & (kind == 1)
    dele = hit & (kind == 2)
    out = codes.copy()
    # a nonzero shift guarantees the substituted byte differs
    out[sub] = (out[sub] + rng.integers(1, sigma, int(sub.sum()))) % sigma
    counts = 1 + ins.astype(np.int64) - dele.astype(np.int64)
    first = np.cumsum(counts) - counts
    res = np.repeat(out, counts)
    res[first[ins]] = rng.integers(0, sigma, int(ins.sum()))
    return res


def generate(base_size: int, copies: int = 1, rate: float = 0.001, seed: int = 0,
             alphabet=DNA) -> bytes:
    """Base text of ``base_size`` random bytes followed by ``copies - 1`` mutated copies."""
    base_size = check_int(base_size, "base_size", 1)
    copies = check_int(copies, "copies", 1)
    if not 0.0 <= rate <= 1.0:
        raise ValueError("rate must lie in [0, 1]")
    alpha = _alphabet(alphabet)
    rng = np.random.default_rng(seed)
    base = rng.integers(0, alpha.size, base_size)
    parts = [base] + [mutate(base, rate, alpha.size, rng) for _ in range(copies - 1)]
    return alpha[np.concatenate(parts)].astype(np.uint8).tobytes()


def random_text(size: int, seed: int = 0, alphabet=DNA) -> bytes:
    """Non-repetitive control text."""
    alpha = _alphabet(alphabet)
    rng = np.random.default_rng(seed)
    return alpha[rng.integers(0, alpha.size, check_int(size, "size", 1))].astype(np.uint8).tobytes()


def sample_patterns(text, m: int, count: int, rng: np.random.Generator,
                    non_unary: bool = True) -> List[bytes]:
    """``count`` random substrings of length ``m``.

    With ``non_unary`` substrings made of a single repeated byte are
    rejected (this cannot apply to ``m = 1``).
    """
    arr = as_byte_array(text)
    m = check_int(m, "m", 1)
    count = check_int(count, "count")
    if m > arr.size:
        raise ValueError("pattern length exceeds text length")
    span = arr.size - m + 1
    if non_unary and m > 1:
        change = np.flatnonzero(arr[1:] != arr[:-1])
        # a start s is non-unary when some change lies in [s, s + m - 2]
        nxt = np.searchsorted(change, np.arange(span))
        ok = nxt < change.size
        ok[ok] = change[nxt[ok]] <= np.flatnonzero(ok) + m - 2
        valid = np.flatnonzero(ok)
        if valid.size == 0:
            raise ValueError("text has no non-unary substring of that length")
        starts = valid[rng.integers(0, valid.size, count)]
    else:
        starts = rng.integers(0, span, count)
    return [arr[s:s + m].tobytes() for s in starts]


def perturb(pattern: bytes, edits: int, rng: np.random.Generator, alphabet=DNA) -> bytes:
    """Apply up to ``edits`` random edits, never emptying the pattern."""
    alpha = _alphabet(alphabet)
    out = bytearray(pattern)
    for _ in range(check_int(edits, "edits")):
        kind = int(rng.integers(0, 3))
        if kind == 0 and out:
            out[int(rng.integers(0, len(out)))] = int(alpha[rng.integers(0, alpha.size)])
        elif kind == 1:
            out.insert(int(rng.integers(0, len(out) + 1)), int(alpha[rng.integers(0, alpha.size)]))
        elif len(out) > 1:
            del out[int(rng.integers(0, len(out)))]
    return bytes(out)
