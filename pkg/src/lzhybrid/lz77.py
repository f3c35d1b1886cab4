"""LZ77 factorization with leftmost sources.

Each phrase ``T[i..j]`` is either a single byte that has not occurred before
(a :class:`Literal`) or the longest prefix of ``T[i..]`` that also starts at
some earlier position (a :class:`Copy`). An earlier occurrence may overlap
the phrase itself. The recorded source is the leftmost occurrence of the
phrase string anywhere in the text.

Positions are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, NamedTuple, Union

import numpy as np
from numba import njit

from .inner import suffix_array
from .validation import as_byte_array


class Literal(NamedTuple):
    char: int


class Copy(NamedTuple):
    src: int
    length: int


Phrase = Union[Literal, Copy]


@dataclass(frozen=True, eq=False)
class Parse:
    """A factorization stored column-wise.

    ``src[t]`` is the 1-based source of phrase ``t`` or 0 for a literal;
    ``length[t]`` its length; ``char[t]`` the byte of a literal (0 for
    copies).
    """

    n: int
    src: np.ndarray
    length: np.ndarray
    char: np.ndarray

    def __len__(self) -> int:
        return len(self.length)

    def __iter__(self) -> Iterator[Phrase]:
        for s, ln, c in zip(self.src.tolist(), self.length.tolist(), self.char.tolist()):
            yield Copy(s, ln) if s else Literal(c)

    def __getitem__(self, t: int) -> Phrase:
        s = int(self.src[t])
        return Copy(s, int(self.length[t])) if s else Literal(int(self.char[t]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Parse):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.src, other.src)
                and np.array_equal(self.length, other.length)
                and np.array_equal(self.char, other.char))

    @property
    def z(self) -> int:
        return len(self.length)

    @property
    def phrases(self) -> List[Phrase]:
        return list(self)

    @property
    def is_literal(self) -> np.ndarray:
        return self.src == 0

    @classmethod
    def from_phrases(cls, phrases, n: int = None) -> "Parse":
        src, length, char = [], [], []
        for ph in phrases:
            if isinstance(ph, Literal):
                src.append(0)
                length.append(1)
                char.append(ph.char)
            else:
                src.append(ph.src)
                length.append(ph.length)
                char.append(0)
        total = int(sum(length))
        return cls(total if n is None else n, np.array(src, np.int64),
                   np.array(length, np.int64), np.array(char, np.uint8))

    def dumps(self) -> str:
        """One phrase per line: ``L <hex byte>`` or ``C <src> <len>``."""
        return "".join(f"C {p.src} {p.length}\n" if isinstance(p, Copy) else f"L {p.char:02x}\n"
                       for p in self)

    @classmethod
    def loads(cls, dump: str) -> "Parse":
        phrases: List[Phrase] = []
        for lineno, line in enumerate(dump.splitlines(), 1):
            fields = line.split()
            if not fields:
                continue
            if fields[0] == "L" and len(fields) == 2:
                phrases.append(Literal(int(fields[1], 16)))
            elif fields[0] == "C" and len(fields) == 3:
                phrases.append(Copy(int(fields[1]), int(fields[2])))
            else:
                raise ValueError(f"line {lineno}: malformed phrase {line!r}")
        return cls.from_phrases(phrases)


@njit(cache=True)
def _nearest_smaller(sa):
    """Previous/next smaller values of SA, by rank; -1 where absent."""
    n = sa.shape[0]
    psv = np.full(n, -1, np.int64)
    nsv = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    top = 0
    for r in range(n):
        v = sa[r]
        while top > 0 and sa[stack[top - 1]] > v:
            nsv[stack[top - 1]] = r
            top -= 1
        if top > 0:
            psv[r] = stack[top - 1]
        stack[top] = r
        top += 1
    return psv, nsv


@njit(cache=True)
def _lcp(text, a, b, limit):
    n = text.shape[0]
    ell = 0
    while ell < limit and b + ell < n and text[a + ell] == text[b + ell]:
        ell += 1
    return ell


@njit(cache=True)
def _factorize(text, sa):
    n = text.shape[0]
    isa = np.empty(n, np.int64)
    for r in range(n):
        isa[sa[r]] = r
    psv, nsv = _nearest_smaller(sa)
    seen = np.zeros(256, np.bool_)
    src = np.empty(n, np.int64)
    length = np.empty(n, np.int64)
    char = np.zeros(n, np.uint8)
    z = 0
    i = 0
    while i < n:
        c = text[i]
        if not seen[c]:
            seen[c] = True
            src[z] = 0
            length[z] = 1
            char[z] = c
            z += 1
            i += 1
            continue
        # longest previous factor: the best of the nearest earlier suffixes
        # on either side in suffix order
        r = isa[i]
        best_len = 0
        best_pos = -1
        for cand in (psv[r], nsv[r]):
            if cand < 0:
                continue
            p = sa[cand]
            ell = _lcp(text, p, i, n)
            if ell > best_len or (ell == best_len and ell > 0 and p < best_pos):
                best_len = ell
                best_pos = p
        # walk to the leftmost occurrence: an earlier occurrence of the phrase
        # exists iff one of the nearest earlier suffixes shares it
        p = best_pos
        while True:
            rp = isa[p]
            nxt = -1
            for cand in (psv[rp], nsv[rp]):
                if cand < 0:
                    continue
                q = sa[cand]
                if (nxt < 0 or q < nxt) and _lcp(text, q, p, best_len) >= best_len:
                    nxt = q
            if nxt < 0:
                break
            p = nxt
        src[z] = p + 1
        length[z] = best_len
        z += 1
        i += best_len
    return src[:z].copy(), length[:z].copy(), char[:z].copy()


def parse(text) -> Parse:
    """Greedy left-to-right factorization with leftmost sources."""
    arr = as_byte_array(text)
    if arr.size == 0:
        raise ValueError("empty text")
    sa = suffix_array(arr)
    src, length, char = _factorize(arr, sa)
    return Parse(int(arr.size), src, length, char)


def decode(parse: Parse) -> bytes:
    """Expand a parse back into its text.

    Copies are expanded left to right; a source that overlaps its phrase is
    copied one period at a time, which is the same as byte-at-a-time copying.
    """
    out = bytearray()
    for ph in parse:
        if isinstance(ph, Literal):
            out.append(ph.char)
            continue
        start = len(out) + 1
        src, ln = ph.src, ph.length
        if ln < 1 or src < 1 or src >= start or src + ln - 1 >= parse.n:
            raise ValueError("invalid source")
        pos = src - 1
        remaining = ln
        while remaining:
            chunk = out[pos:pos + remaining]
            out += chunk
            pos += len(chunk)
            remaining -= len(chunk)
    if len(out) != parse.n:
        raise ValueError("phrase lengths do not sum to n")
    return bytes(out)


def phrase_starts(parse: Parse) -> np.ndarray:
    """1-based start position of every phrase."""
    starts = np.empty(len(parse), np.int64)
    if len(parse):
        starts[0] = 1
        np.cumsum(parse.length[:-1], out=starts[1:])
        starts[1:] += 1
    return starts
