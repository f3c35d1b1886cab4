"""Secondary matches through 2-sided range reporting over phrase sources.

Every copy phrase ``T[i..j]`` with source start ``i'`` is a grid point
``(x, y) = (i', i' + j - i)`` carrying the satellite ``i``. Points are sorted
by ``x``; ``X`` is stored gap-coded, satellites are packed ranks into ``L``,
and ``y`` is never stored: it is recomputed from ``X``, the satellite and the
next entry of ``L``.

A match ``T[l..r]`` is copied into every phrase whose source covers it,
i.e. every point with ``x <= l`` and ``y >= r``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np
from numba import njit

from .lz77 import Parse
from .packed import (GapList, RmqIndex, bit_width, bytes_to_words, get_bits, gl_access,
                     gl_predecessor, pack_bits, unpack_bits, words_to_bytes)


@njit(cache=True)
def _y_at(t, xs, sat, sat_w, ell):
    # L[s + 1] - L[s] is the s-th entry of L's difference stream
    s = get_bits(sat, t, sat_w)
    return gl_access(xs, t) + get_bits(ell[0], s, ell[4]) - 1


@njit(cache=True)
def _best_block(c, d, xs, sat, sat_w, ell, inblock, sparse, bs):
    """Leftmost block holding the maximum of Y over blocks [c, d], with that maximum."""
    lev = 0
    while (1 << (lev + 1)) <= d - c + 1:
        lev += 1
    if lev == 0:
        a = e = c
    else:
        a = sparse[lev - 1, c]
        e = sparse[lev - 1, d - (1 << lev) + 1]
    ya = _y_at(a * bs + inblock[a], xs, sat, sat_w, ell)
    if e != a:
        ye = _y_at(e * bs + inblock[e], xs, sat, sat_w, ell)
        if ye > ya:
            return e, ye
    return a, ya


@njit(cache=True)
def _scan(lo, hi, r, xs, sat, sat_w, ell, out_p, out_x, cnt):
    """Append every point in [lo, hi] with y >= r, decoding X sequentially."""
    x = gl_access(xs, lo)
    for p in range(lo, hi + 1):
        if p > lo:
            x += get_bits(xs[0], p - 1, xs[4])
        s = get_bits(sat, p, sat_w)
        if x + get_bits(ell[0], s, ell[4]) - 1 >= r:
            if cnt == out_p.shape[0]:
                out_p = _grow(out_p, 2 * cnt)
                out_x = _grow(out_x, 2 * cnt)
            out_p[cnt] = p
            out_x[cnt] = x
            cnt += 1
    return out_p, out_x, cnt


@njit(cache=True)
def _cover(l, r, xs, sat, sat_w, ell, inblock, sparse, bs, out_p, out_x, stack):
    """Points with x <= l and y >= r: (ranks, x values, count, stack).

    The prefix of points with x <= l ends in a partial block, which is
    scanned directly. Whole blocks are searched by recursive range-maximum
    queries over block maxima; a block whose maximum reaches ``r`` is scanned.
    """
    cnt = 0
    kk, _ = gl_predecessor(xs, l)
    if kk < 0:
        return out_p, out_x, cnt, stack
    bh = kk // bs
    out_p, out_x, cnt = _scan(bh * bs, kk, r, xs, sat, sat_w, ell, out_p, out_x, cnt)
    if bh == 0:
        return out_p, out_x, cnt, stack
    stack[0] = 0
    stack[1] = bh - 1
    top = 2
    while top:
        d = stack[top - 1]
        c = stack[top - 2]
        top -= 2
        blk, y = _best_block(c, d, xs, sat, sat_w, ell, inblock, sparse, bs)
        if y < r:
            continue
        out_p, out_x, cnt = _scan(blk * bs, blk * bs + bs - 1, r, xs, sat, sat_w, ell,
                                  out_p, out_x, cnt)
        if top + 4 > stack.shape[0]:
            stack = _grow(stack, 2 * stack.shape[0])
        if c < blk:
            stack[top] = c
            stack[top + 1] = blk - 1
            top += 2
        if blk < d:
            stack[top] = blk + 1
            stack[top + 1] = d
            top += 2
    return out_p, out_x, cnt, stack


@njit(cache=True)
def _covering(l, r, xs, sat, sat_w, ell, inblock, sparse, bs):
    """0-based ranks of all points with x <= l and y >= r, in rank order."""
    out_p, _, cnt, _ = _cover(l, r, xs, sat, sat_w, ell, inblock, sparse, bs,
                              np.empty(16, np.int64), np.empty(16, np.int64),
                              np.empty(64, np.int64))
    return np.sort(out_p[:cnt])


@njit(cache=True)
def _expand(prim_l, prim_r, xs, sat, sat_w, ell, inblock, sparse, bs):
    """Worklist expansion: primaries first, then every copy in append order."""
    n0 = prim_l.shape[0]
    cap = max(16, 2 * n0)
    out_l = np.empty(cap, np.int64)
    out_r = np.empty(cap, np.int64)
    out_l[:n0] = prim_l
    out_r[:n0] = prim_r
    cnt = n0
    buf_p = np.empty(16, np.int64)
    buf_x = np.empty(16, np.int64)
    stack = np.empty(64, np.int64)
    cur = 0
    while cur < cnt:
        l = out_l[cur]
        r = out_r[cur]
        cur += 1
        buf_p, buf_x, found, stack = _cover(l, r, xs, sat, sat_w, ell, inblock, sparse, bs,
                                            buf_p, buf_x, stack)
        for t in range(found):
            i = gl_access(ell, get_bits(sat, buf_p[t], sat_w))
            if cnt == cap:
                cap *= 2
                out_l = _grow(out_l, cap)
                out_r = _grow(out_r, cap)
            out_l[cnt] = i + l - buf_x[t]
            out_r[cnt] = i + r - buf_x[t]
            cnt += 1
    return out_l[:cnt].copy(), out_r[:cnt].copy()


@njit(cache=True)
def _grow(arr, cap):
    out = np.empty(cap, arr.dtype)
    out[:arr.shape[0]] = arr
    return out


@dataclass
class OccurrenceList:
    """Worklist output: primaries followed by secondaries, in generation order."""

    starts: np.ndarray
    ends: np.ndarray
    primary: np.ndarray

    def __len__(self) -> int:
        return len(self.starts)

    def __iter__(self):
        for l, r, p in zip(self.starts.tolist(), self.ends.tolist(), self.primary.tolist()):
            yield l, r, "primary" if p else "secondary"


class SourceGrid:
    """Copy-phrase sources with satellites, answering 2-sided range queries.

    Args:
        X: source starts sorted ascending (repeats allowed).
        satellites: 0-based rank into ``L`` of each point's phrase start.
        L: phrase starts with the sentinel ``n + 1``.
        block_size: block size of the range-maximum index over ``Y``.
    """

    def __init__(self, X: GapList, satellites, L: GapList, *, block_size: int = 32,
                 rmq: RmqIndex = None):
        self.X = X
        self.L = L
        sats = np.ascontiguousarray(satellites, dtype=np.int64)
        if sats.shape != (len(X),):
            raise ValueError("one satellite per point is required")
        self.sat_width = bit_width(len(L) - 1)
        self._sat = pack_bits(sats, self.sat_width)
        if rmq is None:
            rmq = RmqIndex(self.y_at, len(X), block_size=block_size, values=self._y_bulk(sats))
        self.rmq = rmq

    def _y_bulk(self, sats):
        if not len(self.X):
            return np.zeros(0, np.int64)
        return self.X.to_array() + np.diff(self.L.to_array())[sats] - 1

    def __len__(self) -> int:
        return len(self.X)

    def __repr__(self) -> str:
        return f"SourceGrid(points={len(self)})"

    def _args(self):
        return (self.X.state, self._sat, self.sat_width, self.L.state,
                self.rmq.inblock, self.rmq.sparse, self.rmq.block_size)

    def y_at(self, t: int) -> int:
        """y-coordinate of the 1-based point ``t``."""
        return int(_y_at(t - 1, self.X.state, self._sat, self.sat_width, self.L.state))

    def satellite(self, t: int) -> int:
        """Phrase start carried by the 1-based point ``t``."""
        return self.L.access(int(get_bits(self._sat, t - 1, self.sat_width)) + 1)

    def satellites(self) -> np.ndarray:
        return unpack_bits(self._sat, len(self), self.sat_width)

    def points(self) -> List[Tuple[int, int, int]]:
        """All points as (x, y, satellite phrase start), in x order."""
        if not len(self):
            return []
        xs = self.X.to_array()
        ell = self.L.to_array()
        s = self.satellites()
        ys = xs + ell[s + 1] - 1 - ell[s]
        return list(zip(xs.tolist(), ys.tolist(), ell[s].tolist()))

    def covering_sources(self, l: int, r: int) -> List[Tuple[int, int]]:
        """(x, satellite phrase start) of every point with x <= l and y >= r."""
        if not len(self):
            return []
        ranks = _covering(l, r, *self._args())
        return [(self.X.access(t + 1), self.satellite(t + 1)) for t in ranks.tolist()]

    def expand(self, prim_l, prim_r) -> OccurrenceList:
        prim_l = np.ascontiguousarray(prim_l, dtype=np.int64)
        prim_r = np.ascontiguousarray(prim_r, dtype=np.int64)
        if len(self):
            out_l, out_r = _expand(prim_l, prim_r, *self._args())
        else:
            out_l, out_r = prim_l.copy(), prim_r.copy()
        primary = np.zeros(out_l.size, dtype=bool)
        primary[:prim_l.size] = True
        return OccurrenceList(out_l, out_r, primary)

    # serialization -------------------------------------------------------

    def satellites_bytes(self) -> bytes:
        count = len(self)
        return (struct.pack("<QB", count, self.sat_width)
                + words_to_bytes(self._sat, count * self.sat_width))

    @classmethod
    def from_sections(cls, X: GapList, sat_buf, rmq_buf, L: GapList) -> "SourceGrid":
        head = struct.calcsize("<QB")
        count, width = struct.unpack_from("<QB", sat_buf, 0)
        if count != len(X) or width != bit_width(len(L) - 1):
            raise ValueError("satellite section does not match the grid")
        if len(sat_buf) != head + (count * width + 7) // 8:
            raise ValueError("satellite section has the wrong size")
        self = cls.__new__(cls)
        self.X, self.L, self.sat_width = X, L, width
        self._sat = bytes_to_words(sat_buf[head:], count * width)
        self.rmq = RmqIndex.from_bytes(rmq_buf, self.y_at)
        if self.rmq.n != count:
            raise ValueError("range-maximum tables do not match the grid")
        return self


def build_grid(parse: Parse, L: GapList, g: int = 32, b: int = 512,
               block_size: int = 32) -> SourceGrid:
    """One point per copy phrase, sorted by source start (stable in parse order)."""
    copies = np.flatnonzero(parse.src > 0)
    order = np.argsort(parse.src[copies], kind="stable")
    ranks = copies[order]
    X = GapList(parse.src[ranks], g, b, universe=max(parse.n, 1), strict=False)
    return SourceGrid(X, ranks, L, block_size=block_size)


def covering_sources(grid: SourceGrid, l: int, r: int) -> List[Tuple[int, int]]:
    return grid.covering_sources(l, r)


def expand_secondaries(grid: SourceGrid, primaries: Iterable[Tuple[int, int]]) -> OccurrenceList:
    pairs = np.array(list(primaries), dtype=np.int64).reshape(-1, 2)
    return grid.expand(pairs[:, 0], pairs[:, 1])
