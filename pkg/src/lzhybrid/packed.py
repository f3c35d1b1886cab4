"""Space-efficient building blocks.

* fixed-width bit packing into little-endian 64-bit words,
* :class:`GapList`, a gap-coded increasing integer list with periodic raw
  values (random access) and periodic search samples (fast successor and
  predecessor search),
* :class:`RmqIndex`, a position-only range-maximum index. It keeps positions
  only; values are re-read through a caller-supplied accessor.

The hot paths are numba kernels operating on the packed arrays directly, so
other kernels (the source grid, the query pipeline) can call them without
going through Python objects.
"""

from __future__ import annotations

import struct
from typing import Callable, Optional, Tuple

import numpy as np
from numba import njit

_U1 = np.uint64(1)

MAX_WIDTH = 63


# --------------------------------------------------------------------------
# bit packing


@njit(cache=True, inline="always")
def get_bits(words, idx, width):
    # branch-free: always reads the next word (packed arrays carry a spare
    # word); the double shift keeps every shift amount below 64
    bit = idx * width
    w = bit >> 6
    off = bit & 63
    lo = words[w] >> np.uint64(off)
    hi = words[w + 1] << np.uint64(63 - off) << _U1
    return np.int64(lo | hi) & ((1 << width) - 1)


@njit(cache=True)
def _pack(values, width):
    n = values.shape[0]
    words = np.zeros((n * width + 63) // 64 + 1, np.uint64)
    for t in range(n):
        v = np.uint64(values[t])
        bit = t * width
        w = bit >> 6
        off = bit & 63
        words[w] |= v << np.uint64(off)
        if off + width > 64:
            words[w + 1] |= v >> np.uint64(64 - off)
    return words


@njit(cache=True)
def _unpack(words, count, width):
    out = np.empty(count, np.int64)
    for t in range(count):
        out[t] = get_bits(words, t, width)
    return out


def bit_width(value: int) -> int:
    """Bits needed for ``value`` written as floor(log2 value) + 1; at least 1."""
    return max(1, int(value).bit_length())


def pack_bits(values, width: int) -> np.ndarray:
    """Pack non-negative integers into ``width``-bit fields.

    The returned word array carries one spare word so that reads of the last
    field never index past the end.
    """
    if not 1 <= width <= MAX_WIDTH:
        raise ValueError(f"width must be in [1, {MAX_WIDTH}], got {width}")
    arr = np.ascontiguousarray(values, dtype=np.int64)
    if arr.size and (arr.min() < 0 or int(arr.max()) >> width):
        raise ValueError(f"values do not fit in {width} bits")
    return _pack(arr, width)


def unpack_bits(words: np.ndarray, count: int, width: int) -> np.ndarray:
    return _unpack(words, count, width)


def words_to_bytes(words: np.ndarray, nbits: int) -> bytes:
    """Serialize a packed stream, padded to a whole number of bytes."""
    return words.astype("<u8", copy=False).tobytes()[: (nbits + 7) // 8]


def bytes_to_words(buf, nbits: int) -> np.ndarray:
    nbytes = (nbits + 7) // 8
    if len(buf) < nbytes:
        raise ValueError("packed stream is shorter than its declared size")
    nwords = (nbits + 63) // 64 + 1
    raw = bytearray(nwords * 8)
    raw[:nbytes] = buf[:nbytes]
    return np.frombuffer(bytes(raw), dtype="<u8").astype(np.uint64)


# --------------------------------------------------------------------------
# gap-coded lists
#
# A list is handed to kernels as the tuple
#   (diffs, raws, samples, count, width_d, width_raw, g, b)
# with ranks 0-based. diffs[t] holds value[t + 1] - value[t].


@njit(cache=True, inline="always")
def gl_access(gl, k):
    diffs, raws, samples, count, wd, wr, g, b = gl
    blk = k // g
    v = get_bits(raws, blk, wr)
    for t in range(blk * g, k):
        v += get_bits(diffs, t, wd)
    return v


@njit(cache=True)
def gl_successor(gl, x):
    """Smallest stored value >= x as (rank, value); rank -1 if none."""
    diffs, raws, samples, count, wd, wr, g, b = gl
    if count == 0:
        return -1, 0
    nraw = (count - 1) // g + 1
    nsamp = (count - 1) // b + 1
    lo, hi = 0, nsamp
    while lo < hi:
        mid = (lo + hi) // 2
        if get_bits(samples, mid, wr) < x:
            lo = mid + 1
        else:
            hi = mid
    if lo == 0:
        return 0, get_bits(raws, 0, wr)
    step = b // g
    base = (lo - 1) * step
    lo, hi = base + 1, min(base + step, nraw)
    while lo < hi:
        mid = (lo + hi) // 2
        if get_bits(raws, mid, wr) < x:
            lo = mid + 1
        else:
            hi = mid
    ridx = lo - 1
    k = ridx * g
    v = get_bits(raws, ridx, wr)
    end = min(k + g, count)
    while True:
        if v >= x:
            return k, v
        k += 1
        if k >= end:
            break
        v += get_bits(diffs, k - 1, wd)
    if k < count:
        return k, get_bits(raws, ridx + 1, wr)
    return -1, 0


@njit(cache=True)
def gl_predecessor(gl, x):
    """Largest stored value <= x as (rank, value); rank -1 if none.

    With repeated values the last rank holding that value is returned.
    """
    diffs, raws, samples, count, wd, wr, g, b = gl
    if count == 0:
        return -1, 0
    nraw = (count - 1) // g + 1
    nsamp = (count - 1) // b + 1
    lo, hi = 0, nsamp
    while lo < hi:
        mid = (lo + hi) // 2
        if get_bits(samples, mid, wr) <= x:
            lo = mid + 1
        else:
            hi = mid
    if lo == 0:
        return -1, 0
    step = b // g
    base = (lo - 1) * step
    lo, hi = base + 1, min(base + step, nraw)
    while lo < hi:
        mid = (lo + hi) // 2
        if get_bits(raws, mid, wr) <= x:
            lo = mid + 1
        else:
            hi = mid
    ridx = lo - 1
    k = ridx * g
    v = get_bits(raws, ridx, wr)
    end = min(k + g, count)
    while k + 1 < end:
        nv = v + get_bits(diffs, k, wd)
        if nv > x:
            break
        k += 1
        v = nv
    return k, v


@njit(cache=True)
def gl_decode_all(gl):
    diffs, raws, samples, count, wd, wr, g, b = gl
    out = np.empty(count, np.int64)
    for k in range(count):
        if k % g == 0:
            out[k] = get_bits(raws, k // g, wr)
        else:
            out[k] = out[k - 1] + get_bits(diffs, k - 1, wd)
    return out


_GL_HEADER = struct.Struct("<QBBII")


class GapList:
    """Gap-coded increasing integer list.

    Differences between consecutive values are stored at a fixed width of
    ``floor(log2 d) + 1`` bits, ``d`` being the largest difference. Every
    ``g``-th value is also kept raw, and every ``b``-th value is copied into a
    sample array that narrows binary searches. Raw values and samples use
    ``floor(log2 universe) + 1`` bits.

    Ranks are 1-based in this class's public methods.

    Args:
        values: the list, strictly increasing (or non-decreasing when
            ``strict`` is False).
        g: raw-value period.
        b: search-sample period, a positive multiple of ``g``.
        universe: upper bound on the values; defaults to the last value.
        strict: reject repeated values.
    """

    def __init__(self, values, g: int = 32, b: int = 512,
                 universe: Optional[int] = None, strict: bool = True):
        vals = np.asarray(values, dtype=np.int64).ravel()
        if g < 1 or b < 1 or b % g:
            raise ValueError("b must be a positive multiple of g")
        diffs = np.diff(vals)
        if diffs.size and (diffs.min() <= 0 if strict else diffs.min() < 0):
            raise ValueError("not strictly increasing" if strict else "decreasing values")
        if vals.size and vals[0] < 0:
            raise ValueError("negative value")
        if universe is None:
            universe = int(vals[-1]) if vals.size else 1
        if vals.size and vals[-1] > universe:
            raise ValueError("value exceeds universe bound")
        self.count = int(vals.size)
        self.g = int(g)
        self.b = int(b)
        self.universe = int(universe)
        self.strict = strict
        self.width_d = bit_width(diffs.max()) if diffs.size else 1
        self.width_raw = bit_width(universe)
        self._diffs = pack_bits(diffs, self.width_d)
        self._raws = pack_bits(vals[:: self.g], self.width_raw)
        self._samples = pack_bits(vals[:: self.b], self.width_raw)
        self._state = self._make_state()

    def _make_state(self):
        return (self._diffs, self._raws, self._samples, self.count,
                self.width_d, self.width_raw, self.g, self.b)

    @property
    def state(self) -> tuple:
        """Tuple form consumed by numba kernels (0-based ranks)."""
        return self._state

    def __len__(self) -> int:
        return self.count

    def __repr__(self) -> str:
        return (f"GapList(count={self.count}, width_d={self.width_d}, "
                f"width_raw={self.width_raw}, g={self.g}, b={self.b})")

    def access(self, k: int) -> int:
        """Value at 1-based rank ``k``."""
        if not 1 <= k <= self.count:
            raise IndexError("rank out of range")
        return int(gl_access(self._state, k - 1))

    __getitem__ = access

    def successor(self, x: int) -> Optional[Tuple[int, int]]:
        """Smallest value >= x with its 1-based rank, or None."""
        rank, value = gl_successor(self._state, x)
        return None if rank < 0 else (int(rank) + 1, int(value))

    def predecessor(self, x: int) -> Optional[Tuple[int, int]]:
        """Largest value <= x with its 1-based rank, or None."""
        rank, value = gl_predecessor(self._state, x)
        return None if rank < 0 else (int(rank) + 1, int(value))

    def to_array(self) -> np.ndarray:
        return gl_decode_all(self._state)

    # sizes and serialization -------------------------------------------

    @property
    def n_raw(self) -> int:
        return (self.count - 1) // self.g + 1 if self.count else 0

    @property
    def n_samples(self) -> int:
        return (self.count - 1) // self.b + 1 if self.count else 0

    def _stream_bits(self):
        return (max(self.count - 1, 0) * self.width_d,
                self.n_raw * self.width_raw,
                self.n_samples * self.width_raw)

    def payload_bits(self) -> int:
        """Bits in the three packed streams, excluding metadata."""
        return sum(self._stream_bits())

    def to_bytes(self) -> bytes:
        nd, nr, ns = self._stream_bits()
        flags = self.width_d | (0 if self.strict else 0x80)
        header = _GL_HEADER.pack(self.count, flags, self.width_raw, self.g, self.b)
        return b"".join([
            header,
            struct.pack("<Q", self.universe),
            words_to_bytes(self._diffs, nd),
            words_to_bytes(self._raws, nr),
            words_to_bytes(self._samples, ns),
        ])

    @classmethod
    def from_bytes(cls, buf) -> "GapList":
        buf = memoryview(buf)
        if len(buf) < _GL_HEADER.size + 8:
            raise ValueError("truncated gap list")
        count, flags, width_raw, g, b = _GL_HEADER.unpack_from(buf, 0)
        (universe,) = struct.unpack_from("<Q", buf, _GL_HEADER.size)
        self = cls.__new__(cls)
        self.count, self.g, self.b, self.universe = count, g, b, universe
        self.width_d, self.strict = flags & 0x7F, not flags & 0x80
        self.width_raw = width_raw
        if g < 1 or b < 1 or b % g or not 1 <= self.width_d <= MAX_WIDTH \
                or not 1 <= width_raw <= MAX_WIDTH:
            raise ValueError("corrupt gap list header")
        pos = _GL_HEADER.size + 8
        streams = []
        for nbits in self._stream_bits():
            nbytes = (nbits + 7) // 8
            if pos + nbytes > len(buf):
                raise ValueError("truncated gap list")
            streams.append(bytes_to_words(buf[pos:pos + nbytes], nbits))
            pos += nbytes
        if pos != len(buf):
            raise ValueError("trailing bytes after gap list")
        self._diffs, self._raws, self._samples = streams
        self._state = self._make_state()
        return self


# --------------------------------------------------------------------------
# position-only range maximum
#
# Two levels: the leftmost maximum inside each block of ``block_size``
# positions (stored as an in-block offset), plus a sparse doubling table over
# blocks. Level l (l >= 1) of the table holds, for every block index c, the
# block whose maximum is the leftmost maximum over blocks [c, c + 2**l).


@njit(cache=True)
def _rmq_tables(values, bs):
    n = values.shape[0]
    nb = (n + bs - 1) // bs
    inblock = np.zeros(nb, np.int64)
    for blk in range(nb):
        start = blk * bs
        best = start
        for p in range(start + 1, min(start + bs, n)):
            if values[p] > values[best]:
                best = p
        inblock[blk] = best - start
    levels = 0
    while (1 << (levels + 1)) <= nb:
        levels += 1
    sparse = np.zeros((levels, max(nb, 1)), np.int64)
    for lev in range(1, levels + 1):
        half = 1 << (lev - 1)
        for c in range(nb - (1 << lev) + 1):
            a = c if lev == 1 else sparse[lev - 2, c]
            d = c + half if lev == 1 else sparse[lev - 2, c + half]
            pa = a * bs + inblock[a]
            pd = d * bs + inblock[d]
            sparse[lev - 1, c] = d if values[pd] > values[pa] else a
    return inblock, sparse


def _floor_log2(x: int) -> int:
    return x.bit_length() - 1


class RmqIndex:
    """Leftmost range-maximum positions over an implicitly accessed array.

    ``accessor`` maps a 1-based position to its value. Only positions are
    stored; every comparison re-reads values through the accessor.

    ``values`` may be passed to build the tables in bulk; it must equal the
    accessor over ``1..n``.
    """

    def __init__(self, accessor: Callable[[int], int], n: int, *,
                 block_size: int = 32, values=None):
        if n < 0:
            raise ValueError("negative size")
        if block_size < 1:
            raise ValueError("block_size must be positive")
        self.accessor = accessor
        self.n = int(n)
        self.block_size = int(block_size)
        if values is None:
            values = np.fromiter((accessor(p) for p in range(1, n + 1)),
                                 dtype=np.int64, count=n)
        values = np.ascontiguousarray(values, dtype=np.int64)
        if values.shape != (self.n,):
            raise ValueError("values length does not match n")
        self.inblock, self.sparse = _rmq_tables(values, self.block_size)

    @classmethod
    def from_tables(cls, accessor, n, block_size, inblock, sparse) -> "RmqIndex":
        self = cls.__new__(cls)
        self.accessor, self.n, self.block_size = accessor, int(n), int(block_size)
        self.inblock = np.ascontiguousarray(inblock, dtype=np.int64)
        self.sparse = np.ascontiguousarray(sparse, dtype=np.int64)
        return self

    @property
    def n_blocks(self) -> int:
        return len(self.inblock)

    def _block_best(self, c: int, d: int) -> int:
        """0-based position of the leftmost maximum over blocks [c, d]."""
        bs, val = self.block_size, self.accessor
        lev = _floor_log2(d - c + 1)
        if lev == 0:
            a = e = c
        else:
            a = int(self.sparse[lev - 1, c])
            e = int(self.sparse[lev - 1, d - (1 << lev) + 1])
        pa = a * bs + int(self.inblock[a])
        pe = e * bs + int(self.inblock[e])
        return pe if val(pe + 1) > val(pa + 1) else pa

    def query(self, lo: int, hi: int) -> int:
        """1-based position of the leftmost maximum in ``[lo, hi]``."""
        if self.n == 0 or not 1 <= lo <= hi <= self.n:
            raise IndexError("bad range")
        val, bs = self.accessor, self.block_size
        lo -= 1
        hi -= 1
        bl, bh = lo // bs, hi // bs
        if bl == bh:
            best, bv = lo, val(lo + 1)
            for p in range(lo + 1, hi + 1):
                v = val(p + 1)
                if v > bv:
                    best, bv = p, v
            return best + 1
        best, bv = lo, val(lo + 1)
        for p in range(lo + 1, (bl + 1) * bs):
            v = val(p + 1)
            if v > bv:
                best, bv = p, v
        if bl + 1 <= bh - 1:
            p = self._block_best(bl + 1, bh - 1)
            v = val(p + 1)
            if v > bv:
                best, bv = p, v
        for p in range(bh * bs, hi + 1):
            v = val(p + 1)
            if v > bv:
                best, bv = p, v
        return best + 1

    # serialization -------------------------------------------------------

    def table_widths(self) -> Tuple[int, int]:
        return bit_width(max(self.block_size - 1, 1)), bit_width(max(self.n_blocks - 1, 1))

    def to_bytes(self) -> bytes:
        w_in, w_blk = self.table_widths()
        levels = self.sparse.shape[0]
        nb = self.n_blocks
        flat = self.sparse[:, :nb].ravel() if levels else np.zeros(0, np.int64)
        return b"".join([
            struct.pack("<QIIBB", self.n, self.block_size, levels, w_in, w_blk),
            words_to_bytes(pack_bits(self.inblock, w_in), nb * w_in),
            words_to_bytes(pack_bits(flat, w_blk), flat.size * w_blk),
        ])

    @classmethod
    def from_bytes(cls, buf, accessor) -> "RmqIndex":
        buf = memoryview(buf)
        head = struct.calcsize("<QIIBB")
        if len(buf) < head:
            raise ValueError("truncated range-maximum tables")
        n, bs, levels, w_in, w_blk = struct.unpack_from("<QIIBB", buf, 0)
        if bs < 1 or not (1 <= w_in <= MAX_WIDTH and 1 <= w_blk <= MAX_WIDTH):
            raise ValueError("corrupt range-maximum header")
        nb = (n + bs - 1) // bs
        n_in, n_sp = (nb * w_in + 7) // 8, (levels * nb * w_blk + 7) // 8
        if len(buf) != head + n_in + n_sp:
            raise ValueError("range-maximum tables have the wrong size")
        inblock = unpack_bits(bytes_to_words(buf[head:head + n_in], nb * w_in), nb, w_in)
        flat = unpack_bits(bytes_to_words(buf[head + n_in:], levels * nb * w_blk),
                           levels * nb, w_blk)
        sparse = flat.reshape(levels, nb) if levels else np.zeros((0, max(nb, 1)), np.int64)
        return cls.from_tables(accessor, n, bs, inblock, sparse)
