"""The assembled index with an estimator-style interface.

``HybridIndex(max_length=M, max_edits=K).fit(text)`` parses the text, builds
the kernel, a suffix array over the kernel and the source grid. ``query``
finds kernel matches, keeps the primary ones, maps them to text coordinates
and expands them into every secondary match.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .fileformat import IndexFormatError, Section, overhead_bytes, pack_sections, unpack_sections
from .filtered import FilteredText, FilterParams, build_filtered
from .grid import SourceGrid, build_grid
from .inner import SuffixArrayIndex, approx_intervals, build_inner
from .lz77 import Parse, parse
from .packed import GapList, bit_width, bytes_to_words, pack_bits, unpack_bits, words_to_bytes
from .validation import check_int, check_pattern, check_text, choose_separator

_HEADER = struct.Struct("<QIIIIBIQ")
_RANKS = struct.Struct("<QB")

SECTION_NAMES = {
    Section.KERNEL: "kernel",
    Section.L: "L",
    Section.L_MK: "L_MK",
    Section.FIRST_OCC: "first_occ",
    Section.SUFFIX_ARRAY: "suffix_array",
    Section.X: "X",
    Section.SATELLITES: "satellites",
    Section.RMQ: "rmq",
}


@dataclass
class QueryResult:
    """Matches of one query, sorted by (start, end).

    ``starts``/``ends`` are 1-based inclusive text positions; ``primary``
    tags each interval.
    """

    pattern: bytes
    k: int
    starts: np.ndarray
    ends: np.ndarray
    primary: np.ndarray

    def __len__(self) -> int:
        return len(self.starts)

    @property
    def occurrences(self) -> List[Tuple[int, int, str]]:
        return [(l, r, "primary" if p else "secondary")
                for l, r, p in zip(self.starts.tolist(), self.ends.tolist(), self.primary.tolist())]

    def intervals(self) -> List[Tuple[int, int]]:
        return list(zip(self.starts.tolist(), self.ends.tolist()))


def _pack_ranks(values: np.ndarray, width: int) -> bytes:
    return _RANKS.pack(len(values), width) + words_to_bytes(pack_bits(values, width), len(values) * width)


def _unpack_ranks(buf) -> np.ndarray:
    count, width = _RANKS.unpack_from(buf, 0)
    if len(buf) != _RANKS.size + (count * width + 7) // 8:
        raise ValueError("rank array section has the wrong size")
    return unpack_bits(bytes_to_words(buf[_RANKS.size:], count * width), count, width)


def _recover_parse(ft: FilteredText, grid: SourceGrid) -> Parse:
    """Rebuild the parse from the stored lists: literals from the kernel, copies from the grid."""
    ell = ft.L.to_array()
    z = len(ell) - 1
    length = np.diff(ell)
    src = np.zeros(z, np.int64)
    if len(grid):
        src[grid.satellites()] = grid.X.to_array()
    char = np.zeros(z, np.uint8)
    lit = ft.first_occ
    char[lit] = ft.kernel_array[ft.L_MK.to_array()[lit] - 1]
    return Parse(ft.n, src, length, char)


class HybridIndex(BaseEstimator):
    """Pattern-matching index for repetitive byte texts.

    Args:
        max_length: longest pattern the index answers (``M``).
        max_edits: largest edit distance the index answers (``K``).
        gap_period: raw-value period ``g`` of the gap-coded lists.
        sample_period: search-sample period ``b`` (a multiple of ``g``).
        sep_count: separator run length; ``None`` means ``max_edits + 1``.
        separator: separator byte; ``None`` picks ``#`` or the smallest byte
            absent from the text.

    Fitted attributes:
        parse_, filtered_, inner_, grid_, n_, separator_.
    """

    def __init__(self, max_length: int = 100, max_edits: int = 0, gap_period: int = 32,
                 sample_period: int = 512, sep_count: Optional[int] = None,
                 separator: Optional[int] = None):
        self.max_length = max_length
        self.max_edits = max_edits
        self.gap_period = gap_period
        self.sample_period = sample_period
        self.sep_count = sep_count
        self.separator = separator

    def _filter_params(self, sep: int) -> FilterParams:
        return FilterParams(self.max_length, self.max_edits, sep, self.sep_count)

    def fit(self, X, y=None) -> "HybridIndex":
        """Build the index over the byte text ``X``."""
        text = check_text(X)
        g = check_int(self.gap_period, "gap_period", 1)
        b = check_int(self.sample_period, "sample_period", 1)
        if b % g:
            raise ValueError("sample_period must be a multiple of gap_period")
        if self.separator is None:
            sep = choose_separator(text)
        else:
            sep = check_int(self.separator, "separator")
            if sep > 255:
                raise ValueError("separator must be a byte value")
        params = self._filter_params(sep)
        self.parse_ = parse(text)
        self.filtered_ = build_filtered(text, self.parse_, params, g, b)
        self.inner_ = build_inner(self.filtered_.kernel)
        self.grid_ = build_grid(self.parse_, self.filtered_.L, g, b)
        self.n_ = len(text)
        self.separator_ = sep
        return self

    def __sklearn_is_fitted__(self) -> bool:
        return hasattr(self, "grid_")

    @property
    def z(self) -> int:
        check_is_fitted(self)
        return self.filtered_.z

    def query(self, pattern, k: int = 0) -> QueryResult:
        """Every text interval within edit distance ``k`` of ``pattern``."""
        check_is_fitted(self)
        ft = self.filtered_
        pattern = check_pattern(pattern, k, ft.params.max_length, ft.params.max_edits)
        if k == 0:
            starts = self.inner_.exact_starts(pattern)
            ends = starts + (len(pattern) - 1)
        else:
            starts, ends, _ = approx_intervals(ft.kernel_array, pattern, k)
        pl, pr = ft.primary_ranges(starts, ends)
        if k and pl.size:
            pairs = np.unique(np.stack([pl, pr], axis=1), axis=0)
            pl, pr = pairs[:, 0].copy(), pairs[:, 1].copy()
        occ = self.grid_.expand(pl, pr)
        order = np.lexsort((occ.ends, occ.starts))
        return QueryResult(pattern, k, occ.starts[order], occ.ends[order], occ.primary[order])

    # serialization -------------------------------------------------------

    def _sections(self) -> Dict[int, bytes]:
        ft, grid = self.filtered_, self.grid_
        p = ft.params
        header = _HEADER.pack(self.n_, p.max_length, p.max_edits, ft.L.g, ft.L.b,
                              p.sep, p.sep_count, ft.z)
        return {
            Section.HEADER: header,
            Section.KERNEL: ft.kernel,
            Section.L: ft.L.to_bytes(),
            Section.L_MK: ft.L_MK.to_bytes(),
            Section.FIRST_OCC: _pack_ranks(ft.first_occ, bit_width(max(ft.z - 1, 1))),
            Section.SUFFIX_ARRAY: self.inner_.sa_bytes(),
            Section.X: grid.X.to_bytes(),
            Section.SATELLITES: grid.satellites_bytes(),
            Section.RMQ: grid.rmq.to_bytes(),
        }

    def to_bytes(self) -> bytes:
        check_is_fitted(self)
        return pack_sections(self._sections())

    def save(self, path: Union[str, Path]) -> int:
        data = self.to_bytes()
        Path(path).write_bytes(data)
        return len(data)

    @classmethod
    def from_bytes(cls, buf) -> "HybridIndex":
        sections = unpack_sections(buf)
        missing = [s.name for s in Section if s not in sections]
        if missing:
            raise IndexFormatError(f"index is missing sections: {', '.join(missing)}")
        try:
            return cls._from_sections(sections)
        except (ValueError, IndexError, struct.error) as exc:
            raise IndexFormatError(f"corrupt index: {exc}") from exc

    @classmethod
    def _from_sections(cls, sections) -> "HybridIndex":
        n, M, K, g, b, sep, sep_count, z = _HEADER.unpack(sections[Section.HEADER])
        self = cls(max_length=M, max_edits=K, gap_period=g, sample_period=b,
                   sep_count=sep_count, separator=sep)
        params = self._filter_params(sep)
        L = GapList.from_bytes(sections[Section.L])
        L_MK = GapList.from_bytes(sections[Section.L_MK])
        if len(L) != z + 1 or len(L_MK) != z:
            raise ValueError("phrase lists do not match the header")
        first_occ = _unpack_ranks(sections[Section.FIRST_OCC])
        kernel = bytes(sections[Section.KERNEL])
        self.filtered_ = FilteredText(kernel, L, L_MK, first_occ, n, params)
        self.inner_ = SuffixArrayIndex.from_sa_bytes(kernel, sections[Section.SUFFIX_ARRAY])
        X = GapList.from_bytes(sections[Section.X])
        self.grid_ = SourceGrid.from_sections(X, sections[Section.SATELLITES],
                                              sections[Section.RMQ], L)
        self.n_ = n
        self.separator_ = sep
        self.parse_ = _recover_parse(self.filtered_, self.grid_)
        return self

    @classmethod
    def load(cls, path: Union[str, Path]) -> "HybridIndex":
        return cls.from_bytes(Path(path).read_bytes())

    def stats(self) -> dict:
        """Per-section sizes in bytes plus summary counts."""
        check_is_fitted(self)
        sections = self._sections()
        sizes = {SECTION_NAMES[s]: len(sections[s]) for s in SECTION_NAMES}
        payload = sum(len(v) for v in sections.values())
        kernel = len(self.filtered_.kernel)
        return {
            "n": self.n_,
            "z": self.filtered_.z,
            "kernel_length": kernel,
            "kernel_ratio": kernel / self.n_,
            "grid_points": len(self.grid_),
            "sections": sizes,
            "header_bytes": len(sections[Section.HEADER]),
            "payload_bytes": payload,
            "file_bytes": payload + overhead_bytes(len(sections)),
        }
