"""LZ77-based hybrid pattern-matching index for repetitive byte texts."""

from .estimator import HybridIndex, QueryResult
from .fileformat import (BadMagicError, ChecksumError, IndexFormatError, TruncatedIndexError,
                         VersionMismatchError)
from .filtered import Classification, FilteredText, FilterParams, build_filtered
from .grid import OccurrenceList, SourceGrid, build_grid, covering_sources, expand_secondaries
from .inner import KernelMatch, SuffixArrayIndex, build_inner, locate_approx, locate_exact
from .lz77 import Copy, Literal, Parse, decode, parse, phrase_starts
from .packed import GapList, RmqIndex
from .validation import QueryBoundsError, SeparatorCollisionError

__all__ = [
    "BadMagicError", "ChecksumError", "Classification", "Copy", "FilterParams", "FilteredText",
    "GapList", "HybridIndex", "IndexFormatError", "KernelMatch", "Literal", "OccurrenceList",
    "Parse", "QueryBoundsError", "QueryResult", "RmqIndex", "SeparatorCollisionError",
    "SourceGrid", "SuffixArrayIndex", "TruncatedIndexError", "VersionMismatchError",
    "build_filtered", "build_grid", "build_inner", "covering_sources", "decode",
    "expand_secondaries", "locate_approx", "locate_exact", "parse", "phrase_starts",
]
