"""Index container format.

Layout, little-endian throughout::

    magic  b"HYBX"
    u16    format version
    u16    section count
    count x (u16 id, u64 offset, u64 length)    offsets from file start
    section payloads, in table order
    u32    CRC32 over the concatenated section payloads
"""

from __future__ import annotations

import enum
import struct
import zlib
from typing import Dict, Mapping

MAGIC = b"HYBX"
VERSION = 1

_PREAMBLE = struct.Struct("<4sHH")
_ENTRY = struct.Struct("<HQQ")
_CRC = struct.Struct("<I")


class Section(enum.IntEnum):
    HEADER = 1
    KERNEL = 2
    L = 3
    L_MK = 4
    FIRST_OCC = 5
    SUFFIX_ARRAY = 6
    X = 7
    SATELLITES = 8
    RMQ = 9


class IndexFormatError(ValueError):
    """Base class for unreadable index files."""


class BadMagicError(IndexFormatError):
    pass


class VersionMismatchError(IndexFormatError):
    pass


class TruncatedIndexError(IndexFormatError):
    pass


class ChecksumError(IndexFormatError):
    pass


def pack_sections(sections: Mapping[int, bytes]) -> bytes:
    """Serialize sections in ascending id order."""
    ids = sorted(sections)
    offset = _PREAMBLE.size + _ENTRY.size * len(ids)
    table, payload = [], []
    for sid in ids:
        data = bytes(sections[sid])
        table.append(_ENTRY.pack(int(sid), offset, len(data)))
        payload.append(data)
        offset += len(data)
    body = b"".join(payload)
    return b"".join([_PREAMBLE.pack(MAGIC, VERSION, len(ids)), *table, body,
                     _CRC.pack(zlib.crc32(body))])


def unpack_sections(buf) -> Dict[int, memoryview]:
    """Validate a container and return its sections by id."""
    buf = memoryview(buf)
    if len(buf) < len(MAGIC) or bytes(buf[:len(MAGIC)]) != MAGIC:
        raise BadMagicError("bad magic: not a hybrid index file")
    if len(buf) < _PREAMBLE.size:
        raise TruncatedIndexError("truncated index: incomplete preamble")
    _, version, count = _PREAMBLE.unpack_from(buf, 0)
    if version != VERSION:
        raise VersionMismatchError(f"version mismatch: file has {version}, expected {VERSION}")
    body_start = _PREAMBLE.size + _ENTRY.size * count
    if len(buf) < body_start + _CRC.size:
        raise TruncatedIndexError("truncated index: incomplete section table")
    sections: Dict[int, memoryview] = {}
    pos = body_start
    for t in range(count):
        sid, offset, length = _ENTRY.unpack_from(buf, _PREAMBLE.size + t * _ENTRY.size)
        if offset != pos or sid in sections:
            raise IndexFormatError("corrupt section table")
        if offset + length + _CRC.size > len(buf):
            raise TruncatedIndexError(f"truncated index: section {sid} runs past the end")
        sections[sid] = buf[offset:offset + length]
        pos = offset + length
    if pos + _CRC.size != len(buf):
        raise IndexFormatError("trailing bytes after checksum")
    (crc,) = _CRC.unpack_from(buf, pos)
    if zlib.crc32(buf[body_start:pos]) != crc:
        raise ChecksumError("checksum failure: index file is corrupt")
    return sections


def overhead_bytes(n_sections: int) -> int:
    """Bytes outside the section payloads: preamble, table and checksum."""
    return _PREAMBLE.size + _ENTRY.size * n_sections + _CRC.size
