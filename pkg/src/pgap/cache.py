"""
On-disk cycle cache, one file per stage (``gapcycle.{k}.pgc``).

Layout, little-endian::

    b"PGC1"
    u32  stage k
    u64  p_k
    u64  Phi_k
    u64  Pi_k low word
    u64  Pi_k high word
    u16  gaps[Phi_k]
    u32  CRC32 of every preceding byte
"""

from __future__ import annotations

import os
import struct
import zlib
from pathlib import Path

import numpy as np

from pgap.gapcycle import GapCycle

__all__ = ["MAGIC", "CacheCorruptError", "encode_cycle", "decode_cycle", "save_cycle", "load_cycle"]

MAGIC = b"PGC1"
_HEADER = struct.Struct("<4sIQQQQ")
_CRC = struct.Struct("<I")
_MASK64 = (1 << 64) - 1


class CacheCorruptError(ValueError):
    """Cache file fails its magic, size, or checksum test; rebuild it."""


def encode_cycle(cycle: GapCycle) -> bytes:
    if cycle.span >> 128:
        raise ValueError("span does not fit in 128 bits")
    head = _HEADER.pack(MAGIC, cycle.k, cycle.p, cycle.length,
                        cycle.span & _MASK64, cycle.span >> 64)
    body = head + cycle.gaps.astype("<u2", copy=False).tobytes()
    return body + _CRC.pack(zlib.crc32(body))


def decode_cycle(data: bytes) -> GapCycle:
    if len(data) < _HEADER.size + _CRC.size:
        raise CacheCorruptError("file too short")
    magic, k, p, phi, lo, hi = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheCorruptError(f"bad magic {magic!r}")
    expected = _HEADER.size + 2 * phi + _CRC.size
    if len(data) != expected:
        raise CacheCorruptError(f"size {len(data)} bytes, header implies {expected}")
    (crc,) = _CRC.unpack_from(data, len(data) - _CRC.size)
    if zlib.crc32(data[: -_CRC.size]) != crc:
        raise CacheCorruptError("checksum mismatch")
    gaps = np.frombuffer(data, dtype="<u2", count=phi, offset=_HEADER.size)
    return GapCycle(k, p, gaps.astype(np.uint16), lo | (hi << 64), phi)


def save_cycle(cycle: GapCycle, path: str | Path) -> Path:
    """Write atomically (temp file + rename)."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(encode_cycle(cycle))
    os.replace(tmp, path)
    return path


def load_cycle(path: str | Path) -> GapCycle:
    return decode_cycle(Path(path).read_bytes())
