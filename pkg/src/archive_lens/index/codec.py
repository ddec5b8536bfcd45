"""Binary primitives for snapshot files.

Every snapshot segment starts with the 4-byte magic, a format version
and its section name. All integers are little-endian; strings and blobs
are length-prefixed (u32 + UTF-8 bytes).
"""

from __future__ import annotations

import struct
from typing import BinaryIO

from ..errors import ArchiveLensError

MAGIC = b"ALXS"
FORMAT_VERSION = 1

_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")
_F64 = struct.Struct("<d")


class CorruptSnapshot(ArchiveLensError):
    """Snapshot file is truncated, mislabeled or from another version."""


def read_exact(buf: BinaryIO, n: int) -> bytes:
    data = buf.read(n)
    if len(data) != n:
        raise CorruptSnapshot(f"short read: wanted {n} bytes, got {len(data)}")
    return data


def write_u32(buf: BinaryIO, value: int) -> None:
    buf.write(_U32.pack(value))


def read_u32(buf: BinaryIO) -> int:
    return _U32.unpack(read_exact(buf, 4))[0]


def write_u64(buf: BinaryIO, value: int) -> None:
    buf.write(_U64.pack(value))


def read_u64(buf: BinaryIO) -> int:
    return _U64.unpack(read_exact(buf, 8))[0]


def write_f64(buf: BinaryIO, value: float) -> None:
    buf.write(_F64.pack(value))


def read_f64(buf: BinaryIO) -> float:
    return _F64.unpack(read_exact(buf, 8))[0]


def write_bytes(buf: BinaryIO, data: bytes) -> None:
    write_u32(buf, len(data))
    buf.write(data)


def read_bytes(buf: BinaryIO) -> bytes:
    return read_exact(buf, read_u32(buf))


def write_str(buf: BinaryIO, text: str) -> None:
    write_bytes(buf, text.encode("utf-8"))


def read_str(buf: BinaryIO) -> str:
    return read_bytes(buf).decode("utf-8")


def write_u32_list(buf: BinaryIO, values) -> None:
    write_u32(buf, len(values))
    buf.write(struct.pack(f"<{len(values)}I", *values))


def read_u32_list(buf: BinaryIO) -> tuple[int, ...]:
    count = read_u32(buf)
    return struct.unpack(f"<{count}I", read_exact(buf, 4 * count))


def write_header(buf: BinaryIO, section: str) -> None:
    buf.write(MAGIC)
    write_u32(buf, FORMAT_VERSION)
    write_str(buf, section)


def read_header(buf: BinaryIO, section: str) -> None:
    magic = read_exact(buf, 4)
    if magic != MAGIC:
        raise CorruptSnapshot(f"bad magic {magic!r} in {section}")
    version = read_u32(buf)
    if version != FORMAT_VERSION:
        raise CorruptSnapshot(f"unsupported format version {version} in {section}")
    found = read_str(buf)
    if found != section:
        raise CorruptSnapshot(f"section header says {found!r}, expected {section!r}")
