"""Shared binary envelope for replay and weight files.

Layout: 4 magic bytes, u8 version, u32 little-endian header length,
header as UTF-8 JSON, then a raw payload of little-endian f32 arrays
with no padding.  Header JSON is serialized with sorted keys so equal
inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .errors import BadMagic, TruncatedBody

VERSION = 1

_PREFIX = struct.Struct("<4sBI")


def pack_header(magic: bytes, header: dict) -> bytes:
    blob = json.dumps(header, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode("utf-8")
    return _PREFIX.pack(magic, VERSION, len(blob)) + blob


def split_envelope(data: bytes, magic: bytes) -> tuple[dict, bytes]:
    """Validate magic/version and return (header, payload)."""
    if len(data) < _PREFIX.size:
        raise BadMagic("file shorter than envelope prefix")
    got_magic, version, header_len = _PREFIX.unpack_from(data)
    if got_magic != magic:
        raise BadMagic(f"expected magic {magic!r}, found {got_magic!r}")
    if version != VERSION:
        raise BadMagic(f"unsupported version {version}")
    if len(data) < _PREFIX.size + header_len:
        raise TruncatedBody("header extends past end of file")
    blob = data[_PREFIX.size : _PREFIX.size + header_len]
    try:
        header = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise BadMagic(f"header is not valid JSON: {exc}") from exc
    return header, data[_PREFIX.size + header_len :]


def f32_bytes(array: np.ndarray) -> bytes:
    """Little-endian f32 bytes of ``array`` (C order)."""
    return np.ascontiguousarray(array, dtype="<f4").tobytes()


def take_f32(payload: bytes, offset: int, count: int, what: str) -> tuple[np.ndarray, int]:
    """Read ``count`` little-endian f32 values starting at ``offset``."""
    end = offset + 4 * count
    if end > len(payload):
        raise TruncatedBody(f"payload ends inside {what}")
    return np.frombuffer(payload, dtype="<f4", count=count, offset=offset), end
