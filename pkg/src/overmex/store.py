"""Table serialization and the on-disk coefficient cache.

Cache file layout (little endian)::

    b"OVMX" | u32 format_version | u32 r | u32 T | u32 len(mode) | mode (ascii)
    | u64 len(payload) | payload | sha256 of everything before it

``mode`` is ``"exact"`` or ``"mod<M>"``; the payload is the coefficient
table as newline separated decimal strings.
"""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, TextIO

log = logging.getLogger(__name__)

MAGIC = b"OVMX"
FORMAT_VERSION = 1
CACHE_ENV = "OVERMEX_CACHE_DIR"
FORMATS = ("csv", "jsonl")

_HEAD = struct.Struct("<4sIII")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")
_DIGEST = 32


class UnsupportedFormat(ValueError):
    pass


class CorruptCache(Exception):
    pass


class VersionMismatch(Exception):
    pass


@dataclass(frozen=True)
class CacheKey:
    r: int
    T: int
    modulus: Optional[int] = None

    @property
    def mode(self) -> str:
        return "exact" if self.modulus is None else f"mod{self.modulus}"

    def filename(self) -> str:
        return f"srmex_r{self.r}_T{self.T}_{self.mode}.bin"


@dataclass(frozen=True)
class CacheEntry:
    key: CacheKey
    payload: tuple
    checksum: bytes
    format_version: int = FORMAT_VERSION


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "overmex"


def encode_entry(key: CacheKey, payload: Sequence[int], version: Optional[int] = None) -> bytes:
    if version is None:
        version = FORMAT_VERSION
    mode = key.mode.encode("ascii")
    body = "\n".join(str(v) for v in payload).encode("ascii")
    blob = (
        _HEAD.pack(MAGIC, version, key.r, key.T)
        + _U32.pack(len(mode)) + mode
        + _U64.pack(len(body)) + body
    )
    return blob + hashlib.sha256(blob).digest()


def decode_entry(blob: bytes) -> CacheEntry:
    if len(blob) < _HEAD.size + _DIGEST:
        raise CorruptCache("cache file too short")
    magic, version, r, T = _HEAD.unpack_from(blob, 0)
    if magic != MAGIC:
        raise CorruptCache("bad magic bytes")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"cache format {version}, expected {FORMAT_VERSION}")
    data, digest = blob[:-_DIGEST], blob[-_DIGEST:]
    if hashlib.sha256(data).digest() != digest:
        raise CorruptCache("checksum mismatch")
    pos = _HEAD.size
    (mlen,) = _U32.unpack_from(data, pos)
    pos += _U32.size
    mode = data[pos:pos + mlen].decode("ascii")
    pos += mlen
    (plen,) = _U64.unpack_from(data, pos)
    pos += _U64.size
    body = data[pos:pos + plen]
    if len(body) != plen or pos + plen != len(data):
        raise CorruptCache("payload length mismatch")
    payload = tuple(int(x) for x in body.decode("ascii").split("\n"))
    modulus = None if mode == "exact" else int(mode[3:])
    key = CacheKey(r, T, modulus)
    if len(payload) != T + 1:
        raise CorruptCache(f"payload has {len(payload)} entries, expected {T + 1}")
    return CacheEntry(key=key, payload=payload, checksum=digest, format_version=version)


def cache_store(cache_dir: Path, key: CacheKey, payload: Sequence[int]) -> Path:
    """Write atomically (temp file + rename) and return the path."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    target = cache_dir / key.filename()
    fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=".tmp-", suffix=".bin")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(encode_entry(key, payload))
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return target


def cache_load(cache_dir: Path, key: CacheKey) -> Optional[CacheEntry]:
    """Load an entry; None on a miss.  Raises CorruptCache / VersionMismatch."""
    path = Path(cache_dir) / key.filename()
    try:
        blob = path.read_bytes()
    except FileNotFoundError:
        return None
    entry = decode_entry(blob)
    if entry.key != key:
        raise CorruptCache(f"{path.name} holds {entry.key}, not {key}")
    return entry


class TableCache:
    """Coefficient tables keyed by (r, T, mode), recomputed on any miss."""

    def __init__(self, cache_dir: Optional[Path] = None, enabled: bool = True):
        self.cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
        self.enabled = enabled

    def get(self, key: CacheKey, compute: Callable[[], Sequence[int]]) -> tuple:
        if not self.enabled:
            return tuple(compute())
        try:
            entry = cache_load(self.cache_dir, key)
        except VersionMismatch:
            entry = None
        except CorruptCache as exc:
            log.warning("discarding corrupt cache entry %s: %s", key.filename(), exc)
            entry = None
        if entry is not None:
            return entry.payload
        payload = tuple(compute())
        try:
            cache_store(self.cache_dir, key, payload)
        except OSError as exc:
            log.warning("could not write cache entry %s: %s", key.filename(), exc)
        return payload


def write_rows(fh: TextIO, header: Sequence[str], rows: Iterable[Sequence], fmt: str):
    """Write rows as CSV (with header) or JSON lines; every value as a string."""
    if fmt == "csv":
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([str(v) for v in row])
    elif fmt == "jsonl":
        for row in rows:
            fh.write(json.dumps({h: str(v) for h, v in zip(header, row)}) + "\n")
    else:
        raise UnsupportedFormat(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
