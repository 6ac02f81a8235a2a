"""Binary cache file for :class:`GoldbachCountTable`.

Layout, all little-endian::

    b"GBQ2" | version u16 | n u64 | Q2(2k) for k = 3..n as u64 | checksum u64

The checksum is the sum of the stored counts modulo 2**64.  Prefix sums are
rebuilt on load.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .errors import CorruptCacheError
from .table import GoldbachCountTable

MAGIC = b"GBQ2"
VERSION = 1
_HEADER = struct.Struct("<4sHQ")
_TRAILER = struct.Struct("<Q")
LOADED_TAG = "cache"


def _checksum(values: np.ndarray) -> int:
    # uint64 addition wraps, which is exactly the mod 2**64 sum.
    return int(np.sum(values, dtype=np.uint64))


def save_table(table: GoldbachCountTable, path) -> Path:
    path = Path(path)
    values = table.q2.astype("<u8")
    payload = _HEADER.pack(MAGIC, VERSION, table.n) + values.tobytes() + _TRAILER.pack(_checksum(values))
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(payload)
    os.replace(tmp, path)
    return path


def load_table(path) -> GoldbachCountTable:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size + _TRAILER.size:
        raise CorruptCacheError(f"{path}: truncated header")
    magic, version, n = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorruptCacheError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CorruptCacheError(f"{path}: unsupported version {version}")
    if n < 3:
        raise CorruptCacheError(f"{path}: invalid n={n}")
    expected = _HEADER.size + 8 * (n - 2) + _TRAILER.size
    if len(data) != expected:
        raise CorruptCacheError(f"{path}: length {len(data)} != expected {expected}")
    values = np.frombuffer(data, dtype="<u8", count=n - 2, offset=_HEADER.size)
    (stored,) = _TRAILER.unpack_from(data, expected - _TRAILER.size)
    if _checksum(values) != stored:
        raise CorruptCacheError(f"{path}: checksum mismatch")
    if values.size and int(values.max()) > np.iinfo(np.int64).max:
        raise CorruptCacheError(f"{path}: count out of range")
    counts = np.zeros(n + 1, dtype=np.int64)
    counts[3:] = values
    return GoldbachCountTable(int(n), counts, LOADED_TAG)


def default_cache_dir() -> Path:
    env = os.environ.get("GOLDBACH_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "goldbach_lab"


def cache_path_for(n: int, cache_dir=None) -> Path:
    return Path(cache_dir or default_cache_dir()) / f"q2-{n}.gbq2"
