"""Self-contained reader for a defined subset of zarr v2 stores.

Supported: C-order arrays; little-endian or byte-order-free dtypes
(int8..64, uint8..64, float32/64, fixed-width unicode, vlen-utf8 object
arrays); compressors none, zlib, and gzip; missing chunks filled with the
header's fill value. Everything else is rejected with a specific error
rather than silently misread.
"""

from __future__ import annotations

import gzip
import json
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import (
    CellpopError,
    CorruptChunkError,
    MissingKeyError,
    UnsupportedCompressorError,
    UnsupportedDtypeError,
)

_NUMERIC_DTYPES = {
    "i1", "i2", "i4", "i8",
    "u1", "u2", "u4", "u8",
    "f4", "f8",
}


@dataclass(frozen=True)
class ZarrArrayHeader:
    """Decoded .zarray metadata for one array."""

    shape: tuple[int, ...]
    dtype: str  # normalized, e.g. "i8", "U12", "vlen-utf8"
    chunks: tuple[int, ...]
    compressor: str  # none | zlib | gzip
    fill_value: object

    @property
    def numpy_dtype(self) -> np.dtype | None:
        if self.dtype == "vlen-utf8":
            return None
        return np.dtype("<" + self.dtype)


def _load_json(path: Path) -> dict:
    if not path.is_file():
        raise MissingKeyError(str(path))
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _normalize_dtype(raw: str, filters: list | None) -> str:
    if not isinstance(raw, str) or not raw:
        raise UnsupportedDtypeError(str(raw))
    if raw in ("|O", "O"):
        filter_ids = [f.get("id") for f in (filters or [])]
        if filter_ids != ["vlen-utf8"]:
            raise UnsupportedDtypeError(f"{raw} with filters {filter_ids}")
        return "vlen-utf8"
    if filters:
        raise UnsupportedDtypeError(f"{raw} with filters")
    byte_order, code = raw[0], raw[1:]
    if byte_order not in ("<", "|"):
        raise UnsupportedDtypeError(raw)
    if code in _NUMERIC_DTYPES:
        return code
    if code.startswith("U") and code[1:].isdigit() and int(code[1:]) > 0:
        return code
    raise UnsupportedDtypeError(raw)


def read_array_header(array_dir: Path) -> ZarrArrayHeader:
    doc = _load_json(array_dir / ".zarray")
    if doc.get("zarr_format") != 2:
        raise CellpopError(
            f"unsupported zarr_format {doc.get('zarr_format')!r} (need 2)"
        )
    if doc.get("order") != "C":
        raise CellpopError(f"unsupported chunk order {doc.get('order')!r} (need C)")
    shape = tuple(int(d) for d in doc["shape"])
    chunks = tuple(int(d) for d in doc["chunks"])
    if len(shape) != len(chunks) or any(d <= 0 for d in chunks):
        raise CellpopError(f"bad chunk geometry {chunks} for shape {shape}")
    compressor_doc = doc.get("compressor")
    if compressor_doc is None:
        compressor = "none"
    else:
        compressor = compressor_doc.get("id", "?")
        if compressor not in ("zlib", "gzip"):
            raise UnsupportedCompressorError(compressor)
    dtype = _normalize_dtype(doc.get("dtype", ""), doc.get("filters"))
    return ZarrArrayHeader(
        shape=shape,
        dtype=dtype,
        chunks=chunks,
        compressor=compressor,
        fill_value=doc.get("fill_value"),
    )


def _decompress(payload: bytes, compressor: str, path: Path) -> bytes:
    try:
        if compressor == "zlib":
            return zlib.decompress(payload)
        if compressor == "gzip":
            return gzip.decompress(payload)
        return payload
    except Exception as exc:
        raise CorruptChunkError(str(path), f"decompression failed: {exc}") from exc


def _decode_vlen_utf8(payload: bytes, expected: int, path: Path) -> list[str]:
    if len(payload) < 4:
        raise CorruptChunkError(str(path), "vlen header truncated")
    (count,) = struct.unpack_from("<I", payload, 0)
    if count != expected:
        raise CorruptChunkError(
            str(path), f"vlen item count {count}, chunk holds {expected}"
        )
    items = []
    offset = 4
    for _ in range(count):
        if offset + 4 > len(payload):
            raise CorruptChunkError(str(path), "vlen length field truncated")
        (length,) = struct.unpack_from("<I", payload, offset)
        offset += 4
        if offset + length > len(payload):
            raise CorruptChunkError(str(path), "vlen item truncated")
        try:
            items.append(payload[offset:offset + length].decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise CorruptChunkError(str(path), f"invalid utf-8: {exc}") from exc
        offset += length
    return items


def _fill_for(header: ZarrArrayHeader):
    if header.fill_value is not None:
        return header.fill_value
    return "" if header.dtype == "vlen-utf8" or header.dtype.startswith("U") else 0


def read_array(array_dir: Path) -> np.ndarray:
    """Decode a whole zarr v2 array from its directory."""
    array_dir = Path(array_dir)
    header = read_array_header(array_dir)
    fill = _fill_for(header)
    if header.dtype == "vlen-utf8":
        out = np.full(header.shape, fill, dtype=object)
    else:
        out = np.full(header.shape, fill, dtype=header.numpy_dtype)
    ranges = [range((size + c - 1) // c) for size, c in zip(header.shape, header.chunks)]
    if not header.shape:
        return out

    def walk(prefix: tuple[int, ...], depth: int):
        if depth == len(ranges):
            yield prefix
            return
        for i in ranges[depth]:
            yield from walk(prefix + (i,), depth + 1)

    chunk_items = int(np.prod(header.chunks))
    for index in walk((), 0):
        chunk_path = array_dir / ".".join(str(i) for i in index)
        if not chunk_path.is_file():
            continue  # missing chunk keeps the fill value
        payload = _decompress(chunk_path.read_bytes(), header.compressor, chunk_path)
        if header.dtype == "vlen-utf8":
            items = _decode_vlen_utf8(payload, chunk_items, chunk_path)
            chunk = np.array(items, dtype=object).reshape(header.chunks)
        else:
            expected = chunk_items * header.numpy_dtype.itemsize
            if len(payload) != expected:
                raise CorruptChunkError(
                    str(chunk_path),
                    f"chunk holds {len(payload)} bytes, expected {expected}",
                )
            chunk = np.frombuffer(payload, dtype=header.numpy_dtype).reshape(
                header.chunks
            )
        target = tuple(
            slice(i * c, min((i + 1) * c, size))
            for i, c, size in zip(index, header.chunks, header.shape)
        )
        source = tuple(slice(0, s.stop - s.start) for s in target)
        out[target] = chunk[source]
    return out


def read_attrs(node_dir: Path) -> dict:
    """The node's .zattrs document, or {} when absent."""
    path = Path(node_dir) / ".zattrs"
    if not path.is_file():
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def is_group(node_dir: Path) -> bool:
    return (Path(node_dir) / ".zgroup").is_file()


def is_array(node_dir: Path) -> bool:
    return (Path(node_dir) / ".zarray").is_file()
