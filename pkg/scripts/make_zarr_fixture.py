#!/usr/bin/env python3
"""Generate the committed zarr v2 test fixture under tests/fixtures/.

Writes the store with its own minimal encoder (json + struct + zlib/gzip),
deliberately sharing no code with the package's reader, so fixture bytes
and reader cannot inherit a common bug.

The store mirrors the 3x3 toy dataset: S1=[T:8,B:2,NK:0], S2=[5,5,0],
S3=[0,1,9], with per-cell disease and age annotations.
"""

from __future__ import annotations

import argparse
import gzip
import json
import shutil
import struct
import zlib
from pathlib import Path

PACK_CODES = {"<i1": "b", "<i4": "i", "<i8": "q", "<f8": "d"}


def _encode_items(items, dtype: str) -> bytes:
    if dtype in PACK_CODES:
        return struct.pack(f"<{len(items)}{PACK_CODES[dtype]}", *items)
    if dtype.startswith("<U"):
        width = int(dtype[2:])
        out = bytearray()
        for item in items:
            raw = str(item).encode("utf-32-le")
            out += raw.ljust(4 * width, b"\x00")[: 4 * width]
        return bytes(out)
    if dtype == "vlen-utf8":
        out = bytearray(struct.pack("<I", len(items)))
        for item in items:
            raw = str(item).encode("utf-8")
            out += struct.pack("<I", len(raw)) + raw
        return bytes(out)
    raise ValueError(f"writer does not know dtype {dtype}")


def _compress(payload: bytes, compressor: str | None) -> bytes:
    if compressor == "zlib":
        return zlib.compress(payload, 5)
    if compressor == "gzip":
        return gzip.compress(payload, 5, mtime=0)
    return payload


def write_array(
    directory: Path,
    items: list,
    dtype: str,
    chunk: int,
    compressor: str | None,
    fill=0,
) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    if dtype == "vlen-utf8":
        zarray_dtype = "|O"
        filters = [{"id": "vlen-utf8"}]
    else:
        zarray_dtype = dtype
        filters = None
    compressor_doc = {"id": compressor, "level": 5} if compressor else None
    meta = {
        "zarr_format": 2,
        "shape": [len(items)],
        "chunks": [chunk],
        "dtype": zarray_dtype,
        "compressor": compressor_doc,
        "fill_value": fill,
        "order": "C",
        "filters": filters,
    }
    (directory / ".zarray").write_text(json.dumps(meta, indent=1) + "\n")
    for start in range(0, len(items), chunk):
        piece = list(items[start : start + chunk])
        while len(piece) < chunk:  # zarr pads the final partial chunk
            piece.append(fill)
        payload = _compress(_encode_items(piece, dtype), compressor)
        (directory / str(start // chunk)).write_bytes(payload)


def write_group(directory: Path, attrs: dict | None = None) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    (directory / ".zgroup").write_text(json.dumps({"zarr_format": 2}) + "\n")
    if attrs:
        (directory / ".zattrs").write_text(json.dumps(attrs, indent=1) + "\n")


def write_categorical(
    directory: Path,
    codes: list[int],
    categories: list[str],
    codes_dtype: str,
    codes_chunk: int,
    codes_compressor: str | None,
    categories_dtype: str,
    categories_compressor: str | None,
) -> None:
    write_group(directory, {"encoding-type": "categorical", "ordered": False})
    write_array(
        directory / "codes", codes, codes_dtype, codes_chunk, codes_compressor,
        fill=-1,
    )
    write_array(
        directory / "categories", categories, categories_dtype,
        max(1, len(categories)), categories_compressor, fill="",
    )


def build_store(root: Path) -> None:
    if root.exists():
        shutil.rmtree(root)
    # per-cell labels in a fixed order: all S1 cells, then S2, then S3
    cells = (
        [("S1", "T")] * 8 + [("S1", "B")] * 2
        + [("S2", "T")] * 5 + [("S2", "B")] * 5
        + [("S3", "B")] * 1 + [("S3", "NK")] * 9
    )
    sample_order = ["S1", "S2", "S3"]
    type_order = ["T", "B", "NK"]
    disease_by_sample = {"S1": "healthy", "S2": "healthy", "S3": "CF"}
    age_by_sample = {"S1": 40.0, "S2": 35.0, "S3": 8.0}

    sample_codes = [sample_order.index(s) for s, _ in cells]
    type_codes = [type_order.index(t) for _, t in cells]
    disease_order = ["healthy", "CF"]
    disease_codes = [disease_order.index(disease_by_sample[s]) for s, _ in cells]
    ages = [age_by_sample[s] for s, _ in cells]

    write_group(root, {"encoding-type": "anndata", "encoding-version": "0.1.0"})
    obs = root / "obs"
    write_group(obs, {
        "encoding-type": "dataframe",
        "column-order": ["sample", "cell_type", "disease", "age"],
        "_index": "_index",
    })
    write_array(
        obs / "_index", [f"cell{i:02d}" for i in range(len(cells))],
        "vlen-utf8", 30, "zlib", fill="",
    )
    write_categorical(
        obs / "sample", sample_codes, sample_order,
        codes_dtype="<i4", codes_chunk=7, codes_compressor="zlib",
        categories_dtype="<U2", categories_compressor=None,
    )
    write_categorical(
        obs / "cell_type", type_codes, type_order,
        codes_dtype="<i8", codes_chunk=11, codes_compressor="gzip",
        categories_dtype="vlen-utf8", categories_compressor="zlib",
    )
    write_categorical(
        obs / "disease", disease_codes, disease_order,
        codes_dtype="<i1", codes_chunk=30, codes_compressor=None,
        categories_dtype="vlen-utf8", categories_compressor=None,
    )
    write_array(obs / "age", ages, "<f8", 13, "zlib", fill=0.0)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parent.parent
                    / "tests" / "fixtures" / "anndata_zarr"),
        help="store directory to (re)create",
    )
    args = parser.parse_args()
    build_store(Path(args.out))
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
