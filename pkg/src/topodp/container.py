"""Flat binary container with a JSON header.

All bulk tensors (training traces, client datasets, shadow corpora) share one
file layout:

    magic "TDPC" | uint32 version | uint64 header length | header JSON | raw blocks

The header carries arbitrary user metadata under ``meta`` plus an ``arrays``
manifest listing name, dtype, shape, and byte offset of each block. Blocks are
stored row-major in manifest order.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"TDPC"
VERSION = 1


def write_container(path: str | Path, meta: dict, arrays: dict[str, np.ndarray]) -> None:
    """Write metadata and named arrays to a single binary file.

    Args:
        path: Destination file path.
        meta: JSON-serialisable metadata dictionary.
        arrays: Mapping name -> ndarray; dtypes are preserved as stored.
    """
    manifest = []
    offset = 0
    blocks = []
    for name, arr in arrays.items():
        arr = np.ascontiguousarray(arr)
        manifest.append(
            {"name": name, "dtype": arr.dtype.str, "shape": list(arr.shape), "offset": offset}
        )
        blocks.append(arr)
        offset += arr.nbytes
    header = json.dumps({"meta": meta, "arrays": manifest}).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        fh.write(struct.pack("<Q", len(header)))
        fh.write(header)
        for arr in blocks:
            fh.write(arr.tobytes())


def read_container(path: str | Path) -> tuple[dict, dict[str, np.ndarray]]:
    """Read a container file back into (meta, {name: array})."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a container file (bad magic {magic!r})")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != VERSION:
            raise ValueError(f"{path}: unsupported container version {version}")
        (hlen,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        data = fh.read()
    arrays = {}
    for entry in header["arrays"]:
        dtype = np.dtype(entry["dtype"])
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        start = entry["offset"]
        arr = np.frombuffer(data, dtype=dtype, count=count, offset=start).reshape(shape)
        arrays[entry["name"]] = arr.copy()
    return header["meta"], arrays
