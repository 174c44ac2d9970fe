"""Binary parameter checkpoints.

Layout (all integers little-endian):
  magic "TBNK" | u32 format version | u32 parameter count
  per parameter:
    u32 name byte length | name (UTF-8) | u32 rank | rank * u64 dims |
    raw float64 values, C order
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .tensor import Parameter

MAGIC = b"TBNK"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    pass


def save_parameters(params: list[Parameter], path: str | Path) -> None:
    with Path(path).open("wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<II", FORMAT_VERSION, len(params)))
        for p in params:
            name_bytes = p.name.encode("utf-8")
            f.write(struct.pack("<I", len(name_bytes)))
            f.write(name_bytes)
            dims = p.value.shape
            f.write(struct.pack("<I", len(dims)))
            f.write(struct.pack(f"<{len(dims)}Q", *dims))
            f.write(np.ascontiguousarray(p.value, dtype="<f8").tobytes())


def load_parameters(path: str | Path) -> dict[str, np.ndarray]:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise CheckpointError(f"{path}: not a parameter checkpoint (bad magic)")
    version, count = struct.unpack_from("<II", data, 4)
    if version != FORMAT_VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {version}")

    offset = 12
    out: dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_len,) = struct.unpack_from("<I", data, offset)
        offset += 4
        name = data[offset : offset + name_len].decode("utf-8")
        offset += name_len
        (rank,) = struct.unpack_from("<I", data, offset)
        offset += 4
        dims = struct.unpack_from(f"<{rank}Q", data, offset)
        offset += 8 * rank
        size = int(np.prod(dims)) if rank else 1
        values = np.frombuffer(data, dtype="<f8", count=size, offset=offset).astype(np.float64)
        offset += 8 * size
        if name in out:
            raise CheckpointError(f"{path}: duplicate parameter {name!r}")
        out[name] = values.reshape(dims)
    if offset != len(data):
        raise CheckpointError(f"{path}: {len(data) - offset} trailing bytes")
    return out


def restore_parameters(params: list[Parameter], path: str | Path) -> None:
    """Load a checkpoint into existing parameters, matching by name and shape."""
    loaded = load_parameters(path)
    for p in params:
        if p.name not in loaded:
            raise CheckpointError(f"checkpoint is missing parameter {p.name!r}")
        value = loaded.pop(p.name)
        if value.shape != p.value.shape:
            raise CheckpointError(
                f"parameter {p.name!r} has shape {value.shape} in the checkpoint, expected {p.value.shape}"
            )
        p.value[...] = value
    if loaded:
        raise CheckpointError(f"checkpoint has unexpected parameters: {sorted(loaded)}")
