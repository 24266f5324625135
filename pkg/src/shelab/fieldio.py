"""Flat binary snapshot format for resume and offline analysis.

Layout (all little-endian):

    header:  magic b"SHEL" | uint32 version | uint32 nx | uint32 n_checkpoints
    body:    n_checkpoints float64 checkpoint times,
             then n_checkpoints * nx float64 field values (row-major).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError

MAGIC = b"SHEL"
VERSION = 1
_HEADER = struct.Struct("<4sIII")


@dataclass(frozen=True)
class FieldSnapshot:
    """Solution values on the grid at one checkpoint time."""

    t: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1:
            raise ConfigError("snapshot values must be a 1-D array")
        if not np.all(np.isfinite(vals)):
            raise ConfigError("snapshot values must be finite")


def write_snapshots(path, snapshots: list[FieldSnapshot]) -> None:
    if not snapshots:
        raise ConfigError("nothing to write")
    nx = len(snapshots[0].values)
    if any(len(s.values) != nx for s in snapshots):
        raise ConfigError("snapshots disagree on grid size")
    times = np.array([s.t for s in snapshots], dtype="<f8")
    body = np.stack([s.values for s in snapshots]).astype("<f8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, nx, len(snapshots)))
        fh.write(times.tobytes())
        fh.write(body.tobytes())


def read_snapshots(path) -> list[FieldSnapshot]:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ConfigError("truncated snapshot file")
    magic, version, nx, ncp = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ConfigError("bad magic; not a snapshot file")
    if version != VERSION:
        raise ConfigError(f"unsupported snapshot version {version}")
    need = _HEADER.size + 8 * ncp + 8 * ncp * nx
    if len(raw) != need:
        raise ConfigError("snapshot file length does not match its header")
    times = np.frombuffer(raw, dtype="<f8", count=ncp, offset=_HEADER.size)
    body = np.frombuffer(raw, dtype="<f8", count=ncp * nx,
                         offset=_HEADER.size + 8 * ncp).reshape(ncp, nx)
    return [FieldSnapshot(t=float(t), values=body[i].copy()) for i, t in enumerate(times)]
