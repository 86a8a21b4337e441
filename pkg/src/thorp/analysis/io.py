"""Import and export of distributions as JSON or flat binary files.

Binary layout: the 8-byte magic ``THORPDST``, a little-endian uint32 header
length, the UTF-8 JSON header, then ``length`` little-endian float64 values.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .. import CONVENTIONS
from ..errors import DomainError
from .distribution import PermDistribution

MAGIC = b"THORPDST"


def _header(dist: PermDistribution) -> dict:
    return {"d": dist.d, "length": int(dist.size), "conventions": list(CONVENTIONS)}


def _check_header(header: dict) -> None:
    if list(header.get("conventions", [])) != list(CONVENTIONS):
        raise DomainError(f"unsupported conventions {header.get('conventions')!r}")


def to_json(dist: PermDistribution) -> str:
    doc = _header(dist)
    doc["probs"] = [float(p) for p in dist.probs]
    return json.dumps(doc)


def from_json(text: str) -> PermDistribution:
    doc = json.loads(text)
    _check_header(doc)
    probs = np.asarray(doc["probs"], dtype=np.float64)
    if probs.shape[0] != doc["length"]:
        raise DomainError("header length does not match the data")
    return PermDistribution(int(doc["d"]), probs)


def to_bytes(dist: PermDistribution) -> bytes:
    header = json.dumps(_header(dist)).encode()
    return (MAGIC + struct.pack("<I", len(header)) + header
            + dist.probs.astype("<f8").tobytes())


def from_bytes(blob: bytes) -> PermDistribution:
    if blob[:8] != MAGIC:
        raise DomainError("not a distribution file (bad magic)")
    (hlen,) = struct.unpack("<I", blob[8:12])
    header = json.loads(blob[12:12 + hlen].decode())
    _check_header(header)
    probs = np.frombuffer(blob[12 + hlen:], dtype="<f8")
    if probs.shape[0] != header["length"]:
        raise DomainError("header length does not match the data")
    return PermDistribution(int(header["d"]), probs.astype(np.float64))


def save_distribution(dist: PermDistribution, path, fmt: str | None = None) -> None:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "binary")
    if fmt == "json":
        path.write_text(to_json(dist), encoding="utf-8")
    elif fmt == "binary":
        path.write_bytes(to_bytes(dist))
    else:
        raise DomainError(f"unknown format {fmt!r}")


def load_distribution(path) -> PermDistribution:
    blob = Path(path).read_bytes()
    if blob.startswith(MAGIC):
        return from_bytes(blob)
    return from_json(blob.decode("utf-8"))
