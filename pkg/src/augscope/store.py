"""Binary feature store: embeddings plus labels in one compact file.

Layout (all integers little-endian):

    magic   4 bytes  "AUGF"
    version u32      1
    count   u32      number of records
    dim     u32      4096
    then per record:
        id      u16 length + UTF-8 bytes
        label   1 byte (0 = no_blood, 1 = blood)
        values  4096 x IEEE-754 float32

Values are stored at 32-bit precision, so a write/read round trip is
bit-exact whenever the in-memory values are float32-representable
(which extractor outputs written through this module always are).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import BadMagic, TruncatedFile, UnknownId, VersionMismatch
from .features import FEATURE_DIM, FeatureVector

MAGIC = b"AUGF"
VERSION = 1

_LABEL_TO_BYTE = {"no_blood": 0, "blood": 1}
_BYTE_TO_LABEL = {v: k for k, v in _LABEL_TO_BYTE.items()}


@dataclass
class FeatureStore:
    """Feature vectors in file order plus the label of each id."""

    vectors: list[FeatureVector]
    labels: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.vectors)

    def lookup(self) -> dict[str, FeatureVector]:
        return {vec.id: vec for vec in self.vectors}

    def labeled_ids(self) -> list[tuple[str, str]]:
        """(id, label) pairs in file order, as consumed by pair enumeration."""
        return [(vec.id, self.labels[vec.id]) for vec in self.vectors]

    def get(self, image_id: str) -> FeatureVector:
        for vec in self.vectors:
            if vec.id == image_id:
                return vec
        raise UnknownId(f"id {image_id!r} not in store")


def write_feature_store(vectors: Sequence[FeatureVector], labels: Mapping[str, str],
                        path: str | Path) -> None:
    for vec in vectors:
        if vec.id not in labels:
            raise ValueError(f"no label for id {vec.id!r}")
        if labels[vec.id] not in _LABEL_TO_BYTE:
            raise ValueError(f"bad label {labels[vec.id]!r} for id {vec.id!r}")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", VERSION, len(vectors), FEATURE_DIM))
        for vec in vectors:
            encoded = vec.id.encode("utf-8")
            if len(encoded) > 0xFFFF:
                raise ValueError(f"id too long: {vec.id[:32]!r}...")
            fh.write(struct.pack("<H", len(encoded)))
            fh.write(encoded)
            fh.write(struct.pack("<B", _LABEL_TO_BYTE[labels[vec.id]]))
            fh.write(np.asarray(vec.values, dtype="<f4").tobytes())


def read_feature_store(path: str | Path) -> FeatureStore:
    with open(path, "rb") as fh:
        data = fh.read()

    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic(f"{path}: not a feature store (bad magic)")
    if len(data) < 16:
        raise TruncatedFile(f"{path}: header cut short")
    version, count, dim = struct.unpack_from("<III", data, 4)
    if version != VERSION:
        raise VersionMismatch(f"{path}: store version {version}, expected {VERSION}")
    if dim != FEATURE_DIM:
        raise VersionMismatch(f"{path}: stored dim {dim}, expected {FEATURE_DIM}")

    offset = 16
    vec_bytes = FEATURE_DIM * 4
    vectors: list[FeatureVector] = []
    labels: dict[str, str] = {}
    for index in range(count):
        if offset + 2 > len(data):
            raise TruncatedFile(f"{path}: record {index} cut short")
        (id_len,) = struct.unpack_from("<H", data, offset)
        offset += 2
        if offset + id_len + 1 + vec_bytes > len(data):
            raise TruncatedFile(f"{path}: record {index} cut short")
        image_id = data[offset:offset + id_len].decode("utf-8")
        offset += id_len
        label_byte = data[offset]
        offset += 1
        if label_byte not in _BYTE_TO_LABEL:
            raise VersionMismatch(f"{path}: record {index} has unknown label byte {label_byte}")
        values = np.frombuffer(data, dtype="<f4", count=FEATURE_DIM, offset=offset).astype(np.float64)
        offset += vec_bytes
        vectors.append(FeatureVector(id=image_id, values=values))
        labels[image_id] = _BYTE_TO_LABEL[label_byte]
    return FeatureStore(vectors=vectors, labels=labels)
