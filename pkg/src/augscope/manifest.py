"""Dataset manifests: per-image id, path, label and provenance.

Manifests travel as JSON Lines, one object per record with keys
``id, path, label, source, origin_id`` (``origin_id`` null unless the
record is an augmented copy of another record).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

LABELS = ("blood", "no_blood")
REAL_SOURCE = "real"
SYNTHETIC_SOURCES = ("syn_b1", "syn_b2", "syn_b3")
AUGMENTED_SOURCES = ("aug_rot90", "aug_hflip", "aug_contrast")
SOURCES = (REAL_SOURCE,) + SYNTHETIC_SOURCES + AUGMENTED_SOURCES


@dataclass(frozen=True)
class ImageRecord:
    id: str
    path: str
    label: str
    source: str = REAL_SOURCE
    origin_id: str | None = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"record {self.id!r}: label must be one of {LABELS}, got {self.label!r}")
        if self.source not in SOURCES:
            raise ValueError(f"record {self.id!r}: unknown source {self.source!r}")
        is_aug = self.source in AUGMENTED_SOURCES
        if is_aug and self.origin_id is None:
            raise ValueError(f"record {self.id!r}: augmented record needs origin_id")
        if not is_aug and self.origin_id is not None:
            raise ValueError(f"record {self.id!r}: origin_id only allowed on aug_* sources")

    def to_json(self) -> str:
        obj = {
            "id": self.id,
            "path": self.path,
            "label": self.label,
            "source": self.source,
            "origin_id": self.origin_id,
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class Manifest:
    """Ordered collection of ImageRecords with unique ids."""

    def __init__(self, records: Iterable[ImageRecord] = ()):
        self.records: list[ImageRecord] = list(records)
        seen = set()
        for rec in self.records:
            if rec.id in seen:
                raise ValueError(f"duplicate record id {rec.id!r} in manifest")
            seen.add(rec.id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[ImageRecord]:
        return iter(self.records)

    def __eq__(self, other) -> bool:
        return isinstance(other, Manifest) and self.records == other.records

    def ids(self) -> list[str]:
        return [rec.id for rec in self.records]

    def labels(self) -> dict[str, str]:
        return {rec.id: rec.label for rec in self.records}

    def by_label(self) -> dict[str, list[ImageRecord]]:
        groups: dict[str, list[ImageRecord]] = {}
        for rec in self.records:
            groups.setdefault(rec.label, []).append(rec)
        return groups

    def source_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for rec in self.records:
            counts[rec.source] = counts.get(rec.source, 0) + 1
        return dict(sorted(counts.items()))


def record_from_obj(obj: dict) -> ImageRecord:
    return ImageRecord(
        id=obj["id"],
        path=obj["path"],
        label=obj["label"],
        source=obj.get("source", REAL_SOURCE),
        origin_id=obj.get("origin_id"),
    )


def read_manifest(path: str | Path) -> Manifest:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: not valid JSON: {exc}") from exc
            records.append(record_from_obj(obj))
    return Manifest(records)


def write_manifest(manifest: Manifest, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in manifest:
            fh.write(rec.to_json() + "\n")


def manifest_bytes(manifest: Manifest) -> bytes:
    return "".join(rec.to_json() + "\n" for rec in manifest).encode("utf-8")


def sha256_of(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
