"""Seeded train/test splits and augmentation-injection schedules.

Everything here is deterministic for a fixed seed: sampling runs on the
pinned splitmix64 generator, per-class quotas use exact integer
largest-remainder arithmetic, and emitted files are byte-reproducible.
Leakage (an augmented copy of a test image entering training) is checked,
not assumed away.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InsufficientRecords, IoError, LeakageDetected, PoolExhausted
from .manifest import (
    REAL_SOURCE,
    ImageRecord,
    Manifest,
    sha256_of,
    write_manifest,
)
from .rng import SplitMix64, derive_seed


@dataclass
class ExperimentPlan:
    """A seeded split plus the materialized injection schedule."""

    seed: int
    train: Manifest
    test: Manifest
    schedule: list[float]
    augmentation_source: Manifest
    test_mode: str
    injected: list[tuple[float, Manifest]] = field(default_factory=list)


def round_half_away(x: float) -> int:
    return math.floor(x + 0.5) if x >= 0 else math.ceil(x - 0.5)


def largest_remainder(total: int, sizes: dict[str, int]) -> dict[str, int]:
    """Apportion ``total`` over classes proportionally to ``sizes``.

    Integer largest-remainder: floor the exact quotas, then hand leftover
    seats to the largest fractional remainders (ties to the first class in
    name order). Exact integer arithmetic, so the result is portable.
    """
    population = sum(sizes.values())
    if total == 0:
        return {label: 0 for label in sizes}
    if population == 0:
        raise InsufficientRecords(f"cannot apportion {total} records over an empty population")
    base: dict[str, int] = {}
    remainders: list[tuple[int, str]] = []
    for label in sorted(sizes):
        exact_numer = total * sizes[label]
        base[label] = exact_numer // population
        remainders.append((exact_numer - base[label] * population, label))
    leftover = total - sum(base.values())
    remainders.sort(key=lambda item: (-item[0], item[1]))
    for _, label in remainders[:leftover]:
        base[label] += 1
    return base


def _shuffled_class_queues(manifest: Manifest, seed: int, stream: str) -> dict[str, list[ImageRecord]]:
    queues = {}
    for label, records in manifest.by_label().items():
        rng = SplitMix64(derive_seed(seed, stream, label))
        queues[label] = rng.shuffled(sorted(records, key=lambda rec: rec.id))
    return queues


def _in_manifest_order(manifest: Manifest, chosen_ids: set[str]) -> list[ImageRecord]:
    return [rec for rec in manifest if rec.id in chosen_ids]


def split_dataset(manifest: Manifest, seed: int, train_count: int,
                  test_count: int) -> tuple[Manifest, Manifest]:
    """Label-stratified seeded split into disjoint train and test manifests.

    Per-class counts follow class prevalence under largest-remainder
    rounding; the same seed always reproduces the same manifests.
    """
    if train_count < 0 or test_count < 0:
        raise ValueError("counts must be non-negative")
    if train_count + test_count > len(manifest):
        raise InsufficientRecords(
            f"need {train_count}+{test_count} records, manifest has {len(manifest)}")

    sizes = {label: len(records) for label, records in manifest.by_label().items()}
    queues = _shuffled_class_queues(manifest, seed, "split")

    train_quota = largest_remainder(train_count, sizes)
    train_ids: set[str] = set()
    for label, quota in train_quota.items():
        train_ids.update(rec.id for rec in queues[label][:quota])

    remaining_sizes = {label: sizes[label] - train_quota.get(label, 0) for label in sizes}
    test_quota = largest_remainder(test_count, remaining_sizes)
    test_ids: set[str] = set()
    for label, quota in test_quota.items():
        start = train_quota.get(label, 0)
        test_ids.update(rec.id for rec in queues[label][start:start + quota])

    return (Manifest(_in_manifest_order(manifest, train_ids)),
            Manifest(_in_manifest_order(manifest, test_ids)))


def inject_augmented(train: Manifest, pool: Manifest, proportion: float, seed: int,
                     test: Manifest | None = None) -> Manifest:
    """Extend ``train`` with k = round(proportion * |real train|) pool records.

    Sampling is label-stratified and without replacement. The caller must
    already have removed pool records tied to the test set; any such record
    still present raises LeakageDetected. Because selection takes prefixes
    of per-class seeded shuffles, the picks for a smaller proportion are a
    subset of the picks for a larger one under the same seed.
    """
    if not 0.0 < proportion <= 1.0:
        raise ValueError(f"proportion must be in (0, 1], got {proportion}")
    if len(pool) == 0:
        raise PoolExhausted("augmentation pool is empty")
    if test is not None:
        test_ids = set(test.ids())
        for rec in pool:
            if rec.id in test_ids:
                raise LeakageDetected(f"pool record {rec.id!r} is itself in the test set")
            if rec.origin_id is not None and rec.origin_id in test_ids:
                raise LeakageDetected(
                    f"pool record {rec.id!r} derives from test image {rec.origin_id!r}")

    train_real = sum(1 for rec in train if rec.source == REAL_SOURCE)
    k = round_half_away(proportion * train_real)
    if k > len(pool):
        raise PoolExhausted(
            f"need {k} eligible pool records for proportion {proportion}, "
            f"have {len(pool)} (short {k - len(pool)})")

    sizes = {label: len(records) for label, records in pool.by_label().items()}
    quotas = largest_remainder(k, sizes)
    queues = _shuffled_class_queues(pool, seed, "inject")
    added: list[ImageRecord] = []
    for label in sorted(quotas):
        added.extend(queues[label][:quotas[label]])
    return Manifest(list(train) + added)


def build_mixed_test(real_pool: Manifest, synthetic_pool: Manifest, real_count: int,
                     synthetic_count: int, seed: int) -> Manifest:
    """Label-stratified test manifest of real_count real + synthetic_count synthetic."""
    if real_count > len(real_pool):
        raise InsufficientRecords(
            f"need {real_count} real test records, pool has {len(real_pool)}")
    if synthetic_count > len(synthetic_pool):
        raise InsufficientRecords(
            f"need {synthetic_count} synthetic test records, pool has {len(synthetic_pool)}")

    picked: list[ImageRecord] = []
    for pool, count, stream in ((real_pool, real_count, "mixed_real"),
                                (synthetic_pool, synthetic_count, "mixed_syn")):
        if count == 0:
            continue
        sizes = {label: len(records) for label, records in pool.by_label().items()}
        quotas = largest_remainder(count, sizes)
        queues = _shuffled_class_queues(pool, seed, stream)
        chosen = set()
        for label, quota in quotas.items():
            chosen.update(rec.id for rec in queues[label][:quota])
        picked.extend(_in_manifest_order(pool, chosen))
    return Manifest(picked)


def build_plan(real: Manifest, pool: Manifest, seed: int, train_count: int,
               test_count: int, proportions: list[float], test_mode: str = "real",
               mixed_counts: tuple[int, int] | None = None) -> ExperimentPlan:
    """Run the whole planning pipeline and materialize every train manifest.

    Pool records tied to the held-out test set (by id or by origin_id) are
    excluded before injection, so no augmented copy of a test image can
    enter training.
    """
    if not proportions:
        raise ValueError("schedule needs at least one proportion")
    if any(not 0.0 < p <= 1.0 for p in proportions):
        raise ValueError(f"proportions must lie in (0, 1]: {proportions}")
    if any(b <= a for a, b in zip(proportions, proportions[1:])):
        raise ValueError(f"proportions must be strictly increasing: {proportions}")

    train, test = split_dataset(real, seed, train_count, test_count)
    if test_mode == "mixed":
        if mixed_counts is None:
            raise ValueError("mixed test mode needs (real_count, synthetic_count)")
        test = build_mixed_test(test, pool, mixed_counts[0], mixed_counts[1], seed)
    elif test_mode != "real":
        raise ValueError(f"test_mode must be 'real' or 'mixed', got {test_mode!r}")

    test_ids = set(test.ids())
    eligible = Manifest([
        rec for rec in pool
        if rec.id not in test_ids and (rec.origin_id is None or rec.origin_id not in test_ids)
    ])

    injected = [(p, inject_augmented(train, eligible, p, seed, test=test)) for p in proportions]

    base_ids = set(train.ids())
    previous: set[str] = set()
    for p, manifest in injected:
        added = set(manifest.ids()) - base_ids
        if not previous <= added:
            raise AssertionError(f"schedule not nested at proportion {p}")
        previous = added

    mode_label = test_mode if test_mode == "real" else f"mixed:{mixed_counts[0]},{mixed_counts[1]}"
    return ExperimentPlan(seed=seed, train=train, test=test, schedule=list(proportions),
                          augmentation_source=pool, test_mode=mode_label, injected=injected)


def _proportion_tag(p: float) -> str:
    return format(round(p * 100, 6), "g")


def emit_plan(plan: ExperimentPlan, out_dir: str | Path) -> list[Path]:
    """Write train_p<pct>.jsonl per proportion, test.jsonl and plan.json.

    Re-running with the same inputs reproduces identical bytes; plan.json
    records the SHA-256 of every emitted manifest.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        manifests: dict[str, Manifest] = {"test.jsonl": plan.test}
        for p, manifest in plan.injected:
            manifests[f"train_p{_proportion_tag(p)}.jsonl"] = manifest
        for name in manifests:
            path = out_dir / name
            write_manifest(manifests[name], path)
            written.append(path)

        descriptor = {
            "seed": plan.seed,
            "train_count": len(plan.train),
            "test_count": len(plan.test),
            "proportions": plan.schedule,
            "test_mode": plan.test_mode,
            "injected_counts": {
                _proportion_tag(p): len(m) - len(plan.train) for p, m in plan.injected
            },
            "manifests": {
                name: {
                    "records": len(manifests[name]),
                    "sha256": sha256_of(out_dir / name),
                    "sources": manifests[name].source_counts(),
                }
                for name in sorted(manifests)
            },
        }
        plan_path = out_dir / "plan.json"
        with open(plan_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(descriptor, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(plan_path)
        return written
    except OSError as exc:
        raise IoError(f"cannot write plan to {out_dir}: {exc}") from exc
