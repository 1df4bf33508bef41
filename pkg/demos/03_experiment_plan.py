"""Plan a seeded augmentation experiment and inspect its guarantees.

Builds the canonical scenario: 658 labeled records split 458/200, then a
flip-augmented pool injected at 10/25/50/75 percent of the real training
size. Shows determinism, nesting, and the leakage guard in action.
"""

import json
import tempfile
from pathlib import Path

from augscope import (
    ImageRecord,
    LeakageDetected,
    Manifest,
    build_plan,
    emit_plan,
    inject_augmented,
)

real = Manifest([
    ImageRecord(id=f"r{i:04d}", path=f"data/r{i:04d}.png",
                label="blood" if i < 336 else "no_blood")
    for i in range(658)
])
pool = Manifest([
    ImageRecord(id=f"{rec.id}_hflip", path=rec.path, label=rec.label,
                source="aug_hflip", origin_id=rec.id)
    for rec in real
])

plan = build_plan(real, pool, seed=42, train_count=458, test_count=200,
                  proportions=[0.10, 0.25, 0.50, 0.75])

print(f"train: {len(plan.train)} records, test: {len(plan.test)} records")
for p, manifest in plan.injected:
    added = len(manifest) - len(plan.train)
    print(f"  proportion {p:.2f}: +{added} augmented -> {len(manifest)} total")

# Schedules are nested: every smaller proportion's picks appear in the larger.
sets = [set(m.ids()) for _, m in plan.injected]
print("nested schedule:", all(a <= b for a, b in zip(sets, sets[1:])))

# Same seed, same bytes: emit twice and compare the recorded SHA-256 digests.
with tempfile.TemporaryDirectory() as tmp:
    emit_plan(plan, Path(tmp) / "a")
    emit_plan(build_plan(real, pool, 42, 458, 200, [0.10, 0.25, 0.50, 0.75]), Path(tmp) / "b")
    digest_a = json.loads((Path(tmp) / "a" / "plan.json").read_text())["manifests"]
    digest_b = json.loads((Path(tmp) / "b" / "plan.json").read_text())["manifests"]
    print("byte-identical re-run:", digest_a == digest_b)
    print("emitted files:", sorted(digest_a))

# The leakage guard: a pool record derived from a test image is refused.
try:
    inject_augmented(plan.train, pool, 0.10, seed=42, test=plan.test)
except LeakageDetected as exc:
    print(f"leakage guard fired as expected: {exc}")
