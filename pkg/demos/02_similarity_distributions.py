"""Measure how close a transformed dataset sits to its original.

Generates a small synthetic ultrasound-like dataset, embeds original and
flipped copies with the reference extractor, scores class-matched pairs
with cosine similarity, and summarizes the score distributions.
"""

import numpy as np

from augscope import (
    ImageBuffer,
    cosine_similarity,
    distribution_stats,
    enumerate_pairs,
    histogram,
    horizontal_flip,
    reference_extract,
    rotate90cw,
)


def synth_image(rng, index):
    """Soft blob on a banded background; the kind of structure scans have."""
    size = 64
    y, x = np.ogrid[:size, :size]
    bands = 110 + 60 * np.sin(2 * np.pi * (3 + index % 4) * y / size)
    cy, cx = rng.uniform(16, 48, size=2)
    blob = 70 * np.exp(-((y - cy) ** 2 + (x - cx) ** 2) / 180.0)
    noise = rng.normal(0, 5, size=(size, size))
    return ImageBuffer(np.clip(bands + blob + noise, 0, 255).astype(np.uint8))


rng = np.random.default_rng(99)
images = {f"img{i:02d}": synth_image(rng, i) for i in range(12)}
labels = {name: ("blood" if i % 2 == 0 else "no_blood") for i, name in enumerate(images)}

# Embed originals and their flips / rotations.
original = {k: reference_extract(v, k) for k, v in images.items()}
flipped = {k: reference_extract(horizontal_flip(v), k) for k, v in images.items()}
rotated = {k: reference_extract(rotate90cw(v), k) for k, v in images.items()}

# Each image against its own transform: one score per image.
flip_scores = [cosine_similarity(original[k], flipped[k]) for k in images]
rot_scores = [cosine_similarity(original[k], rotated[k]) for k in images]

for name, scores in (("original vs hflip", flip_scores), ("original vs rot90", rot_scores)):
    stats = distribution_stats(scores)
    print(f"{name}: n={stats.sample_size} mean={stats.mean:.4f} "
          f"sd={stats.sd:.4f} skewness={stats.skewness:.4f}")

# Within-dataset landscape: every class-matched pair of originals.
pairs = enumerate_pairs("within", [(k, labels[k]) for k in images])
print(f"\nwithin-pairs enumerated: {len(pairs)} "
      f"(per class: {pairs.counts_by_class()})")

scores = [cosine_similarity(original[a], original[b]) for a, b in pairs.pairs]
stats = distribution_stats(scores)
print(f"within-original distribution: mean={stats.mean:.4f} sd={stats.sd:.4f}")

print("\nhistogram of within-original scores over [0, 1]:")
for lo, hi, count in histogram(scores, 10, (0.0, 1.0)):
    print(f"  [{lo:.1f}, {hi:.1f}) {'#' * count} {count}")
