"""Pair enumeration, cosine scoring and distribution summaries.

Comparisons are stratified by class: blood images are compared with blood
images and no_blood with no_blood. Scores from both strata are usually
pooled into one distribution, with per-class views kept alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadRange, EmptyClass, TooFewSamples, UnknownId, ZeroVector
from .features import FeatureVector
from .store import FeatureStore


@dataclass(frozen=True)
class PairSet:
    """Class-stratified image pairs in deterministic lexicographic order.

    ``within`` holds unordered pairs from one set (no self-pairs, count
    sum of C(n_class, 2)); ``cross`` holds ordered pairs, first element
    from set A, second from set B, class-matched (count sum of
    n_A,class * n_B,class). ``pair_labels[i]`` is the class of ``pairs[i]``.
    """

    mode: str
    pairs: tuple[tuple[str, str], ...]
    pair_labels: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def counts_by_class(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for label in self.pair_labels:
            counts[label] = counts.get(label, 0) + 1
        return counts


@dataclass(frozen=True)
class DistributionStats:
    """Sample size, mean, sample SD and adjusted Fisher-Pearson skewness (G1).

    ``degenerate`` marks a zero-variance sample, whose skewness is
    reported as 0 by convention rather than NaN.
    """

    sample_size: int
    mean: float
    sd: float
    skewness: float
    degenerate: bool = False


def cosine_similarity(x, y) -> float:
    """Cosine of the angle between two nonzero vectors.

    sum(x_i * y_i) / (||x|| * ||y||), clamped to [-1, 1] after the division
    to absorb floating-point drift. 1 means identical direction, -1 opposite.
    """
    xv = x.values if isinstance(x, FeatureVector) else np.asarray(x, dtype=np.float64)
    yv = y.values if isinstance(y, FeatureVector) else np.asarray(y, dtype=np.float64)
    nx = np.linalg.norm(xv)
    ny = np.linalg.norm(yv)
    if nx == 0.0 or ny == 0.0:
        raise ZeroVector("cosine similarity undefined for an all-zero vector")
    return float(np.clip(np.dot(xv, yv) / (nx * ny), -1.0, 1.0))


def enumerate_pairs(mode: str, set_a: Sequence[tuple[str, str]],
                    set_b: Sequence[tuple[str, str]] | None = None) -> PairSet:
    """Enumerate class-stratified pairs of image ids.

    ``set_a``/``set_b`` are (id, label) sequences. A class with no members
    simply contributes no pairs; it is an error only when the inputs hold
    no records at all.
    """
    if mode not in ("within", "cross"):
        raise ValueError(f"mode must be 'within' or 'cross', got {mode!r}")
    if mode == "within" and set_b is not None:
        raise ValueError("within mode uses set_a only")
    if mode == "cross" and set_b is None:
        raise ValueError("cross mode needs set_b")

    groups_a = _group_ids(set_a, "set_a")
    groups_b = _group_ids(set_b, "set_b") if mode == "cross" else {}
    if not set_a and not (set_b or ()):
        raise EmptyClass("no records in any class")

    labels = sorted(set(groups_a) | set(groups_b))
    pairs: list[tuple[str, str]] = []
    pair_labels: list[str] = []
    for label in labels:
        ids_a = sorted(groups_a.get(label, ()))
        if mode == "within":
            for i in range(len(ids_a)):
                for j in range(i + 1, len(ids_a)):
                    pairs.append((ids_a[i], ids_a[j]))
                    pair_labels.append(label)
        else:
            ids_b = sorted(groups_b.get(label, ()))
            for a in ids_a:
                for b in ids_b:
                    pairs.append((a, b))
                    pair_labels.append(label)
    return PairSet(mode=mode, pairs=tuple(pairs), pair_labels=tuple(pair_labels))


def score_pairs(pairs: PairSet, store: FeatureStore) -> list[float]:
    """Cosine similarity for every pair, in pair order."""
    lookup = store.lookup()
    unit: dict[str, np.ndarray] = {}
    for a, b in pairs.pairs:
        for image_id in (a, b):
            if image_id in unit:
                continue
            if image_id not in lookup:
                raise UnknownId(f"id {image_id!r} not in feature store")
            values = lookup[image_id].values
            norm = np.linalg.norm(values)
            if norm == 0.0:
                raise ZeroVector(f"id {image_id!r} has an all-zero vector")
            unit[image_id] = values / norm
    return [float(np.clip(np.dot(unit[a], unit[b]), -1.0, 1.0)) for a, b in pairs.pairs]


def scores_by_class(pairs: PairSet, scores: Sequence[float]) -> dict[str, list[float]]:
    if len(scores) != len(pairs):
        raise ValueError("scores and pairs length differ")
    grouped: dict[str, list[float]] = {}
    for label, score in zip(pairs.pair_labels, scores):
        grouped.setdefault(label, []).append(score)
    return grouped


def distribution_stats(scores: Sequence[float]) -> DistributionStats:
    """Mean, sample SD (n-1 denominator) and G1 skewness of the scores.

    G1 = g1 * sqrt(n(n-1)) / (n-2) with g1 = m3 / m2^(3/2), where m2 and m3
    are central moments with n denominator. Needs at least 3 scores.
    """
    values = np.asarray(scores, dtype=np.float64)
    n = values.size
    if n < 3:
        raise TooFewSamples(f"need at least 3 scores, got {n}")
    mean = float(values.mean())
    centered = values - mean
    m2 = float(np.mean(centered ** 2))
    sd = float(np.sqrt(np.sum(centered ** 2) / (n - 1)))
    if m2 == 0.0:
        return DistributionStats(sample_size=n, mean=mean, sd=0.0, skewness=0.0, degenerate=True)
    m3 = float(np.mean(centered ** 3))
    g1 = m3 / m2 ** 1.5
    skew = g1 * np.sqrt(n * (n - 1.0)) / (n - 2.0)
    return DistributionStats(sample_size=n, mean=mean, sd=sd, skewness=float(skew))


def histogram(scores: Sequence[float], bin_count: int,
              value_range: tuple[float, float]) -> list[tuple[float, float, int]]:
    """Counts per bin over ``value_range``; bins are right-open, last closed.

    Scores outside the range are dropped, so counts sum to the number of
    in-range scores.
    """
    lo, hi = value_range
    if bin_count < 1:
        raise BadRange(f"bin_count must be >= 1, got {bin_count}")
    if not lo < hi:
        raise BadRange(f"range lower bound must be below upper, got [{lo}, {hi}]")
    edges = np.asarray([lo + (hi - lo) * i / bin_count for i in range(bin_count + 1)])
    edges[-1] = hi
    counts = np.zeros(bin_count, dtype=np.int64)
    for s in scores:
        if s < lo or s > hi:
            continue
        idx = int(np.searchsorted(edges, s, side="right")) - 1
        counts[min(idx, bin_count - 1)] += 1
    return [(float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(bin_count)]


def _group_ids(labeled, name: str) -> dict[str, list[str]]:
    groups: dict[str, list[str]] = {}
    seen = set()
    for image_id, label in (labeled or ()):
        if image_id in seen:
            raise ValueError(f"duplicate id {image_id!r} in {name}")
        seen.add(image_id)
        groups.setdefault(label, []).append(image_id)
    return groups
