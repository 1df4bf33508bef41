"""Independent brute-force oracles the tests check the library against.

Everything here is deliberately naive (plain loops, math.fsum, no numpy
vectorization) and written from the definitions, not from the library
code, so a bug in the implementation cannot hide in its own oracle.
"""

import math
from itertools import combinations


def fsum_cosine(x, y):
    dot = math.fsum(float(a) * float(b) for a, b in zip(x, y))
    nx = math.sqrt(math.fsum(float(a) ** 2 for a in x))
    ny = math.sqrt(math.fsum(float(b) ** 2 for b in y))
    return dot / (nx * ny)


def naive_stats(values):
    """(mean, sample sd, G1 skewness) via direct fsum arithmetic."""
    n = len(values)
    mean = math.fsum(values) / n
    d = [v - mean for v in values]
    m2 = math.fsum(v * v for v in d) / n
    m3 = math.fsum(v * v * v for v in d) / n
    sd = math.sqrt(math.fsum(v * v for v in d) / (n - 1))
    if m2 == 0.0:
        return mean, 0.0, 0.0
    g1 = m3 / m2 ** 1.5
    return mean, sd, g1 * math.sqrt(n * (n - 1)) / (n - 2)


def brute_force_within_pairs(labeled):
    """All unordered class-matched pairs, as a set of frozensets."""
    pairs = set()
    for (id_a, lab_a), (id_b, lab_b) in combinations(labeled, 2):
        if lab_a == lab_b:
            pairs.add(frozenset((id_a, id_b)))
    return pairs


def brute_force_cross_pairs(labeled_a, labeled_b):
    """All ordered class-matched (a, b) pairs as a set of tuples."""
    return {
        (id_a, id_b)
        for id_a, lab_a in labeled_a
        for id_b, lab_b in labeled_b
        if lab_a == lab_b
    }


def bilinear_point(src, out_h, out_w, r, c):
    """One output sample of a bilinear resize, half-pixel-center convention."""
    in_h, in_w = len(src), len(src[0])
    sy = min(max((r + 0.5) * in_h / out_h - 0.5, 0.0), in_h - 1.0)
    sx = min(max((c + 0.5) * in_w / out_w - 0.5, 0.0), in_w - 1.0)
    y0, x0 = int(sy), int(sx)
    y1, x1 = min(y0 + 1, in_h - 1), min(x0 + 1, in_w - 1)
    fy, fx = sy - y0, sx - x0
    top = src[y0][x0] * (1 - fx) + src[y0][x1] * fx
    bottom = src[y1][x0] * (1 - fx) + src[y1][x1] * fx
    return top * (1 - fy) + bottom * fy


def bilinear_resize_loops(src, out_h, out_w):
    return [[bilinear_point(src, out_h, out_w, r, c) for c in range(out_w)]
            for r in range(out_h)]


def contrast_pixel(p, mu, factor):
    """clamp(round-half-away(mu + factor * (p - mu))) on plain Python floats."""
    value = mu + factor * (p - mu)
    rounded = math.floor(value + 0.5) if value >= 0 else math.ceil(value - 0.5)
    return min(max(rounded, 0), 255)


def largest_remainder_quotas(total, sizes):
    """Float-arithmetic largest remainder; ties to ascending class name."""
    population = sum(sizes.values())
    if total == 0:
        return {label: 0 for label in sizes}
    quotas = {label: total * count / population for label, count in sizes.items()}
    base = {label: math.floor(q) for label, q in quotas.items()}
    leftover = total - sum(base.values())
    order = sorted(sizes, key=lambda lab: (-(quotas[lab] - base[lab]), lab))
    for label in order[:leftover]:
        base[label] += 1
    return base
