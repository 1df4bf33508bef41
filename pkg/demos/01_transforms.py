"""Walk through the three deterministic augmentation transforms.

Builds a tiny image in memory, applies rotation / flip / contrast, and
demonstrates the algebraic guarantees the library maintains bit-exactly.
"""

import numpy as np

from augscope import ImageBuffer, contrast_enhance, horizontal_flip, rotate90cw

# A 4x6 grayscale ramp so every pixel is distinguishable.
img = ImageBuffer(np.arange(24, dtype=np.uint8).reshape(4, 6) * 10)
print("original (4 rows x 6 cols):")
print(img.pixels[:, :, 0])

# 90-degree clockwise rotation swaps the dimensions: (r, c) -> (c, H-1-r).
rotated = rotate90cw(img)
print(f"\nrotated 90 degrees clockwise -> {rotated.height} rows x {rotated.width} cols:")
print(rotated.pixels[:, :, 0])

# Four rotations return the original, bit for bit.
four_times = rotate90cw(rotate90cw(rotate90cw(rotate90cw(img))))
print("\nfour rotations == original:", four_times == img)

# Horizontal flip mirrors columns and is its own inverse.
flipped = horizontal_flip(img)
print("\nhorizontally flipped:")
print(flipped.pixels[:, :, 0])
print("flip twice == original:", horizontal_flip(flipped) == img)

# Contrast enhancement stretches samples about the whole-image mean:
# out = clamp(round(mu + factor * (p - mu))). Factor 1 changes nothing.
stretched = contrast_enhance(img, 1.5)
print("\ncontrast factor 1.5 (mean-anchored stretch):")
print(stretched.pixels[:, :, 0])
print("factor 1.0 == original:", contrast_enhance(img, 1.0) == img)

# A constant image sits exactly at its own mean, so any factor fixes it.
flat = ImageBuffer(np.full((3, 3), 100, dtype=np.uint8))
print("constant image unchanged at factor 3:", contrast_enhance(flat, 3.0) == flat)
