"""Image decoding and the three deterministic augmentation transforms.

All transforms are pure functions on immutable 8-bit buffers and are
bit-reproducible: rotation and flip are index permutations, and contrast
enhancement uses a fixed formula (mean-anchored linear stretch, round
half away from zero, clamp to [0, 255]).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CorruptImage, MissingFile, NonPositiveFactor, UnsupportedFormat
from .manifest import AUGMENTED_SOURCES, ImageRecord, Manifest

TECHNIQUE_KINDS = ("rot90", "hflip", "contrast")


class ImageBuffer:
    """Decoded raster: height x width x channels of 8-bit samples.

    ``pixels`` is a read-only uint8 array of shape (height, width, channels)
    with channels 1 (grayscale) or 3 (RGB).
    """

    __slots__ = ("pixels",)

    def __init__(self, pixels: np.ndarray):
        arr = np.asarray(pixels)
        if arr.ndim == 2:
            arr = arr[:, :, np.newaxis]
        if arr.ndim != 3 or arr.shape[2] not in (1, 3):
            raise ValueError(f"expected (h, w) or (h, w, 1|3) array, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if np.issubdtype(arr.dtype, np.integer) and arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("samples must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ImageBuffer is immutable")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def samples(self) -> np.ndarray:
        """Row-major flat view, length = width * height * channels."""
        return self.pixels.reshape(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and np.array_equal(self.pixels, other.pixels)

    def __repr__(self) -> str:
        return f"ImageBuffer({self.width}x{self.height}x{self.channels})"


@dataclass(frozen=True)
class AugmentationTechnique:
    """One of the three deterministic transforms, with its parameters.

    ``kind`` is "rot90", "hflip" or "contrast"; ``contrast_factor`` is
    required (and must be positive) only for "contrast".
    """

    kind: str
    contrast_factor: float | None = None

    def __post_init__(self):
        if self.kind not in TECHNIQUE_KINDS:
            raise ValueError(f"kind must be one of {TECHNIQUE_KINDS}, got {self.kind!r}")
        if self.kind == "contrast":
            if self.contrast_factor is None:
                raise ValueError("contrast technique needs contrast_factor")
            if self.contrast_factor <= 0:
                raise NonPositiveFactor(f"contrast factor must be > 0, got {self.contrast_factor}")
        elif self.contrast_factor is not None:
            raise ValueError(f"contrast_factor not applicable to {self.kind}")

    @property
    def source_tag(self) -> str:
        return f"aug_{self.kind}"


def load_image(path: str | Path) -> ImageBuffer:
    """Decode a PNG or JPEG file into an ImageBuffer.

    Grayscale files come back with channels=1, color with channels=3
    (alpha, if any, is dropped).
    """
    from PIL import Image, UnidentifiedImageError

    path = Path(path)
    if not path.exists():
        raise MissingFile(f"no such file: {path}")
    try:
        with Image.open(path) as img:
            fmt = img.format
            if fmt not in ("PNG", "JPEG"):
                raise UnsupportedFormat(f"{path}: format {fmt!r} not supported (PNG/JPEG only)")
            if img.mode in ("L",):
                decoded = np.asarray(img)
            elif img.mode in ("1", "I", "I;16", "LA"):
                decoded = np.asarray(img.convert("L"))
            else:
                decoded = np.asarray(img.convert("RGB"))
    except UnidentifiedImageError as exc:
        raise CorruptImage(f"{path}: not a decodable image: {exc}") from exc
    except OSError as exc:
        raise CorruptImage(f"{path}: decode failed: {exc}") from exc
    return ImageBuffer(decoded)


def save_png(img: ImageBuffer, path: str | Path) -> None:
    """Write an ImageBuffer as PNG (lossless, so transforms survive the round trip)."""
    from PIL import Image

    arr = img.pixels
    if img.channels == 1:
        pil = Image.fromarray(arr[:, :, 0], mode="L")
    else:
        pil = Image.fromarray(arr, mode="RGB")
    pil.save(Path(path), format="PNG")


def rotate90cw(img: ImageBuffer) -> ImageBuffer:
    """Rotate 90 degrees clockwise; input pixel (r, c) lands at (c, H-1-r)."""
    return ImageBuffer(np.rot90(img.pixels, k=-1, axes=(0, 1)))


def horizontal_flip(img: ImageBuffer) -> ImageBuffer:
    """Mirror left-right: output (r, c) = input (r, W-1-c)."""
    return ImageBuffer(img.pixels[:, ::-1, :])


def round_half_away(values: np.ndarray) -> np.ndarray:
    """Round half away from zero (fixed rule so outputs are bit-reproducible)."""
    return np.where(values >= 0, np.floor(values + 0.5), np.ceil(values - 0.5))


def contrast_enhance(img: ImageBuffer, factor: float) -> ImageBuffer:
    """Stretch samples about the whole-image mean by ``factor``.

    out = clamp(round(mu + factor * (p - mu))) with mu the mean over all
    samples of the image (one global mean, not per channel). factor 1 is
    the identity; constant images are fixed points for every factor.
    """
    if factor <= 0:
        raise NonPositiveFactor(f"contrast factor must be > 0, got {factor}")
    samples = img.pixels.astype(np.float64)
    mu = float(samples.mean()) if samples.size else 0.0
    stretched = mu + factor * (samples - mu)
    out = np.clip(round_half_away(stretched), 0, 255).astype(np.uint8)
    return ImageBuffer(out)


def apply_technique(img: ImageBuffer, technique: AugmentationTechnique) -> ImageBuffer:
    if technique.kind == "rot90":
        return rotate90cw(img)
    if technique.kind == "hflip":
        return horizontal_flip(img)
    return contrast_enhance(img, technique.contrast_factor)


def augment_manifest(manifest: Manifest, technique: AugmentationTechnique,
                     out_dir: str | Path) -> Manifest:
    """Transform every record's image and write the results as PNGs.

    Returns a manifest of the transformed images; each output record keeps
    the input label and points back at its origin via ``origin_id``.
    Output ordering equals input ordering. File name: <origin_id>_<kind>.png
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    source = technique.source_tag
    assert source in AUGMENTED_SOURCES
    out_records = []
    for rec in manifest:
        try:
            transformed = apply_technique(load_image(rec.path), technique)
        except (MissingFile, UnsupportedFormat, CorruptImage) as exc:
            raise type(exc)(f"record {rec.id!r}: {exc}") from exc
        out_path = out_dir / f"{rec.id}_{technique.kind}.png"
        save_png(transformed, out_path)
        out_records.append(ImageRecord(
            id=f"{rec.id}_{technique.kind}",
            path=str(out_path),
            label=rec.label,
            source=source,
            origin_id=rec.id,
        ))
    return Manifest(out_records)
