"""Image-to-vector extraction: every image becomes one 4096-dim embedding.

Two interchangeable backends produce the embedding:

* ``reference`` -- a deterministic, dependency-free descriptor (block means
  plus gradient-orientation histograms, tiled to 4096 dims). It exists so
  the full test suite runs with no model file and no network access.
* ``neural`` -- a pretrained convolutional network evaluated from an ONNX
  file whose head must be 4096-wide (the first fully-connected activation
  of a VGG-style network).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, ModelLoadFailure, ZeroDimensionImage, ZeroVector
from .images import ImageBuffer

FEATURE_DIM = 4096
INPUT_SIZE = 224

# Channel means of the VGG training corpus (RGB order, 0-255 scale);
# override per model via the `means` arguments below.
DEFAULT_CHANNEL_MEANS = (123.68, 116.779, 103.939)

_REF_SIZE = 64          # working resolution of the reference descriptor
_REF_GRID = 8           # 8x8 grid of blocks
_REF_BINS = 8           # orientation bins per block
_REF_DESC = _REF_GRID * _REF_GRID * (1 + _REF_BINS)   # 576
_REF_TILES = 7          # 7 * 576 = 4032, zero-padded to 4096


@dataclass(frozen=True)
class FeatureVector:
    """One image's embedding: exactly 4096 finite components, not all zero."""

    id: str
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.shape != (FEATURE_DIM,):
            raise DimensionMismatch(f"feature vector must have {FEATURE_DIM} components, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"feature vector {self.id!r} has non-finite components")
        if not np.any(arr):
            raise ZeroVector(f"feature vector {self.id!r} is all zero")
        object.__setattr__(self, "values", arr)


def bilinear_resize(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Resize with bilinear interpolation, half-pixel-center convention.

    Source coordinates are (dst + 0.5) * in/out - 0.5, clamped to the valid
    range, so the operation is symmetric and deterministic.
    """
    src = np.asarray(src, dtype=np.float64)
    flat = src.ndim == 2
    if flat:
        src = src[:, :, np.newaxis]
    in_h, in_w = src.shape[:2]
    if in_h == 0 or in_w == 0 or out_h <= 0 or out_w <= 0:
        raise ZeroDimensionImage(f"cannot resize {in_h}x{in_w} -> {out_h}x{out_w}")

    sy = np.clip((np.arange(out_h) + 0.5) * in_h / out_h - 0.5, 0.0, in_h - 1.0)
    sx = np.clip((np.arange(out_w) + 0.5) * in_w / out_w - 0.5, 0.0, in_w - 1.0)
    y0 = np.floor(sy).astype(np.intp)
    x0 = np.floor(sx).astype(np.intp)
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    fy = (sy - y0)[:, np.newaxis, np.newaxis]
    fx = (sx - x0)[np.newaxis, :, np.newaxis]

    top = src[y0[:, None], x0[None, :]] * (1.0 - fx) + src[y0[:, None], x1[None, :]] * fx
    bottom = src[y1[:, None], x0[None, :]] * (1.0 - fx) + src[y1[:, None], x1[None, :]] * fx
    out = top * (1.0 - fy) + bottom * fy
    return out[:, :, 0] if flat else out


def preprocess(img: ImageBuffer, means: tuple[float, float, float] = DEFAULT_CHANNEL_MEANS) -> np.ndarray:
    """Network input tensor: bilinear resize to 224x224, 3 channels, mean-subtracted.

    Grayscale is replicated across the three channels before subtraction.
    Returns float32 of shape (224, 224, 3).
    """
    if img.width == 0 or img.height == 0:
        raise ZeroDimensionImage(f"image has zero dimension: {img.width}x{img.height}")
    pixels = img.pixels.astype(np.float64)
    if img.channels == 1:
        pixels = np.repeat(pixels, 3, axis=2)
    resized = bilinear_resize(pixels, INPUT_SIZE, INPUT_SIZE)
    resized -= np.asarray(means, dtype=np.float64)[np.newaxis, np.newaxis, :]
    return resized.astype(np.float32)


def _to_gray(img: ImageBuffer) -> np.ndarray:
    pixels = img.pixels.astype(np.float64)
    return pixels[:, :, 0] if img.channels == 1 else pixels.mean(axis=2)


def reference_descriptor(img: ImageBuffer) -> np.ndarray:
    """Raw 576-dim descriptor: 64 block means then 512 gradient-histogram bins.

    The image is resized to 64x64 grayscale and cut into an 8x8 grid;
    each 8x8-pixel block contributes its mean intensity and an 8-bin
    magnitude-weighted gradient-orientation histogram.
    """
    if img.width == 0 or img.height == 0:
        raise ZeroDimensionImage(f"image has zero dimension: {img.width}x{img.height}")
    g = bilinear_resize(_to_gray(img), _REF_SIZE, _REF_SIZE)

    block = _REF_SIZE // _REF_GRID
    means = g.reshape(_REF_GRID, block, _REF_GRID, block).mean(axis=(1, 3))

    gy, gx = np.gradient(g)
    magnitude = np.hypot(gx, gy)
    theta = np.arctan2(gy, gx)
    bins = np.minimum((theta + np.pi) / (2.0 * np.pi / _REF_BINS), _REF_BINS - 1).astype(np.intp)

    rows = np.arange(_REF_SIZE) // block
    block_index = rows[:, np.newaxis] * _REF_GRID + rows[np.newaxis, :]
    flat = block_index * _REF_BINS + bins
    hists = np.bincount(flat.reshape(-1), weights=magnitude.reshape(-1),
                        minlength=_REF_GRID * _REF_GRID * _REF_BINS)

    return np.concatenate([means.reshape(-1), hists])


def reference_extract(img: ImageBuffer, image_id: str = "") -> FeatureVector:
    """Deterministic built-in extractor; output is L2-normalized.

    Raises ZeroVector for an all-black image (the descriptor is all zero
    there, and cosine similarity is undefined on zero vectors).
    """
    desc = reference_descriptor(img)
    full = np.concatenate([np.tile(desc, _REF_TILES),
                           np.zeros(FEATURE_DIM - _REF_TILES * _REF_DESC)])
    norm = np.linalg.norm(full)
    if norm == 0.0:
        raise ZeroVector("all-black image yields an all-zero descriptor")
    return FeatureVector(id=image_id, values=full / norm)


class ReferenceBackend:
    kind = "reference"
    output_dim = FEATURE_DIM

    def extract(self, img: ImageBuffer, image_id: str = "") -> FeatureVector:
        return reference_extract(img, image_id)


class NeuralBackend:
    """ONNX-evaluated convolutional extractor with a 4096-wide head."""

    kind = "neural"

    def __init__(self, model_path: str | Path,
                 means: tuple[float, float, float] = DEFAULT_CHANNEL_MEANS):
        self.model_path = Path(model_path)
        self.means = means
        if not self.model_path.exists():
            raise ModelLoadFailure(f"model file not found: {self.model_path}")
        try:
            import onnxruntime
        except ImportError as exc:
            raise ModelLoadFailure(
                "neural backend needs the onnxruntime package (install augscope[neural])"
            ) from exc
        options = onnxruntime.SessionOptions()
        options.intra_op_num_threads = 1
        options.inter_op_num_threads = 1
        try:
            self._session = onnxruntime.InferenceSession(
                str(self.model_path), sess_options=options, providers=["CPUExecutionProvider"])
        except Exception as exc:
            raise ModelLoadFailure(f"cannot load {self.model_path}: {exc}") from exc
        self._input = self._session.get_inputs()[0]
        self._output = self._session.get_outputs()[0]
        self.output_dim = _head_width(self._output.shape)
        if self.output_dim != FEATURE_DIM:
            raise DimensionMismatch(
                f"model head is {self.output_dim}-wide, need {FEATURE_DIM}: {self.model_path}")

    def extract(self, img: ImageBuffer, image_id: str = "") -> FeatureVector:
        tensor = preprocess(img, self.means)
        batch = tensor[np.newaxis, ...]
        shape = self._input.shape
        if len(shape) == 4 and shape[1] == 3:   # NCHW
            batch = np.transpose(batch, (0, 3, 1, 2))
        batch = np.ascontiguousarray(batch, dtype=np.float32)
        out = self._session.run([self._output.name], {self._input.name: batch})[0]
        values = np.asarray(out, dtype=np.float64).reshape(-1)
        if values.shape[0] != FEATURE_DIM:
            raise DimensionMismatch(
                f"model produced {values.shape[0]} components, need {FEATURE_DIM}")
        return FeatureVector(id=image_id, values=values)


def make_backend(spec: str, means: tuple[float, float, float] = DEFAULT_CHANNEL_MEANS):
    """Build a backend from its CLI selector: ``reference`` or ``neural:<path>``."""
    if spec == "reference":
        return ReferenceBackend()
    if spec.startswith("neural:"):
        return NeuralBackend(spec.split(":", 1)[1], means=means)
    raise ValueError(f"unknown backend {spec!r} (expected 'reference' or 'neural:<path>')")


def extract(backend, img: ImageBuffer, image_id: str = "") -> FeatureVector:
    """Run one image through the given backend (deterministic for fixed input)."""
    return backend.extract(img, image_id)


def _head_width(shape) -> int:
    width = 1
    for dim in shape[1:]:
        if isinstance(dim, int):
            width *= dim
    return width
