import numpy as np
import pytest
from PIL import Image

from augscope import ImageBuffer, ImageRecord, Manifest


def random_buffer(rng: np.random.Generator, max_side: int = 32) -> ImageBuffer:
    h = int(rng.integers(1, max_side + 1))
    w = int(rng.integers(1, max_side + 1))
    c = int(rng.choice([1, 3]))
    return ImageBuffer(rng.integers(0, 256, size=(h, w, c), dtype=np.uint8))


@pytest.fixture
def image_dir(tmp_path):
    """Six tiny labeled PNGs plus a manifest covering them."""
    rng = np.random.default_rng(7)
    records = []
    for i in range(6):
        path = tmp_path / f"img{i}.png"
        Image.fromarray(rng.integers(0, 256, size=(12, 10), dtype=np.uint8), mode="L").save(path)
        records.append(ImageRecord(
            id=f"img{i}",
            path=str(path),
            label="blood" if i % 2 == 0 else "no_blood",
        ))
    return tmp_path, Manifest(records)


def synthetic_manifest(count: int, blood: int, prefix: str = "r", source: str = "real",
                       origin_prefix: str | None = None) -> Manifest:
    """Path-free manifest fixture for planner tests (records never loaded)."""
    records = []
    for i in range(count):
        records.append(ImageRecord(
            id=f"{prefix}{i:04d}",
            path=f"/nonexistent/{prefix}{i:04d}.png",
            label="blood" if i < blood else "no_blood",
            source=source,
            origin_id=f"{origin_prefix}{i:04d}" if origin_prefix else None,
        ))
    return Manifest(records)
