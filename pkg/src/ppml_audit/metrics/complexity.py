"""Information-density metrics: normalized Shannon entropy and
compression ratios under a lossy (JPEG) and a lossless (PNG) codec."""

import io

import numpy as np
from PIL import Image

from ..data.dataset import ImageDataset
from ..errors import CodecError, InputError

JPEG_QUALITY = 75
MAX_ENTROPY_BITS = 8.0


def shannon_entropy(image: np.ndarray) -> float:
    """Histogram entropy of an 8-bit image, averaged over channels and
    normalized by the 8-bit maximum so the result lies in [0, 1].

    Position-independent by construction; a constant image scores 0 and an
    image using all 256 values equally often scores 1.
    """
    image = np.asarray(image)
    if image.size == 0:
        raise InputError("cannot compute entropy of an empty image")
    if image.dtype != np.uint8:
        raise InputError("entropy expects 8-bit images")
    if image.ndim == 2:
        image = image[..., None]
    total = image.shape[0] * image.shape[1]
    bits = 0.0
    for ch in range(image.shape[2]):
        counts = np.bincount(image[:, :, ch].ravel(), minlength=256)
        p = counts[counts > 0] / total
        bits += float(-(p * np.log2(p)).sum())
    return bits / image.shape[2] / MAX_ENTROPY_BITS


def dataset_entropy(ds: ImageDataset) -> float:
    """Mean per-image entropy over the train split."""
    if ds.train_images.shape[0] == 0:
        raise InputError("cannot compute entropy of an empty dataset")
    return float(np.mean([shannon_entropy(img) for img in ds.train_images]))


def _encode(image: np.ndarray, codec: str) -> int:
    if image.ndim != 3 or image.shape[2] not in (1, 3):
        raise InputError("expected an (H, W, 1) or (H, W, 3) uint8 image")
    frame = image[:, :, 0] if image.shape[2] == 1 else image
    buf = io.BytesIO()
    try:
        pil = Image.fromarray(frame)
        if codec == "lossy":
            pil.save(buf, format="JPEG", quality=JPEG_QUALITY)
        elif codec == "lossless":
            pil.save(buf, format="PNG")
        else:
            raise InputError(f"unknown codec {codec!r}")
    except (OSError, ValueError) as exc:
        raise CodecError(f"{codec} encoding failed: {exc}") from exc
    return buf.getbuffer().nbytes


def compression_ratio(image: np.ndarray, codec: str) -> float:
    """Raw byte size (H*W*C) divided by the encoded byte size.

    Higher means more compressible, i.e. less information-dense content.
    """
    image = np.asarray(image)
    if image.dtype != np.uint8:
        raise InputError("compression ratio expects 8-bit images")
    raw = image.size  # one byte per sample value
    return raw / _encode(image, codec)


def dataset_compression_ratios(ds: ImageDataset) -> dict:
    """Mean train-split ratio per codec, with the reciprocal and the savings
    fraction 1 - compressed/raw alongside (different report conventions)."""
    if ds.train_images.shape[0] == 0:
        raise InputError("cannot compress an empty dataset")
    out = {}
    for key, codec in (("jpeg", "lossy"), ("png", "lossless")):
        ratios = np.array([compression_ratio(img, codec) for img in ds.train_images])
        mean = float(ratios.mean())
        out[key] = {
            "ratio": mean,
            "inverse_ratio": 1.0 / mean,
            "savings": float(np.mean(1.0 - 1.0 / ratios)),
        }
    return out
