"""Quality and sparsity measures: PSNR, MSE, sparsity ratio, bitrate,
inter-channel correlation."""

import math

import numpy as np

from .errors import DegenerateInputError


def mse(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared error over all three channels."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio (dB) for 8-bit images; +inf when identical."""
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / err)


def sparsity_ratio(dims: tuple[int, int], nonzeros: int) -> float:
    """Total elements of a three-channel array over the retained count."""
    if nonzeros < 1:
        raise ValueError("nonzero count must be >= 1")
    lx, ly = dims
    return lx * ly * 3 / nonzeros


def bpp(file_bits: int, dims: tuple[int, int]) -> float:
    """Compressed bits per single-channel pixel of the original image."""
    lx, ly = dims
    return file_bits / (lx * ly)


def channel_correlation(img: np.ndarray) -> tuple[float, float, float]:
    """Pearson correlations of the mean-removed channel pairs (1,2), (2,3), (1,3)."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) image, got {img.shape}")
    centered = [img[:, :, z] - img[:, :, z].mean() for z in range(3)]
    norms = [float(np.sqrt(np.sum(c * c))) for c in centered]
    if any(n == 0.0 for n in norms):
        raise DegenerateInputError("constant channel: correlation undefined")

    def corr(i, j):
        return float(np.sum(centered[i] * centered[j]) / (norms[i] * norms[j]))

    return corr(0, 1), corr(1, 2), corr(0, 2)
