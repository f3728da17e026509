"""Multi-level 2D CDF 9/7 wavelet transform (lifting scheme).

Coefficients are kept in a single array the size of the input, Mallat layout:
each level splits the current approximation rectangle into [approx | detail]
halves along both axes, so the deepest approximation band sits top-left.
Boundaries use whole-point symmetric extension; odd lengths split
ceil/floor between approximation and detail.
"""

import numpy as np

# Lifting constants of the irreversible 9/7 filter pair. The final scaling
# gives each 1D stage a DC gain of sqrt(2) (near-orthonormal convention).
_ALPHA = -1.586134342059924
_BETA = -0.052980118572961
_GAMMA = 0.882911075530934
_DELTA = 0.443506852043971
_ZETA = 1.1496043988602418


def _lift_odd(y, coef):
    # Odd samples pick up coef * (left even + right even); mirrored at the edge.
    n = y.shape[-1]
    y[..., 1 : n - 1 : 2] += coef * (y[..., 0 : n - 2 : 2] + y[..., 2:n:2])
    if n % 2 == 0:
        y[..., n - 1] += 2.0 * coef * y[..., n - 2]


def _lift_even(y, coef):
    n = y.shape[-1]
    y[..., 2 : n - 1 : 2] += coef * (y[..., 1 : n - 2 : 2] + y[..., 3:n:2])
    y[..., 0] += 2.0 * coef * y[..., 1]
    if n % 2 == 1:
        y[..., n - 1] += 2.0 * coef * y[..., n - 2]


def _analyze_last_axis(block):
    y = np.array(block, dtype=np.float64, order="C")
    n = y.shape[-1]
    if n < 2:
        return y
    _lift_odd(y, _ALPHA)
    _lift_even(y, _BETA)
    _lift_odd(y, _GAMMA)
    _lift_even(y, _DELTA)
    y[..., 0::2] *= _ZETA
    y[..., 1::2] /= _ZETA
    out = np.empty_like(y)
    half = (n + 1) // 2
    out[..., :half] = y[..., 0::2]
    out[..., half:] = y[..., 1::2]
    return out


def _synthesize_last_axis(block):
    seg = np.asarray(block, dtype=np.float64)
    n = seg.shape[-1]
    if n < 2:
        return seg.copy()
    half = (n + 1) // 2
    y = np.empty_like(seg)
    y[..., 0::2] = seg[..., :half]
    y[..., 1::2] = seg[..., half:]
    y[..., 0::2] /= _ZETA
    y[..., 1::2] *= _ZETA
    _lift_even(y, -_DELTA)
    _lift_odd(y, -_GAMMA)
    _lift_even(y, -_BETA)
    _lift_odd(y, -_ALPHA)
    return y


def _level_dims(height, width, levels):
    dims = [(height, width)]
    for _ in range(levels):
        height = (height + 1) // 2
        width = (width + 1) // 2
        dims.append((height, width))
    return dims


def dwt2(plane: np.ndarray, levels: int) -> np.ndarray:
    """Forward transform of a 2D plane; returns coefficients in Mallat layout."""
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2:
        raise ValueError(f"expected 2D plane, got shape {plane.shape}")
    if levels < 1:
        raise ValueError("levels must be >= 1")
    h, w = plane.shape
    if min(h, w) < 2**levels:
        raise ValueError(f"dims {plane.shape} too small for {levels} levels")
    out = plane.copy()
    for _ in range(levels):
        rect = out[:h, :w]
        rect[:] = _analyze_last_axis(rect)
        rect[:] = _analyze_last_axis(rect.T).T
        h = (h + 1) // 2
        w = (w + 1) // 2
    return out


def idwt2(coeffs: np.ndarray, levels: int) -> np.ndarray:
    """Exact synthesis inverse of :func:`dwt2`."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.ndim != 2:
        raise ValueError(f"expected 2D coefficient array, got shape {coeffs.shape}")
    if levels < 1:
        raise ValueError("levels must be >= 1")
    dims = _level_dims(coeffs.shape[0], coeffs.shape[1], levels)
    out = coeffs.copy()
    for h, w in reversed(dims[:-1]):
        rect = out[:h, :w]
        rect[:] = _synthesize_last_axis(rect.T).T
        rect[:] = _synthesize_last_axis(rect)
    return out


def subband_shapes(height: int, width: int, levels: int) -> list[tuple[int, int]]:
    """Approximation-rectangle dims per level, shallowest first."""
    return _level_dims(height, width, levels)
