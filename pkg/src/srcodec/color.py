"""Cross-color 3x3 transforms: fixed (dct, YCbCr), data-driven (PC), and learned.

A transform maps each RGB pixel, taken as a row vector, onto a new triple:
``u = pixel @ forward``. Channel planes stay spatially untouched.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, LearningError
from .wavelet import dwt2, idwt2

KINDS = ("identity", "dct", "ycbcr", "pc", "learned")

# Forward YCbCr columns: luma, blue-difference, red-difference.
_YCBCR_FORWARD = np.array(
    [
        [0.299, -0.169, 0.5],
        [0.587, -0.331, -0.419],
        [0.114, 0.5, -0.0813],
    ]
)
_YCBCR_INVERSE = np.linalg.inv(_YCBCR_FORWARD)


@dataclass(frozen=True)
class ColorTransform:
    kind: str
    forward: np.ndarray  # (3, 3)
    inverse: np.ndarray  # (3, 3)


def identity_transform() -> ColorTransform:
    eye = np.eye(3)
    return ColorTransform("identity", eye, eye.copy())


def dct_matrix() -> ColorTransform:
    """Orthonormal 3-point DCT-II; first column constant, inverse = transpose."""
    i = np.arange(1, 4)[:, None]
    n = np.arange(1, 4)[None, :]
    weights = np.where(n == 1, np.sqrt(1.0 / 3.0), np.sqrt(2.0 / 3.0))
    forward = weights * np.cos(np.pi * (2 * i - 1) * (n - 1) / 6.0)
    return ColorTransform("dct", forward, forward.T.copy())


def ycbcr_matrix() -> ColorTransform:
    return ColorTransform("ycbcr", _YCBCR_FORWARD.copy(), _YCBCR_INVERSE.copy())


def pc_transform(img: np.ndarray) -> ColorTransform:
    """Principal-components transform of an image's RGB pixel covariance.

    Columns are unit eigenvectors sorted by descending eigenvalue; each
    column's largest-magnitude entry is made positive. Inverse = transpose.
    """
    pixels = np.asarray(img, dtype=np.float64).reshape(-1, 3)
    centered = pixels - pixels.mean(axis=0)
    cov = centered.T @ centered / max(len(pixels) - 1, 1)
    if not np.any(np.abs(cov) > 0):
        raise DegenerateInputError("zero pixel covariance; PC transform undefined")
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(-evals, kind="stable")  # equal eigenvalues keep eigh order
    evecs = evecs[:, order]
    for col in range(3):
        if evecs[np.argmax(np.abs(evecs[:, col])), col] < 0:
            evecs[:, col] = -evecs[:, col]
    return ColorTransform("pc", evecs, evecs.T.copy())


def _as_planes(planes):
    planes = np.asarray(planes, dtype=np.float64)
    if planes.ndim != 3 or planes.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) planes, got {planes.shape}")
    return planes


def apply_forward(planes: np.ndarray, t: ColorTransform) -> np.ndarray:
    """Per-pixel right-multiplication of the channel triple by the forward matrix."""
    return _as_planes(planes) @ t.forward


def apply_inverse(planes: np.ndarray, t: ColorTransform) -> np.ndarray:
    return _as_planes(planes) @ t.inverse


def truncate_coefficients(volume: np.ndarray, k: int) -> np.ndarray:
    """Zero all but the k largest-magnitude entries of a coefficient volume.

    Selection is joint across the whole array; ties at the k-th magnitude are
    broken by scan order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    flat = volume.ravel()
    if k >= flat.size:
        return volume.copy()
    keep = np.argsort(-np.abs(flat), kind="stable")[:k]
    out = np.zeros_like(flat)
    out[keep] = flat[keep]
    return out.reshape(volume.shape)


def _sparsify_pass(originals, forward, k, levels):
    # Steps: transform channels, dwt, keep k largest entries, idwt.
    approx = []
    for img in originals:
        u = img @ forward
        w = np.stack([dwt2(u[:, :, z], levels) for z in range(3)], axis=-1)
        w = truncate_coefficients(w, k)
        approx.append(np.stack([idwt2(w[:, :, z], levels) for z in range(3)], axis=-1))
    return approx


def _objective(approx, originals, g):
    return float(sum(np.sum((u @ g - img) ** 2) for u, img in zip(approx, originals)))


def _fit_inverse(approx, originals):
    # Normal equations of the stacked model  original ~= approx @ G  over all 9 entries.
    ata = np.zeros((3, 3))
    atb = np.zeros((3, 3))
    for u, img in zip(approx, originals):
        a = u.reshape(-1, 3)
        b = img.reshape(-1, 3)
        ata += a.T @ a
        atb += a.T @ b
    try:
        g = np.linalg.solve(ata, atb)
    except np.linalg.LinAlgError:
        raise LearningError("singular normal equations in least-squares fit") from None
    return g, _objective(approx, originals, g)


def learn_transform(
    train: list,
    k: int,
    wavelet_levels: int = 4,
    max_iter: int = 50,
    init: ColorTransform | None = None,
    rel_tol: float = 1e-6,
) -> tuple[ColorTransform, list[float]]:
    """Learn a cross-color transform from a training set.

    Alternates a sparse-approximation pass of the transformed training images
    (wavelet domain, k largest coefficients per image) with a least-squares
    refit of the inverse transform, while the squared reconstruction error
    keeps decreasing.

    Parameters
    ----------
    train : list of (h, w, 3) arrays, all the same size
    k : per-image coefficient budget for the truncation step
    wavelet_levels : decomposition depth used during learning
    max_iter : maximum number of refit iterations; 0 returns `init` untouched
    init : invertible starting transform
    rel_tol : stop once the relative objective decrease falls below this

    Returns
    -------
    (transform, trace) : the best transform found and the objective value per
    accepted iteration (nonincreasing; entry 0 is the objective at `init`).
    """
    if init is None:
        raise ValueError("an invertible initial transform is required")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not train:
        raise ValueError("training set is empty")
    dims = {img.shape for img in train}
    if len(dims) != 1:
        raise ValueError(f"training images must share dimensions, got {sorted(dims)}")

    originals = [np.asarray(img, dtype=np.float64) for img in train]
    forward = np.array(init.forward, dtype=np.float64)
    try:
        inverse = np.linalg.inv(forward)
    except np.linalg.LinAlgError:
        raise LearningError("initial transform is singular") from None

    trace: list[float] = []
    best_forward, best_inverse = None, None
    accepted = 0
    while True:
        approx = _sparsify_pass(originals, forward, k, wavelet_levels)
        if not trace:
            trace.append(_objective(approx, originals, inverse))
            if max_iter == 0:
                break
        g, err = _fit_inverse(approx, originals)
        if err > trace[-1] + 1e-12:
            break
        try:
            refit_forward = np.linalg.inv(g)
        except np.linalg.LinAlgError:
            raise LearningError("fitted inverse transform is singular") from None
        trace.append(err)
        best_forward, best_inverse = refit_forward, g
        accepted += 1
        if accepted >= max_iter:
            break
        if trace[-2] - trace[-1] < rel_tol * max(abs(trace[-2]), 1e-30):
            break
        forward = refit_forward
    if accepted == 0:
        return init, trace
    return ColorTransform("learned", best_forward, best_inverse), trace


def random_orthonormal(rng: np.random.Generator) -> ColorTransform:
    """Random orthonormal transform (QR of a Gaussian sample), for learning inits."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.where(np.diag(r) >= 0, 1.0, -1.0)  # fix the QR sign ambiguity
    return ColorTransform("learned", q, q.T.copy())
