"""Independent reference implementations used to pin expected values."""

import numpy as np


def vectorized_atoms(dic):
    """All rank-one atoms as columns, enumerated ly-major to match tie-breaking."""
    n = dic.block_side
    cols = np.empty((n * n, dic.m_x * dic.m_y))
    for ly in range(dic.m_y):
        for lx in range(dic.m_x):
            cols[:, ly * dic.m_x + lx] = np.outer(
                dic.atoms_x[:, lx], dic.atoms_y[:, ly]
            ).ravel()
    return cols


def brute_force_omp(block, dic, steps):
    """Plain OMP on the vectorised block with explicit least-squares projection.

    Returns (selection sequence as (lx, ly) pairs, final coefficients).
    """
    atoms = vectorized_atoms(dic)
    target = block.ravel()
    residual = target.copy()
    chosen: list[int] = []
    coeffs = np.zeros(0)
    for _ in range(steps):
        inner = atoms.T @ residual
        pick = int(np.argmax(np.abs(inner)))
        chosen.append(pick)
        coeffs, *_ = np.linalg.lstsq(atoms[:, chosen], target, rcond=None)
        residual = target - atoms[:, chosen] @ coeffs
    pairs = [(c % dic.m_x, c // dic.m_x) for c in chosen]
    return pairs, coeffs


def brute_force_select(residual, dic):
    """Exhaustive double-loop atom selection with the (ly, lx) tie rule."""
    best = None
    for ly in range(dic.m_y):
        for lx in range(dic.m_x):
            value = float(dic.atoms_x[:, lx] @ residual @ dic.atoms_y[:, ly])
            if best is None or abs(value) > abs(best[2]):
                best = (lx, ly, value)
    return best
