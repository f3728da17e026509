"""HBW-OMP2D: globally greedy orthogonal matching pursuit over block tiles.

The three coefficient planes are stacked into one tall array, tiled into
square blocks, and each block is approximated by a sum of separable rank-one
atoms. Coefficients of the orthogonal projection are read through a
biorthogonal dual set that is updated recursively as atoms arrive; block
scheduling is globally greedy: the block whose best candidate atom has the
largest magnitude is always extended next.
"""

import heapq
from dataclasses import dataclass

import numpy as np

from .dictionary import SeparableDictionary
from .errors import DegenerateSelectionError

_NOISE_FLOOR = 1e-12  # residuals below this are treated as exhausted
_SPAN_TOL = 1e-10  # Gram-Schmidt remainder below this means a dependent atom


@dataclass(frozen=True)
class StopRule:
    kind: str  # "atoms" | "residual"
    value: float

    @classmethod
    def total_atoms(cls, k: int) -> "StopRule":
        return cls("atoms", int(k))

    @classmethod
    def residual_threshold(cls, frobenius_tol: float) -> "StopRule":
        """Stop once the whole-array residual Frobenius norm falls below the bound."""
        return cls("residual", float(frobenius_tol))


@dataclass
class BlockDecomposition:
    index: int
    atoms_x: np.ndarray  # selected x-atom indices, selection order
    atoms_y: np.ndarray
    coeffs: np.ndarray

    @property
    def count(self) -> int:
        return int(self.coeffs.size)


def concat_channels(volume: np.ndarray) -> np.ndarray:
    """Stack the three (h, w) planes of a (h, w, 3) volume vertically."""
    volume = np.asarray(volume, dtype=np.float64)
    if volume.ndim != 3 or volume.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) volume, got {volume.shape}")
    return np.concatenate([volume[:, :, z] for z in range(3)], axis=0)


def split_channels(extended: np.ndarray) -> np.ndarray:
    extended = np.asarray(extended, dtype=np.float64)
    if extended.shape[0] % 3:
        raise ValueError("extended array height must be a multiple of 3")
    h = extended.shape[0] // 3
    return np.stack([extended[z * h : (z + 1) * h] for z in range(3)], axis=-1)


def partition_blocks(extended: np.ndarray, block_side: int) -> np.ndarray:
    """Row-major non-overlapping square tiles, as a (q, n, n) array."""
    extended = np.asarray(extended, dtype=np.float64)
    rows, cols = extended.shape
    if rows % block_side or cols % block_side:
        raise ValueError(f"dims {extended.shape} not divisible by block side {block_side}")
    tiles = extended.reshape(rows // block_side, block_side, cols // block_side, block_side)
    return tiles.swapaxes(1, 2).reshape(-1, block_side, block_side)


def assemble_blocks(blocks: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    rows, cols = dims
    blocks = np.asarray(blocks, dtype=np.float64)
    n = blocks.shape[-1]
    tiles = blocks.reshape(rows // n, cols // n, n, n)
    return tiles.swapaxes(1, 2).reshape(rows, cols)


def select_atom(residual: np.ndarray, dic: SeparableDictionary, exclude=None):
    """Best separable atom for a block residual.

    Returns (lx, ly, value) maximising |atoms_x[:, lx] @ residual @ atoms_y[:, ly]|,
    value signed; ties go to the smallest (ly, lx).
    """
    g = dic.atoms_x.T @ residual @ dic.atoms_y
    mag = np.abs(g)
    if exclude:
        for lx, ly in exclude:
            mag[lx, ly] = -1.0
    flat = int(np.argmax(mag.T))  # ly-major scan realises the tie rule
    ly, lx = divmod(flat, dic.m_x)
    if mag[lx, ly] < 0.0:
        return None  # every atom excluded
    return lx, ly, float(g[lx, ly])


class PursuitState:
    """Per-block pursuit bookkeeping: residual, selected atoms, dual sets."""

    def __init__(self, block: np.ndarray, dic: SeparableDictionary):
        block = np.asarray(block, dtype=np.float64)
        n = dic.block_side
        if block.shape != (n, n):
            raise ValueError(f"block shape {block.shape} does not match side {n}")
        self.block = block
        self.dic = dic
        self.residual = block.copy()
        self.residual_sq = float(np.sum(block * block))
        self.atoms_x: list[int] = []
        self.atoms_y: list[int] = []
        self.coeffs = np.zeros(0)
        self.k = 0
        self.banned: set = set()
        self.candidate: tuple | None = None
        self.generation = 0
        self._pairs: set = set()
        self._n2 = n * n
        # dual-set storage is allocated lazily: most blocks never get an atom
        self._q = np.empty((0, self._n2))
        self._qn2 = np.empty(0)
        self._b = np.empty((0, self._n2))

    @property
    def orthogonalized(self) -> np.ndarray:
        return self._q[: self.k]

    @property
    def biorthogonal(self) -> np.ndarray:
        return self._b[: self.k]

    def selected_atoms(self) -> np.ndarray:
        """Flattened rank-one atoms, one row per selection."""
        ax = self.dic.atoms_x[:, self.atoms_x]
        ay = self.dic.atoms_y[:, self.atoms_y]
        return np.einsum("xk,yk->kxy", ax, ay).reshape(self.k, -1)

    def _grow(self):
        cap = max(self._q.shape[0] * 2, 8)
        for name in ("_q", "_b"):
            new = np.empty((cap, self._n2))
            new[: self.k] = getattr(self, name)[: self.k]
            setattr(self, name, new)
        new_n = np.empty(cap)
        new_n[: self.k] = self._qn2[: self.k]
        self._qn2 = new_n


def omp2d_extend(state: PursuitState, pick: tuple[int, int]) -> PursuitState:
    """Add one atom to a block decomposition and re-project.

    Orthogonalises the new atom against the selected span (with one
    re-orthogonalisation sweep), updates the biorthogonal dual set, reads the
    projection coefficients through it, and recomputes the residual.

    Raises DegenerateSelectionError when the picked atom is numerically inside
    the selected span; the caller is expected to skip that candidate.
    """
    lx, ly = int(pick[0]), int(pick[1])
    if (lx, ly) in state._pairs:
        raise ValueError(f"atom ({lx},{ly}) already selected")
    dic = state.dic
    a = np.outer(dic.atoms_x[:, lx], dic.atoms_y[:, ly]).ravel()
    k = state.k
    q = a.copy()
    if k:
        qs = state._q[:k]
        qn2 = state._qn2[:k]
        q -= qs.T @ ((qs @ a) / qn2)
        q -= qs.T @ ((qs @ q) / qn2)  # re-orthogonalisation sweep
    qn2_new = float(q @ q)
    if qn2_new < _SPAN_TOL * _SPAN_TOL:  # ||new atom||_F is 1 by construction
        raise DegenerateSelectionError(f"atom ({lx},{ly}) lies in the selected span")
    b_new = q / qn2_new
    if k:
        bs = state._b[:k]
        bs -= np.outer(bs @ a, b_new)
    if k == state._q.shape[0]:
        state._grow()
    state._q[k] = q
    state._qn2[k] = qn2_new
    state._b[k] = b_new
    state.k = k + 1
    state.atoms_x.append(lx)
    state.atoms_y.append(ly)
    state._pairs.add((lx, ly))
    state.coeffs = state._b[: state.k] @ state.block.ravel()
    cols_x = dic.atoms_x[:, state.atoms_x]
    cols_y = dic.atoms_y[:, state.atoms_y]
    state.residual = state.block - (cols_x * state.coeffs) @ cols_y.T
    state.residual_sq = float(np.sum(state.residual * state.residual))
    return state


class HbwPursuit:
    """Globally greedy scheduler over all blocks; resumable across stop rules."""

    def __init__(self, blocks, dic: SeparableDictionary):
        blocks = np.asarray(blocks, dtype=np.float64)
        self.dic = dic
        self.states = [PursuitState(b, dic) for b in blocks]
        self.total_residual_sq = float(sum(s.residual_sq for s in self.states))
        self.atoms_selected = 0
        self._heap: list = []
        # Initial candidates batched in chunks to bound the (chunk, m_x, m_y)
        # intermediate on large images.
        chunk = max(1, (1 << 22) // max(dic.m_x * dic.m_y, 1))
        for start in range(0, len(self.states), chunk):
            part = blocks[start : start + chunk]
            t = np.tensordot(part, dic.atoms_x, axes=([1], [0]))  # (q, y, m_x)
            g = np.tensordot(t, dic.atoms_y, axes=([1], [0]))  # (q, m_x, m_y)
            flat = np.argmax(np.abs(g).transpose(0, 2, 1).reshape(len(part), -1), axis=1)
            ly, lx = np.divmod(flat, dic.m_x)
            for i in range(len(part)):
                q = start + i
                st = self.states[q]
                st.candidate = (int(lx[i]), int(ly[i]), float(g[i, lx[i], ly[i]]))
                heapq.heappush(self._heap, (-abs(st.candidate[2]), q, st.generation))

    def _refresh(self, q: int):
        st = self.states[q]
        st.generation += 1
        if np.sqrt(st.residual_sq) < _NOISE_FLOOR:
            st.candidate = None  # block exhausted
            return
        found = select_atom(st.residual, self.dic, exclude=st._pairs | st.banned)
        if found is None:
            st.candidate = None
            return
        st.candidate = found
        heapq.heappush(self._heap, (-abs(found[2]), q, st.generation))

    def _stopped(self, stop: StopRule) -> bool:
        if stop.kind == "atoms":
            return self.atoms_selected >= stop.value
        if stop.kind == "residual":
            return self.total_residual_sq <= stop.value**2
        raise ValueError(f"unknown stop rule {stop.kind!r}")

    def run(self, stop: StopRule) -> None:
        while not self._stopped(stop):
            while self._heap and self._heap[0][2] != self.states[self._heap[0][1]].generation:
                heapq.heappop(self._heap)  # stale candidate
            if not self._heap:
                break
            neg_v, q, gen = self._heap[0]
            if -neg_v < _NOISE_FLOOR:
                break  # every remaining residual is negligible
            heapq.heappop(self._heap)
            st = self.states[q]
            pair = st.candidate[:2]
            old_sq = st.residual_sq
            try:
                omp2d_extend(st, pair)
            except DegenerateSelectionError:
                st.banned.add(pair)
                self._refresh(q)
                continue
            self.atoms_selected += 1
            self.total_residual_sq += st.residual_sq - old_sq
            self._refresh(q)

    def decompositions(self) -> list[BlockDecomposition]:
        return [
            BlockDecomposition(
                index=q,
                atoms_x=np.asarray(st.atoms_x, dtype=np.int64),
                atoms_y=np.asarray(st.atoms_y, dtype=np.int64),
                coeffs=st.coeffs.copy(),
            )
            for q, st in enumerate(self.states)
        ]


def hbw_run(blocks, dic: SeparableDictionary, stop: StopRule) -> list[BlockDecomposition]:
    """Run the hierarchized blockwise pursuit to completion of a stop rule."""
    pursuit = HbwPursuit(blocks, dic)
    pursuit.run(stop)
    return pursuit.decompositions()


def reconstruct(
    decomps: list[BlockDecomposition], dic: SeparableDictionary, dims: tuple[int, int]
) -> np.ndarray:
    """Sum each block's rank-one atoms and assemble the tiles row-major."""
    rows, cols = dims
    n = dic.block_side
    if rows % n or cols % n:
        raise ValueError(f"dims {dims} not divisible by block side {n}")
    per_row = cols // n
    out = np.zeros((rows, cols))
    for d in decomps:
        if d.count == 0:
            continue
        in_range = (
            (0 <= d.atoms_x).all()
            and (d.atoms_x < dic.m_x).all()
            and (0 <= d.atoms_y).all()
            and (d.atoms_y < dic.m_y).all()
        )
        if not in_range:
            raise IndexError(f"block {d.index}: atom index out of dictionary range")
        tile = (dic.atoms_x[:, d.atoms_x] * d.coeffs) @ dic.atoms_y[:, d.atoms_y].T
        qi, qj = divmod(d.index, per_row)
        out[qi * n : (qi + 1) * n, qj * n : (qj + 1) * n] = tile
    return out
