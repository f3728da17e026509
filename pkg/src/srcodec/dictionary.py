"""Separable mixed dictionaries: redundant trigonometric atoms plus
translated localized prototypes, all unit-norm columns."""

from dataclasses import dataclass, field

import numpy as np

# Localized prototype shapes, id 0: a pulse, a triangular hat, and a smooth
# raised-cosine bump. Columns are renormalised after placement.
DEFAULT_PROTOTYPES = (
    np.array([1.0]),
    np.array([1.0, 2.0, 3.0, 2.0, 1.0]),
    0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(1, 8) / 8.0)),
)

PROTOTYPE_SETS = {0: DEFAULT_PROTOTYPES}


@dataclass(frozen=True)
class SeparableDictionary:
    """1D atom banks for the two block axes; 2D atoms are outer products."""

    atoms_x: np.ndarray  # (block_side, m_x), unit-norm columns
    atoms_y: np.ndarray  # (block_side, m_y)
    tags_x: tuple = field(default=(), compare=False)
    tags_y: tuple = field(default=(), compare=False)

    @property
    def block_side(self) -> int:
        return self.atoms_x.shape[0]

    @property
    def m_x(self) -> int:
        return self.atoms_x.shape[1]

    @property
    def m_y(self) -> int:
        return self.atoms_y.shape[1]


def build_trig_cos(block_side: int, m: int) -> np.ndarray:
    """Cosine atoms cos(pi*(2i-1)*(n-1)/(2m)), n = 1..m, normalised columns."""
    if block_side < 1 or m < 1:
        raise ValueError("block_side and m must be >= 1")
    i = np.arange(1, block_side + 1)[:, None]
    n = np.arange(1, m + 1)[None, :]
    atoms = np.cos(np.pi * (2 * i - 1) * (n - 1) / (2.0 * m))
    return atoms / np.linalg.norm(atoms, axis=0)


def build_trig_sin(block_side: int, m: int) -> np.ndarray:
    """Sine atoms sin(pi*(2i-1)*n/(2m)), n = 1..m, normalised columns."""
    if block_side < 1 or m < 1:
        raise ValueError("block_side and m must be >= 1")
    i = np.arange(1, block_side + 1)[:, None]
    n = np.arange(1, m + 1)[None, :]
    atoms = np.sin(np.pi * (2 * i - 1) * n / (2.0 * m))
    return atoms / np.linalg.norm(atoms, axis=0)


def build_prototype_dict(block_side: int, prototypes) -> np.ndarray:
    """Place each prototype at every one-sample shift that fits, renormalised."""
    columns = []
    for proto in prototypes:
        proto = np.asarray(proto, dtype=np.float64)
        if proto.size == 0:
            raise ValueError("empty prototype")
        if proto.size > block_side:
            raise ValueError(
                f"prototype support {proto.size} exceeds block side {block_side}"
            )
        for offset in range(block_side - proto.size + 1):
            col = np.zeros(block_side)
            col[offset : offset + proto.size] = proto
            columns.append(col / np.linalg.norm(col))
    return np.column_stack(columns)


def _dedup_columns(atoms, tags):
    # Drop later columns that duplicate an earlier one (up to sign).
    gram = np.abs(atoms.T @ atoms)
    keep = []
    for j in range(atoms.shape[1]):
        if all(gram[j, i] < 1.0 - 1e-10 for i in keep):
            keep.append(j)
    return atoms[:, keep], tuple(tags[j] for j in keep)


def build_mixed(
    block_side: int, redundancy: int = 2, prototype_set: int = 0
) -> SeparableDictionary:
    """Union of cosine, sine and prototype atoms; both axes share the bank."""
    if block_side < 2:
        raise ValueError("block_side must be >= 2")
    m = redundancy * block_side
    protos = PROTOTYPE_SETS[prototype_set]
    cos_atoms = build_trig_cos(block_side, m)
    sin_atoms = build_trig_sin(block_side, m)
    proto_atoms = build_prototype_dict(block_side, protos)
    tags = (
        [("cos", n + 1) for n in range(m)]
        + [("sin", n + 1) for n in range(m)]
        + [
            ("proto", p, off)
            for p, proto in enumerate(protos)
            for off in range(block_side - len(proto) + 1)
        ]
    )
    atoms = np.hstack([cos_atoms, sin_atoms, proto_atoms])
    atoms, tags = _dedup_columns(atoms, tags)
    return SeparableDictionary(atoms_x=atoms, atoms_y=atoms.copy(), tags_x=tags, tags_y=tags)
