"""Quantisation, symbol serialisation and the compressed container, plus the
full encode/decode pipelines.

Container layout (little-endian throughout)::

    magic "SRC1" | version u8
    orig_h, orig_w, pad_h, pad_w   4 x u32
    transform kind u8 [+ 9 x f64 forward matrix, row-major, for pc/learned]
    levels u8 | block side u8 | trig redundancy u8 | prototype set u8
    delta f64 | theta f64 | block count u32
    index section | magnitude section | sign section

Index/magnitude sections: symbol count u32, table entry count u16, entries
(symbol u32, bit length u8), byte-aligned Huffman payload. Sign section:
bit count u32 followed by the raw bits, MSB-first.
"""

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from . import huffman
from .color import (
    ColorTransform,
    apply_forward,
    apply_inverse,
    dct_matrix,
    identity_transform,
    pc_transform,
    ycbcr_matrix,
)
from .dictionary import PROTOTYPE_SETS, build_mixed
from .errors import StreamFormatError, TargetUnreachableError
from .image_io import pad_to_block
from .metrics import psnr as _psnr
from .pursuit import (
    BlockDecomposition,
    HbwPursuit,
    StopRule,
    concat_channels,
    partition_blocks,
    reconstruct,
    split_channels,
)
from .wavelet import dwt2, idwt2

MAGIC = b"SRC1"
VERSION = 1
PSNR_OVERSHOOT = 1.025  # pursue this factor past the target quality
DELTA_BOUNDS = (1e-3, 64.0)

_KIND_CODE = {"identity": 0, "dct": 1, "ycbcr": 2, "pc": 3, "learned": 4}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}
_MATRIX_KINDS = ("pc", "learned")


@dataclass(frozen=True)
class QuantParams:
    delta: float  # step
    theta: float  # dead-zone threshold

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.theta < 0:
            raise ValueError("theta must be nonnegative")


def quantize(c: float, p: QuantParams) -> tuple[int, int]:
    """Dead-zone uniform quantiser; returns (magnitude level, sign bit)."""
    mag = abs(c)
    if mag >= p.theta:
        level = math.ceil((mag - p.theta) / p.delta)
    else:
        level = 0
    return level, 1 if c < 0 else 0


def dequantize(level: int, sign: int, p: QuantParams) -> float:
    """Midpoint reconstruction of a nonzero quantised magnitude."""
    if level < 1:
        raise ValueError("zero levels are never stored")
    mag = p.delta * level + (p.theta - p.delta / 2.0)
    return -mag if sign else mag


def _quantize_array(coeffs: np.ndarray, p: QuantParams):
    mags = np.abs(coeffs)
    levels = np.where(mags >= p.theta, np.ceil((mags - p.theta) / p.delta), 0.0)
    return levels.astype(np.int64), (coeffs < 0).astype(np.int64)


def map_index_pair(lx: int, ly: int, m_x: int) -> int:
    """Column-major bijection of 1-based atom index pairs onto 1-based singles."""
    if not (1 <= lx <= m_x) or ly < 1:
        raise ValueError(f"index pair ({lx},{ly}) out of range for m_x={m_x}")
    return (ly - 1) * m_x + lx


def unmap_index(o: int, m_x: int) -> tuple[int, int]:
    if o < 1:
        raise ValueError(f"single index {o} out of range")
    ly, lx = divmod(o - 1, m_x)
    return lx + 1, ly + 1


@dataclass
class BlockSymbolStream:
    """Per-block index strings (first index, deltas, 0 terminator) with the
    magnitude and sign sequences they induce."""

    index_symbols: list
    magnitudes: list
    signs: list
    block_count: int


def serialize_blocks(decomps, p: QuantParams, m_x: int) -> BlockSymbolStream:
    """Quantise and serialise decompositions; entries quantising to 0 are dropped."""
    index_symbols: list[int] = []
    magnitudes: list[int] = []
    signs: list[int] = []
    for d in decomps:
        levels, sign_bits = _quantize_array(np.asarray(d.coeffs, dtype=np.float64), p)
        keep = levels > 0
        singles = [
            map_index_pair(int(lx) + 1, int(ly) + 1, m_x)
            for lx, ly in zip(np.asarray(d.atoms_x)[keep], np.asarray(d.atoms_y)[keep])
        ]
        order = np.argsort(singles, kind="stable")
        kept_levels = levels[keep][order]
        kept_signs = sign_bits[keep][order]
        prev = 0
        for i in order:
            index_symbols.append(singles[i] - prev)
            prev = singles[i]
        index_symbols.append(0)
        magnitudes.extend(int(v) for v in kept_levels)
        signs.extend(int(v) for v in kept_signs)
    return BlockSymbolStream(index_symbols, magnitudes, signs, len(decomps))


def deserialize_blocks(stream: BlockSymbolStream):
    """Recover per-block (single index, magnitude, sign) triples, ascending index."""
    out = []
    pos = 0
    taken = 0
    syms = stream.index_symbols
    for _ in range(stream.block_count):
        entries = []
        prev = 0
        while True:
            if pos >= len(syms):
                raise StreamFormatError("index stream ended inside a block")
            s = syms[pos]
            pos += 1
            if s == 0:
                break
            if s < 0:
                raise StreamFormatError(f"invalid index delta {s}")
            prev += s
            if taken >= len(stream.magnitudes) or taken >= len(stream.signs):
                raise StreamFormatError("magnitude/sign stream shorter than indices")
            if stream.magnitudes[taken] < 1:
                raise StreamFormatError("zero quantised magnitude in stream")
            entries.append((prev, stream.magnitudes[taken], stream.signs[taken]))
            taken += 1
        out.append(entries)
    if pos != len(syms) or taken != len(stream.magnitudes) or taken != len(stream.signs):
        raise StreamFormatError("trailing symbols after the last block")
    return out


@dataclass(frozen=True)
class StreamHeader:
    orig_h: int
    orig_w: int
    pad_h: int
    pad_w: int
    transform_kind: str
    transform_matrix: np.ndarray | None
    levels: int
    block_side: int
    redundancy: int
    prototype_set: int
    delta: float
    theta: float
    block_count: int


def _pack_section(out: bytearray, symbols):
    out += struct.pack("<I", len(symbols))
    table, payload = huffman.encode_symbols(symbols)
    out += struct.pack("<H", len(table))
    for sym, length in table:
        out += struct.pack("<IB", sym, length)
    out += payload


def _unpack_section(data: bytes, pos: int):
    (count,) = struct.unpack_from("<I", data, pos)
    pos += 4
    (n_entries,) = struct.unpack_from("<H", data, pos)
    pos += 2
    table = []
    for _ in range(n_entries):
        sym, length = struct.unpack_from("<IB", data, pos)
        pos += 5
        table.append((sym, length))
    reader = huffman.BitReader(data, pos)
    symbols = huffman.decode_symbols(table, reader, count)
    return symbols, reader.byte_pos


def pack_stream(header: StreamHeader, stream: BlockSymbolStream) -> bytes:
    out = bytearray()
    out += MAGIC
    out += struct.pack("<B", VERSION)
    out += struct.pack("<4I", header.orig_h, header.orig_w, header.pad_h, header.pad_w)
    out += struct.pack("<B", _KIND_CODE[header.transform_kind])
    if header.transform_kind in _MATRIX_KINDS:
        out += struct.pack("<9d", *np.asarray(header.transform_matrix).ravel())
    out += struct.pack(
        "<4B", header.levels, header.block_side, header.redundancy, header.prototype_set
    )
    out += struct.pack("<ddI", header.delta, header.theta, header.block_count)
    _pack_section(out, stream.index_symbols)
    _pack_section(out, stream.magnitudes)
    out += struct.pack("<I", len(stream.signs))
    out += np.packbits(np.asarray(stream.signs, dtype=np.uint8)).tobytes()
    return bytes(out)


def unpack_stream(data: bytes) -> tuple[StreamHeader, BlockSymbolStream]:
    if data[:4] != MAGIC:
        raise StreamFormatError("bad magic: not an srcodec stream")
    pos = 4
    try:
        (version,) = struct.unpack_from("<B", data, pos)
        pos += 1
        if version != VERSION:
            raise StreamFormatError(f"unsupported stream version {version}")
        orig_h, orig_w, pad_h, pad_w = struct.unpack_from("<4I", data, pos)
        pos += 16
        (kind_code,) = struct.unpack_from("<B", data, pos)
        pos += 1
        if kind_code not in _CODE_KIND:
            raise StreamFormatError(f"unknown transform kind {kind_code}")
        kind = _CODE_KIND[kind_code]
        matrix = None
        if kind in _MATRIX_KINDS:
            matrix = np.array(struct.unpack_from("<9d", data, pos)).reshape(3, 3)
            pos += 72
        levels, block_side, redundancy, prototype_set = struct.unpack_from("<4B", data, pos)
        pos += 4
        delta, theta, block_count = struct.unpack_from("<ddI", data, pos)
        pos += 20
        index_symbols, pos = _unpack_section(data, pos)
        magnitudes, pos = _unpack_section(data, pos)
        (n_signs,) = struct.unpack_from("<I", data, pos)
        pos += 4
        n_bytes = (n_signs + 7) // 8
        if pos + n_bytes > len(data):
            raise StreamFormatError(f"sign payload truncated at byte {pos}")
        packed = np.frombuffer(data[pos : pos + n_bytes], dtype=np.uint8)
        signs = list(np.unpackbits(packed)[:n_signs].astype(int))
    except struct.error as exc:
        raise StreamFormatError(f"stream truncated: {exc}") from None
    header = StreamHeader(
        orig_h=orig_h,
        orig_w=orig_w,
        pad_h=pad_h,
        pad_w=pad_w,
        transform_kind=kind,
        transform_matrix=matrix,
        levels=levels,
        block_side=block_side,
        redundancy=redundancy,
        prototype_set=prototype_set,
        delta=delta,
        theta=theta,
        block_count=block_count,
    )
    return header, BlockSymbolStream(index_symbols, magnitudes, list(signs), block_count)


@dataclass
class EncoderConfig:
    transform: str | ColorTransform = "dct"
    levels: int = 4
    block_side: int = 16
    redundancy: int = 2
    prototype_set: int = 0
    target_psnr: float | None = None
    target_atoms: int | None = None
    delta: float | None = None
    theta: float | None = None
    psnr_tol: float = 0.1
    max_probes: int = 30


@dataclass
class EncodeResult:
    data: bytes
    psnr: float
    sr: float
    bpp: float
    atoms: int
    stored: int
    delta: float
    theta: float
    probes: int = 0
    notes: dict = field(default_factory=dict)


def _resolve_transform(choice, img) -> ColorTransform:
    if isinstance(choice, ColorTransform):
        return choice
    if choice == "identity":
        return identity_transform()
    if choice == "dct":
        return dct_matrix()
    if choice == "ycbcr":
        return ycbcr_matrix()
    if choice == "pc":
        return pc_transform(img)
    raise ValueError(f"unknown transform {choice!r}")


def _transform_for_header(t: ColorTransform):
    return np.asarray(t.forward) if t.kind in _MATRIX_KINDS else None


def _transform_from_header(header: StreamHeader) -> ColorTransform:
    kind = header.transform_kind
    if kind == "identity":
        return identity_transform()
    if kind == "dct":
        return dct_matrix()
    if kind == "ycbcr":
        return ycbcr_matrix()
    forward = header.transform_matrix
    return ColorTransform(kind, forward, np.linalg.inv(forward))


def _analysis(img, transform, levels, block_side):
    padded = pad_to_block(img, block_side)
    u = apply_forward(padded.pixels, transform)
    w = np.stack([dwt2(u[:, :, z], levels) for z in range(3)], axis=-1)
    return padded, concat_channels(w)


def _synthesis(extended, transform, levels, orig_h, orig_w):
    vol = split_channels(extended)
    u = np.stack([idwt2(vol[:, :, z], levels) for z in range(3)], axis=-1)
    planes = apply_inverse(u, transform)
    img = np.clip(np.rint(planes), 0, 255).astype(np.uint8)
    return img[:orig_h, :orig_w]


def _pixels_from_decomps(decomps, dic, ext_dims, transform, levels, orig_h, orig_w):
    return _synthesis(reconstruct(decomps, dic, ext_dims), transform, levels, orig_h, orig_w)


def _quantized_decomps(decomps, p: QuantParams):
    out = []
    stored = 0
    for d in decomps:
        levels, signs = _quantize_array(d.coeffs, p)
        keep = levels > 0
        coeffs = (p.delta * levels[keep] + (p.theta - p.delta / 2.0)) * np.where(
            signs[keep] == 1, -1.0, 1.0
        )
        stored += int(np.count_nonzero(keep))
        out.append(
            type(d)(
                index=d.index,
                atoms_x=d.atoms_x[keep],
                atoms_y=d.atoms_y[keep],
                coeffs=coeffs,
            )
        )
    return out, stored


def _params_for(delta: float, theta_override) -> QuantParams:
    theta = delta / 2.0 if theta_override is None else theta_override
    return QuantParams(delta=delta, theta=theta)


def encode_image(img: np.ndarray, cfg: EncoderConfig) -> EncodeResult:
    """Run the full compression pipeline on an 8-bit RGB image.

    Exactly one of cfg.target_psnr / cfg.target_atoms selects the stop mode.
    In PSNR mode the pursuit aims slightly past the target and the
    quantisation step is then bisected until the decoded quality lands within
    cfg.psnr_tol of the target.
    """
    img = np.asarray(img)
    if (cfg.target_psnr is None) == (cfg.target_atoms is None):
        raise ValueError("exactly one of target_psnr/target_atoms must be set")
    transform = _resolve_transform(cfg.transform, img)
    padded, extended = _analysis(img, transform, cfg.levels, cfg.block_side)
    blocks = partition_blocks(extended, cfg.block_side)
    dic = build_mixed(cfg.block_side, cfg.redundancy, cfg.prototype_set)
    orig_h, orig_w = padded.orig_height, padded.orig_width
    pad_h, pad_w = padded.pixels.shape[:2]
    pursuit = HbwPursuit(blocks, dic)
    probes = 0
    notes = {}

    def decoded_psnr(p: QuantParams):
        qdecomps, stored = _quantized_decomps(pursuit.decompositions(), p)
        rec = _pixels_from_decomps(
            qdecomps, dic, extended.shape, transform, cfg.levels, orig_h, orig_w
        )
        return _psnr(img, rec), stored

    if cfg.target_atoms is not None:
        pursuit.run(StopRule.total_atoms(cfg.target_atoms))
        params = _params_for(cfg.delta if cfg.delta is not None else 1.0, cfg.theta)
        achieved, _ = decoded_psnr(params)
    else:
        target = float(cfg.target_psnr)
        psnr_goal = PSNR_OVERSHOOT * target
        bound_sq = pad_h * pad_w * 3 * 255.0**2 / 10.0 ** (psnr_goal / 10.0)
        for _ in range(40):
            before = pursuit.atoms_selected
            pursuit.run(StopRule.residual_threshold(math.sqrt(bound_sq)))
            rec = _pixels_from_decomps(
                pursuit.decompositions(), dic, extended.shape, transform, cfg.levels,
                orig_h, orig_w,
            )
            reached = _psnr(img, rec)
            if reached >= psnr_goal:
                break
            if pursuit.atoms_selected == before and pursuit.total_residual_sq > bound_sq:
                notes["pursuit_exhausted"] = reached  # dictionary span exhausted
                break
            # tighten the wavelet-domain proxy by the observed shortfall
            bound_sq *= 10.0 ** (-(psnr_goal - reached + 0.05) / 10.0)
        lo, hi = DELTA_BOUNDS
        params = _params_for(lo, cfg.theta)
        achieved, _ = decoded_psnr(params)
        probes = 1
        if achieved < target - cfg.psnr_tol:
            raise TargetUnreachableError(
                f"target {target} dB unreachable; best {achieved:.2f} dB at delta={lo}",
                best_achieved=achieved,
            )
        # Among probes that meet the target, keep the coarsest step (best rate);
        # overshooting the quality at the coarsest usable step is fine.
        best = (params, achieved)
        while probes < cfg.max_probes and abs(achieved - target) > cfg.psnr_tol:
            mid = math.sqrt(lo * hi)
            mid_params = _params_for(mid, cfg.theta)
            achieved, _ = decoded_psnr(mid_params)
            probes += 1
            if achieved >= target - cfg.psnr_tol:
                best = (mid_params, achieved)
            if achieved > target:
                lo = mid
            else:
                hi = mid
        params, achieved = best

    stream = serialize_blocks(pursuit.decompositions(), params, dic.m_x)
    stored = len(stream.magnitudes)
    header = StreamHeader(
        orig_h=orig_h,
        orig_w=orig_w,
        pad_h=pad_h,
        pad_w=pad_w,
        transform_kind=transform.kind,
        transform_matrix=_transform_for_header(transform),
        levels=cfg.levels,
        block_side=cfg.block_side,
        redundancy=cfg.redundancy,
        prototype_set=cfg.prototype_set,
        delta=params.delta,
        theta=params.theta,
        block_count=len(blocks),
    )
    data = pack_stream(header, stream)
    return EncodeResult(
        data=data,
        psnr=achieved,
        sr=orig_h * orig_w * 3 / max(stored, 1),
        bpp=len(data) * 8 / (orig_h * orig_w),
        atoms=pursuit.atoms_selected,
        stored=stored,
        delta=params.delta,
        theta=params.theta,
        probes=probes,
        notes=notes,
    )


def _validate_header(header: StreamHeader):
    ok = (
        header.orig_h >= 1
        and header.orig_w >= 1
        and header.pad_h >= header.orig_h
        and header.pad_w >= header.orig_w
        and header.levels >= 1
        and header.block_side >= 2
        and header.redundancy >= 1
        and header.prototype_set in PROTOTYPE_SETS
        and header.delta > 0
        and header.theta >= 0
    )
    if not ok:
        raise StreamFormatError("implausible header field values")


def decode_image(data: bytes) -> np.ndarray:
    """Invert the container back to an 8-bit RGB image."""
    header, stream = unpack_stream(data)
    _validate_header(header)
    dic = build_mixed(header.block_side, header.redundancy, header.prototype_set)
    if header.pad_h % header.block_side or header.pad_w % header.block_side:
        raise StreamFormatError("padded dims not divisible by block side")
    ext_dims = (3 * header.pad_h, header.pad_w)
    expected_blocks = (ext_dims[0] // header.block_side) * (ext_dims[1] // header.block_side)
    if header.block_count != expected_blocks:
        raise StreamFormatError(
            f"block count {header.block_count} does not match dims (expect {expected_blocks})"
        )
    params = QuantParams(delta=header.delta, theta=header.theta)
    max_single = dic.m_x * dic.m_y
    decomps = []
    for q, entries in enumerate(deserialize_blocks(stream)):
        if not entries:
            continue
        singles = [e[0] for e in entries]
        if singles[-1] > max_single:
            raise StreamFormatError(f"block {q}: atom index {singles[-1]} out of range")
        pairs = [unmap_index(o, dic.m_x) for o in singles]
        coeffs = np.array([dequantize(lvl, s, params) for _, lvl, s in entries])
        decomps.append(
            BlockDecomposition(
                index=q,
                atoms_x=np.array([p[0] - 1 for p in pairs], dtype=np.int64),
                atoms_y=np.array([p[1] - 1 for p in pairs], dtype=np.int64),
                coeffs=coeffs,
            )
        )
    transform = _transform_from_header(header)
    extended = reconstruct(decomps, dic, ext_dims)
    return _synthesis(extended, transform, header.levels, header.orig_h, header.orig_w)
