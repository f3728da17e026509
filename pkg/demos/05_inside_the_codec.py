"""A look at the codec's moving parts, one stage at a time.

Small arrays only; every stage is checked against its inverse.
"""

import numpy as np

from srcodec import (
    QuantParams,
    build_mixed,
    dequantize,
    dwt2,
    idwt2,
    pad_to_block,
    quantize,
    read_ppm,
    select_atom,
    write_ppm,
)
from srcodec.codec import map_index_pair, unmap_index
from srcodec.huffman import BitReader, decode_symbols, encode_symbols
from srcodec.pursuit import PursuitState, omp2d_extend

rng = np.random.default_rng(0)

## 1. Containers and padding ----------------------------------------------------
img = rng.integers(0, 256, (21, 33, 3), dtype=np.uint8)
assert np.array_equal(read_ppm(write_ppm(img)), img)
padded = pad_to_block(img, 16)
print(f"1. ppm round-trips; 21x33 pads to {padded.pixels.shape[:2]} (multiples of 16)")

## 2. Wavelet transform -----------------------------------------------------------
plane = rng.uniform(0, 255, (48, 64))
err = np.max(np.abs(idwt2(dwt2(plane, 4), 4) - plane))
print(f"2. four-level wavelet round-trip error: {err:.2e}")

## 3. The dictionary ---------------------------------------------------------------
dic = build_mixed(16, redundancy=2)
gram = np.abs(dic.atoms_x.T @ dic.atoms_x)
np.fill_diagonal(gram, 0)
print(f"3. mixed dictionary: {dic.m_x} unit atoms/axis, max coherence {gram.max():.3f}")

## 4. One block, atom by atom -------------------------------------------------------
block = rng.standard_normal((16, 16)) * 10
state = PursuitState(block, dic)
for step in range(6):
    lx, ly, value = select_atom(state.residual, dic)
    omp2d_extend(state, (lx, ly))
    print(f"4. step {step}: atom ({lx:3d},{ly:3d}) value {value:+8.3f} "
          f"-> residual {np.sqrt(state.residual_sq):8.4f}")

## 5. Quantiser ----------------------------------------------------------------------
p = QuantParams(delta=0.5, theta=0.25)
for c in (3.14, -0.9, 0.1):
    level, sign = quantize(c, p)
    back = dequantize(level, sign, p) if level else 0.0
    print(f"5. {c:+.2f} -> level {level}, sign {sign} -> {back:+.3f}")

## 6. Index mapping and entropy coding -------------------------------------------------
o = map_index_pair(3, 7, dic.m_x)
assert unmap_index(o, dic.m_x) == (3, 7)
symbols = [5, 4, 13, 0, 0, 7, 0]  # two empty blocks in the middle
table, payload = encode_symbols(symbols)
decoded = decode_symbols(table, BitReader(payload), len(symbols))
assert decoded == symbols
print(f"6. pair (3,7) <-> single index {o}; {len(symbols)} symbols -> "
      f"{len(payload)} Huffman byte(s), decoded losslessly")
