"""Learning a cross-color transform from data.

Alternates sparse approximation of the transformed training images with a
least-squares refit of the inverse transform, from random orthonormal starts.

Needs scikit-image for the training crops.
"""

import numpy as np
from skimage import data

from srcodec import dct_matrix, encode_image, EncoderConfig
from srcodec.color import learn_transform, random_orthonormal

## Build a small training set ---------------------------------------------------
# Crops of one photograph stand in for a training corpus; all must share dims.
source = data.coffee()
train = [
    source[y : y + 96, x : x + 96]
    for y in (0, 150, 290)
    for x in (0, 200, 400)
]
print(f"training on {len(train)} crops of 96x96")

## Learn from a few random starts ------------------------------------------------
rng = np.random.default_rng(42)
budget = 96 * 96 * 3 // 10  # keep 10% of the coefficients during learning
best = None
for restart in range(3):
    init = random_orthonormal(rng)
    transform, trace = learn_transform(
        train, k=budget, wavelet_levels=3, max_iter=12, init=init
    )
    marks = " -> ".join(f"{e:.3e}" for e in trace[:4])
    print(f"restart {restart}: {len(trace) - 1} accepted steps, objective {marks} ...")
    if best is None or trace[-1] < best[1]:
        best = (transform, trace[-1], restart)

transform, objective, which = best
print(f"\nbest restart: {which} (objective {objective:.3e})")
print("learned forward matrix:")
print(np.array_str(transform.forward, precision=4, suppress_small=True))

## Compare against the fixed dct --------------------------------------------------
# The learned matrix typically lands near a luminance-like leading column,
# which is why the fixed dct is already hard to beat.
probe = data.chelsea()[:160, :160]
for name, t in (("dct", dct_matrix()), ("learned", transform)):
    r = encode_image(probe, EncoderConfig(transform=t, target_atoms=2000))
    print(f"{name:8s}: {r.psnr:.2f} dB at {r.bpp:.3f} bpp (2000 atoms)")
