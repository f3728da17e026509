"""srcodec: sparse-representation RGB image codec.

Compresses color images by decorrelating the channels with a 3x3 cross-color
transform, moving to the CDF 9/7 wavelet domain, approximating 16x16 blocks
with a globally greedy separable-dictionary pursuit, and entropy-coding the
quantised result. Ships the decoder and an analysis toolkit.
"""

from .codec import (
    EncoderConfig,
    EncodeResult,
    QuantParams,
    decode_image,
    dequantize,
    encode_image,
    quantize,
)
from .color import (
    ColorTransform,
    apply_forward,
    apply_inverse,
    dct_matrix,
    identity_transform,
    learn_transform,
    pc_transform,
    truncate_coefficients,
    ycbcr_matrix,
)
from .dictionary import SeparableDictionary, build_mixed
from .image_io import PaddedImage, pad_to_block, read_ppm, write_ppm
from .metrics import bpp, channel_correlation, mse, psnr, sparsity_ratio
from .pursuit import (
    BlockDecomposition,
    HbwPursuit,
    StopRule,
    concat_channels,
    hbw_run,
    partition_blocks,
    reconstruct,
    select_atom,
    split_channels,
)
from .wavelet import dwt2, idwt2

__version__ = "0.1.0"

__all__ = [
    "BlockDecomposition",
    "ColorTransform",
    "EncodeResult",
    "EncoderConfig",
    "HbwPursuit",
    "PaddedImage",
    "QuantParams",
    "SeparableDictionary",
    "StopRule",
    "apply_forward",
    "apply_inverse",
    "bpp",
    "build_mixed",
    "channel_correlation",
    "concat_channels",
    "dct_matrix",
    "decode_image",
    "dequantize",
    "dwt2",
    "encode_image",
    "hbw_run",
    "identity_transform",
    "idwt2",
    "learn_transform",
    "mse",
    "pad_to_block",
    "partition_blocks",
    "pc_transform",
    "psnr",
    "quantize",
    "read_ppm",
    "reconstruct",
    "select_atom",
    "sparsity_ratio",
    "split_channels",
    "truncate_coefficients",
    "write_ppm",
    "ycbcr_matrix",
]
