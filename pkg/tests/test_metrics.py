import math

import numpy as np
import pytest

from srcodec.errors import DegenerateInputError
from srcodec.metrics import bpp, channel_correlation, mse, psnr, sparsity_ratio

from conftest import random_image


class TestPsnr:
    def test_identical_is_inf(self, rng):
        img = random_image(rng, 8, 8)
        assert psnr(img, img) == math.inf

    def test_offset_by_one(self, rng):
        a = rng.integers(0, 255, (12, 9, 3), dtype=np.uint8)
        b = (a + 1).astype(np.uint8)
        assert psnr(a, b) == pytest.approx(20 * math.log10(255), abs=1e-9)

    def test_hand_computed_2x2(self):
        a = np.zeros((2, 2, 3), dtype=np.uint8)
        b = a.copy()
        b[:, :, 0] = 255  # one channel inverted
        expected_mse = (255.0**2 * 4) / 12
        assert mse(a, b) == pytest.approx(expected_mse, abs=1e-9)
        assert psnr(a, b) == pytest.approx(10 * math.log10(255**2 / expected_mse), abs=1e-9)

    def test_symmetry_and_monotonicity(self, rng):
        a = random_image(rng, 6, 6)
        b = random_image(rng, 6, 6)
        assert psnr(a, b) == psnr(b, a)
        worse = a.astype(np.int64)
        worse[0, 0, 0] = (worse[0, 0, 0] + 128) % 256
        assert psnr(a, worse.astype(np.uint8)) <= psnr(a, a)

    def test_dim_mismatch(self, rng):
        with pytest.raises(ValueError):
            psnr(random_image(rng, 4, 4), random_image(rng, 4, 5))


class TestSparsityRatio:
    def test_block_example(self):
        assert sparsity_ratio((16, 16), 76) == pytest.approx(768 / 76)

    def test_full_density_is_one(self):
        assert sparsity_ratio((16, 16), 16 * 16 * 3) == 1.0

    def test_berkeley_scale(self):
        assert sparsity_ratio((321, 481), 23160) == pytest.approx(20.0, abs=0.01)

    def test_zero_count_rejected(self):
        with pytest.raises(ValueError):
            sparsity_ratio((4, 4), 0)


class TestBpp:
    def test_four_bpp(self):
        assert bpp(4 * 512 * 512, (512, 512)) == 4.0

    def test_linear_in_size(self):
        assert bpp(2_000, (10, 10)) == 2 * bpp(1_000, (10, 10))

    def test_table_rate_bit_count(self):
        # 1.37 bpp on 512x512 corresponds to ~359137 bits
        assert bpp(359137, (512, 512)) == pytest.approx(1.37, abs=1e-5)


class TestChannelCorrelation:
    def test_identical_channels(self, rng):
        base = rng.uniform(0, 255, (10, 10))
        img = np.stack([base] * 3, axis=-1)
        assert channel_correlation(img) == pytest.approx((1.0, 1.0, 1.0), abs=1e-12)

    def test_anticorrelated_first_pair(self, rng):
        base = rng.uniform(0, 255, (10, 10))
        img = np.stack([base, base.mean() - (base - base.mean()), base], axis=-1)
        r1, _, r3 = channel_correlation(img)
        assert r1 == pytest.approx(-1.0, abs=1e-12)
        assert r3 == pytest.approx(1.0, abs=1e-12)

    def test_independent_channels_near_zero(self):
        rng = np.random.default_rng(99)
        img = rng.uniform(0, 255, (100, 100, 3))
        rs = channel_correlation(img)
        assert all(abs(r) < 0.05 for r in rs)

    def test_affine_invariance(self, rng):
        img = random_image(rng, 16, 16).astype(np.float64)
        scaled = img * np.array([2.0, 3.0, 0.5]) + np.array([10.0, -5.0, 40.0])
        assert channel_correlation(img) == pytest.approx(
            channel_correlation(scaled), abs=1e-9
        )

    def test_constant_channel_rejected(self):
        img = np.zeros((4, 4, 3))
        img[:, :, 1] = np.arange(16).reshape(4, 4)
        img[:, :, 2] = np.arange(16).reshape(4, 4) ** 2
        with pytest.raises(DegenerateInputError):
            channel_correlation(img)

    def test_bounds(self, natural_images):
        for img in natural_images.values():
            rs = channel_correlation(img)
            assert all(-1 - 1e-12 <= r <= 1 + 1e-12 for r in rs)
