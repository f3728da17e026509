import numpy as np
import pytest

from srcodec.wavelet import dwt2, idwt2, subband_shapes


@pytest.mark.parametrize("dims", [(321, 481), (16, 16), (64, 48), (33, 47)])
@pytest.mark.parametrize("levels", [1, 2, 3, 4])
def test_perfect_reconstruction(dims, levels, rng):
    if min(dims) < 2**levels:
        pytest.skip("dims too small for level count")
    x = rng.uniform(-255 * np.sqrt(3), 255 * np.sqrt(3), dims)
    assert np.max(np.abs(idwt2(dwt2(x, levels), levels) - x)) < 1e-9


def test_constant_plane_detail_free():
    x = np.full((64, 96), 200.0)
    coeffs = dwt2(x, 4)
    ll = coeffs[:4, :6].copy()
    coeffs[:4, :6] = 0.0
    assert np.max(np.abs(coeffs)) < 1e-10
    assert np.all(ll > 0)


def test_energy_ratio_sane(rng):
    x = rng.uniform(0, 255, (321, 481))
    ratio = np.linalg.norm(dwt2(x, 4)) / np.linalg.norm(x)
    assert 0.5 <= ratio <= 2.0


def test_linearity(rng):
    a = rng.standard_normal((40, 24))
    b = rng.standard_normal((40, 24))
    lhs = dwt2(2.5 * a - 1.25 * b, 3)
    rhs = 2.5 * dwt2(a, 3) - 1.25 * dwt2(b, 3)
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_zero_coefficients_give_zero_plane():
    assert np.array_equal(idwt2(np.zeros((32, 32)), 3), np.zeros((32, 32)))


def test_single_ll_coefficient_bump():
    coeffs = np.zeros((64, 64))
    coeffs[0, 0] = 1.0
    bump = idwt2(coeffs, 4)
    # synthesis scaling footprint: positive mass with only small negative lobes
    assert bump.sum() > 0
    assert bump.max() > 0
    assert abs(bump.min()) < 0.15 * bump.max()


def test_dims_too_small_rejected():
    with pytest.raises(ValueError, match="too small"):
        dwt2(np.zeros((8, 8)), 4)


def test_bad_level_count_rejected():
    with pytest.raises(ValueError):
        dwt2(np.zeros((16, 16)), 0)


def test_layout_tiles_the_plane():
    shapes = subband_shapes(321, 481, 4)
    assert shapes[0] == (321, 481)
    assert shapes[-1] == (21, 31)
    for (h0, w0), (h1, w1) in zip(shapes, shapes[1:]):
        assert h1 == (h0 + 1) // 2 and w1 == (w0 + 1) // 2


def test_odd_dims_roundtrip_levels(rng):
    x = rng.uniform(0, 441, (37, 53))
    for levels in (1, 2, 3, 4):
        assert np.max(np.abs(idwt2(dwt2(x, levels), levels) - x)) < 1e-9
