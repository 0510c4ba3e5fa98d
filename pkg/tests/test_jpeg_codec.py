"""Codec pipeline tests: DCT against scipy, round trips, PSNR."""

import numpy as np
import pytest
import scipy.fft

from compresscheck.jpeg import CodecConfig, decode, encode, psnr, roundtrip
from compresscheck.jpeg.codec import forward_dct_blocks, inverse_dct_blocks

from helpers import synthetic_photo


class TestDct:
    def test_matches_scipy_orthonormal_dct(self):
        rng = np.random.default_rng(7)
        blocks = rng.uniform(-128, 127, size=(5, 4, 8, 8))
        ours = forward_dct_blocks(blocks)
        ref = scipy.fft.dctn(blocks, type=2, norm="ortho", axes=(-2, -1))
        np.testing.assert_allclose(ours, ref, atol=1e-10)

    def test_inverse_matches_scipy(self):
        rng = np.random.default_rng(8)
        coeffs = rng.uniform(-500, 500, size=(3, 8, 8))
        ours = inverse_dct_blocks(coeffs)
        ref = scipy.fft.idctn(coeffs, type=2, norm="ortho", axes=(-2, -1))
        np.testing.assert_allclose(ours, ref, atol=1e-10)

    def test_round_trip_is_identity(self):
        rng = np.random.default_rng(9)
        blocks = rng.uniform(-128, 127, size=(6, 8, 8))
        np.testing.assert_allclose(inverse_dct_blocks(forward_dct_blocks(blocks)),
                                   blocks, atol=1e-9)

    def test_constant_block_dc(self):
        # constant 255 luma block, level shifted: DC = (255-128)*8
        block = np.full((1, 8, 8), 127.0)
        coeffs = forward_dct_blocks(block)[0]
        assert abs(coeffs[0, 0] - 127.0 * 8.0) < 1e-9
        assert np.abs(coeffs[1:, :]).max() < 1e-9
        assert np.abs(coeffs[0, 1:]).max() < 1e-9


class TestEncode:
    def test_uniform_128_gives_all_zero_coefficients(self):
        img = np.full((24, 24, 3), 128, dtype=np.uint8)
        for q in (10, 50, 90):
            c = encode(img, CodecConfig(quality=q))
            for plane in c.planes.values():
                assert not plane.any()

    def test_constant_white_block_dc(self):
        img = np.full((8, 8, 3), 255, dtype=np.uint8)
        c = encode(img, CodecConfig(quality=50, chroma_subsampling="4:4:4"))
        y = c.planes["y"][0, 0]
        assert y[0, 0] == round((255 - 128) * 8 / 16)  # == 64
        assert not y.flatten()[1:].any()

    def test_lower_quality_keeps_fewer_nonzeros(self):
        img = synthetic_photo(0)
        n10 = sum(int(np.count_nonzero(p)) for p in
                  encode(img, CodecConfig(quality=10)).planes.values())
        n90 = sum(int(np.count_nonzero(p)) for p in
                  encode(img, CodecConfig(quality=90)).planes.values())
        assert n10 <= n90

    def test_block_count_invariant(self):
        img = synthetic_photo(1, height=33, width=50)
        c = encode(img, CodecConfig(quality=50, chroma_subsampling="4:2:0"))
        assert c.planes["y"].shape[:2] == (5, 7)      # ceil(33/8), ceil(50/8)
        assert c.planes["cb"].shape[:2] == (3, 4)     # ceil(17/8), ceil(25/8)
        c444 = encode(img, CodecConfig(quality=50, chroma_subsampling="4:4:4"))
        assert c444.planes["cb"].shape[:2] == (5, 7)

    def test_determinism(self):
        img = synthetic_photo(2)
        cfg = CodecConfig(quality=35)
        a, b = encode(img, cfg), encode(img, cfg)
        for name in a.planes:
            np.testing.assert_array_equal(a.planes[name], b.planes[name])

    def test_rejects_bad_images(self):
        with pytest.raises(ValueError):
            encode(np.zeros((10, 10), dtype=np.uint8), CodecConfig(quality=50))
        with pytest.raises(ValueError):
            encode(np.zeros((10, 10, 3), dtype=np.float32), CodecConfig(quality=50))


class TestDecode:
    @pytest.mark.parametrize("q", [10, 30, 50, 70, 90])
    def test_uniform_128_round_trips_exactly(self, q):
        img = np.full((40, 40, 3), 128, dtype=np.uint8)
        np.testing.assert_array_equal(roundtrip(img, q), img)

    def test_dims_preserved_with_padding_cropped(self):
        img = synthetic_photo(3, height=33, width=50)
        out = roundtrip(img, 50)
        assert out.shape == img.shape

    def test_higher_quality_higher_psnr(self):
        img = synthetic_photo(4, height=64, width=64)
        assert psnr(img, roundtrip(img, 90)) > psnr(img, roundtrip(img, 10))

    def test_psnr_monotone_over_seeded_corpus(self):
        qualities = (10, 30, 50, 70, 90)
        means = []
        for q in qualities:
            vals = [psnr(img, roundtrip(img, q))
                    for img in (synthetic_photo(s) for s in range(10))]
            means.append(np.mean(vals))
        assert all(a < b for a, b in zip(means, means[1:])), means

    def test_444_round_trip_beats_420_on_chroma_detail(self):
        rng = np.random.default_rng(11)
        img = np.zeros((32, 32, 3), dtype=np.uint8)
        img[:, ::2, 0] = 200  # alternating red columns stress chroma
        img[:, 1::2, 2] = 200
        img = np.clip(img.astype(int) + rng.integers(0, 20, img.shape), 0, 255).astype(np.uint8)
        p444 = psnr(img, roundtrip(img, 90, chroma_subsampling="4:4:4"))
        p420 = psnr(img, roundtrip(img, 90, chroma_subsampling="4:2:0"))
        assert p444 > p420


class TestPsnr:
    def test_identical_images_infinite(self):
        img = synthetic_photo(5)
        assert psnr(img, img) == float("inf")

    def test_black_vs_white_is_zero_db(self):
        a = np.zeros((4, 4, 3), dtype=np.uint8)
        b = np.full((4, 4, 3), 255, dtype=np.uint8)
        assert psnr(a, b) == pytest.approx(0.0, abs=1e-12)

    def test_single_unit_difference(self):
        a = np.zeros((2, 2, 3), dtype=np.uint8)
        b = a.copy()
        b[0, 0, 0] = 1
        # MSE = 1/12 -> 10*log10(255^2 * 12) = 58.9697...
        assert psnr(a, b) == pytest.approx(10 * np.log10(255 ** 2 * 12), abs=1e-9)

    def test_dim_mismatch_rejected(self):
        a = np.zeros((4, 4, 3), dtype=np.uint8)
        b = np.zeros((4, 5, 3), dtype=np.uint8)
        with pytest.raises(ValueError):
            psnr(a, b)


def test_config_validation():
    with pytest.raises(ValueError):
        CodecConfig(quality=0)
    with pytest.raises(ValueError):
        CodecConfig(quality=50, chroma_subsampling="4:2:2")
