import struct

import numpy as np
import pytest
import pywt

from src.fixtures import synthetic_layers
from src.models.errors import DimensionError, ImageParseError, ParameterError
from src.solvers.decompose import sparsity
from src.transforms.block_dct import BlockDctDictionary, block_dct_analyze, block_dct_synthesize
from src.transforms.coeffio import MAGIC, read_coefficients, write_coefficients
from src.transforms.wavelet import (
    DB2_LOWPASS,
    MultiscaleDictionary,
    multiscale_analyze,
    multiscale_synthesize,
)


def top_energy(coeffs: np.ndarray, k: int = 5) -> float:
    energy = np.sort(coeffs ** 2)[::-1]
    return float(energy[:k].sum())


class TestBlockDct:
    def test_constant_blocks_have_only_dc(self):
        img = np.full((64, 64), 0.4)
        s = block_dct_analyze(img, 32).reshape(4, 32 * 32)
        assert np.allclose(s[:, 0], 0.4 * 32)
        assert np.allclose(s[:, 1:], 0.0, atol=1e-12)

    def test_zero_image(self):
        assert not block_dct_analyze(np.zeros((64, 64)), 32).any()

    def test_roundtrip_and_energy(self, rng):
        img = rng.random((64, 64))
        s = block_dct_analyze(img, 32)
        assert np.linalg.norm(s) == pytest.approx(np.linalg.norm(img), rel=1e-10)
        assert np.allclose(block_dct_synthesize(s, 32, (64, 64)), img, rtol=0, atol=1e-10)

    def test_dc_atom_is_a_constant_block(self):
        s = np.zeros(64 * 64)
        # second block in row-major block order
        s[32 * 32] = 1.0
        img = block_dct_synthesize(s, 32, (64, 64))
        assert np.allclose(img[:32, 32:], 1.0 / 32)
        assert np.allclose(img[:32, :32], 0.0)
        assert np.allclose(img[32:, :], 0.0)

    def test_synthesis_preserves_energy(self, rng):
        s = rng.standard_normal(32 * 64)
        img = block_dct_synthesize(s, 16, (32, 64))
        assert np.linalg.norm(img) == pytest.approx(np.linalg.norm(s), rel=1e-10)

    def test_indivisible_dimensions(self):
        with pytest.raises(DimensionError, match="divisible by the DCT block size 32"):
            BlockDctDictionary((60, 64), block=32)
        with pytest.raises(DimensionError):
            block_dct_analyze(np.zeros((48, 64)), 32)

    def test_coefficient_count(self):
        with pytest.raises(DimensionError):
            block_dct_synthesize(np.zeros(10), 8, (16, 16))


class TestMultiscale:
    def test_db2_taps(self):
        assert np.allclose(pywt.Wavelet("db2").rec_lo, DB2_LOWPASS)

    def test_constant_image_lives_in_the_approximation(self):
        s = multiscale_analyze(np.full((64, 64), 0.7), 3).reshape(64, 64)
        detail = s.copy()
        detail[:8, :8] = 0.0
        assert np.allclose(detail, 0.0, atol=1e-10)
        assert np.abs(s[:8, :8]).min() > 0.0

    def test_zero_image(self):
        assert np.allclose(multiscale_analyze(np.zeros((64, 64)), 6), 0.0)

    @pytest.mark.parametrize("levels", [1, 3, 6])
    def test_perfect_reconstruction(self, levels, rng):
        img = rng.random((64, 64))
        s = multiscale_analyze(img, levels)
        assert np.allclose(multiscale_synthesize(s, levels, (64, 64)), img, rtol=0, atol=1e-10)
        assert np.linalg.norm(s) == pytest.approx(np.linalg.norm(img), rel=1e-10)

    def test_step_image_is_sparse(self):
        img = np.zeros((64, 64))
        img[:, 20:] = 1.0
        s = multiscale_analyze(img, 3)
        assert sparsity(s) <= 0.25 * s.size

    def test_indivisible_dimensions(self):
        with pytest.raises(DimensionError, match="2\\^levels"):
            MultiscaleDictionary((64, 64), levels=7)

    def test_non_orthogonal_wavelet(self):
        with pytest.raises(ParameterError):
            MultiscaleDictionary((64, 64), levels=2, wavelet="bior2.2")


class TestIncoherence:
    def test_block_sinusoid_prefers_the_dct(self):
        _, texture = synthetic_layers(64, block=32)
        dct = top_energy(block_dct_analyze(texture, 32))
        wav = top_energy(multiscale_analyze(texture, 6))
        assert dct >= 10.0 * wav

    def test_step_prefers_the_wavelets(self):
        img = np.zeros((128, 128))
        img[:, 64:] = 1.0
        img -= img.mean()
        dct = top_energy(block_dct_analyze(img, 32))
        wav = top_energy(multiscale_analyze(img, 7))
        assert wav > dct

    def test_step_preference_is_marginal_at_default_geometry(self):
        # off-grid step, 64x64, 6 levels: the wavelet lead is a few percent
        cartoon, _ = synthetic_layers(64, block=32)
        dct = top_energy(block_dct_analyze(cartoon, 32))
        wav = top_energy(multiscale_analyze(cartoon, 6))
        assert dct < wav < 1.1 * dct


class TestCoefficientFiles:
    def test_roundtrip(self, tmp_path, rng):
        s = rng.standard_normal(37)
        path = tmp_path / "coeffs.bin"
        write_coefficients(path, s)
        assert np.array_equal(read_coefficients(path), s)

    def test_header_layout(self, tmp_path):
        path = tmp_path / "coeffs.bin"
        write_coefficients(path, np.array([1.0, -2.0]))
        data = path.read_bytes()
        assert struct.unpack("<4sII", data[:12]) == (MAGIC, 2, 0)
        assert len(data) == 12 + 16

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "coeffs.bin"
        path.write_bytes(b"NOPE" + bytes(8))
        with pytest.raises(ImageParseError) as excinfo:
            read_coefficients(path)
        assert excinfo.value.offset == 0

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "coeffs.bin"
        write_coefficients(path, np.ones(4))
        path.write_bytes(path.read_bytes()[:-3])
        with pytest.raises(ImageParseError, match="expected 4 coefficients"):
            read_coefficients(path)
