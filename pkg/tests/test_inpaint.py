import numpy as np
import pytest
from scipy.fft import idct

from src.config.solver import InpaintConfig
from src.fixtures import random_mask, synthetic_layers, to_unit_range
from src.imaging.metrics import psnr
from src.models.errors import DimensionError, EmptyMaskError, ParameterError
from src.models.types import CoefficientPair
from src.operators.combined import CombinedOperator, min_l2_init
from src.operators.explicit import ExplicitMatrixOperator
from src.solvers.inpaint import data_term_gradient, inpaint, lambda_schedule, relaxed_cost
from src.transforms.block_dct import BlockDctDictionary
from src.transforms.wavelet import MultiscaleDictionary

from tests.conftest import unit_columns


class TestLambdaSchedule:
    def test_default_parameters(self):
        assert lambda_schedule(2.0, 5).values == (2.0, 1.6, 1.2, 0.8, 0.4)

    def test_single_level(self):
        assert lambda_schedule(1.0, 1).values == (1.0,)

    @pytest.mark.parametrize("lambda_max, n", [(0.5, 3), (2.0, 7), (1.3, 20)])
    def test_positive_and_decreasing(self, lambda_max, n):
        values = lambda_schedule(lambda_max, n).values
        assert all(v > 0 for v in values)
        assert all(b < a for a, b in zip(values, values[1:]))
        assert values[-1] == pytest.approx(lambda_max / n)

    @pytest.mark.parametrize("lambda_max, n", [(0.0, 3), (-1.0, 3), (1.0, 0)])
    def test_invalid(self, lambda_max, n):
        with pytest.raises(ParameterError):
            lambda_schedule(lambda_max, n)


def _straight_line_cost(s1, s2, a, b, c, m, shape, sigma, lam, gamma, eps):
    total = 0.0
    for v in list(s1) + list(s2):
        total += 1.0 - np.exp(-(v * v) / (2.0 * sigma * sigma))
    for i in range(c.size):
        r = c[i]
        for j in range(s1.size):
            r -= a[i, j] * s1[j]
        for j in range(s2.size):
            r -= b[i, j] * s2[j]
        total += lam * (m[i] * r) ** 2
    cartoon = (b @ s2).reshape(shape)
    height, width = shape
    tv = 0.0
    for y in range(height):
        for x in range(width):
            gx = cartoon[y, x + 1] - cartoon[y, x] if x + 1 < width else 0.0
            gy = cartoon[y + 1, x] - cartoon[y, x] if y + 1 < height else 0.0
            tv += np.sqrt(gx * gx + gy * gy + eps * eps) - eps
    return total + gamma * tv


class TestRelaxedCost:
    def test_everything_zero(self, small_comb):
        zero = CoefficientPair(np.zeros(1024), np.zeros(1024))
        mask = np.zeros((32, 32), dtype=bool)
        mask[::3] = True
        assert relaxed_cost(zero, np.zeros((32, 32)), mask, small_comb, 0.5, 2.0, 0.1) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_pure_fidelity(self, small_comb, rng):
        c = rng.random((32, 32))
        zero = CoefficientPair(np.zeros(1024), np.zeros(1024))
        cost = relaxed_cost(zero, c, np.ones((32, 32)), small_comb, 0.5, 1.6, 0.0)
        assert cost == pytest.approx(1.6 * np.sum(c * c), rel=1e-12)

    def test_matches_straight_line_evaluation(self, rng):
        a = unit_columns(rng, 8, 12)
        b = unit_columns(rng, 8, 12)
        comb = CombinedOperator(
            ExplicitMatrixOperator(a), ExplicitMatrixOperator(b, image_shape=(2, 4))
        )
        s = CoefficientPair(rng.standard_normal(12), rng.standard_normal(12))
        c = rng.random(8)
        m = (rng.random(8) > 0.3).astype(float)
        got = relaxed_cost(s, c, m, comb, 0.7, 1.3, 0.4, eps_tv=1e-3)
        expected = _straight_line_cost(s.s1, s.s2, a, b, c, m, (2, 4), 0.7, 1.3, 0.4, 1e-3)
        assert got == pytest.approx(expected, rel=1e-12)

    def test_mask_size_mismatch(self, small_comb):
        zero = CoefficientPair(np.zeros(1024), np.zeros(1024))
        with pytest.raises(DimensionError):
            relaxed_cost(zero, np.zeros((32, 32)), np.ones(10), small_comb, 0.5, 1.0, 0.0)


class TestDataTermGradient:
    def test_feasible_point(self, explicit_comb, rng):
        c = rng.standard_normal(10)
        s = min_l2_init(explicit_comb, c)
        grad = data_term_gradient(s, c, np.ones(10), explicit_comb, 2.0)
        assert np.allclose(grad.stacked(), 0.0, atol=1e-12)

    def test_nothing_observed(self, explicit_comb, rng):
        s = CoefficientPair(rng.standard_normal(20), rng.standard_normal(20))
        grad = data_term_gradient(s, rng.standard_normal(10), np.zeros(10), explicit_comb, 2.0)
        assert not grad.stacked().any()

    def test_matches_finite_differences(self, explicit_comb, rng):
        lam, h = 1.7, 1e-5
        c = rng.standard_normal(10)
        m = (rng.random(10) > 0.4).astype(float)
        s = CoefficientPair(rng.standard_normal(20), rng.standard_normal(20)).stacked()

        def fidelity(v):
            pair = CoefficientPair.from_stacked(v, 20)
            r = m * explicit_comb.residual(pair, c)
            return lam * float(r @ r)

        fd = np.empty_like(s)
        for i in range(s.size):
            e = np.zeros_like(s)
            e[i] = h
            fd[i] = (fidelity(s + e) - fidelity(s - e)) / (2 * h)
        got = data_term_gradient(CoefficientPair.from_stacked(s, 20), c, m, explicit_comb, lam).stacked()
        assert np.linalg.norm(got - fd) <= 1e-6 * np.linalg.norm(fd)


class TestInpaint:
    def test_planted_texture_with_everything_known(self):
        a = np.eye(16)
        b = idct(np.eye(16), norm="ortho", axis=0)
        comb = CombinedOperator(
            ExplicitMatrixOperator(a, tight_frame=True), ExplicitMatrixOperator(b, tight_frame=True)
        )
        planted = np.zeros(16)
        planted[[3, 11]] = [1.0, -0.8]
        c = a @ planted
        cfg = InpaintConfig(n_outer=5, n_inner=50, gamma=0.0, reimpose=False)
        c_hat, result = inpaint(c, np.ones(16, dtype=bool), comb, cfg)
        assert np.linalg.norm(c_hat - c) <= 1e-3 * np.linalg.norm(c)
        assert [record["lambda_"] for record in result.history] == [2.0, 1.6, 1.2, 0.8, 0.4]

    def test_minimum_norm_start_is_exact_when_everything_is_known(self, small_comb, rng):
        c = rng.random((32, 32))
        assert np.allclose(small_comb.forward(min_l2_init(small_comb, c.ravel())), c.ravel(), atol=1e-8)

    def test_missing_pixels_do_not_matter(self, small_comb, rng):
        c = rng.random((32, 32))
        mask = random_mask(c.shape, 0.3, seed=5)
        other = np.where(mask, c, rng.random(c.shape))
        cfg = InpaintConfig(n_outer=3, n_inner=5, reimpose=False)
        first, _ = inpaint(c, mask, small_comb, cfg)
        second, _ = inpaint(other, mask, small_comb, cfg)
        assert np.array_equal(first, second)

    def test_known_pixels_are_reimposed(self, small_comb, rng):
        c = rng.random((32, 32))
        mask = random_mask(c.shape, 0.25, seed=9)
        c_hat, _ = inpaint(c, mask, small_comb, InpaintConfig(n_outer=2, n_inner=3))
        assert np.array_equal(c_hat[mask], c[mask])

    def test_line_search_variant(self, small_comb, rng):
        c = rng.random((32, 32))
        mask = random_mask(c.shape, 0.2, seed=2)
        cfg = InpaintConfig(n_outer=2, n_inner=3, line_search=True)
        c_hat, result = inpaint(c, mask, small_comb, cfg)
        assert c_hat.shape == c.shape
        assert len(result.history) == 2

    def test_all_known_values_zero(self, small_comb, rng):
        mask = random_mask((32, 32), 0.5, seed=1)
        c = np.where(mask, 0.0, rng.random((32, 32)))
        c_hat, result = inpaint(c, mask, small_comb)
        assert not c_hat.any()
        assert result.history == []

    def test_empty_mask(self, small_comb):
        with pytest.raises(EmptyMaskError):
            inpaint(np.ones((32, 32)), np.zeros((32, 32), dtype=bool), small_comb)

    def test_mask_shape(self, small_comb):
        with pytest.raises(DimensionError):
            inpaint(np.ones((32, 32)), np.ones((16, 16), dtype=bool), small_comb)

    def test_non_binary_mask(self, small_comb):
        with pytest.raises(ParameterError):
            inpaint(np.ones((32, 32)), np.full((32, 32), 0.5), small_comb)


def test_synthetic_image_beats_zero_fill():
    cartoon, texture = synthetic_layers(64, block=32, amplitude=0.3)
    truth = to_unit_range(cartoon + texture, -0.3, 1.3)
    mask = random_mask(truth.shape, 0.2, seed=1234)
    observed = np.where(mask, truth, 0.0)

    comb = CombinedOperator(BlockDctDictionary((64, 64), 32), MultiscaleDictionary((64, 64), 6))
    cfg = InpaintConfig(n_outer=10, n_inner=20, sigma_decay=0.6)
    c_hat, _ = inpaint(observed, mask, comb, cfg)

    baseline = psnr(observed, truth, missing_of=mask)
    assert psnr(c_hat, truth, missing_of=mask) >= baseline + 10.0
    assert np.array_equal(c_hat[mask], observed[mask])
