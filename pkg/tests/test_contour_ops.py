import numpy as np
import pytest

from muskat import LiftedContour, SpectralGrid, garding_form, lambda_gamma, pv_cot_integral
from muskat.errors import InvalidContourError

# Empirical Garding floor, frozen from the first N=256 measurement; the same
# constant must bound the N=512 runs.
GARDING_C0 = 1e-6


def make_contour(grid, label):
    x = grid.nodes
    heights = {
        "constant": np.full(grid.n_modes, 0.5),
        "cosine": 0.4 + 0.05 * np.cos(x),
        "two_mode": 0.3 + 0.1 * np.sin(2 * x),
    }[label]
    return LiftedContour.from_height(grid, heights)


class TestLiftedContour:
    def test_rejects_nonpositive_height(self):
        grid = SpectralGrid(64)
        with pytest.raises(InvalidContourError):
            LiftedContour.from_height(grid, 0.1 * np.cos(grid.nodes))

    def test_rejects_inconsistent_derivative(self):
        grid = SpectralGrid(64)
        h = 0.4 + 0.05 * np.cos(grid.nodes)
        with pytest.raises(InvalidContourError):
            LiftedContour(h, np.ones(64), +1)

    def test_derivative_consistency(self):
        grid = SpectralGrid(128)
        contour = make_contour(grid, "cosine")
        assert np.abs(contour.h_prime - (-0.05 * np.sin(grid.nodes))).max() < 1e-8


class TestPrincipalValue:
    def test_vanishes_on_torus(self):
        grid = SpectralGrid(256)
        assert np.abs(pv_cot_integral(grid)).max() <= 1e-8

    @pytest.mark.parametrize("label", ["constant", "cosine", "two_mode"])
    def test_vanishes_on_lifted_contours(self, label):
        grid = SpectralGrid(256)
        contour = make_contour(grid, label)
        assert np.abs(pv_cot_integral(grid, contour)).max() <= 1e-8

    def test_vanishes_on_lower_contour(self):
        grid = SpectralGrid(256)
        x = grid.nodes
        contour = LiftedContour.from_height(grid, 0.4 + 0.05 * np.cos(x), sign=-1)
        assert np.abs(pv_cot_integral(grid, contour)).max() <= 1e-8


class TestLambdaGamma:
    def test_constant_height_reduction(self):
        grid = SpectralGrid(256)
        contour = make_contour(grid, "constant")
        zeta = contour.complex_nodes(grid)
        mode = np.exp(4j * zeta)
        out = lambda_gamma(mode, 4j * mode, contour, grid)
        assert np.abs(out - 4.0 * mode).max() <= 1e-8

    def test_constant_function_maps_to_zero(self):
        grid = SpectralGrid(256)
        contour = make_contour(grid, "constant")
        out = lambda_gamma(np.ones(256, complex), np.zeros(256, complex), contour, grid)
        assert np.abs(out).max() < 1e-14

    def test_negative_mode_derivative_identity(self):
        # For e^{-i6 zeta} the lower-contour trace is exponentially small,
        # so L_Gamma F should coincide with iF' up to that small error.
        grid = SpectralGrid(256)
        contour = make_contour(grid, "cosine")
        zeta = contour.complex_nodes(grid)
        mode = np.exp(-6j * zeta)
        prime = -6j * mode
        out = lambda_gamma(mode, prime, contour, grid)
        norm = grid.norm_l2(mode)
        assert grid.norm_l2(out - 1j * prime) <= 0.05 * norm

    def test_flat_lambda_comparison_residual_uniform_in_k(self):
        # residual of L_Gamma F = (1+ih')^{-1} Lambda f_+ stays bounded
        # relative to ||f_+|| while ||Lambda f_+|| grows like k
        grid = SpectralGrid(256)
        contour = make_contour(grid, "cosine")
        zeta = contour.complex_nodes(grid)
        jac = contour.jacobian()
        residuals = []
        main_terms = []
        for k in range(1, 33):
            mode = np.exp(1j * k * zeta)
            scale = grid.norm_l2(mode)
            mode = mode / scale
            out = lambda_gamma(mode, 1j * k * mode, contour, grid)
            lam = grid.from_spectral(grid.lambda_op(grid.to_spectral(mode)))
            residuals.append(grid.norm_l2(out - lam / jac))
            main_terms.append(grid.norm_l2(lam))
        residuals = np.array(residuals)
        main_terms = np.array(main_terms)
        assert np.all(residuals / residuals[0] <= 10.0)
        assert main_terms[-1] / main_terms[0] > 16.0  # ~k growth


class TestGardingForm:
    def test_single_cosine_eigenvalue(self):
        grid = SpectralGrid(256)
        f = np.cos(2 * grid.nodes)
        value = garding_form(np.ones(256), np.zeros(256), f, grid)
        assert abs(value - 2.0 * np.pi) < 1e-10

    def test_negative_mode_annihilated(self):
        grid = SpectralGrid(256)
        f = np.exp(-3j * grid.nodes)
        value = garding_form(np.ones(256), np.ones(256), f, grid)
        assert abs(value) < 1e-12

    def test_constant_nonnegative_coefficient(self):
        grid = SpectralGrid(256)
        rng = np.random.default_rng(5)
        for _ in range(10):
            f = rng.normal(size=256) + 1j * rng.normal(size=256)
            value = garding_form(np.full(256, 0.7), np.zeros(256), f, grid)
            assert value >= -1e-10

    @pytest.mark.parametrize("n_modes", [256, 512])
    def test_frozen_garding_constant(self, n_modes):
        grid = SpectralGrid(n_modes)
        x = grid.nodes
        a = 0.5 + 0.1 * np.cos(x)
        b = 0.3 * np.sin(x)
        assert (a - np.abs(b)).min() > 0.0
        rng = np.random.default_rng(42)
        worst = np.inf
        for _ in range(200):
            c = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
            c[np.abs(grid.wavenumbers) > n_modes // 3] = 0.0
            f = grid.from_spectral(c)
            f = f / grid.norm_l2(f)
            worst = min(worst, garding_form(a, b, f, grid))
        assert worst >= -GARDING_C0
