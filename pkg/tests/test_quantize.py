import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from awsym import (AntiWickFromSymbol, CoherentCombo, DenseKernel,
                   GridMismatchError, SampledField, apply_operator,
                   assemble_antiwick, coherent_state, gaussian_1d,
                   identity_kernel, inner, kernel_from_coherent,
                   kernel_from_weyl, make_grid, radial_gaussian, sample,
                   tensor, weyl_from_kernel)
from oracles import antiwick_matrix_element, coherent_state_func


def rank_one_gaussian_sigma(grid):
    """2 e^{-2 pi (x^2 + xi^2)} on a phase grid."""
    x, xi = np.meshgrid(grid.axis_nodes(), grid.axis_nodes(), indexing="ij")
    return 2.0 * np.exp(-2.0 * math.pi * (x**2 + xi**2))


class TestCoherentState:
    def test_ground_state(self, grid256):
        psi = coherent_state((0.0, 0.0), grid256)
        u = grid256.axis_nodes()
        assert_allclose(psi.values,
                        2.0**0.25 * np.exp(-math.pi * u**2), atol=1e-15)

    def test_pure_translation(self, grid256):
        psi = coherent_state((1.0, 0.0), grid256)
        u = grid256.axis_nodes()
        assert_allclose(psi.values,
                        2.0**0.25 * np.exp(-math.pi * (u - 1.0) ** 2),
                        atol=1e-15)

    def test_modulated_norm(self, grid256):
        psi = coherent_state((1.0, 3.0), grid256)
        assert inner(psi, psi).real == pytest.approx(1.0, abs=1e-10)

    def test_point_dimension_checked(self, grid256):
        with pytest.raises(ValueError):
            coherent_state((0.0, 0.0, 0.0), grid256)


class TestKernelFromCoherent:
    def test_single_ground_projector(self, grid64):
        combo = CoherentCombo(((1.0, (0.0, 0.0), (0.0, 0.0)),))
        k = kernel_from_coherent(combo, grid64)
        u = grid64.axis_nodes()
        ref = math.sqrt(2.0) * np.exp(-math.pi * (u[:, None] ** 2
                                                  + u[None, :] ** 2))
        assert_allclose(k.matrix, ref, atol=1e-14)

    def test_empty_combo_zero_kernel(self, grid64):
        k = kernel_from_coherent(CoherentCombo(()), grid64)
        assert np.all(k.matrix == 0.0)

    def test_offdiagonal_outer_product(self, grid64):
        combo = CoherentCombo(((1j, (1.0, 0.0), (0.0, 0.0)),))
        k = kernel_from_coherent(combo, grid64)
        left = coherent_state((1.0, 0.0), grid64).values
        right = coherent_state((0.0, 0.0), grid64).values
        assert_allclose(k.matrix, 1j * np.outer(left, np.conj(right)),
                        atol=1e-14)


class TestAssemble:
    def test_zero_symbol(self, phase64, grid64):
        op = AntiWickFromSymbol(SampledField(phase64,
                                             np.zeros(phase64.shape)))
        k = assemble_antiwick(op, grid64)
        assert np.all(k.matrix == 0.0)

    def test_unit_symbol_is_identity_over_h(self, phase256, grid256):
        op = AntiWickFromSymbol(SampledField(phase256,
                                             np.ones(phase256.shape)))
        k = assemble_antiwick(op, grid256)
        eye = np.eye(grid256.size) / grid256.spacing
        interior = slice(64, 192)
        dev = np.max(np.abs((k.matrix - eye)[interior, interior]))
        assert dev < 1e-6

    def test_unit_symbol_reproduces_vectors(self, phase256, grid256):
        op = AntiWickFromSymbol(SampledField(phase256,
                                             np.ones(phase256.shape)))
        k = assemble_antiwick(op, grid256)
        for u in (gaussian_1d(math.pi), gaussian_1d(2.0, center=1.0),
                  gaussian_1d(1.0, power=2, coeff=0.7)):
            f = sample(u, grid256)
            out = apply_operator(k, f)
            assert (out - f).l2_norm() / f.l2_norm() < 1e-6

    def test_gaussian_symbol_against_double_quadrature(self, phase64,
                                                       grid64):
        op = AntiWickFromSymbol(sample(radial_gaussian(2, math.pi), phase64))
        k = assemble_antiwick(op, grid64)
        psi = coherent_state((0.0, 0.0), grid64)
        got = inner(apply_operator(k, psi), psi)
        oracle = antiwick_matrix_element(
            lambda x0, xis: np.exp(-math.pi * (x0**2 + xis**2)),
            coherent_state_func(0.0, 0.0), coherent_state_func(0.0, 0.0),
            phase_extent=4.0, phase_n=161, pos_extent=8.0, pos_n=2001)
        assert abs(got - oracle) / abs(oracle) < 1e-6

    def test_self_adjoint_for_real_symbol(self, phase64, grid64):
        op = AntiWickFromSymbol(sample(radial_gaussian(2, 1.5), phase64))
        k = assemble_antiwick(op, grid64)
        assert np.max(np.abs(k.matrix - k.matrix.conj().T)) < 1e-12

    def test_positive_symbol_gives_psd_matrix(self):
        phase = make_grid(2, 128, 8.0)
        pos = make_grid(1, 128, 8.0)
        op = AntiWickFromSymbol(sample(radial_gaussian(2, 1.0), phase))
        k = assemble_antiwick(op, pos)
        eigs = np.linalg.eigvalsh(k.matrix)
        assert eigs.min() > -1e-8

    def test_translation_covariance(self, phase64, grid64):
        # shifting F by (x0, 0) conjugates the operator by translation
        shift = 8  # x0 = shift * h
        f0 = sample(radial_gaussian(2, 2.0), phase64)
        k0 = assemble_antiwick(AntiWickFromSymbol(f0), grid64)
        shifted = SampledField(phase64, np.roll(f0.values, shift, axis=0))
        k1 = assemble_antiwick(AntiWickFromSymbol(shifted), grid64)
        rolled = np.roll(np.roll(k0.matrix, shift, axis=0), shift, axis=1)
        interior = slice(16, 48)
        assert np.max(np.abs((k1.matrix - rolled)[interior, interior])) < 1e-6

    def test_grid_dimension_mismatch(self, phase64, grid256):
        op = AntiWickFromSymbol(SampledField(phase64,
                                             np.ones(phase64.shape)))
        with pytest.raises(GridMismatchError):
            assemble_antiwick(op, make_grid(2, 64, 4.0))


class TestWeylFromKernel:
    def test_rank_one_ground_state(self, grid256, phase256):
        combo = CoherentCombo(((1.0, (0.0, 0.0), (0.0, 0.0)),))
        k = kernel_from_coherent(combo, grid256.refined())
        sigma = weyl_from_kernel(k)
        assert sigma.grid == phase256
        assert np.max(np.abs(sigma.values
                             - rank_one_gaussian_sigma(phase256))) < 1e-8

    def test_zero_kernel(self, grid256):
        k = DenseKernel(grid256.refined(),
                        np.zeros((512, 512)))
        assert np.all(weyl_from_kernel(k).values == 0.0)

    def test_t_normalized_identity_gives_unit_symbol(self, grid256):
        # the t-slice quadrature runs at the phase spacing h, so the
        # discrete delta normalized as I/h transforms to the constant 1
        gk = grid256.refined()
        k = DenseKernel(gk, np.eye(gk.size) / grid256.spacing)
        sigma = weyl_from_kernel(k)
        assert np.max(np.abs(sigma.values - 1.0)) < 1e-6

    def test_requires_self_dual(self):
        gk = make_grid(1, 128, 8.0).refined()
        k = DenseKernel(gk, np.zeros((256, 256)))
        with pytest.raises(GridMismatchError):
            weyl_from_kernel(k)


class TestKernelFromWeyl:
    def test_exact_right_inverse(self, phase256):
        sigma = SampledField(phase256, rank_one_gaussian_sigma(phase256))
        k = kernel_from_weyl(sigma)
        back = weyl_from_kernel(k)
        assert np.max(np.abs(back.values - sigma.values)) < 1e-12

    def test_round_trip_on_rank_one_kernels(self, grid256):
        points = [((0.0, 0.0), (0.0, 0.0)),
                  ((1.0, 2.0), (-0.5, 1.0)),
                  ((-1.5, -1.0), (-1.5, -1.0))]
        for x, y in points:
            combo = CoherentCombo(((1.0, x, y),))
            k = kernel_from_coherent(combo, grid256.refined())
            k2 = kernel_from_weyl(weyl_from_kernel(k))
            assert np.max(np.abs(k2.matrix - k.matrix)) < 1e-10

    def test_gaussian_sigma_gives_rank_one_kernel(self, grid256, phase256):
        sigma = SampledField(phase256, rank_one_gaussian_sigma(phase256))
        k = kernel_from_weyl(sigma)
        ref = kernel_from_coherent(
            CoherentCombo(((1.0, (0.0, 0.0), (0.0, 0.0)),)),
            grid256.refined())
        assert np.max(np.abs(k.matrix - ref.matrix)) < 1e-10

    def test_unit_symbol_acts_as_identity(self, grid256, phase256):
        sigma = SampledField(phase256, np.ones(phase256.shape))
        k = kernel_from_weyl(sigma)
        # even-offset interior entries match I/h of the phase spacing
        sub = k.matrix[64:960:2, 64:960:2]
        eye = np.eye(sub.shape[0]) / phase256.spacing
        assert np.max(np.abs(sub - eye)) < 1e-9
        # as an operator it reconstructs band-limited fields
        f = sample(gaussian_1d(math.pi), grid256.refined())
        out = apply_operator(k, f)
        assert (out - f).l2_norm() / f.l2_norm() < 2e-3

    def test_position_dim_two_unsupported(self):
        g = make_grid(4, 16, 2.0)
        sigma = SampledField(g, np.zeros(g.shape))
        with pytest.raises(NotImplementedError):
            kernel_from_weyl(sigma)


class TestApply:
    def test_identity_kernel(self, grid64):
        k = identity_kernel(grid64)
        f = sample(gaussian_1d(math.pi), grid64)
        out = apply_operator(k, f)
        assert np.max(np.abs(out.values - f.values)) < 1e-12

    def test_ground_projector_fixes_ground_state(self, grid256):
        combo = CoherentCombo(((1.0, (0.0, 0.0), (0.0, 0.0)),))
        psi = coherent_state((0.0, 0.0), grid256)
        out = apply_operator(combo, psi)
        assert np.max(np.abs(out.values - psi.values)) < 1e-10

    def test_zero_symbol(self, phase64, grid64):
        op = AntiWickFromSymbol(SampledField(phase64,
                                             np.zeros(phase64.shape)))
        f = sample(gaussian_1d(math.pi), grid64)
        assert np.all(apply_operator(op, f).values == 0.0)

    def test_kernel_grid_mismatch(self, grid64, grid256):
        k = identity_kernel(grid64)
        f = sample(gaussian_1d(math.pi), grid256)
        with pytest.raises(GridMismatchError):
            apply_operator(k, f)


@pytest.fixture(scope="module")
def pos2():
    return make_grid(2, 16, 2.0)


@pytest.fixture(scope="module")
def phase4():
    return make_grid(4, 16, 2.0)


class TestTwoDimensionalPositionSpace:
    """Smoke coverage of the dimension-general paths on a coarse box
    (n = 2, per-axis N = 16, L = 2; errors are box truncation)."""

    def test_coherent_norm(self, pos2):
        psi = coherent_state((0.5, 0.0, 1.0, -0.5), pos2)
        assert inner(psi, psi).real == pytest.approx(1.0, abs=1e-6)

    def test_rank_one_weyl_symbol(self, pos2, phase4):
        combo = CoherentCombo(((1.0, (0.0,) * 4, (0.0,) * 4),))
        k = kernel_from_coherent(combo, pos2.refined())
        sigma = weyl_from_kernel(k)
        ax = phase4.axis_nodes()
        mesh = np.meshgrid(ax, ax, ax, ax, indexing="ij")
        ref = 4.0 * np.exp(-2 * math.pi * sum(m**2 for m in mesh))
        assert np.max(np.abs(sigma.values - ref)) < 2e-2

    def test_unit_symbol_identity(self, pos2, phase4):
        op = AntiWickFromSymbol(SampledField(phase4, np.ones(phase4.shape)))
        k = assemble_antiwick(op, pos2)
        f = sample(tensor(gaussian_1d(math.pi),
                          gaussian_1d(2.0, center=0.3)), pos2)
        out = apply_operator(k, f)
        assert (out - f).l2_norm() / f.l2_norm() < 2e-2


class TestMutualInversion:
    def test_weyl_then_kernel_then_weyl(self, grid256):
        combo = CoherentCombo(((0.7, (0.5, -1.0), (0.0, 0.5)),
                               (0.3j, (0.0, 0.0), (0.0, 0.0))))
        k = kernel_from_coherent(combo, grid256.refined())
        sigma = weyl_from_kernel(k)
        k2 = kernel_from_weyl(sigma)
        sigma2 = weyl_from_kernel(k2)
        assert np.max(np.abs(sigma2.values - sigma.values)) < 1e-10
        assert np.max(np.abs(k2.matrix - k.matrix)) < 1e-10
