import cmath
import math

import numpy as np
import pytest

from ptrobin import (
    DegeneracyError,
    Grid,
    ModelParams,
    adjoint_eigenfunction,
    check_nondegenerate,
    closed_spectrum,
    dirichlet_mode,
    dispersion,
    dispersion_residual,
    eigenfunction,
    eigenvalue,
    inner_product,
    neumann_mode,
    norm,
    sample,
    solve_spectrum,
    spectral_pair,
)
from ptrobin.spectrum import (
    adjoint_coefficient,
    adjoint_mode_matrix,
    conjugate_pairing_defects,
    dirichlet_mode_matrix,
    eigen_mode_matrix,
    eigenfunction_coefficient,
    neumann_mode_matrix,
    wavenumber,
)

from .oracles import bisection_roots

D = math.pi

# real roots of the dispersion relation for alpha=0, beta=1, d=pi on (0, 6],
# frozen from the fine-mesh bisection oracle below (200001 mesh points)
BETA_MODEL_ROOTS = [
    0.638322262334,
    1.395773843796,
    2.264713242016,
    3.193207935412,
    4.150514676822,
    5.122730134387,
]


class TestEigenvalues:
    def test_ground_state_neumann_limit(self):
        assert eigenvalue(0, ModelParams(0.0, 0.0, D)) == 0.0

    def test_second_excited_level(self):
        assert eigenvalue(2, ModelParams(0.0, 0.0, D)) == pytest.approx(4.0, rel=1e-14)

    def test_ground_state_shift(self):
        assert eigenvalue(0, ModelParams(0.5, 0.0, D)) == pytest.approx(0.25, rel=1e-14)

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            eigenvalue(-1, ModelParams(0.0, 0.0, D))


class TestDegeneracy:
    def test_zero_coupling_not_degenerate(self):
        assert not check_nondegenerate(ModelParams(0.0, 0.0, 5.0)).degenerate

    def test_unit_coupling_on_pi_interval_degenerate(self):
        flag = check_nondegenerate(ModelParams(1.0, 0.0, D))
        assert flag.degenerate and flag.m == 1

    def test_half_coupling_not_degenerate(self):
        assert not check_nondegenerate(ModelParams(0.5, 0.0, D)).degenerate

    def test_small_perturbation_flips_flag(self):
        assert check_nondegenerate(ModelParams(2.0, 0.0, D)).degenerate
        assert not check_nondegenerate(ModelParams(2.0 + 1e-6, 0.0, D)).degenerate
        assert not check_nondegenerate(ModelParams(2.0 - 1e-6, 0.0, D)).degenerate

    def test_eigenfunction_refuses_degenerate_coupling(self):
        with pytest.raises(DegeneracyError):
            eigenfunction(1, ModelParams(1.0, 0.0, D))

    def test_adjoint_eigenfunction_defined_at_degenerate_coupling(self):
        f = adjoint_eigenfunction(1, ModelParams(1.0, 0.0, D))
        assert abs(f(0.0)) > 0


class TestNormalization:
    def test_limit_coefficient_at_zero_coupling(self):
        a0 = eigenfunction_coefficient(0, ModelParams(0.0, 0.0, D))
        assert a0 == pytest.approx(math.sqrt(1.0 / D), rel=1e-14)

    def test_first_mode_coefficient_closed_form(self):
        # solving the pairing equation with b1 = sqrt(2/pi) gives
        # a1 = sqrt(2/pi) * 1 / (1 - 0.25) = sqrt(2/pi) * 4/3
        a1 = eigenfunction_coefficient(1, ModelParams(0.5, 0.0, D))
        assert a1 == pytest.approx(math.sqrt(2.0 / D) * 4.0 / 3.0, rel=1e-14)

    def test_pairing_equation_index_zero(self):
        # direct substitution into the defining product for the 0 branch
        alpha, d = 0.7, 2.0
        p = ModelParams(alpha, 0.0, d)
        a0 = eigenfunction_coefficient(0, p)
        b0 = adjoint_coefficient(0, p)
        product = a0 * np.conj(b0) * (1 - cmath.exp(-2j * alpha * d)) / (2j * alpha)
        assert product == pytest.approx(1.0, rel=1e-13)

    @pytest.mark.parametrize("j", [1, 2, 5, 17])
    def test_pairing_equation_positive_index(self, j):
        alpha, d = 0.9, D
        p = ModelParams(alpha, 0.0, d)
        aj = eigenfunction_coefficient(j, p)
        bj = adjoint_coefficient(j, p)
        k = wavenumber(j, d)
        product = aj * np.conj(bj) * (k**2 - alpha**2) * d / (2 * k**2)
        assert product == pytest.approx(1.0, rel=1e-13)

    def test_spectral_pair_fields(self):
        pair = spectral_pair(3, ModelParams(0.5, 0.0, D))
        assert pair.j == 3
        assert pair.k == pytest.approx(3.0)
        assert pair.eigenvalue == pytest.approx(9.0)
        assert spectral_pair(0, ModelParams(0.5, 0.0, D)).k is None


class TestEigenfunctions:
    def test_zero_coupling_ground_state_is_constant(self, grid_pi):
        f = sample(eigenfunction(0, ModelParams(0.0, 0.0, D)), grid_pi)
        assert np.allclose(f.values, math.sqrt(1.0 / D), atol=1e-14)

    def test_zero_coupling_first_mode_is_neumann(self, grid_pi):
        f = sample(eigenfunction(1, ModelParams(0.0, 0.0, D)), grid_pi)
        chi = sample(neumann_mode(1, D), grid_pi)
        assert np.allclose(f.values, chi.values, atol=1e-14)

    def test_adjoint_first_mode_decomposition(self, grid_pi):
        f = sample(adjoint_eigenfunction(1, ModelParams(0.5, 0.0, D)), grid_pi)
        expected = sample(neumann_mode(1, D), grid_pi).values + 0.5j * sample(
            dirichlet_mode(1, D), grid_pi
        ).values
        assert np.allclose(f.values, expected, atol=1e-14)

    def test_adjoint_ground_state_at_zero_coupling(self, grid_pi):
        f = sample(adjoint_eigenfunction(0, ModelParams(0.0, 0.0, D)), grid_pi)
        chi = sample(neumann_mode(0, D), grid_pi)
        assert np.allclose(f.values, chi.values, atol=1e-15)

    @pytest.mark.parametrize("alpha", [0.3, 0.9])
    @pytest.mark.parametrize("j", [0, 1, 4])
    def test_robin_boundary_conditions(self, alpha, j):
        p = ModelParams(alpha, 0.0, D)
        f = eigenfunction(j, p)
        df = f.derivative()
        assert abs(df(0.0) + 1j * alpha * f(0.0)) < 1e-12
        assert abs(df(D) + 1j * alpha * f(D)) < 1e-12

    @pytest.mark.parametrize("j", [0, 1, 3])
    def test_adjoint_solves_flipped_coupling_problem(self, j, grid_pi):
        # the left family solves the eigenvalue problem with coupling -alpha
        alpha = 0.5
        p = ModelParams(alpha, 0.0, D)
        g = adjoint_eigenfunction(j, p)
        dg = g.derivative()
        assert abs(dg(0.0) + 1j * (-alpha) * g(0.0)) < 1e-12
        assert abs(dg(D) + 1j * (-alpha) * g(D)) < 1e-12
        lam = eigenvalue(j, p)
        residual = (-1.0) * g.second_derivative() - lam * g
        assert norm(sample(residual, grid_pi)) < 1e-10 * (1 + lam)

    def test_biorthonormality_by_quadrature(self, grid_pi_fine):
        p = ModelParams(0.5, 0.0, D)
        for j in range(5):
            fj = sample(adjoint_eigenfunction(j, p), grid_pi_fine)
            for k in range(5):
                gk = sample(eigenfunction(k, p), grid_pi_fine)
                expected = 1.0 if j == k else 0.0
                assert abs(inner_product(fj, gk) - expected) < 1e-7


class TestModes:
    def test_mean_mode_value(self):
        chi = neumann_mode(0, 4.0)
        assert chi(1.23) == pytest.approx(0.5, rel=1e-15)

    def test_third_dirichlet_mode_normalized(self, grid_pi_fine):
        chi = sample(dirichlet_mode(3, D), grid_pi_fine)
        assert norm(chi) == pytest.approx(1.0, abs=1e-9)

    def test_dirichlet_vanishes_at_both_ends(self):
        for j in (1, 2, 7):
            chi = dirichlet_mode(j, D)
            assert abs(chi(0.0)) < 1e-15
            assert abs(chi(D)) < 1e-13

    def test_dirichlet_needs_positive_index(self):
        with pytest.raises(ValueError):
            dirichlet_mode(0, D)

    def test_mode_matrices_match_sampled_functions(self, grid_pi):
        p = ModelParams(0.5, 0.0, D)
        em = eigen_mode_matrix(p, 4, grid_pi)
        am = adjoint_mode_matrix(p, 4, grid_pi)
        nm = neumann_mode_matrix(4, grid_pi)
        dm = dirichlet_mode_matrix(4, grid_pi)
        for j in range(5):
            assert np.allclose(em[j], sample(eigenfunction(j, p), grid_pi).values, atol=1e-13)
            assert np.allclose(am[j], sample(adjoint_eigenfunction(j, p), grid_pi).values, atol=1e-13)
            assert np.allclose(nm[j], sample(neumann_mode(j, D), grid_pi).values.real, atol=1e-13)
            if j >= 1:
                assert np.allclose(dm[j - 1], sample(dirichlet_mode(j, D), grid_pi).values.real, atol=1e-13)


class TestDispersion:
    def test_mode_wavenumbers_are_roots(self):
        p = ModelParams(0.3, 0.0, D)
        for j in (1, 2, 5):
            assert dispersion_residual(wavenumber(j, D), p) < 1e-12

    def test_coupling_root_exact(self):
        p = ModelParams(0.5, 0.0, D)
        assert dispersion_residual(0.5, p) == 0.0

    def test_frozen_off_root_value(self):
        # direct evaluation: |0.81 * sin(0.9 pi)| = 0.2503037654...
        p = ModelParams(0.0, 0.0, D)
        assert dispersion_residual(0.9, p) == pytest.approx(0.2503037654436924, rel=1e-12)

    def test_beta_zero_reduces_to_two_factor_form(self):
        p = ModelParams(0.7, 0.0, D)
        for k in (0.3, 1.2, 4.7):
            expected = (k**2 - 0.49) * math.sin(k * D)
            assert dispersion(k, p) == pytest.approx(expected, rel=1e-14)


class TestSolveSpectrum:
    def test_factorized_roots_recovered(self):
        # the coupling root 0.5 plus the integer mode roots
        p = ModelParams(0.5, 0.0, D)
        roots = solve_spectrum(p, k_max=5.5)
        ks = sorted(r.k.real for r in roots)
        assert np.allclose(ks, [0.5, 1, 2, 3, 4, 5], atol=1e-11)
        assert all(r.resolved for r in roots)
        assert all(abs(r.eigenvalue.imag) < 1e-14 for r in roots)

    def test_neumann_limit(self):
        p = ModelParams(0.0, 0.0, D)
        roots = solve_spectrum(p, k_max=4.5)
        ks = sorted(r.k.real for r in roots)
        assert np.allclose(ks, [1, 2, 3, 4], atol=1e-11)

    def test_real_robin_model_against_bisection_oracle(self):
        p = ModelParams(0.0, 1.0, D)

        def f(k: float) -> float:
            return (k * k - 1.0) * math.sin(k * D) - 2.0 * k * math.cos(k * D)

        oracle = bisection_roots(f, 1e-9, 6.0)
        assert np.allclose(oracle, BETA_MODEL_ROOTS, atol=1e-9)
        roots = solve_spectrum(p, k_max=6.0)
        ks = sorted(r.k.real for r in roots)
        assert len(ks) == len(oracle)
        assert np.allclose(ks, oracle, atol=1e-10)
        assert all(r.residual <= 1e-12 * (1 + abs(r.k) ** 2) for r in roots)

    def test_complex_pair_found_and_conjugate(self):
        p = ModelParams(1.0, -1.0, D)
        roots = solve_spectrum(p, k_max=6.0, expect_complex=True)
        complex_evs = [r.eigenvalue for r in roots if abs(r.eigenvalue.imag) > 1e-6]
        assert len(complex_evs) >= 2
        assert not conjugate_pairing_defects(roots, tol=1e-9)
        # members of each pair agree to conjugation
        top = max(complex_evs, key=lambda e: e.imag)
        bottom = min(complex_evs, key=lambda e: e.imag)
        assert abs(top - np.conj(bottom)) < 1e-9 * (1 + abs(top))

    def test_sorted_by_real_part(self):
        p = ModelParams(0.5, 0.0, D)
        roots = solve_spectrum(p, k_max=5.5)
        evs = [r.eigenvalue.real for r in roots]
        assert evs == sorted(evs)

    def test_invalid_k_max(self):
        with pytest.raises(ValueError):
            solve_spectrum(ModelParams(0.0, 0.0, D), k_max=-1.0)


class TestClosedSpectrum:
    def test_matches_eigenvalue_function(self):
        p = ModelParams(0.5, 0.0, D)
        records = closed_spectrum(p, 4)
        assert [r.eigenvalue.real for r in records] == pytest.approx([0.25, 1, 4, 9, 16])
        assert all(r.residual < 1e-10 for r in records)

    def test_pairing_defect_detection(self):
        from ptrobin.spectrum import RootRecord

        lone = RootRecord(k=1 + 1j, eigenvalue=complex(0, 2), residual=0.0)
        assert conjugate_pairing_defects([lone])
        pair = [
            lone,
            RootRecord(k=1 - 1j, eigenvalue=complex(0, -2), residual=0.0),
        ]
        assert not conjugate_pairing_defects(pair)
