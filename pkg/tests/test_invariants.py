import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvsymp.errors import InconsistentInvariantsError, UnphysicalMatrixError
from cvsymp.invariants import (
    CovarianceMatrix,
    InvariantVector,
    char_poly_coefficients,
    check_full_uncertainty,
    check_symplectic_uncertainty,
    check_two_mode_full,
    is_positive_definite,
    principal_invariants,
    recover_spectrum_from_invariants,
    sigma_n,
    symplectic_eigenvalues,
)
from cvsymp.states import random_physical_cm, thermal, vacuum, with_spectrum
from cvsymp.symplectic import random_symplectic

from .oracles import brute_symplectic_eigenvalues, elementary_symmetric, minor_sum_by_enumeration, omega_ref


def tms_matrix(r):
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    return np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])


def planted(nu, seed, scale=1.0):
    return with_spectrum(nu, random_symplectic(len(nu), seed, scale))


class TestCovarianceMatrix:
    def test_symmetrizes_small_asymmetry(self):
        m = np.eye(2)
        m[0, 1] = 1e-12
        cm = CovarianceMatrix(m)
        assert cm.matrix[0, 1] == cm.matrix[1, 0] == 5e-13

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            CovarianceMatrix([[1.0, 0.1], [0.0, 1.0]])

    @pytest.mark.parametrize("shape", [(3, 3), (2, 4), (0, 0)])
    def test_rejects_bad_shape(self, shape):
        with pytest.raises(ValueError):
            CovarianceMatrix(np.ones(shape))

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            CovarianceMatrix([[np.nan, 0], [0, 1]])

    def test_blocks(self):
        cm = CovarianceMatrix(tms_matrix(0.5))
        assert cm.n_modes == 2
        np.testing.assert_array_equal(cm.block(0, 1), tms_matrix(0.5)[:2, 2:])

    def test_submatrix(self):
        cm = thermal(3, [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(cm.submatrix([2, 0]).matrix, np.diag([3.0, 3.0, 1.0, 1.0]))

    def test_immutable(self):
        with pytest.raises(ValueError):
            vacuum(1).matrix[0, 0] = 2.0


class TestPositiveDefinite:
    def test_basic(self):
        assert is_positive_definite(np.eye(4))
        assert not is_positive_definite(np.diag([1.0, 1.0, 1.0, -1.0]))
        assert not is_positive_definite(np.diag([1.0, 1e-14]))
        assert is_positive_definite(np.diag([1.0, 1e-10]))


class TestSymplecticEigenvalues:
    def test_vacuum(self):
        np.testing.assert_allclose(symplectic_eigenvalues(np.eye(6)), [1, 1, 1])

    def test_normal_form(self):
        np.testing.assert_allclose(symplectic_eigenvalues(np.diag([2.0, 2, 5, 5])), [5, 2])

    def test_two_mode_squeezed_is_pure(self):
        sigma = tms_matrix(0.5)
        np.testing.assert_allclose(brute_symplectic_eigenvalues(sigma), [1, 1], rtol=1e-12)
        np.testing.assert_allclose(symplectic_eigenvalues(sigma), [1, 1], rtol=1e-12)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_brute_force(self, seed):
        cm = random_physical_cm(seed % 5 + 1, 4.0, seed, scale=2.0)
        np.testing.assert_allclose(symplectic_eigenvalues(cm), brute_symplectic_eigenvalues(cm.matrix), rtol=1e-10)

    def test_rejects_non_positive(self):
        with pytest.raises(UnphysicalMatrixError):
            symplectic_eigenvalues(np.diag([1.0, -1.0]))


class TestCharPoly:
    def test_matches_numpy_poly(self, rng):
        A = rng.normal(size=(7, 7))
        np.testing.assert_allclose(char_poly_coefficients(A), np.poly(A), rtol=1e-10, atol=1e-10)

    def test_zero_matrix(self):
        np.testing.assert_array_equal(char_poly_coefficients(np.zeros((3, 3))), [1, 0, 0, 0])

    def test_scaled_input(self, rng):
        A = 1e4 * rng.normal(size=(5, 5))
        np.testing.assert_allclose(char_poly_coefficients(A), np.poly(A), rtol=1e-9)


class TestPrincipalInvariants:
    def test_single_mode_diag(self):
        inv = principal_invariants(np.diag([2.0, 3.5]))
        assert inv.deltas == (1.0, pytest.approx(7.0))

    @pytest.mark.parametrize("r", [0.0, 0.3, 1.2])
    def test_two_mode_squeezed(self, r):
        inv = principal_invariants(tms_matrix(r))
        np.testing.assert_allclose(inv.deltas, [1, 2, 1], rtol=1e-10)

    def test_delta_one_is_sum_of_block_determinants(self, rng):
        cm = random_physical_cm(2, 3.0, rng)
        blocks = sum(np.linalg.det(cm.block(i, j)) for i in range(2) for j in range(2))
        assert principal_invariants(cm).deltas[1] == pytest.approx(blocks, rel=1e-10)

    @pytest.mark.parametrize("seed", range(5))
    def test_last_is_determinant_first_is_one(self, seed):
        cm = random_physical_cm(seed + 1, 3.0, seed)
        inv = principal_invariants(cm)
        assert inv.deltas[0] == 1.0
        assert inv.deltas[-1] == pytest.approx(np.linalg.det(cm.matrix), rel=1e-8)

    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("seed", range(4))
    def test_minor_enumeration_oracle(self, n, seed):
        rng = np.random.default_rng(seed)
        m = rng.normal(size=(2 * n, 2 * n))
        sigma = m @ m.T + 0.1 * np.eye(2 * n)
        A = omega_ref(n) @ sigma
        expected = [minor_sum_by_enumeration(A, 2 * j) for j in range(n + 1)]
        np.testing.assert_allclose(principal_invariants(sigma).deltas, expected, rtol=1e-10, atol=1e-10)
        for k in range(1, 2 * n, 2):
            assert abs(minor_sum_by_enumeration(A, k)) < 1e-9 * max(1, np.max(np.abs(A)) ** k)

    @pytest.mark.parametrize("seed", range(6))
    def test_odd_sums_vanish(self, seed):
        cm = random_physical_cm(seed + 1, 3.0, seed, scale=2.0)
        inv = principal_invariants(cm)
        scale = max(inv.deltas)
        assert all(abs(e) <= 1e-9 * scale for e in inv.odd_sums)

    @pytest.mark.parametrize("seed", range(6))
    def test_elementary_symmetric_oracle(self, seed):
        cm = random_physical_cm(seed + 1, 3.0, seed, scale=2.0)
        nu2 = brute_symplectic_eigenvalues(cm.matrix) ** 2
        expected = [elementary_symmetric(nu2, j) for j in range(cm.n_modes + 1)]
        np.testing.assert_allclose(principal_invariants(cm).deltas, expected, rtol=1e-8)

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(1, 6), s1=st.integers(0, 2**32 - 1), s2=st.integers(0, 2**32 - 1))
    def test_symplectic_invariance(self, n, s1, s2):
        cm = random_physical_cm(n, 3.0, s1)
        S = random_symplectic(n, s2, scale=2.0)
        np.testing.assert_allclose(
            principal_invariants(cm.congruence(S)).deltas, principal_invariants(cm).deltas, rtol=1e-8
        )

    def test_invariant_vector_from_deltas(self):
        inv = InvariantVector.from_deltas([1, 29, 100])
        assert inv.sigma_n == 100 - 29 + 1
        with pytest.raises(ValueError):
            InvariantVector.from_deltas([2, 1])


class TestSigmaN:
    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_vacuum(self, n):
        assert sigma_n(vacuum(n)) == pytest.approx(0, abs=1e-12)

    def test_thermal(self):
        assert sigma_n(thermal(1, 2.0)) == pytest.approx(3.0)

    def test_two_mode_squeezed(self):
        assert sigma_n(tms_matrix(0.5)) == pytest.approx(0, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
    def test_product_identity(self, n, seed):
        cm = random_physical_cm(n, 3.0, seed)
        prod = np.prod(brute_symplectic_eigenvalues(cm.matrix) ** 2 - 1)
        assert abs(sigma_n(cm) - prod) <= 1e-9 * max(1.0, abs(prod))


class TestChecks:
    def test_symplectic_vacuum_boundary(self):
        rep = check_symplectic_uncertainty(vacuum(3))
        assert rep.passed
        assert rep.sigma_n == pytest.approx(0, abs=1e-12)
        assert rep.necessary_only

    def test_symplectic_fails_subvacuum(self):
        rep = check_symplectic_uncertainty(np.diag([0.5, 0.5]))
        assert not rep.passed
        assert rep.sigma_n == pytest.approx(-0.75)
        assert not rep.necessary_only

    def test_even_violation_blind_spot(self):
        cm = planted([0.5, 0.5], 3)
        sym = check_symplectic_uncertainty(cm)
        assert sym.passed
        assert sym.sigma_n == pytest.approx(0.75**2, rel=1e-9)
        full = check_full_uncertainty(cm)
        assert not full.passed
        np.testing.assert_allclose(full.spectrum, [0.5, 0.5], rtol=1e-9)

    def test_full_vacuum(self):
        rep = check_full_uncertainty(vacuum(2))
        assert rep.passed and rep.min_nu == pytest.approx(1.0)

    def test_full_thermal(self):
        rep = check_full_uncertainty(thermal(4, 1.5))
        assert rep.passed
        np.testing.assert_allclose(rep.spectrum, [1.5] * 4)

    def test_full_not_positive_definite(self):
        rep = check_full_uncertainty(np.diag([1.0, -1.0]))
        assert not rep.passed and not rep.positive_definite

    def test_two_mode_pure(self):
        assert check_two_mode_full(tms_matrix(0.8)).passed

    def test_two_mode_planted_even_violation(self):
        rep = check_two_mode_full(planted([0.5, 0.5], 4))
        assert not rep.passed
        assert rep.failed_conditions == ("Delta_2 >= 1",)
        assert principal_invariants(planted([0.5, 0.5], 4)).deltas[2] == pytest.approx(0.0625)

    def test_two_mode_vacuum(self):
        assert check_two_mode_full(vacuum(2)).passed

    def test_two_mode_wrong_size(self):
        with pytest.raises(ValueError):
            check_two_mode_full(vacuum(3))

    @pytest.mark.parametrize("seed", range(40))
    def test_full_implies_symplectic(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        cm = planted(rng.uniform(0.4, 2.5, n), rng)
        if check_full_uncertainty(cm).passed:
            assert check_symplectic_uncertainty(cm).passed


class TestRecoverSpectrum:
    def test_single(self):
        np.testing.assert_allclose(recover_spectrum_from_invariants([1, 4]), [2])

    def test_two(self):
        np.testing.assert_allclose(recover_spectrum_from_invariants([1, 29, 100]), [5, 2])

    def test_accepts_invariant_vector(self):
        inv = principal_invariants(thermal(2, [2.0, 3.0]))
        np.testing.assert_allclose(recover_spectrum_from_invariants(inv), [3, 2], rtol=1e-10)

    def test_round_trip_five_modes(self):
        cm = with_spectrum([4.0, 3.1, 2.5, 1.7, 1.1], random_symplectic(5, 8))
        np.testing.assert_allclose(
            recover_spectrum_from_invariants(principal_invariants(cm)), symplectic_eigenvalues(cm), rtol=1e-7
        )

    def test_complex_roots(self):
        # t^2 - t + 1 has complex roots
        with pytest.raises(InconsistentInvariantsError):
            recover_spectrum_from_invariants([1, 1, 1])

    def test_negative_roots(self):
        # t + 1 = 0
        with pytest.raises(InconsistentInvariantsError):
            recover_spectrum_from_invariants([1, -1])

    def test_bad_input(self):
        with pytest.raises(ValueError):
            recover_spectrum_from_invariants([2, 1])
