import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opradius.errors import InvalidMatrix, NoConvergence, NotHermitian, NotPSD, ParameterOutOfRange
from opradius.matcore import (EPS, ScalarFunctionSpec, abs_operator, adjoint, cmatrix, hermitian_eig,
                              is_normal, psd_function, segment_integral, segment_power_integral,
                              spectral_norm, spectral_norms, svd)

from conftest import NILP, ginibre, random_psd


class TestCMatrix:
    def test_scalar_becomes_1x1(self):
        assert cmatrix(3).shape == (1, 1)

    def test_copy_is_read_only(self):
        src = np.eye(2)
        a = cmatrix(src)
        src[0, 0] = 5
        assert a[0, 0] == 1 and not a.flags.writeable

    @pytest.mark.parametrize("bad", [np.zeros((2, 3)), np.zeros((0, 0)), np.zeros(3),
                                     [[1, np.nan], [0, 1]], [[np.inf]]])
    def test_rejects(self, bad):
        with pytest.raises(InvalidMatrix):
            cmatrix(bad)


class TestAdjoint:
    def test_examples(self):
        assert np.array_equal(adjoint(np.eye(3)), np.eye(3))
        assert np.array_equal(adjoint(NILP), NILP.T)
        assert adjoint([[1j]])[0, 0] == -1j

    def test_involution_exact(self, rng):
        a = ginibre(rng, 4)
        assert np.array_equal(adjoint(adjoint(a)), a)


class TestNorms:
    def test_examples(self):
        assert spectral_norm(np.eye(3)) == pytest.approx(1)
        assert spectral_norm(NILP) == pytest.approx(1)
        assert spectral_norm([[0, 2], [3, 0]]) == pytest.approx(3)

    def test_adjoint_and_gram_identities(self, rng):
        for n in range(1, 7):
            a = ginibre(rng, n) * 3
            na = spectral_norm(a)
            assert abs(spectral_norm(a.conj().T) - na) <= 1e-10 * na
            assert abs(spectral_norm(a.conj().T @ a) - na ** 2) <= 1e-10 * na ** 2

    def test_batched_matches_single(self, rng):
        stack = np.stack([ginibre(rng, 3) for _ in range(5)])
        assert np.allclose(spectral_norms(stack), [spectral_norm(m) for m in stack], rtol=1e-13)


class TestHermitianEig:
    def test_diagonal(self):
        lam, _ = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(lam, [1, 2, 3])

    def test_pauli_x(self):
        lam, _ = hermitian_eig([[0, 1], [1, 0]])
        assert np.allclose(lam, [-1, 1])

    def test_residuals(self, rng):
        for n in (1, 2, 5, 8):
            g = ginibre(rng, n)
            h = (g + g.conj().T) / 2
            lam, q = hermitian_eig(h)
            scale = spectral_norm(h)
            assert spectral_norm(q @ np.diag(lam) @ q.conj().T - h) <= 100 * n * EPS * scale
            assert spectral_norm(q.conj().T @ q - np.eye(n)) <= 100 * n * EPS
            assert np.all(np.diff(lam) >= 0)

    def test_small_asymmetry_is_symmetrized(self):
        h = np.array([[1.0, 1e-13], [0.0, 2.0]])
        lam, _ = hermitian_eig(h)
        assert np.allclose(lam, [1, 2])

    def test_large_asymmetry_rejected(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(NILP)


class TestSvd:
    def test_examples(self):
        assert np.allclose(svd(np.eye(3))[1], 1)
        assert np.allclose(svd(NILP)[1], [1, 0])

    def test_reconstruction(self, rng):
        a = ginibre(rng, 4)
        w, s, v = svd(a)
        scale = spectral_norm(a)
        assert spectral_norm(w @ np.diag(s) @ v.conj().T - a) <= 1e-12 * scale
        assert spectral_norm(w.conj().T @ w - np.eye(4)) <= 1e-12
        assert spectral_norm(v.conj().T @ v - np.eye(4)) <= 1e-12
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)


class TestPsdFunction:
    def test_sqrt_and_square(self):
        assert np.allclose(psd_function(np.diag([0.0, 4.0]), ScalarFunctionSpec.power(0.5)), np.diag([0, 2]))
        assert np.allclose(psd_function(np.diag([1.0, 3.0]), ScalarFunctionSpec.power(2)), np.diag([1, 9]))

    def test_power_roundtrip(self, rng):
        for r in (1.0, 1.3, 2.0):
            h = random_psd(rng, 5)
            back = psd_function(psd_function(h, ScalarFunctionSpec.power(r)), ScalarFunctionSpec.power(1 / r))
            assert spectral_norm(back - h) <= 1e-10 * max(1, spectral_norm(h))

    def test_diagonal_exact(self, rng):
        a = rng.uniform(0, 3, 4)
        out = psd_function(np.diag(a), ScalarFunctionSpec.power(1.7))
        assert np.allclose(np.diag(out).real, a ** 1.7, rtol=1e-13, atol=1e-15)

    def test_clamps_roundoff_negatives(self):
        out = psd_function(np.diag([-1e-12, 1.0]), ScalarFunctionSpec.power(0.5))
        assert np.allclose(out, np.diag([0, 1]))

    def test_rejects_negative(self):
        with pytest.raises(NotPSD):
            psd_function(np.diag([-1e-3, 1.0]), ScalarFunctionSpec.power(2))

    def test_zero_power_is_identity_on_kernel(self):
        out = psd_function(np.diag([0.0, 2.0]), ScalarFunctionSpec.power(0))
        assert np.allclose(out, np.eye(2))


class TestScalarFunctionSpec:
    def test_operator_convex_range(self):
        assert ScalarFunctionSpec.power(1.5).operator_convex
        assert not ScalarFunctionSpec.power(3).operator_convex

    @pytest.mark.parametrize("r", [-1, np.nan, np.inf])
    def test_bad_power(self, r):
        with pytest.raises(ParameterOutOfRange):
            ScalarFunctionSpec.power(r)

    def test_custom_map(self):
        f = ScalarFunctionSpec.custom([0, 1, 2], [0, 1, 3])
        assert np.allclose(f(np.array([0.5, 1.5, 3.0])), [0.5, 2.0, 5.0])

    @pytest.mark.parametrize("xs,ys", [([0, 1, 2], [0, 2, 3]), ([0, 1], [1, 0]), ([1, 2], [0, 1]), ([0], [0])])
    def test_custom_rejects_nonconvex_or_decreasing(self, xs, ys):
        with pytest.raises(ParameterOutOfRange):
            ScalarFunctionSpec.custom(xs, ys)


class TestAbsOperator:
    def test_examples(self):
        assert np.allclose(abs_operator(np.diag([-2, 3j])), np.diag([2, 3]))
        assert np.allclose(abs_operator(NILP), np.diag([0, 1]))

    def test_norm_preserved(self, rng):
        for _ in range(10):
            t = ginibre(rng, 4)
            assert abs(spectral_norm(abs_operator(t)) - spectral_norm(t)) <= 1e-10 * spectral_norm(t)


class TestSegmentIntegral:
    @pytest.mark.parametrize("r,expected", [(1.0, 0.5), (1.5, 0.4), (2.0, 1 / 3)])
    def test_swapped_diagonals(self, r, expected):
        out = segment_power_integral(np.diag([0.0, 1.0]), np.diag([1.0, 0.0]), r)
        assert spectral_norm(out - expected * np.eye(2)) <= 1e-10

    def test_constant_integrand(self):
        assert np.allclose(segment_power_integral(np.eye(3), np.eye(3), 1.7), np.eye(3))

    def test_integer_power_matches_polynomial(self, rng):
        # (tA + (1-t)B)^2 integrates to (A^2 + B^2)/3 + (AB + BA)/6
        a, b = random_psd(rng, 3), random_psd(rng, 3)
        exact = (a @ a + b @ b) / 3 + (a @ b + b @ a) / 6
        out = segment_power_integral(a, b, 2.0, tol=1e-12)
        assert spectral_norm(out - exact) <= 1e-10 * spectral_norm(exact)

    def test_output_psd(self, rng):
        out = segment_power_integral(random_psd(rng, 4, 2), random_psd(rng, 4, 1), 1.5)
        assert np.linalg.eigvalsh(out)[0] >= -1e-12

    def test_r_out_of_range(self):
        with pytest.raises(ParameterOutOfRange):
            segment_power_integral(np.eye(2), np.eye(2), 2.5)

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            segment_power_integral(-np.eye(2), np.eye(2), 1.5)

    def test_node_budget(self):
        # a kink-like integrand at tolerance 0 cannot be reached
        with pytest.raises((NoConvergence, ParameterOutOfRange)):
            segment_integral(np.diag([0.0, 1.0]), np.diag([1.0, 0.0]), ScalarFunctionSpec.power(0.5), tol=0.0)
        with pytest.raises(NoConvergence):
            segment_integral(np.diag([0.0, 1.0]), np.diag([1.0, 0.0]), ScalarFunctionSpec.power(0.5), tol=1e-300)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0, 10), b=st.floats(0, 10), r=st.floats(1, 2))
def test_hermite_hadamard_scalar(a, b, r):
    f = ScalarFunctionSpec.power(r)
    s = max(1.0, a, b) ** r
    val = segment_integral(np.array([[a]]), np.array([[b]]), f, tol=1e-13 * s)[0, 0].real
    assert f((a + b) / 2) <= val + 1e-10 * s
    assert val <= (f(a) + f(b)) / 2 + 1e-10 * s


def test_is_normal(rng):
    q, _ = np.linalg.qr(ginibre(rng, 4))
    assert is_normal(q @ np.diag([1, 2j, -3, 0.5]) @ q.conj().T)
    assert not is_normal(NILP)
