import numpy as np
import pytest

from opradius.errors import DimensionMismatch, ParameterOutOfRange
from opradius.matcore import spectral_norm
from opradius.radii import numerical_radius
from opradius.transforms import abs_adjoint_power, abs_power, aluthge_t, cartesian, offdiag_block, polar

from conftest import NILP, ginibre


def charpoly(a):
    return np.poly(np.linalg.eigvals(a))


class TestCartesian:
    def test_identity(self):
        re, im = cartesian(np.eye(3))
        assert np.allclose(re, np.eye(3)) and np.allclose(im, 0)

    def test_nilpotent(self):
        re, im = cartesian(NILP)
        assert np.allclose(re, [[0, 0.5], [0.5, 0]])
        assert np.allclose(im, [[0, -0.5j], [0.5j, 0]])
        assert spectral_norm(re) == pytest.approx(0.5)
        assert spectral_norm(im) == pytest.approx(0.5)

    def test_reconstruction_and_hermitian(self, rng):
        t = ginibre(rng, 5)
        re, im = cartesian(t)
        assert np.allclose(re, re.conj().T) and np.allclose(im, im.conj().T)
        assert spectral_norm(re + 1j * im - t) <= 1e-14 * spectral_norm(t)


class TestPolar:
    def test_diagonal(self):
        p = polar(np.diag([2.0, -3.0]))
        assert np.allclose(p.U, np.diag([1, -1]))
        assert np.allclose(p.P, np.diag([2, 3]))

    def test_nilpotent_partial_isometry(self):
        p = polar(NILP)
        assert np.allclose(p.U, NILP)
        assert np.allclose(p.P, np.diag([0, 1]))
        assert p.rank == 1

    def test_full_rank_unitary(self, rng):
        for n in (1, 3, 6):
            t = ginibre(rng, n)
            p = polar(t)
            assert spectral_norm(p.U.conj().T @ p.U - np.eye(n)) <= 1e-10
            assert spectral_norm(p.U @ p.P - t) <= 1e-12 * spectral_norm(t)

    def test_rank_deficient_projection(self, rng):
        t = ginibre(rng, 5, 2) @ ginibre(rng, 2, 5)
        p = polar(t)
        proj = p.U.conj().T @ p.U
        assert spectral_norm(proj @ proj - proj) <= 1e-10
        assert p.rank == 2
        assert spectral_norm(p.U @ p.P - t) <= 1e-12 * spectral_norm(t)


class TestPowers:
    def test_zero_power_identity(self):
        assert np.allclose(abs_power(NILP, 0), np.eye(2))
        assert np.allclose(abs_adjoint_power(NILP, 0), np.eye(2))

    def test_squares(self, rng):
        t = ginibre(rng, 4)
        assert np.allclose(abs_power(t, 2), t.conj().T @ t)
        assert np.allclose(abs_adjoint_power(t, 2), t @ t.conj().T)


class TestAluthge:
    def test_nilpotent_half_is_zero(self):
        assert np.allclose(aluthge_t(NILP, 0.5), 0)

    @pytest.mark.parametrize("t", [0.0, 0.3, 0.5, 1.0])
    def test_diagonal_fixed(self, t):
        d = np.diag([2.0, -3.0])
        assert np.allclose(aluthge_t(d, t), d)

    def test_t_zero_returns_T(self, rng):
        t = ginibre(rng, 4)
        assert spectral_norm(aluthge_t(t, 0.0) - t) <= 1e-12 * spectral_norm(t)

    def test_normal_norm_preserved(self, rng):
        q, _ = np.linalg.qr(ginibre(rng, 4))
        t = q @ np.diag(ginibre(rng, 4, 1)[:, 0]) @ q.conj().T
        for tt in (0.0, 0.25, 0.5, 0.9, 1.0):
            assert abs(spectral_norm(aluthge_t(t, tt)) - spectral_norm(t)) <= 1e-10 * spectral_norm(t)

    def test_same_spectrum_and_contraction(self, rng):
        for _ in range(5):
            t = ginibre(rng, 4)
            for tt in (0.2, 0.5, 0.8):
                a = aluthge_t(t, tt)
                assert np.allclose(charpoly(a), charpoly(t), atol=1e-9)
                assert spectral_norm(a) <= spectral_norm(t) * (1 + 1e-12)
                assert numerical_radius(a).lower <= numerical_radius(t).upper + 1e-10

    @pytest.mark.parametrize("t", [-0.1, 1.1, np.nan])
    def test_out_of_range(self, t):
        with pytest.raises(ParameterOutOfRange):
            aluthge_t(NILP, t)


class TestOffdiag:
    def test_scalar(self):
        assert np.allclose(offdiag_block([[1]], [[1]]), [[0, 1], [1, 0]])

    def test_shift_block(self):
        m = offdiag_block(np.eye(2), np.zeros((2, 2)))
        assert spectral_norm(m) == pytest.approx(1)
        assert numerical_radius(m, tol=1e-10).contains(0.5, 1e-10)

    def test_adjoint_and_swap(self, rng):
        x, y = ginibre(rng, 3), ginibre(rng, 3)
        m = offdiag_block(x, y)
        assert np.allclose(m.conj().T, offdiag_block(y.conj().T, x.conj().T))
        wa = numerical_radius(m, tol=1e-10).midpoint
        wb = numerical_radius(offdiag_block(y, x), tol=1e-10).midpoint
        assert abs(wa - wb) <= 1e-9

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            offdiag_block(np.eye(2), np.eye(3))
