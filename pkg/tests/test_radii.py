import math

import numpy as np
import pytest

from opradius import kernels
from opradius.errors import DimensionMismatch, InvalidTolerance
from opradius.matcore import spectral_norm
from opradius.radii import (_sphere_basis, euclidean_radius, numerical_radius, numerical_radius_max,
                            we_objective, we_oracle, w_objective, w_oracle)
from opradius.sweep import hopf_coords, kyp_upper, sphere_bnb

from conftest import NILP, ginibre


def shift(n):
    return np.eye(n, k=1)


class TestNumericalRadiusKnown:
    def test_identity(self):
        e = numerical_radius(np.eye(3), tol=1e-10)
        assert e.contains(1.0) and e.upper - e.lower <= 1e-10

    def test_nilpotent(self):
        e = numerical_radius(NILP, tol=1e-12)
        assert e.contains(0.5, 1e-15) and e.upper - e.lower <= 1e-12

    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_shift(self, n):
        e = numerical_radius(shift(n), tol=1e-10)
        assert e.contains(math.cos(math.pi / (n + 1)), 1e-15)

    def test_normal_is_spectral_radius(self, rng):
        lam = ginibre(rng, 5, 1)[:, 0]
        q, _ = np.linalg.qr(ginibre(rng, 5))
        e = numerical_radius(q @ np.diag(lam) @ q.conj().T, tol=1e-10)
        assert e.contains(np.abs(lam).max(), 1e-12)

    def test_zero(self):
        e = numerical_radius(np.zeros((3, 3)))
        assert e.lower == e.upper == 0.0

    def test_scalar(self):
        assert numerical_radius([[3 - 4j]], tol=1e-12).contains(5.0, 1e-12)


class TestNumericalRadiusOracle:
    def test_contains_oracle(self, rng):
        for n in (2, 3, 5):
            t = ginibre(rng, n)
            e = numerical_radius(t, tol=1e-8)
            o = w_oracle(t, samples=2000, seed=1)
            assert o <= e.upper + 1e-12
            assert e.lower - o >= -1e-7
            assert e.upper - e.lower <= 1e-8

    def test_witness_reproduces_lower(self, rng):
        t = ginibre(rng, 4) * 3
        e = numerical_radius(t, tol=1e-9)
        x = e.witness["vector"]
        assert abs(np.linalg.norm(x) - 1) <= 1e-12
        assert abs(w_objective(t, x) - e.lower) <= 1e-12 * spectral_norm(t)

    def test_sandwich(self, rng):
        for _ in range(10):
            t = ginibre(rng, 4)
            e = numerical_radius(t)
            nt = spectral_norm(t)
            assert nt / 2 <= e.upper + 1e-12 and e.lower <= nt + 1e-12

    @pytest.mark.parametrize("c", [2.0, 1j, -0.5 + 2j])
    def test_scale_equivariance(self, rng, c):
        t = ginibre(rng, 3)
        a = numerical_radius(t, tol=1e-10).midpoint
        b = numerical_radius(c * t, tol=1e-10 * abs(c)).midpoint
        assert abs(b - abs(c) * a) <= 2e-10 * abs(c)

    def test_unitary_invariance(self, rng):
        t = ginibre(rng, 4)
        q, _ = np.linalg.qr(ginibre(rng, 4))
        a = numerical_radius(t, tol=1e-10).midpoint
        b = numerical_radius(q @ t @ q.conj().T, tol=1e-10).midpoint
        assert abs(a - b) <= 2e-10

    @pytest.mark.parametrize("tol", [0, -1e-3, np.nan, np.inf])
    def test_bad_tol(self, tol):
        with pytest.raises(InvalidTolerance):
            numerical_radius(NILP, tol=tol)

    def test_kyp_certificate(self, rng):
        t = ginibre(rng, 3)
        w = numerical_radius(t, tol=1e-11).midpoint
        assert kyp_upper(t, w + 1e-6) <= w + 1e-6 + 1e-9
        assert kyp_upper(t, w + 1e-6) >= w - 1e-9

    def test_family_max(self, rng):
        mats = [ginibre(rng, 3) * s for s in (0.5, 2.0, 1.0)]
        enc, k = numerical_radius_max(mats, tol=1e-9)
        singles = [numerical_radius(m, tol=1e-9) for m in mats]
        assert k == int(np.argmax([s.midpoint for s in singles]))
        assert abs(enc.midpoint - max(s.midpoint for s in singles)) <= 2e-9


class TestEuclideanRadius:
    def test_identity_pair(self):
        for n in (1, 3):
            e = euclidean_radius(np.eye(n), np.eye(n), tol=1e-10)
            assert e.contains(math.sqrt(2), 1e-12)

    def test_degenerate_pair(self):
        assert euclidean_radius(np.eye(2), np.zeros((2, 2)), tol=1e-10).contains(1.0, 1e-12)

    def test_zero_pair(self):
        e = euclidean_radius(np.zeros((2, 2)), np.zeros((2, 2)))
        assert e.lower == e.upper == 0

    def test_nilpotent_pair(self):
        # B = C = S: w_e = sqrt(2) w(S)
        e = euclidean_radius(NILP, NILP, tol=1e-10)
        assert e.contains(math.sqrt(2) / 2, 1e-12)

    def test_reduces_to_w(self, rng):
        # w_e(Re T, Im T) = w(T)
        t = ginibre(rng, 3)
        re, im = (t + t.conj().T) / 2, (t - t.conj().T) / 2j
        a = euclidean_radius(re, im, tol=1e-9).midpoint
        assert abs(a - numerical_radius(t, tol=1e-10).midpoint) <= 1e-9

    def test_oracle_and_witness(self, rng):
        for n in (2, 3):
            b, c = ginibre(rng, n), ginibre(rng, n)
            e = euclidean_radius(b, c, tol=1e-7)
            assert we_oracle(b, c, samples=2000, seed=3) <= e.upper + 1e-12
            assert abs(we_objective(b, c, e.witness["vector"]) - e.lower) <= 1e-12 * (
                spectral_norm(b) + spectral_norm(c))
            assert e.upper - e.lower <= 1e-7

    def test_planar_matches_sphere(self, rng):
        # B real-linear in C spans a plane: the reduction path and the direct
        # sphere sweep must agree
        c = ginibre(rng, 3)
        b = (2 - 1j) * c
        e = euclidean_radius(b, c, tol=1e-9)
        scale = spectral_norm(b) + spectral_norm(c)
        direct = sphere_bnb(_sphere_basis(b, c)[None], scale, 1e-7)
        assert e.lower <= direct.upper + 1e-12 and direct.lower <= e.upper + 1e-12
        assert e.contains(math.sqrt(5 + 1) * numerical_radius(c, tol=1e-11).midpoint, 1e-9)

    def test_hopf_parameters(self, rng):
        b, c = ginibre(rng, 3), ginibre(rng, 3)
        e = euclidean_radius(b, c, tol=1e-9)
        s, phi = e.witness["s"], e.witness["phi"]
        w = numerical_radius(math.cos(s) * b + np.exp(1j * phi) * math.sin(s) * c, tol=1e-10).midpoint
        assert abs(w - e.midpoint) <= 1e-8

    def test_hopf_coords_roundtrip(self):
        u = np.array([0.6, 0.0, 0.0, 0.8])
        s, phi = hopf_coords(u)[0]
        assert math.isclose(math.cos(s), 0.6) and math.isclose(phi, math.pi / 2)

    def test_symmetry_and_scaling(self, rng):
        b, c = ginibre(rng, 3), ginibre(rng, 3)
        a = euclidean_radius(b, c, tol=1e-9).midpoint
        assert abs(euclidean_radius(c, b, tol=1e-9).midpoint - a) <= 2e-9
        assert abs(euclidean_radius(2j * b, 2j * c, tol=2e-9).midpoint - 2 * a) <= 4e-9

    def test_sandwich(self, rng):
        for _ in range(5):
            b, c = ginibre(rng, 3), ginibre(rng, 3)
            e = euclidean_radius(b, c, tol=1e-8)
            wb = numerical_radius(b).midpoint
            wc = numerical_radius(c).midpoint
            assert math.hypot(wb, wc) / math.sqrt(2) <= e.upper + 1e-8
            assert e.lower <= math.hypot(wb, wc) + 1e-8

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            euclidean_radius(np.eye(2), np.eye(3))


class TestOracles:
    def test_identity(self):
        assert abs(w_oracle(np.eye(4), seed=5) - 1) <= 1e-12

    def test_nilpotent(self):
        assert w_oracle(NILP, samples=10_000) >= 0.499

    def test_pairs(self):
        assert abs(we_oracle(np.eye(2), np.eye(2)) - math.sqrt(2)) <= 1e-9
        assert we_oracle(np.zeros((2, 2)), np.zeros((2, 2))) == 0

    def test_seeded(self, rng):
        t = ginibre(rng, 3)
        assert w_oracle(t, 500, seed=4) == w_oracle(t, 500, seed=4)


@pytest.mark.skipif(kernels.top_eig_compiled is None, reason="compiled kernel not built")
def test_backends_agree(rng):
    for n in (1, 2, 3):
        g = ginibre(rng, n)
        basis = np.stack([(g + g.conj().T) / 2, (g - g.conj().T) / 2j])[None]
        th = np.linspace(0, 2 * np.pi, 37)
        dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
        member = np.zeros(th.size, dtype=np.intp)
        a = kernels.top_eig_python(basis, member, dirs)
        b = kernels.top_eig_compiled(basis, member, dirs)
        assert np.allclose(a[0], b[0], atol=1e-13)


def test_backend_name():
    assert kernels.BACKEND in ("compiled", "python")
