import math

import numpy as np
import pytest

from opradius.radii import _circle_basis, _sphere_basis
from opradius.sweep import circle_bnb, sphere_bnb

from conftest import NILP, ginibre


def brute_circle(basis, k=20000):
    th = np.linspace(0, 2 * np.pi, k, endpoint=False)
    return max(np.linalg.eigvalsh(math.cos(a) * basis[0] + math.sin(a) * basis[1])[-1] for a in th)


def test_circle_matches_dense_grid(rng):
    t = ginibre(rng, 3)
    basis = _circle_basis(t)
    res = circle_bnb(basis[None], [np.linalg.norm(t, 2)], 1e-10)
    grid = brute_circle(basis)
    assert res.lower <= res.upper and res.upper - res.lower <= 1e-10
    assert grid <= res.upper + 1e-12
    # a 20000-point grid is within ~1e-7 of the maximum of a smooth curve
    assert res.lower - grid <= 1e-6


def test_circle_family_member(rng):
    a, b = ginibre(rng, 2), 3 * ginibre(rng, 2)
    basis = np.stack([_circle_basis(a), _circle_basis(b)])
    res = circle_bnb(basis, [np.linalg.norm(a, 2), np.linalg.norm(b, 2)], 1e-9)
    assert res.member == 1


def test_sphere_bracket(rng):
    b, c = ginibre(rng, 2), ginibre(rng, 2)
    basis = _sphere_basis(b, c)
    scale = np.linalg.norm(b, 2) + np.linalg.norm(c, 2)
    res = sphere_bnb(basis[None], scale, 1e-8)
    assert res.upper - res.lower <= 1e-8
    u = rng.standard_normal((3000, 4))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    vals = [np.linalg.eigvalsh(np.tensordot(v, basis, 1))[-1] for v in u]
    assert max(vals) <= res.upper + 1e-12
    assert abs(np.linalg.norm(res.direction) - 1) <= 1e-12


def test_sphere_flat_objective():
    # constant objective over the sphere: the cells never prune on value
    basis = _sphere_basis(np.eye(1), 1j * np.eye(1))
    res = sphere_bnb(basis[None], 2.0, 1e-6)
    assert res.lower == pytest.approx(math.sqrt(2), abs=1e-6) and res.upper - res.lower <= 1e-6


def test_circle_shift_uses_certificate():
    # |<Sx,x>| has the same maximum in every direction, the hard case for vertex bounds
    from opradius.sweep import kyp_upper
    s = np.eye(4, k=1)
    res = circle_bnb(_circle_basis(s)[None], [1.0], 1e-11, certify=lambda c: kyp_upper(s, c))
    assert res.lower - 1e-14 <= math.cos(math.pi / 5) <= res.upper
    assert res.evaluations < 100_000
