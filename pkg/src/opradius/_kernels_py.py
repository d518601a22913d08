"""Pure-numpy implementation of the sweep kernel.

``top_eig(basis, member, dirs)`` forms ``H_j = sum_k dirs[j, k] * basis[member[j], k]``
for every row ``j`` and returns

* ``lam[j]``  -- the largest eigenvalue of ``H_j``,
* ``q[j, k]`` -- ``<basis[member[j], k] x_j, x_j>`` (real) for the top unit eigenvector ``x_j``,
* ``x[j]``    -- that eigenvector.

``basis`` has shape ``(F, d, n, n)`` and holds Hermitian matrices.
"""
import numpy as np


def _top_eig_2x2(h):
    a = h[:, 0, 0].real
    d = h[:, 1, 1].real
    b = h[:, 0, 1]
    half = (a - d) / 2
    rad = np.hypot(half, np.abs(b))
    lam = (a + d) / 2 + rad
    # two candidate null vectors of H - lam; keep the better conditioned one
    v1 = np.stack([b, lam - a + 0j], axis=1)
    v2 = np.stack([lam - d + 0j, b.conj()], axis=1)
    n1 = np.linalg.norm(v1, axis=1)
    n2 = np.linalg.norm(v2, axis=1)
    v = np.where((n1 >= n2)[:, None], v1, v2)
    nv = np.maximum(n1, n2)
    flat = nv == 0
    nv = np.where(flat, 1.0, nv)
    x = v / nv[:, None]
    if np.any(flat):
        x[flat] = np.array([1.0, 0.0])
    return lam, x


def top_eig(basis, member, dirs):
    basis = np.asarray(basis, dtype=np.complex128)
    member = np.asarray(member, dtype=np.intp)
    dirs = np.asarray(dirs, dtype=float)
    n = basis.shape[-1]
    mats = basis[member]  # (m, d, n, n)
    h = np.einsum("mk,mkij->mij", dirs, mats)
    if n == 1:
        lam = h[:, 0, 0].real.copy()
        x = np.ones((h.shape[0], 1), dtype=np.complex128)
    elif n == 2:
        lam, x = _top_eig_2x2(h)
    else:
        w, v = np.linalg.eigh(h)
        lam = w[:, -1]
        x = v[:, :, -1]
    q = np.einsum("mi,mkij,mj->mk", x.conj(), mats, x).real
    return lam, q, x
