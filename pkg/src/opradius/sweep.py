"""Certified branch-and-bound maximization of ``phi(u) = lambda_max(sum_k u_k H_k)``
over the unit circle (``d = 2``) and the unit 3-sphere (``d = 4``).

``phi`` is sublinear (convex and positively homogeneous), so for a unit vector
``u = sum_i c_i v_i`` inside the cone of a cell with vertices ``v_i`` and
``c_i >= 0``::

    phi(u) <= sum_i c_i phi(v_i)

which bounds ``phi`` on a whole cell from its vertex values alone.  On an arc
the right-hand side is a sinusoid whose maximum is available in closed form;
on a spherical simplex it is a linear functional ``a . u`` bounded by ``|a|``.
Both bounds tighten quadratically in the cell diameter.

The lower end of each enclosure is an attained objective value: for the top
eigenvector ``x`` at every visited direction, ``|q(x)|`` with
``q_k(x) = <H_k x, x>`` is the objective of the original sup problem and is
never smaller than ``phi`` at that direction.

When ``g(theta)`` is nearly constant (circularly symmetric ``T`` such as
shifts) vertex bounds need ``O(tol^{-1/2})`` samples.  The circle sweep then
falls back on a dual certificate: ``w(T) <= c`` iff some Hermitian ``X``
makes ``[[cI - X, -T/2], [-T*/2, X]]`` positive semidefinite.  ``X`` is the
maximal solution of ``X + A* X^{-1} A = cI`` with ``A = T*/2``, found by
cyclic reduction; the block's smallest eigenvalue then prices the residual.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceFailure
from .matcore import EPS

TIE_RTOL = 1e-12
SPLIT = 4  # children per refined arc; the vertex bound gains SPLIT**2 per level


@dataclass
class SweepResult:
    lower: float
    upper: float
    evaluations: int
    vector: np.ndarray
    direction: np.ndarray
    member: int


class _Best:
    """Running maximum of the objective with smallest-key tie breaking."""

    def __init__(self, tie: float):
        self.tie = tie
        self.obj = -np.inf
        self.key = None
        self.vector = None
        self.direction = None
        self.member = 0
        self.witness_obj = -np.inf

    def offer(self, obj, keys, xs, dirs, members):
        """`keys` is an ``(m, 2)`` array compared lexicographically."""
        if obj.size == 0:
            return
        self.obj = max(self.obj, float(obj.max()))
        cut = self.obj - self.tie
        if self.key is not None and self.witness_obj < cut:
            self.key = None
        cand = np.flatnonzero(obj >= cut)
        if not cand.size:
            return
        order = np.lexsort((keys[cand, 1], keys[cand, 0]))
        i = cand[order[0]]
        key = (float(keys[i, 0]), float(keys[i, 1]))
        if self.key is None or key < self.key:
            self.key = key
            self.witness_obj = float(obj[i])
            self.vector = xs[i].copy()
            self.direction = dirs[i].copy()
            self.member = int(members[i])


def kyp_upper(t, c, max_iter=64) -> float:
    """Certified upper bound for ``w(t)`` from a trial level ``c > 0``.

    Returns ``c`` plus twice any negative part of the block's smallest
    eigenvalue plus a roundoff allowance, or ``inf`` if the Riccati solve
    breaks down (which happens when ``c < w(t)``).
    """
    t = np.asarray(t, dtype=np.complex128)
    n = t.shape[0]
    eye = np.eye(n)
    a = t.conj().T / 2
    x = c * eye
    y = c * eye
    scale = c + np.linalg.norm(t, 2)
    for _ in range(max_iter):
        try:
            ya = np.linalg.solve(y, a)
            yas = np.linalg.solve(y, a.conj().T)
        except np.linalg.LinAlgError:
            return np.inf
        step = a.conj().T @ ya
        x = x - step
        y = y - a @ yas - step
        a = a @ ya
        if not np.all(np.isfinite(a)):
            return np.inf
        if np.linalg.norm(a) <= EPS * scale:
            break
    x = (x + x.conj().T) / 2
    block = np.block([[c * eye - x, -t / 2], [-t.conj().T / 2, x]])
    lo = np.linalg.eigvalsh(block)[0]
    # v*Mv with v = [I; zI] has v*v = 2I, hence the factor 2
    return float(c + 2 * max(0.0, -lo) + 2 * 16 * 2 * n * EPS * max(scale, np.linalg.norm(x, 2)))


def _arc_bound(ga, gb, h):
    """Max over tau in [0, h] of (ga sin(h - tau) + gb sin(tau)) / sin(h)."""
    a = ga
    b = (gb - ga * np.cos(h)) / np.sin(h)
    peak = np.arctan2(b, a)
    inside = (peak >= 0) & (peak <= h)
    return np.where(inside, np.hypot(a, b), np.maximum(ga, gb))


def _circle_dirs(theta):
    return np.stack([np.cos(theta), np.sin(theta)], axis=1)


def circle_bnb(basis, scales, tol, k0=64, max_evals=5_000_000, certify=None) -> SweepResult:
    """Maximize over ``F`` independent circle problems at once.

    ``basis`` is ``(F, 2, n, n)``; ``scales[f]`` bounds ``||H(u)||`` for problem
    ``f``.  The result encloses ``max_f max_u phi_f(u)`` to within `tol`.
    ``certify(c)``, if given, returns a certified upper bound for the whole
    maximum from a trial level ``c``; it is tried each time the evaluation
    count doubles past ``16 * k0 * F``.
    """
    basis = np.ascontiguousarray(basis, dtype=np.complex128)
    scales = np.asarray(scales, dtype=float)
    nfam, _, n = basis.shape[:3]
    delta = 16 * n * EPS * scales + 1e-300
    best = _Best(TIE_RTOL * max(scales.max(), 1e-300))

    theta0 = np.arange(k0) * (2 * np.pi / k0)
    member = np.repeat(np.arange(nfam), k0)
    theta = np.tile(theta0, nfam)
    lam, q, x = kernels.top_eig(basis, member, _circle_dirs(theta))
    evals = lam.size
    best.offer(np.linalg.norm(q, axis=1), np.stack([member, theta], 1), x, theta[:, None], member)

    nxt = (np.arange(k0) + 1) % k0
    arc_mem = member
    arc_a = theta
    arc_h = np.full(member.size, 2 * np.pi / k0)
    arc_ga = lam
    arc_gb = lam.reshape(nfam, k0)[:, nxt].ravel()
    retired = -np.inf
    checkpoint = 4 * k0 * nfam

    while arc_mem.size:
        if certify is not None and evals >= checkpoint:
            checkpoint *= 2
            cap = certify(best.obj + tol / 2)
            if cap <= best.obj + tol:
                return SweepResult(best.obj, max(cap, best.obj), evals, best.vector, best.direction, best.member)
        bound = _arc_bound(arc_ga, arc_gb, arc_h) + 2 * delta[arc_mem]
        done = bound <= best.obj + tol
        if np.any(done):
            retired = max(retired, float(bound[done].max()))
        keep = ~done
        arc_mem, arc_a, arc_h = arc_mem[keep], arc_a[keep], arc_h[keep] / SPLIT
        arc_ga, arc_gb = arc_ga[keep], arc_gb[keep]
        m = arc_mem.size
        if not m:
            break
        if evals + m * (SPLIT - 1) > max_evals:
            raise ConvergenceFailure(f"circle sweep exceeded {max_evals} evaluations")
        # interior points j = 1..SPLIT-1 of every surviving arc, arc-major
        steps = np.arange(1, SPLIT)
        pts = (arc_a[:, None] + arc_h[:, None] * steps).ravel()
        mem = np.repeat(arc_mem, SPLIT - 1)
        lam, q, x = kernels.top_eig(basis, mem, _circle_dirs(pts))
        evals += lam.size
        best.offer(np.linalg.norm(q, axis=1), np.stack([mem, pts], 1), x, pts[:, None], mem)
        vals = np.concatenate([arc_ga[:, None], lam.reshape(m, SPLIT - 1), arc_gb[:, None]], axis=1)
        starts = np.concatenate([arc_a[:, None], pts.reshape(m, SPLIT - 1)], axis=1)
        arc_mem = np.repeat(arc_mem, SPLIT)
        arc_a = starts.ravel()
        arc_h = np.repeat(arc_h, SPLIT)
        arc_ga = vals[:, :-1].ravel()
        arc_gb = vals[:, 1:].ravel()

    upper = max(best.obj, retired)
    return SweepResult(best.obj, upper, evals, best.vector, best.direction, best.member)


_PAIRS = np.array([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def hopf_coords(u):
    """Map directions in R^4 to ``(s, phi)``: ``u1 + i u2 = cos(s) e^{i psi1}``,
    ``u3 + i u4 = sin(s) e^{i psi2}`` and ``phi = psi2 - psi1 mod 2 pi``."""
    u = np.atleast_2d(u)
    lam = u[:, 0] + 1j * u[:, 1]
    mu = u[:, 2] + 1j * u[:, 3]
    s = np.arctan2(np.abs(mu), np.abs(lam))
    phi = np.where((lam == 0) | (mu == 0), 0.0, np.mod(np.angle(mu) - np.angle(lam), 2 * np.pi))
    return np.stack([s, phi], axis=1)


# red refinement of a tetrahedron (vertices 0..3, edge midpoints 4..9 in _PAIRS
# order): four corner children plus the inner octahedron cut along a diagonal
_M = {tuple(p): 4 + k for k, p in enumerate(_PAIRS.tolist())}
_CORNERS = np.array([
    [0, _M[0, 1], _M[0, 2], _M[0, 3]],
    [1, _M[0, 1], _M[1, 2], _M[1, 3]],
    [2, _M[0, 2], _M[1, 2], _M[2, 3]],
    [3, _M[0, 3], _M[1, 3], _M[2, 3]],
])
# the octahedron's three diagonals join midpoints of opposite edges; for each,
# the four tetrahedra around it
_DIAGONALS = []
for a, b in (((0, 2), (1, 3)), ((0, 1), (2, 3)), ((0, 3), (1, 2))):
    ring = [e for e in _M if e not in (a, b)]
    # order the ring so consecutive midpoints share a vertex index
    cyc = [ring.pop(0)]
    while ring:
        nxt = next(e for e in ring if set(e) & set(cyc[-1]))
        ring.remove(nxt)
        cyc.append(nxt)
    _DIAGONALS.append(np.array([[_M[a], _M[b], _M[cyc[k]], _M[cyc[(k + 1) % 4]]] for k in range(4)]))
_DIAG_ENDS = np.array([[_M[0, 2], _M[1, 3]], [_M[0, 1], _M[2, 3]], [_M[0, 3], _M[1, 2]]])


def sphere_bnb(basis, scale, tol, max_evals=2_000_000) -> SweepResult:
    """Maximize ``phi`` over the unit sphere of R^4.  ``basis`` is ``(1, 4, n, n)``."""
    basis = np.ascontiguousarray(basis, dtype=np.complex128)
    n = basis.shape[-1]
    delta = 16 * n * EPS * scale + 1e-12 * scale + 1e-300
    best = _Best(TIE_RTOL * max(scale, 1e-300))

    cap = 4096
    verts = np.zeros((cap, 4))
    phis = np.zeros(cap)
    count = 0

    def add(us):
        nonlocal verts, phis, count, cap
        m = us.shape[0]
        while count + m > cap:
            cap *= 2
            verts = np.resize(verts, (cap, 4))
            phis = np.resize(phis, cap)
        lam, q, x = kernels.top_eig(basis, np.zeros(m, dtype=np.intp), us)
        verts[count:count + m] = us
        phis[count:count + m] = lam
        idx = np.arange(count, count + m)
        count += m
        best.offer(np.linalg.norm(q, axis=1), hopf_coords(us), x, us, np.zeros(m))
        return idx

    add(np.vstack([np.eye(4), -np.eye(4)]))
    signs = np.array(np.meshgrid(*[[0, 1]] * 4, indexing="ij")).reshape(4, -1).T
    cells = signs * 4 + np.arange(4)  # vertex index of +e_k is k, of -e_k is 4 + k
    retired = -np.inf

    while cells.shape[0]:
        v = verts[cells]  # (M, 4, 4), rows are vertices
        rhs = np.stack([phis[cells], np.ones(cells.shape)], axis=-1)
        sol = np.linalg.solve(v, rhs)
        interp = np.linalg.norm(sol[..., 0], axis=1)
        top = phis[cells].max(axis=1)
        cone = np.where(top >= 0, top * np.linalg.norm(sol[..., 1], axis=1), top)
        bound = np.minimum(interp, cone) + delta
        done = bound <= best.obj + tol
        if np.any(done):
            retired = max(retired, float(bound[done].max()))
        cells = cells[~done]
        if not cells.shape[0]:
            break

        # midpoints of all six edges, shared between neighbouring cells
        lo = np.minimum(cells[:, _PAIRS[:, 0]], cells[:, _PAIRS[:, 1]])
        hi = np.maximum(cells[:, _PAIRS[:, 0]], cells[:, _PAIRS[:, 1]])
        keys = lo.astype(np.int64) * (count + 1) + hi
        uniq, first, inv = np.unique(keys.ravel(), return_index=True, return_inverse=True)
        if count + uniq.size > max_evals:
            raise ConvergenceFailure(f"sphere sweep exceeded {max_evals} evaluations")
        ends_lo = lo.ravel()[first]
        ends_hi = hi.ravel()[first]
        us = verts[ends_lo] + verts[ends_hi]
        us /= np.linalg.norm(us, axis=1)[:, None]
        new = add(us)
        ext = np.concatenate([cells, new[inv].reshape(-1, 6)], axis=1)  # (M, 10)

        # cut the octahedron along its shortest diagonal to keep cells well shaped
        pts = verts[ext[:, _DIAG_ENDS]]  # (M, 3, 2, 4)
        diag = np.argmax(np.einsum("mdk,mdk->md", pts[:, :, 0], pts[:, :, 1]), axis=1)
        inner = np.stack(_DIAGONALS)[diag]  # (M, 4, 4) local indices
        local = np.concatenate([np.broadcast_to(_CORNERS, (ext.shape[0], 4, 4)), inner], axis=1)
        cells = np.take_along_axis(ext, local.reshape(ext.shape[0], -1), axis=1).reshape(-1, 4)

    upper = max(best.obj, retired)
    return SweepResult(best.obj, upper, count, best.vector, best.direction, 0)
