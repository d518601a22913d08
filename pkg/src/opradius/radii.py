"""Certified enclosures of the numerical radius ``w(T)`` and the Euclidean
operator radius ``w_e(B, C)``, plus sphere-sampling oracles.

Both radii are maxima of a top eigenvalue over directions::

    w(T)      = max_theta      lambda_max(Re(e^{i theta} T))
    w_e(B, C) = max_{|u| = 1}  lambda_max(u1 Re B - u2 Im B + u3 Re C - u4 Im C)

The second identity is the sup-exchange
``sup_x |(<Bx,x>, <Cx,x>)| = sup_{|l|^2+|m|^2=1} w(l B + m C)`` written in real
coordinates ``l = u1 + i u2``, ``m = u3 + i u4``.  The sweeps live in
:mod:`opradius.sweep`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DimensionMismatch, InvalidTolerance
from .matcore import EPS, spectral_norm, spectral_norms
from .sweep import circle_bnb, hopf_coords, kyp_upper, sphere_bnb
from .transforms import cartesian

DEFAULT_RTOL = 1e-8


@dataclass(frozen=True)
class Enclosure:
    """Certified interval ``[lower, upper]`` for a radius.

    ``lower`` is attained: ``witness["vector"]`` is a unit vector whose
    objective value equals it (up to 1e-12 relative).
    """

    lower: float
    upper: float
    tol_requested: float
    evaluations: int
    witness: dict = field(default_factory=dict, compare=False)

    @property
    def midpoint(self) -> float:
        return (self.lower + self.upper) / 2

    @property
    def halfwidth(self) -> float:
        return (self.upper - self.lower) / 2

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def to_dict(self) -> dict:
        wit = {}
        for key, val in self.witness.items():
            if isinstance(val, np.ndarray):
                wit[key] = {"re": val.real.tolist(), "im": val.imag.tolist()}
            else:
                wit[key] = val
        return {"lower": self.lower, "upper": self.upper, "tol": self.tol_requested,
                "evaluations": self.evaluations, "witness": wit}


def _check_tol(tol, scale):
    if tol is None:
        return DEFAULT_RTOL * max(1.0, scale)
    tol = float(tol)
    if not np.isfinite(tol) or tol <= 0:
        raise InvalidTolerance(f"tol must be a positive finite number, got {tol}")
    return tol


def _circle_basis(t):
    re, im = cartesian(t)
    return np.stack([re, -im])


def numerical_radius(t, tol=None) -> Enclosure:
    """Certified enclosure of ``w(T)`` of width at most `tol`.

    The default tolerance is ``1e-8 * max(1, ||T||)``.  The witness holds the
    maximizing unit vector and the sweep angle ``theta`` it was found at.
    """
    t = np.asarray(t, dtype=np.complex128)
    norm = spectral_norm(t)
    tol = _check_tol(tol, norm)
    n = t.shape[0]
    if norm == 0.0:
        return Enclosure(0.0, 0.0, tol, 0, {"vector": np.eye(n, 1)[:, 0].astype(complex), "theta": 0.0})
    res = circle_bnb(_circle_basis(t)[None], [norm], tol, certify=lambda c: kyp_upper(t, c))
    return Enclosure(res.lower, res.upper, tol, res.evaluations,
                     {"vector": res.vector, "theta": float(res.direction[0])})


def numerical_radius_max(mats, tol=None):
    """Enclose ``max_k w(M_k)`` over a family of equal-size matrices.

    Returns ``(enclosure, k)`` where ``k`` indexes the member holding the
    witness.  One joint sweep prunes across the whole family, which is far
    cheaper than enclosing every member separately.
    """
    mats = np.asarray(mats, dtype=np.complex128)
    norms = spectral_norms(mats)
    tol = _check_tol(tol, norms.max())
    n = mats[0].shape[0]
    if norms.max() == 0.0:
        return Enclosure(0.0, 0.0, tol, 0, {"vector": np.eye(n, 1)[:, 0].astype(complex), "theta": 0.0}), 0
    adj = np.conj(np.swapaxes(mats, 1, 2))
    # per member: (Re M, -Im M)
    basis = np.stack([(mats + adj) / 2, -(mats - adj) / 2j], axis=1)
    def certify(c):
        return max(kyp_upper(m, c) for m in mats)

    # members share the pruning threshold, so a coarse start grid suffices
    res = circle_bnb(basis, np.maximum(norms, 1e-300), tol, k0=8, certify=certify)
    enc = Enclosure(res.lower, res.upper, tol, res.evaluations,
                    {"vector": res.vector, "theta": float(res.direction[0]), "member": res.member})
    return enc, res.member


def _sphere_basis(b, c):
    br, bi = cartesian(b)
    cr, ci = cartesian(c)
    return np.stack([br, -bi, cr, -ci])


def euclidean_radius(b, c, tol=None) -> Enclosure:
    """Certified enclosure of ``w_e(B, C)`` of width at most `tol`.

    The witness holds the maximizing unit vector and the sweep parameters
    ``(s, phi)`` with ``w_e = w(cos(s) B + e^{i phi} sin(s) C)`` at the optimum.
    """
    b = np.asarray(b, dtype=np.complex128)
    c = np.asarray(c, dtype=np.complex128)
    if b.shape != c.shape:
        raise DimensionMismatch(f"B and C differ in shape: {b.shape} vs {c.shape}")
    scale = spectral_norm(b) + spectral_norm(c)
    tol = _check_tol(tol, scale)
    n = b.shape[0]
    if scale == 0.0:
        return Enclosure(0.0, 0.0, tol, 0, {"vector": np.eye(n, 1)[:, 0].astype(complex), "s": 0.0, "phi": 0.0})
    basis = _sphere_basis(b, c)
    reduced = _planar_reduction(basis, b, c, tol)
    if reduced is not None:
        return reduced
    res = sphere_bnb(basis[None], scale, tol)
    s, phi = hopf_coords(res.direction)[0]
    return Enclosure(res.lower, res.upper, tol, res.evaluations,
                     {"vector": res.vector, "s": float(s), "phi": float(phi)})


def _planar_reduction(basis, b, c, tol):
    """When the four generators span at most a plane of Hermitian matrices the
    sphere collapses to a circle and ``w_e(B, C) = w(G1 - i G2)`` for an
    orthogonal pair ``G1, G2`` of that plane.  The objective is then flat along
    whole circles of the sphere (``B = C`` is the typical case), which the
    sphere sweep handles badly, while the circle sweep is certified by the
    dual certificate in a few hundred evaluations.
    """
    n = basis.shape[-1]
    flat = basis.reshape(4, -1)
    vecs = np.concatenate([flat.real, flat.imag], axis=1)
    u, sig, wt = np.linalg.svd(vecs, full_matrices=False)
    # n == 1 leaves only two real coordinates, so the reduction always applies
    if sig.size > 2 and sig[2] > 4 * n * EPS * sig[0]:
        return None
    # generators dropped by the reduction move every eigenvalue by at most this
    tail = float(np.sqrt(np.sum(sig[2:] ** 2)))
    half = wt.shape[1] // 2
    g = (wt[:2, :half] + 1j * wt[:2, half:]).reshape(2, n, n) * sig[:2, None, None]
    g = (g + np.conj(np.swapaxes(g, 1, 2))) / 2
    enc = numerical_radius(g[0] - 1j * g[1], tol=tol / 2)
    x = enc.witness["vector"]
    theta = enc.witness["theta"]
    direction = u[:, :2] @ np.array([np.cos(theta), np.sin(theta)])
    s, phi = hopf_coords(direction)[0]
    lower = min(we_objective(b, c, x), enc.upper + tail)
    return Enclosure(lower, enc.upper + tail, tol, enc.evaluations,
                     {"vector": x, "s": float(s), "phi": float(phi)})


def w_objective(t, x) -> float:
    x = np.asarray(x, dtype=np.complex128)
    return float(abs(np.vdot(x, np.asarray(t) @ x)) / np.vdot(x, x).real)


def we_objective(b, c, x) -> float:
    x = np.asarray(x, dtype=np.complex128)
    nx = np.vdot(x, x).real
    return float(np.hypot(abs(np.vdot(x, np.asarray(b) @ x)), abs(np.vdot(x, np.asarray(c) @ x))) / nx)


# -- oracles -----------------------------------------------------------------

ASCENT_TOP = 10
ASCENT_STEPS = 200


def _haar_vectors(n, samples, seed):
    # one (samples, n, 2) draw: every prefix of a longer run is the shorter run
    g = np.random.default_rng(seed).standard_normal((samples, n, 2))
    x = g[..., 0] + 1j * g[..., 1]
    return x / np.linalg.norm(x, axis=1)[:, None]


def _ascent_seeds(values, samples):
    """Top candidates of every decade prefix (10, 100, ...) plus the full set.

    Candidate sets for ``samples = 10**k`` are nested, so the oracle is
    monotone in the sample count along powers of ten.
    """
    picks = set()
    p = 10
    cuts = []
    while p < samples:
        cuts.append(p)
        p *= 10
    cuts.append(samples)
    for cut in cuts:
        top = np.argsort(-values[:cut], kind="stable")[:ASCENT_TOP]
        picks.update(top.tolist())
    return np.array(sorted(picks), dtype=np.intp)


def _ascend(basis, x, objective, direction):
    """Fixed-point ascent: move ``x`` to the top eigenvector of the Hermitian
    combination that its own quadratic-form values select.  Each step cannot
    decrease the objective."""
    vals = objective(x)
    for _ in range(ASCENT_STEPS):
        u = direction(x)
        live = np.linalg.norm(u, axis=1) > 0
        if not np.any(live):
            break
        _, _, xn = kernels.top_eig(basis, np.zeros(int(live.sum()), dtype=np.intp), u[live])
        cand = x.copy()
        cand[live] = xn
        newvals = objective(cand)
        gain = newvals > vals
        x = np.where(gain[:, None], cand, x)
        improved = np.where(gain, newvals - vals, 0.0)
        vals = np.maximum(vals, newvals)
        if improved.max(initial=0.0) <= 1e-15 * max(vals.max(), 1e-300):
            break
    return vals


def w_oracle(t, samples: int = 10_000, seed: int = 0) -> float:
    """Lower estimate of ``w(T)``: best ``|<Tx,x>|`` over Haar-random unit
    vectors, followed by a monotone local ascent from the best candidates."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    t = np.asarray(t, dtype=np.complex128)
    x = _haar_vectors(t.shape[0], samples, seed)
    z = np.einsum("ki,ij,kj->k", x.conj(), t, x)
    vals = np.abs(z)
    seeds = _ascent_seeds(vals, samples)
    basis = _circle_basis(t)[None]

    def objective(v):
        return np.abs(np.einsum("ki,ij,kj->k", v.conj(), t, v))

    def direction(v):
        zz = np.einsum("ki,ij,kj->k", v.conj(), t, v)
        ph = np.where(zz != 0, zz.conj() / np.where(zz != 0, np.abs(zz), 1.0), 0.0)
        return np.stack([ph.real, ph.imag], axis=1)

    best = _ascend(basis, x[seeds], objective, direction)
    return float(max(vals.max(), best.max()))


def we_oracle(b, c, samples: int = 10_000, seed: int = 0) -> float:
    """Lower estimate of ``w_e(B, C)`` by sampling plus monotone ascent."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    b = np.asarray(b, dtype=np.complex128)
    c = np.asarray(c, dtype=np.complex128)
    if b.shape != c.shape:
        raise DimensionMismatch(f"B and C differ in shape: {b.shape} vs {c.shape}")
    x = _haar_vectors(b.shape[0], samples, seed)

    def forms(v):
        return (np.einsum("ki,ij,kj->k", v.conj(), b, v),
                np.einsum("ki,ij,kj->k", v.conj(), c, v))

    def objective(v):
        zb, zc = forms(v)
        return np.hypot(np.abs(zb), np.abs(zc))

    def direction(v):
        zb, zc = forms(v)
        rho = np.hypot(np.abs(zb), np.abs(zc))
        safe = np.where(rho > 0, rho, 1.0)
        lam = np.where(rho > 0, zb.conj() / safe, 0.0)
        mu = np.where(rho > 0, zc.conj() / safe, 0.0)
        return np.stack([lam.real, lam.imag, mu.real, mu.imag], axis=1)

    vals = objective(x)
    seeds = _ascent_seeds(vals, samples)
    best = _ascend(_sphere_basis(b, c)[None], x[seeds], objective, direction)
    return float(max(vals.max(), best.max()))
