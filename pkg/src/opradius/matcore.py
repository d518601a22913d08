"""Dense complex matrix kernel: validation, Hermitian spectral calculus, SVD
and matrix-valued Gauss-Legendre quadrature.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  :func:`cmatrix`
is the single entry point that validates and freezes an input; every other
function accepts anything :func:`cmatrix` accepts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import (ConvergenceFailure, InvalidMatrix, NoConvergence,
                     NotHermitian, NotPSD, ParameterOutOfRange)

EPS = np.finfo(float).eps
HERM_RTOL = 1e-10
PSD_RTOL = 1e-10
GL_MAX_NODES = 1024


def cmatrix(a) -> np.ndarray:
    """Return `a` as a read-only, finite, square ``complex128`` array.

    A fresh copy is always made, so callers can never alias library state.
    """
    arr = np.array(a, dtype=np.complex128, copy=True)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise InvalidMatrix(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix("matrix has NaN or Inf entries")
    arr.flags.writeable = False
    return arr


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    a = np.asarray(a, dtype=np.complex128)
    return _frozen(np.ascontiguousarray(a.conj().T))


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns


def spectral_norm(a) -> float:
    """Largest singular value."""
    a = np.asarray(a, dtype=np.complex128)
    if a.shape[0] == 1:
        return float(abs(a[0, 0]))
    try:
        return float(np.linalg.norm(a, 2))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(str(exc)) from exc


def spectral_norms(stack) -> np.ndarray:
    """Spectral norms of a stack of matrices, one batched SVD."""
    stack = np.asarray(stack, dtype=np.complex128)
    if stack.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.svd(stack, compute_uv=False)[:, 0]


def _symmetrize(h) -> np.ndarray:
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {h.shape}")
    scale = spectral_norm(h)
    asym = spectral_norm(h - h.conj().T)
    if asym > HERM_RTOL * scale:
        raise NotHermitian(f"asymmetry {asym:.3e} exceeds {HERM_RTOL:g}*||H|| = {HERM_RTOL * scale:.3e}")
    return (h + h.conj().T) / 2


def hermitian_eig(h) -> EigenSystem:
    """Eigen-decomposition of a Hermitian matrix (symmetrized first)."""
    hs = _symmetrize(h)
    try:
        lam, q = np.linalg.eigh(hs)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return EigenSystem(_frozen(lam), _frozen(q))


def svd(a):
    """Return ``(W, sigma, V)`` with ``a = W @ diag(sigma) @ V^*``, sigma descending."""
    a = np.asarray(a, dtype=np.complex128)
    try:
        w, s, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return _frozen(w), _frozen(s), _frozen(np.ascontiguousarray(vh.conj().T))


@dataclass(frozen=True)
class ScalarFunctionSpec:
    """A scalar map on ``[0, inf)`` applied through the spectral theorem.

    ``power`` covers ``x**r``; only exponents in ``[1, 2]`` are operator
    convex, which :attr:`operator_convex` reports.  ``custom`` is a tabulated
    nondecreasing convex map, linearly interpolated and extrapolated with the
    last slope.
    """

    kind: str
    r: float = 1.0
    xs: tuple = field(default=(), repr=False)
    ys: tuple = field(default=(), repr=False)

    @classmethod
    def power(cls, r: float) -> "ScalarFunctionSpec":
        r = float(r)
        if not np.isfinite(r) or r < 0:
            raise ParameterOutOfRange(f"power exponent must be finite and >= 0, got {r}")
        return cls("power", r=r)

    @classmethod
    def custom(cls, xs, ys) -> "ScalarFunctionSpec":
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ParameterOutOfRange("custom map needs matching 1-D tables with >= 2 points")
        if xs[0] != 0.0 or np.any(np.diff(xs) <= 0):
            raise ParameterOutOfRange("custom map abscissae must start at 0 and increase strictly")
        slopes = np.diff(ys) / np.diff(xs)
        if np.any(slopes < 0):
            raise ParameterOutOfRange("custom map must be nondecreasing")
        if np.any(np.diff(slopes) < -1e-12 * max(1.0, np.abs(slopes).max())):
            raise ParameterOutOfRange("custom map must be convex")
        return cls("custom", xs=tuple(xs), ys=tuple(ys))

    @property
    def operator_convex(self) -> bool:
        return self.kind == "power" and 1.0 <= self.r <= 2.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "power":
            # numpy already gives 0**0 == 1, so |T|**0 is the identity
            return np.power(x, self.r)
        xs = np.asarray(self.xs)
        ys = np.asarray(self.ys)
        out = np.interp(x, xs, ys)
        tail = x > xs[-1]
        if np.any(tail):
            slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
            out = np.where(tail, ys[-1] + slope * (x - xs[-1]), out)
        return out


def _psd_tau(h) -> float:
    return PSD_RTOL * max(1.0, spectral_norm(h))


def psd_function(h, f: ScalarFunctionSpec) -> np.ndarray:
    """``Q f(max(lam, 0)) Q^*`` for a Hermitian PSD matrix.

    Eigenvalues in ``[-tau, 0)`` with ``tau = 1e-10 * max(1, ||H||)`` are
    treated as zero; anything more negative raises :class:`NotPSD`.
    """
    lam, q = hermitian_eig(h)
    tau = _psd_tau(h)
    if lam[0] < -tau:
        raise NotPSD(f"eigenvalue {lam[0]:.3e} below -{tau:.3e}")
    lam = np.clip(lam, 0.0, None)
    fl = f(lam)
    out = (q * fl) @ q.conj().T
    return _frozen((out + out.conj().T) / 2)


def abs_operator(t) -> np.ndarray:
    """``|T| = (T^* T)^{1/2}``, computed from the SVD for full accuracy on
    rank-deficient input."""
    _, s, v = svd(t)
    out = (v * s) @ v.conj().T
    return _frozen((out + out.conj().T) / 2)


def _batched_psd_function(stack: np.ndarray, f: ScalarFunctionSpec, tau: float) -> np.ndarray:
    lam, q = np.linalg.eigh(stack)
    if lam[:, 0].min() < -tau:
        raise NotPSD(f"integrand eigenvalue {lam[:, 0].min():.3e} below -{tau:.3e}")
    fl = f(np.clip(lam, 0.0, None))
    return (q * fl[:, None, :]) @ np.conj(np.swapaxes(q, 1, 2))


@lru_cache(maxsize=None)
def _gauss_legendre(nodes: int):
    x, wts = np.polynomial.legendre.leggauss(nodes)
    x.flags.writeable = False
    wts.flags.writeable = False
    return x, wts


def segment_integral(a, b, f: ScalarFunctionSpec, tol: float = 1e-12,
                     start_nodes: int = 8) -> np.ndarray:
    """Approximate ``int_0^1 f(t A + (1-t) B) dt`` for Hermitian PSD ``A, B``.

    Gauss-Legendre rules with 8, 16, ... nodes are compared in spectral norm
    until two successive rules agree to `tol`.
    """
    if not tol > 0:
        raise ParameterOutOfRange(f"tol must be positive, got {tol}")
    a = _symmetrize(a)
    b = _symmetrize(b)
    if a.shape != b.shape:
        raise InvalidMatrix(f"shape mismatch {a.shape} vs {b.shape}")
    tau = max(_psd_tau(a), _psd_tau(b))
    for m in (a, b):
        if np.linalg.eigvalsh(m)[0] < -tau:
            raise NotPSD("segment endpoint is not positive semidefinite")

    prev = None
    nodes = start_nodes
    while nodes <= GL_MAX_NODES:
        x, wts = _gauss_legendre(nodes)
        t = (x + 1) / 2
        stack = t[:, None, None] * a + (1 - t)[:, None, None] * b
        vals = _batched_psd_function(stack, f, tau)
        cur = np.einsum("k,kij->ij", wts / 2, vals)
        cur = (cur + cur.conj().T) / 2
        if prev is not None and spectral_norm(cur - prev) <= tol:
            return _frozen(cur)
        prev = cur
        nodes *= 2
    raise NoConvergence(f"quadrature did not reach tol={tol:g} within {GL_MAX_NODES} nodes")


def segment_power_integral(a, b, r: float, tol: float = 1e-12) -> np.ndarray:
    """``int_0^1 (t A + (1-t) B)^r dt`` for ``1 <= r <= 2``."""
    r = float(r)
    if not 1.0 <= r <= 2.0:
        raise ParameterOutOfRange(f"r must lie in [1, 2], got {r}")
    return segment_integral(a, b, ScalarFunctionSpec.power(r), tol)


def is_normal(a, rtol: float = 1e-10) -> bool:
    a = np.asarray(a, dtype=np.complex128)
    ah = a.conj().T
    return spectral_norm(a @ ah - ah @ a) <= rtol * spectral_norm(a) ** 2
