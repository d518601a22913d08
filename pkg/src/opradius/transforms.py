"""Cartesian and polar decompositions, the t-Aluthge transform and 2x2
off-diagonal block assembly."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ParameterOutOfRange
from .matcore import EPS, _frozen, svd


def cartesian(t):
    """Return ``(Re T, Im T)`` with ``T = Re T + i Im T``, both Hermitian."""
    t = np.asarray(t, dtype=np.complex128)
    th = t.conj().T
    return _frozen((t + th) / 2), _frozen((t - th) / 2j)


@dataclass(frozen=True)
class PolarParts:
    """``T = U P`` with ``P = |T|`` and ``U`` vanishing on ``ker T``."""

    U: np.ndarray
    P: np.ndarray
    rank_tol: float
    singular_values: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.sum(self.singular_values > self.rank_tol))


def _rank_tol(s: np.ndarray) -> float:
    return s.size * EPS * (s[0] if s.size else 0.0)


def polar(t) -> PolarParts:
    w, s, v = svd(t)
    tol = _rank_tol(s)
    keep = (s > tol).astype(float)
    u = (w * keep) @ v.conj().T
    p = (v * s) @ v.conj().T
    p = (p + p.conj().T) / 2
    return PolarParts(_frozen(u), _frozen(p), float(tol), s)


def _truncated_power(s: np.ndarray, p: float) -> np.ndarray:
    s = np.where(s > _rank_tol(s), s, 0.0)
    return np.power(s, p)  # 0**0 == 1


def abs_power(t, p: float) -> np.ndarray:
    """``|T|^p``; singular values at or below the rank cutoff count as 0 and
    ``0^0 = 1``, so ``|T|^0 = I``."""
    _, s, v = svd(t)
    out = (v * _truncated_power(s, p)) @ v.conj().T
    return _frozen((out + out.conj().T) / 2)


def abs_adjoint_power(t, p: float) -> np.ndarray:
    """``|T^*|^p`` with the same conventions as :func:`abs_power`."""
    w, s, _ = svd(t)
    out = (w * _truncated_power(s, p)) @ w.conj().T
    return _frozen((out + out.conj().T) / 2)


def aluthge_t(t, tt: float) -> np.ndarray:
    """``|T|^t U |T|^(1-t)`` with the canonical partial isometry of :func:`polar`."""
    tt = float(tt)
    if not 0.0 <= tt <= 1.0:
        raise ParameterOutOfRange(f"t must lie in [0, 1], got {tt}")
    w, s, v = svd(t)
    tol = _rank_tol(s)
    keep = (s > tol).astype(float)
    vh = v.conj().T
    left = (v * _truncated_power(s, tt)) @ vh
    u = (w * keep) @ vh
    right = (v * _truncated_power(s, 1.0 - tt)) @ vh
    return _frozen(left @ u @ right)


def offdiag_block(x, y) -> np.ndarray:
    """``[[0, X], [Y, 0]]``."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionMismatch(f"X and Y must be square of equal size, got {x.shape} and {y.shape}")
    n = x.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    out[:n, n:] = x
    out[n:, :n] = y
    return _frozen(out)
