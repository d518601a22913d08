"""Seeded random-matrix ensembles.

Each trial owns an independent generator seeded from ``(seed, ensemble label,
trial index)``, so trial ``k`` of a spec is the same no matter how many trials
are requested or which worker draws it.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidSpec

KINDS = ("ginibre", "hermitian", "normal", "unitary", "nilpotent_shift", "rank_deficient",
         "diagonal", "scaled")
BASE_KINDS = tuple(k for k in KINDS if k != "scaled")

# the first trials pin the parameter endpoints, later ones draw uniformly
_PINNED_T = (0.0, 1.0, 0.5)
_PINNED_R = (1.0, 2.0, 1.5)


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    dim: int
    seed: int = 0
    trials: int = 1
    rank: int | None = None  # rank_deficient only; default floor(dim/2)
    base: str = "ginibre"  # scaled only
    scalar: complex = complex(2.0, -1.5)  # scaled only

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown ensemble kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise InvalidSpec(f"dim must be an integer >= 1, got {self.dim!r}")
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise InvalidSpec(f"trials must be an integer >= 1, got {self.trials!r}")
        if not isinstance(self.seed, (int, np.integer)) or not -2**63 <= self.seed < 2**64:
            raise InvalidSpec(f"seed must be a 64-bit integer, got {self.seed!r}")
        if self.kind == "rank_deficient" and self.rank is not None and not 0 <= self.rank <= self.dim:
            raise InvalidSpec(f"rank must lie in [0, {self.dim}], got {self.rank}")
        if self.kind == "scaled":
            if self.base not in BASE_KINDS:
                raise InvalidSpec(f"scaled base must be one of {', '.join(BASE_KINDS)}, got {self.base!r}")
            if not np.isfinite(complex(self.scalar)):
                raise InvalidSpec("scalar must be finite")

    @property
    def effective_rank(self) -> int:
        return self.dim // 2 if self.rank is None else self.rank

    @property
    def label(self) -> str:
        if self.kind == "rank_deficient":
            name = f"rank_deficient(k={self.effective_rank})"
        elif self.kind == "scaled":
            c = complex(self.scalar)
            name = f"scaled({self.base},{c.real!r},{c.imag!r})"
        else:
            name = self.kind
        return f"{name}/n={self.dim}"

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "dim": int(self.dim), "seed": int(self.seed),
               "trials": int(self.trials), "label": self.label}
        if self.kind == "rank_deficient":
            out["rank"] = self.effective_rank
        if self.kind == "scaled":
            out["base"] = self.base
            out["scalar"] = [complex(self.scalar).real, complex(self.scalar).imag]
        return out


@dataclass(frozen=True)
class Trial:
    """One draw: an operator ``T``, a pair ``(B, C)``, an off-diagonal pair
    ``(X, Y)`` and the parameters ``t``, ``r``.  For scaled ensembles
    ``base_T`` is the unscaled matrix and ``T = scalar * base_T``."""

    index: int
    T: np.ndarray
    B: np.ndarray
    C: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    t: float
    r: float
    base_T: np.ndarray | None = field(default=None, repr=False)
    scalar: complex | None = None


def _ginibre(rng, n, m=None):
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


def haar_unitary(rng, n):
    q, r = np.linalg.qr(_ginibre(rng, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def shift(n):
    return np.eye(n, k=1, dtype=np.complex128)


def sample(kind, n, rng, *, rank=None, canonical=False):
    """Draw one matrix of a base kind."""
    if kind == "ginibre":
        return _ginibre(rng, n)
    if kind == "hermitian":
        g = _ginibre(rng, n)
        return (g + g.conj().T) / 2
    if kind == "normal":
        q = haar_unitary(rng, n)
        lam = _ginibre(rng, n, 1)[:, 0]
        return (q * lam) @ q.conj().T
    if kind == "unitary":
        return haar_unitary(rng, n)
    if kind == "nilpotent_shift":
        if canonical:
            return shift(n)
        q = haar_unitary(rng, n)
        return q @ shift(n) @ q.conj().T
    if kind == "rank_deficient":
        k = n // 2 if rank is None else rank
        return _ginibre(rng, n, k) @ _ginibre(rng, k, n)
    if kind == "diagonal":
        return np.diag(_ginibre(rng, n, 1)[:, 0])
    raise InvalidSpec(f"no sampler for kind {kind!r}")


def trial_rng(spec: EnsembleSpec, index: int) -> np.random.Generator:
    label = zlib.crc32(spec.label.encode())
    return np.random.default_rng(np.random.SeedSequence([int(spec.seed) % 2**64, label, index]))


def draw(spec: EnsembleSpec, index: int) -> Trial:
    """Trial ``index`` of ``spec``; independent of ``spec.trials``."""
    rng = trial_rng(spec, index)
    n = spec.dim
    kind = spec.base if spec.kind == "scaled" else spec.kind
    rank = spec.effective_rank if spec.kind == "rank_deficient" else None
    canonical = index == 0
    mats = [sample(kind, n, rng, rank=rank, canonical=canonical) for _ in range(5)]
    t = _PINNED_T[index] if index < len(_PINNED_T) else float(rng.uniform(0.0, 1.0))
    r = _PINNED_R[index] if index < len(_PINNED_R) else float(rng.uniform(1.0, 2.0))
    if spec.kind == "scaled":
        c = complex(spec.scalar)
        base = mats[0]
        mats = [c * m for m in mats]
        return Trial(index, *mats, t=t, r=r, base_T=base, scalar=c)
    return Trial(index, *mats, t=t, r=r)


def generate(spec: EnsembleSpec):
    """Yield the trials of ``spec`` in index order."""
    if not isinstance(spec, EnsembleSpec):
        raise InvalidSpec(f"expected an EnsembleSpec, got {type(spec).__name__}")
    for k in range(spec.trials):
        yield draw(spec, k)


def kind_residual(kind, a, rank=None) -> float:
    """Relative residual of the defining property of ``kind`` (0 for ginibre)."""
    a = np.asarray(a)
    nrm = max(np.linalg.norm(a, 2), 1e-300)
    if kind == "hermitian":
        return np.linalg.norm(a - a.conj().T, 2) / nrm
    if kind in ("normal", "diagonal"):
        off = a - np.diag(np.diagonal(a)) if kind == "diagonal" else a @ a.conj().T - a.conj().T @ a
        return np.linalg.norm(off, 2) / nrm ** (1 if kind == "diagonal" else 2)
    if kind == "unitary":
        return np.linalg.norm(a.conj().T @ a - np.eye(a.shape[0]), 2)
    if kind == "nilpotent_shift":
        return np.linalg.norm(np.linalg.matrix_power(a, a.shape[0]), 2) / nrm ** a.shape[0]
    if kind == "rank_deficient":
        s = np.linalg.svd(a, compute_uv=False)
        k = a.shape[0] // 2 if rank is None else rank
        return float(s[k] / nrm) if k < s.size else 0.0
    return 0.0


def default_specs(seed: int = 0, trials: int = 200, dims=(2, 3, 5)) -> list[EnsembleSpec]:
    kinds = ("ginibre", "normal", "nilpotent_shift", "rank_deficient", "unitary")
    return [EnsembleSpec(k, n, seed, trials) for k in kinds for n in dims]
