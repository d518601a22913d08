"""Equality conditions stated alongside several of the registered bounds.

Each condition is a premise (an equality between a bound and the radius) and
a consequent (a set of equalities between norms and radii).  A condition
"holds" on an input when the implication is not contradicted there:
``premise => consequent``, and for biconditional conditions also
``consequent => premise``.  Residuals are reported for both sides, relative to
the scale of the quantity they compare.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..matcore import spectral_norm
from ..radii import euclidean_radius, numerical_radius
from ..transforms import cartesian

EQ_RTOL = 1e-8
_W_RTOL = 1e-11


@dataclass(frozen=True)
class EqualityCheck:
    id: str
    premise: bool
    consequent: bool
    biconditional: bool
    premise_residual: float
    consequent_residuals: tuple

    @property
    def holds(self) -> bool:
        """The stated direction(s) of the implication are not contradicted."""
        forward = (not self.premise) or self.consequent
        backward = (not self.consequent) or self.premise
        return forward and (backward if self.biconditional else True)

    @property
    def converse(self) -> bool:
        """``consequent => premise`` on this input (informational for one-way conditions)."""
        return (not self.consequent) or self.premise

    def to_dict(self) -> dict:
        return {"id": self.id, "premise": self.premise, "consequent": self.consequent,
                "biconditional": self.biconditional, "holds": self.holds, "converse": self.converse,
                "premise_residual": self.premise_residual,
                "consequent_residuals": list(self.consequent_residuals)}


def _w(m):
    # far tighter than any equality tolerance; the circle sweep makes this cheap
    return numerical_radius(m, tol=_W_RTOL * max(1.0, spectral_norm(m))).midpoint


def _check(id, premise_res, consequent_res, biconditional, tol):
    consequent_res = tuple(float(abs(x)) for x in consequent_res)
    return EqualityCheck(id, bool(abs(premise_res) <= tol), all(x <= tol for x in consequent_res),
                         biconditional, float(abs(premise_res)), consequent_res)


def _operator_conditions(t, tol):
    nt = spectral_norm(t)
    re, im = cartesian(t)
    nr, ni = spectral_norm(re), spectral_norm(im)
    npl, nmi = spectral_norm(re + im), spectral_norm(re - im)
    ntt = spectral_norm(t.conj().T @ t + t @ t.conj().T)
    w = _w(t)
    s = max(1.0, nt)
    s2 = s * s
    out = []

    # the squared lower bound built from ||Re T||, ||Im T||
    lhs = math.sqrt(ntt / 4 + abs(nr ** 2 - ni ** 2) / 2)
    out.append(_check("cartesian_squared", (lhs - w) / s,
                      ((ntt / 2 - nr ** 2 - ni ** 2) / s2, (w - max(nr, ni)) / s), True, tol))

    # the same with Re T +- Im T
    lhs = math.sqrt(ntt / 4 + abs(npl ** 2 - nmi ** 2) / 4)
    out.append(_check("rotated_squared", (lhs - w) / s,
                      ((ntt - npl ** 2 - nmi ** 2) / s2,
                       (w - max(npl, nmi) / math.sqrt(2)) / s), True, tol))

    # the half-norm bound with quarter corrections; only one direction is stated
    lhs = nt / 2 + abs(nr - nt / 2) / 4 + abs(ni - nt / 2) / 4
    out.append(_check("half_norm_quarters", (lhs - w) / s,
                      ((max(nr, nt / 2) - max(ni, nt / 2)) / s,), False, tol))

    # the half-norm bound with the |Re| - |Im| gap
    lhs = nt / 2 + abs(nr - ni) / 2
    out.append(_check("half_norm_gap", (lhs - w) / s,
                      ((nt - nr - ni) / s, (w - max(nr, ni)) / s), True, tol))

    # equality through every stage of the four-term lower bound
    q1, q2 = max(nr, nt / 2), max(ni, nt / 2)
    r1, r2 = abs(nr - nt / 2), abs(ni - nt / 2)
    chain = (max(q1, q2),
             nt / 4 + (nr + ni) / 4 + (r1 + r2) / 4 + abs(q1 - q2) / 2,
             nt / 2 + (r1 + r2) / 4 + abs(q1 - q2) / 2,
             nt / 4 + (nr + ni) / 4 + abs(nr - ni) / 2)
    out.append(_check("four_term_chain", (chain[-1] - w) / s,
                      tuple((c - w) / s for c in chain[:-1]), False, tol))
    return out


def _pair_conditions(b, c, tol):
    wb, wc = _w(b), _w(c)
    wsum = _w(b @ b + c @ c)
    s = max(1.0, spectral_norm(b) + spectral_norm(c))
    we = euclidean_radius(b, c, tol=tol * s / 10).midpoint
    half = math.sqrt(wsum / 2)
    out = [_check("pair_half_sum", (we - half) / s, ((wb - half) / s, (wc - half) / s), False, tol)]
    lhs = math.sqrt(wsum / 2 + abs(wb ** 2 - wc ** 2) / 2)
    out.append(_check("pair_half_sum_gap", (we - lhs) / s,
                      ((wsum - wb ** 2 - wc ** 2) / s ** 2, (we - max(wb, wc)) / s), True, tol))
    return out


def check_equality_conditions(T=None, B=None, C=None, tol: float = EQ_RTOL) -> list[EqualityCheck]:
    """Evaluate the equality conditions that apply to ``T`` and/or ``(B, C)``.

    Premise and consequent are judged with the relative tolerance ``tol``.
    Never raises on numerical grounds; an empty list means no inputs.
    """
    out = []
    if T is not None:
        out += _operator_conditions(np.asarray(T, dtype=np.complex128), tol)
    if B is not None and C is not None:
        out += _pair_conditions(np.asarray(B, dtype=np.complex128), np.asarray(C, dtype=np.complex128), tol)
    return out
