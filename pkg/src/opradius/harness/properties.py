"""Per-trial property checks.

A check compares two numbers and records a violation only when the excess is
larger than the combined numerical uncertainty of both sides plus a fixed
relative slop.  Smaller excesses that are still above roundoff are kept as
warnings.
"""
from __future__ import annotations

import numpy as np

from .. import bounds
from ..matcore import EPS, ScalarFunctionSpec, psd_function, segment_integral, spectral_norm
from ..radii import numerical_radius
from ..transforms import abs_adjoint_power, abs_power
from .equality import check_equality_conditions

GATE_RTOL = 1e-7  # soundness and refinement slop, relative to the target scale
SLOP_RTOL = 1e-10  # arithmetic slop for closed-form comparisons
LEMMA_RTOL = 1e-10
HOMOGENEITY_RTOL = 1e-10
EQUALITY_PREMISE_RTOL = 1e-9
EQUALITY_CONSEQUENT_RTOL = 1e-6
REF_RTOL = {"w": 1e-8, "w_offdiag": 1e-8, "we": 1e-7}

PROPERTIES = ("soundness", "refinement", "derivation_chain", "product_chain", "integral_chain_pair",
              "integral_chain", "fixed_point", "lemmas", "equality", "homogeneity")

# (stronger, weaker) lower bounds: the first must dominate the second
REFINEMENTS = (
    ("we_lower_th22", "we_lower_dragomir"),
    ("w_lower_cor25", "w_lower_laa21_29"),
    ("w_lower_cor27", "w_lower_psk1_23"),
    ("w_lower_th214", "w_lower_hks"),
    ("w_lower_th214", "w_lower_laa21_21"),
    ("offdiag_lower_31i", "offdiag_lower_pko27"),
    ("offdiag_lower_31ii", "offdiag_lower_pko212"),
)
# upper bounds that must not exceed a relaxation kept in their breakdown
RELAXATIONS = (
    ("w_upper_aluthge_t", "relaxed"),
    ("w_upper_aluthge_half", "relaxed"),
)


def target_scale(target: str, cx: bounds.Context) -> float:
    if target == "w":
        return max(1.0, cx.n_t())
    if target == "we":
        return max(1.0, spectral_norm(cx.B) + spectral_norm(cx.C))
    return max(1.0, spectral_norm(cx.X), spectral_norm(cx.Y))


class Recorder:
    """Collects violations and warnings for one trial."""

    def __init__(self):
        self.violations = []
        self.warnings = []

    def le(self, prop, name, a, b, slack, gate):
        """Check ``a <= b``.  ``slack`` is the combined uncertainty, ``gate`` the tolerance."""
        excess = float(a - b)
        if excess > slack + gate:
            self.violations.append([prop, name, excess])
        elif excess > 64 * EPS * (abs(a) + abs(b)):
            self.warnings.append([prop, name, excess])


def slack_of(res: bounds.BoundResult, ref) -> float:
    mid = ref.midpoint
    if res.kind == "lower":
        return mid - res.value
    if res.kind == "upper":
        return res.value - mid
    return min(mid - res.value, res.upper - mid)


def check_soundness(rec, results, refs, scales):
    for res in results:
        ref = refs[res.target]
        s = scales[res.target]
        unc = res.breakdown.get("w_uncertainty", 0.0)
        gate = GATE_RTOL * s
        if res.kind in ("lower", "twosided"):
            rec.le("soundness", res.id, res.value, ref.upper, unc, gate)
        if res.kind == "upper":
            rec.le("soundness", res.id, ref.lower, res.value, unc, gate)
        if res.kind == "twosided":
            rec.le("soundness", res.id + ":upper", ref.lower, res.upper, unc, gate)


def check_refinement(rec, by_id, scales):
    for strong, weak in REFINEMENTS:
        if strong not in by_id or weak not in by_id:
            continue
        a, b = by_id[strong], by_id[weak]
        unc = a.breakdown["w_uncertainty"] + b.breakdown["w_uncertainty"]
        s = scales[a.target]
        rec.le("refinement", f"{strong}>={weak}", b.value, a.value, unc, SLOP_RTOL * s)
    for id, key in RELAXATIONS:
        if id in by_id:
            a = by_id[id]
            rec.le("refinement", f"{id}<={key}", a.value, a.breakdown[key],
                   a.breakdown["w_uncertainty"], SLOP_RTOL * scales[a.target])


def check_derivation_chain(rec, by_id, refs, scales):
    """Intermediate stages of the lower-bound derivations sit between the
    bound and the radius."""
    for id in ("we_lower_th22", "w_lower_cor25", "w_lower_cor27", "we_lower_normal"):
        if id in by_id:
            a = by_id[id]
            s, unc = scales[a.target], a.breakdown["w_uncertainty"]
            rec.le("derivation_chain", f"{id}:value<=chain", a.value, a.breakdown["chain_form"],
                   unc, SLOP_RTOL * s)
            rec.le("derivation_chain", f"{id}:chain<=radius", a.breakdown["chain_form"],
                   refs[a.target].upper, unc, GATE_RTOL * s)
    if "w_lower_th214" in by_id:
        a = by_id["w_lower_th214"]
        s = scales["w"]
        stages = [refs["w"].upper] + [a.breakdown[f"chain_{k}"] for k in range(4)]
        for k in range(4):
            gate = (GATE_RTOL if k == 0 else SLOP_RTOL) * s
            rec.le("derivation_chain", f"w_lower_th214:stage{k}", stages[k + 1], stages[k], 0.0, gate)


def check_product_chain(rec, cx, refs, scales):
    xy = cx.X @ cx.Y
    enc = numerical_radius(xy, tol=REF_RTOL["w"] * max(1.0, spectral_norm(xy)))
    s = scales["w_offdiag"]
    rec.le("product_chain", "w(XY)<=w^2(block)", enc.lower, refs["w_offdiag"].upper ** 2, 0.0,
           GATE_RTOL * s * s)


def check_integral_chain_pair(rec, by_id, refs, scales):
    a = by_id.get("we_upper_integral_r")
    if a is None:
        return
    r = a.breakdown["r"]
    s = scales["we"] ** (2 * r)
    rec.le("integral_chain_pair", "f(we^2)<=||integral||", refs["we"].lower ** (2 * r),
           a.breakdown["integral_norm"], 0.0, GATE_RTOL * s)
    rec.le("integral_chain_pair", "||integral||<=endpoints", a.breakdown["integral_norm"],
           a.breakdown["endpoint_norm"], 0.0, SLOP_RTOL * s)


def check_integral_chain(rec, by_id, refs, scales):
    a = by_id.get("w_upper_cor313")
    if a is None:
        return
    s2 = scales["w"] ** 2
    rec.le("integral_chain", "w^2<=||integral||^(1/r)", refs["w"].lower ** 2,
           a.breakdown["w_squared_bound"], 0.0, GATE_RTOL * s2)
    rec.le("integral_chain", "||integral||^(1/r)<=endpoints", a.breakdown["w_squared_bound"],
           a.breakdown["endpoint_w_squared_bound"], 0.0, SLOP_RTOL * s2)


def check_fixed_point(rec, by_id, refs, scales):
    a = by_id.get("w_upper_qt")
    if a is None:
        return
    b, s = a.breakdown, scales["w"]
    unc = b["w_uncertainty"]
    rec.le("fixed_point", "w<=rhs(w)", refs["w"].lower, b["predicate_rhs"], unc, GATE_RTOL * s)
    rec.le("fixed_point", "rhs<=relaxed", b["predicate_rhs"], b["relaxed"], unc, SLOP_RTOL * s)
    rec.le("fixed_point", "relaxed<=norm", b["relaxed"], b["norm_relaxed"], unc, GATE_RTOL * s)


# -- scalar and vector lemmas ------------------------------------------------

def _unit(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def cauchy_schwarz_excess(a, x, y, alpha) -> float:
    """``|<Ax,y>|^2 - <|A|^{2 alpha} x,x> <|A*|^{2(1-alpha)} y,y>``, relative to ``||A||^2``."""
    lhs = abs(np.vdot(y, a @ x)) ** 2
    px = np.vdot(x, abs_power(a, 2 * alpha) @ x).real
    py = np.vdot(y, abs_adjoint_power(a, 2 * (1 - alpha)) @ y).real
    return float((lhs - px * py) / max(1.0, spectral_norm(a)) ** 2)


def jensen_excess(h, x, r) -> float:
    """``f(<Hx,x>) - <f(H)x,x>`` for ``f = power(r)``, relative to ``max(1, ||H||)^r``."""
    f = ScalarFunctionSpec.power(r)
    lhs = float(f(max(0.0, np.vdot(x, h @ x).real)))
    rhs = np.vdot(x, psd_function(h, f) @ x).real
    return float((lhs - rhs) / max(1.0, spectral_norm(h)) ** r)


def hermite_hadamard_excess(a, b, r) -> tuple[float, float]:
    """Excesses of both Hermite-Hadamard inequalities for ``f = power(r)`` on
    scalars ``a, b >= 0``, via the matrix quadrature on 1x1 inputs."""
    f = ScalarFunctionSpec.power(r)
    s = max(1.0, a, b) ** r
    mid = float(f((a + b) / 2))
    integral = segment_integral(np.array([[a]]), np.array([[b]]), f, tol=1e-3 * LEMMA_RTOL * s)
    val = float(integral[0, 0].real)
    ends = float((f(a) + f(b)) / 2)
    return (mid - val) / s, (val - ends) / s


def check_lemmas(rec, trial, rng):
    t = trial.T
    n = t.shape[0]
    x, y = _unit(rng, n), _unit(rng, n)
    alpha = float(rng.uniform())
    rec.le("lemmas", "cauchy_schwarz", cauchy_schwarz_excess(t, x, y, alpha), 0.0, 0.0, LEMMA_RTOL)
    h = t.conj().T @ t
    rec.le("lemmas", "jensen", jensen_excess(h, x, trial.r), 0.0, 0.0, LEMMA_RTOL)
    a, b = (float(v) for v in 2 * np.abs(rng.standard_normal(2)))
    e1, e2 = hermite_hadamard_excess(a, b, trial.r)
    rec.le("lemmas", "hermite_hadamard:left", e1, 0.0, 0.0, LEMMA_RTOL)
    rec.le("lemmas", "hermite_hadamard:right", e2, 0.0, 0.0, LEMMA_RTOL)


def check_equality(rec, trial):
    """Only sharp premises count: the premise must hold to 1e-10 while the
    stated consequent fails by more than 1e-6."""
    for e in check_equality_conditions(T=trial.T, B=trial.B, C=trial.C, tol=EQUALITY_PREMISE_RTOL):
        worst = max(e.consequent_residuals)
        if e.premise and worst > EQUALITY_CONSEQUENT_RTOL:
            rec.violations.append(["equality", e.id, worst])
        if e.biconditional and worst <= EQUALITY_PREMISE_RTOL and e.premise_residual > EQUALITY_CONSEQUENT_RTOL:
            rec.violations.append(["equality", e.id + ":converse", e.premise_residual])


def check_homogeneity(rec, trial):
    """The sandwich bound only sees ``||T||`` and is invariant under any
    complex scalar; the four-term lower bound sees ``Re T`` and ``Im T``
    separately, so it is homogeneous for positive scalars only and is checked
    at ``|c|``."""
    if trial.base_T is None:
        return
    c = abs(trial.scalar)
    s = max(1.0, spectral_norm(trial.base_T))
    gate = HOMOGENEITY_RTOL * c * s
    for id, scaled in (("w_lower_th214", c * trial.base_T), ("w_sandwich_eqv", trial.T)):
        a = bounds.evaluate(id, T=trial.base_T)
        b = bounds.evaluate(id, T=scaled)
        rec.le("homogeneity", id, abs(b.value - c * a.value), 0.0, 0.0, gate)
        if a.upper is not None:
            rec.le("homogeneity", id + ":upper", abs(b.upper - c * a.upper), 0.0, 0.0, gate)


def context_for(trial) -> bounds.Context:
    return bounds.Context(T=trial.T, B=trial.B, C=trial.C, X=trial.X, Y=trial.Y, t=trial.t, r=trial.r)


def references(cx) -> dict:
    return {k: bounds.reference(k, cx, REF_RTOL[k]) for k in ("w", "we", "w_offdiag")}

