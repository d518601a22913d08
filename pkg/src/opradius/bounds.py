"""Registry of closed-form bounds for ``w(T)``, ``w_e(B, C)`` and the numerical
radius of the off-diagonal block ``[[0, X], [Y, 0]]``.

Every bound is evaluated from spectral norms, matrix functions and certified
numerical radii.  Each ``w(.)`` inside a formula is enclosed at tolerance
``1e-10 * ||M||`` and its midpoint used; the half-widths of all enclosures a
bound touched are summed into ``breakdown["w_uncertainty"]``.

Values are always reported on the scale of the target radius.  Inequalities
stated for a square (``w^2 <= ...``) or a power are converted by taking the
matching root, and the unconverted right-hand side is kept in the breakdown.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotApplicable, ParameterOutOfRange, WrongInputShape
from .matcore import (ScalarFunctionSpec, is_normal, psd_function, segment_power_integral,
                      spectral_norm, spectral_norms)
from .radii import euclidean_radius, numerical_radius, numerical_radius_max
from .transforms import abs_adjoint_power, abs_power, aluthge_t, cartesian, offdiag_block

W_RTOL = 1e-10
THETA_GRID = 64
DEFAULT_T = 0.5
DEFAULT_R = 1.5
QUAD_RTOL = 1e-12
NORMAL_RTOL = 1e-10

SIGNATURES = {
    "T": ("T",), "T,t": ("T", "t"), "T,r": ("T", "r"),
    "B,C": ("B", "C"), "B,C,t": ("B", "C", "t"), "B,C,r": ("B", "C", "r"),
    "X,Y": ("X", "Y"),
}
TARGETS = {"T": "w", "B": "we", "X": "w_offdiag"}


@dataclass(frozen=True)
class BoundInfo:
    id: str
    kind: str  # lower | upper | twosided
    target: str  # w | we | w_offdiag
    signature: str
    anchor: str
    intermediates: tuple = ()

    @property
    def inputs(self) -> tuple:
        return SIGNATURES[self.signature]

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind, "target": self.target,
                "signature": self.signature, "anchor": self.anchor}


@dataclass(frozen=True)
class BoundResult:
    id: str
    kind: str
    target: str
    value: float
    breakdown: dict = field(compare=False)
    inputs_digest: str = ""
    upper: float | None = None

    def to_dict(self) -> dict:
        out = {"id": self.id, "kind": self.kind, "target": self.target, "value": self.value}
        if self.upper is not None:
            out["upper"] = self.upper
        out["breakdown"] = dict(self.breakdown)
        out["inputs_digest"] = self.inputs_digest
        return out


REGISTRY: dict[str, BoundInfo] = {}
_FORMULAS = {}


def _bound(id, kind, target, signature, anchor, intermediates=()):
    def wrap(fn):
        REGISTRY[id] = BoundInfo(id, kind, target, signature, anchor, tuple(intermediates))
        _FORMULAS[id] = fn
        return fn
    return wrap


def list_bounds() -> list[BoundInfo]:
    return list(REGISTRY.values())


def parse_bound_id(text: str) -> str:
    key = text.strip()
    if key not in REGISTRY:
        raise WrongInputShape(f"unknown bound id {text!r}")
    return key


def _digest(arrays: dict, params: dict) -> str:
    h = hashlib.sha256()
    for name in sorted(arrays):
        a = np.ascontiguousarray(arrays[name], dtype=np.complex128)
        h.update(name.encode())
        h.update(repr(a.shape).encode())
        h.update(a.tobytes())
    for name in sorted(params):
        h.update(f"{name}={params[name]!r}".encode())
    return h.hexdigest()[:16]


class Context:
    """Inputs plus memoized derived quantities, shared across many bound ids."""

    def __init__(self, T=None, B=None, C=None, X=None, Y=None, t=None, r=None,
                 quad_rtol: float = QUAD_RTOL):
        self.mats = {}
        for name, val in (("T", T), ("B", B), ("C", C), ("X", X), ("Y", Y)):
            if val is None:
                continue
            a = np.asarray(val, dtype=np.complex128)
            if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
                raise WrongInputShape(f"{name} must be a nonempty square matrix, got shape {a.shape}")
            if not np.all(np.isfinite(a)):
                raise WrongInputShape(f"{name} has non-finite entries")
            self.mats[name] = a
        for a, b in (("B", "C"), ("X", "Y")):
            if (a in self.mats) != (b in self.mats):
                raise WrongInputShape(f"{a} and {b} must be given together")
            if a in self.mats and self.mats[a].shape != self.mats[b].shape:
                raise WrongInputShape(f"{a} and {b} differ in shape")
        self.params = {}
        if t is not None:
            t = float(t)
            if not (math.isfinite(t) and 0.0 <= t <= 1.0):
                raise ParameterOutOfRange(f"t must lie in [0, 1], got {t}")
            self.params["t"] = t
        if r is not None:
            r = float(r)
            if not (math.isfinite(r) and 1.0 <= r <= 2.0):
                raise ParameterOutOfRange(f"r must lie in [1, 2], got {r}")
            self.params["r"] = r
        self.quad_rtol = quad_rtol
        self._memo = {}
        self._used = {}

    # -- plumbing ------------------------------------------------------------
    def __getattr__(self, name):
        mats = self.__dict__.get("mats", {})
        if name in mats:
            return mats[name]
        raise AttributeError(name)

    @property
    def t(self) -> float:
        return self.params.get("t", DEFAULT_T)

    @property
    def r(self) -> float:
        return self.params.get("r", DEFAULT_R)

    def has(self, names) -> bool:
        return all(n in self.mats for n in names if n not in ("t", "r"))

    def memo(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    def digest(self, names) -> str:
        arrays = {n: self.mats[n] for n in names if n in self.mats}
        params = {n: (self.t if n == "t" else self.r) for n in names if n in ("t", "r")}
        return _digest(arrays, params)

    def quad_tol(self, a, b, r) -> float:
        """Absolute quadrature tolerance on the scale of the integrand."""
        return self.quad_rtol * max(1.0, spectral_norm(a), spectral_norm(b)) ** r

    def norm(self, key, fn) -> float:
        return self.memo(("norm", key), lambda: spectral_norm(fn()))

    def mat(self, key, fn):
        return self.memo(("mat", key), fn)

    def w(self, key, fn) -> float:
        enc = self.memo(("w", key), lambda: _enclose(fn()))
        self._used[("w", key)] = enc.halfwidth
        return enc.midpoint

    def w_family(self, key, fn):
        enc, k = self.memo(("wf", key), lambda: _enclose_family(fn()))
        self._used[("wf", key)] = enc.halfwidth
        return enc.midpoint, k

    def start(self):
        self._used = {}

    def uncertainty(self) -> float:
        return float(sum(self._used.values()))

    # -- shared derived quantities -------------------------------------------
    def cart(self):
        return self.mat("cart", lambda: cartesian(self.T))

    def n_t(self):
        return self.norm("T", lambda: self.T)

    def n_re(self):
        return self.norm("ReT", lambda: self.cart()[0])

    def n_im(self):
        return self.norm("ImT", lambda: self.cart()[1])

    def n_tt(self):
        t = self.T
        return self.norm("T*T+TT*", lambda: t.conj().T @ t + t @ t.conj().T)

    def n_rpi(self):
        return self.norm("Re+Im", lambda: self.cart()[0] + self.cart()[1])

    def n_rmi(self):
        return self.norm("Re-Im", lambda: self.cart()[0] - self.cart()[1])

    def w_b(self):
        return self.w("B", lambda: self.B)

    def w_c(self):
        return self.w("C", lambda: self.C)

    def w_sq_sum(self):
        return self.w("B^2+C^2", lambda: self.B @ self.B + self.C @ self.C)

    def s_pair(self):
        b, c = self.B, self.C
        s1 = self.mat("B*B+C*C", lambda: b.conj().T @ b + c.conj().T @ c)
        s2 = self.mat("BB*+CC*", lambda: b @ b.conj().T + c @ c.conj().T)
        return s1, s2

    def off_norms(self):
        """Norms that appear in every off-diagonal block bound."""
        def build():
            x, y = self.X, self.Y
            ys = y.conj().T
            xx = spectral_norm(x.conj().T @ x + y @ ys)   # ||X*X + YY*||
            yy = spectral_norm(x @ x.conj().T + ys @ y)   # ||XX* + Y*Y||
            return {
                "nX": spectral_norm(x), "nY": spectral_norm(y),
                "gram": max(xx, yy),
                "plus": spectral_norm(x + ys), "minus": spectral_norm(x - ys),
                # upper-right blocks of Re T +- Im T, doubled
                "rot_p": spectral_norm((1 - 1j) * x + (1 + 1j) * ys),
                "rot_m": spectral_norm((1 + 1j) * x + (1 - 1j) * ys),
            }
        return self.memo("off_norms", build)


def _enclose(m):
    norm = spectral_norm(m)
    if norm == 0.0:
        return numerical_radius(m)
    return numerical_radius(m, tol=W_RTOL * norm)


def _enclose_family(mats):
    mats = np.asarray(mats)
    top = float(spectral_norms(mats).max())
    if top == 0.0:
        return numerical_radius_max(mats)
    return numerical_radius_max(mats, tol=W_RTOL * top)


def _sqrt(x: float) -> float:
    # roundoff can push an exactly-zero radicand a hair below 0
    return math.sqrt(max(x, 0.0))


def _thetas():
    return np.arange(THETA_GRID) * (2 * np.pi / THETA_GRID)


# -- Euclidean operator radius: lower bounds --------------------------------

@_bound("we_lower_21i", "lower", "we", "B,C", "w_e(B,C) >= max{w(B), w(C)}")
def _we_lower_21i(cx):
    wb, wc = cx.w_b(), cx.w_c()
    return max(wb, wc), {"w_B": wb, "w_C": wc}


@_bound("we_lower_21ii", "lower", "we", "B,C",
        "w_e(B,C) >= w(B + e^{i theta} C)/sqrt(2) for every real theta", ("theta_star",))
def _we_lower_21ii(cx):
    th = _thetas()
    wmax, k = cx.w_family("B+e^{it}C", lambda: [cx.B + np.exp(1j * a) * cx.C for a in th])
    return wmax / math.sqrt(2), {"w_max": wmax, "theta_star": float(th[k])}


@_bound("we_lower_21iii", "lower", "we", "B,C",
        "w_e(B,C)^2 >= w(B^2 + e^{i theta} C^2)/2 + |w(B)^2 - w(C)^2|/2 for every real theta",
        ("theta_star",))
def _we_lower_21iii(cx):
    th = _thetas()
    b2 = cx.mat("B^2", lambda: cx.B @ cx.B)
    c2 = cx.mat("C^2", lambda: cx.C @ cx.C)
    wmax, k = cx.w_family("B^2+e^{it}C^2", lambda: [b2 + np.exp(1j * a) * c2 for a in th])
    wb, wc = cx.w_b(), cx.w_c()
    val = _sqrt(wmax / 2 + abs(wb ** 2 - wc ** 2) / 2)
    return val, {"w_max": wmax, "theta_star": float(th[k]), "w_B": wb, "w_C": wc}


@_bound("we_lower_21iv", "lower", "we", "B,C", "w_e(B,C)^2 >= w(BC + CB)/2")
def _we_lower_21iv(cx):
    wa = cx.w("BC+CB", lambda: cx.B @ cx.C + cx.C @ cx.B)
    return _sqrt(wa / 2), {"w_BC+CB": wa}


@_bound("we_lower_th22", "lower", "we", "B,C",
        "w_e(B,C)^2 >= w(B^2+C^2)/4 + (w(B)^2 + w(C)^2)/4 + |w(B)^2 - w(C)^2|/2",
        ("t1", "t2", "m1", "m2"))
def _we_lower_th22(cx):
    wb2, wc2 = cx.w_b() ** 2, cx.w_c() ** 2
    h = cx.w_sq_sum() / 2
    t1, t2 = max(wb2, h), max(wc2, h)
    m1, m2 = abs(wb2 - h), abs(wc2 - h)
    val = _sqrt(h / 2 + (wb2 + wc2) / 4 + abs(wb2 - wc2) / 2)
    chain = _sqrt(h + (m1 + m2) / 4 + abs(t1 - t2) / 2)
    return val, {"t1": t1, "t2": t2, "m1": m1, "m2": m2, "half_w_B2+C2": h, "max_t": max(t1, t2),
                 "chain_form": chain}


@_bound("we_lower_dragomir", "lower", "we", "B,C", "w_e(B,C)^2 >= w(B^2 + C^2)/2")
def _we_lower_dragomir(cx):
    h = cx.w_sq_sum() / 2
    return _sqrt(h), {"half_w_B2+C2": h}


@_bound("we_lower_normal", "lower", "we", "B,C",
        "B, C normal: w_e(B,C)^2 >= ||B^2+C^2||/4 + (||B||^2 + ||C||^2)/4 + | ||B||^2 - ||C||^2 |/2",
        ("s1", "s2", "p1", "p2"))
def _we_lower_normal(cx):
    for name in ("B", "C"):
        if not is_normal(cx.mats[name], NORMAL_RTOL):
            raise NotApplicable(f"{name} is not normal (||AA* - A*A|| > 1e-10 ||A||^2)")
    nb2 = spectral_norm(cx.B) ** 2
    nc2 = spectral_norm(cx.C) ** 2
    h = spectral_norm(cx.B @ cx.B + cx.C @ cx.C) / 2
    s1, s2 = max(nb2, h), max(nc2, h)
    p1, p2 = abs(nb2 - h), abs(nc2 - h)
    val = _sqrt(h / 2 + (nb2 + nc2) / 4 + abs(nb2 - nc2) / 2)
    chain = _sqrt(h + (p1 + p2) / 4 + abs(s1 - s2) / 2)
    return val, {"s1": s1, "s2": s2, "p1": p1, "p2": p2, "chain_form": chain}


# -- Euclidean operator radius: upper bounds --------------------------------

def _minkowski(cx, t):
    b, c = cx.B, cx.C
    head = spectral_norm(t * t * (b.conj().T @ b) + (1 - t) ** 2 * (c.conj().T @ c))
    wp = cx.w(("(1-t)B+tC", t), lambda: (1 - t) * b + t * c)
    wm = cx.w(("(1-t)B-tC", t), lambda: (1 - t) * b - t * c)
    tail = math.sqrt((wp ** 2 + wm ** 2) / 2)
    return math.sqrt(head) + tail, {"norm_term": math.sqrt(head), "w_plus": wp, "w_minus": wm,
                                     "w_term": tail}


@_bound("we_upper_th28", "upper", "we", "B,C,t",
        "w_e(B,C) <= ||t^2 B*B + (1-t)^2 C*C||^{1/2} + {w^2((1-t)B+tC) + w^2((1-t)B-tC)}^{1/2}/sqrt(2)")
def _we_upper_th28(cx):
    return _minkowski(cx, cx.t)


@_bound("we_upper_eq5", "upper", "we", "B,C",
        "w_e(B,C) <= ||B*B + C*C||^{1/2}/2 + {w^2(B+C) + w^2(B-C)}^{1/2}/(2 sqrt(2))")
def _we_upper_eq5(cx):
    val, br = _minkowski(cx, 0.5)
    return val, br


@_bound("we_upper_integral_r", "upper", "we", "B,C,r",
        "w_e(B,C)^{2r} <= ||int_0^1 (t(B*B+C*C) + (1-t)(BB*+CC*))^r dt|| "
        "<= ||(B*B+C*C)^r + (BB*+CC*)^r||/2, 1 <= r <= 2")
def _we_upper_integral_r(cx):
    r = cx.r
    s1, s2 = cx.s_pair()
    integral = spectral_norm(segment_power_integral(s1, s2, r, cx.quad_tol(s1, s2, r)))
    f = ScalarFunctionSpec.power(r)
    ends = spectral_norm(psd_function(s1, f) + psd_function(s2, f)) / 2
    return integral ** (1 / (2 * r)), {"integral_norm": integral, "endpoint_norm": ends,
                                       "endpoint_bound": ends ** (1 / (2 * r)), "r": r}


# -- numerical radius: lower bounds ------------------------------------------

@_bound("w_lower_cor25", "lower", "w", "T",
        "w(T)^2 >= ||T*T+TT*||/8 + (||Re T||^2 + ||Im T||^2)/4 + | ||Re T||^2 - ||Im T||^2 |/2",
        ("alpha", "beta", "gamma", "delta"))
def _w_lower_cor25(cx):
    a, b = cx.n_re() ** 2, cx.n_im() ** 2
    q = cx.n_tt() / 4
    alpha, beta = abs(a - q), abs(b - q)
    gamma, delta = max(a, q), max(b, q)
    val = _sqrt(q / 2 + (a + b) / 4 + abs(a - b) / 2)
    chain = _sqrt(q + (alpha + beta) / 4 + abs(gamma - delta) / 2)
    return val, {"alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta, "chain_form": chain}


@_bound("w_lower_cor27", "lower", "w", "T",
        "w(T)^2 >= ||T*T+TT*||/8 + (||Re T+Im T||^2 + ||Re T-Im T||^2)/8 "
        "+ | ||Re T+Im T||^2 - ||Re T-Im T||^2 |/4",
        ("gamma", "delta", "xi", "eta"))
def _w_lower_cor27(cx):
    c, d = cx.n_rpi() ** 2, cx.n_rmi() ** 2
    q = cx.n_tt() / 4
    gamma, delta = abs(c / 2 - q), abs(d / 2 - q)
    xi, eta = max(c / 2, q), max(d / 2, q)
    val = _sqrt(q / 2 + (c + d) / 8 + abs(c - d) / 4)
    chain = _sqrt(q + (gamma + delta) / 4 + abs(xi - eta) / 2)
    return val, {"gamma": gamma, "delta": delta, "xi": xi, "eta": eta, "chain_form": chain}


@_bound("w_lower_th214", "lower", "w", "T",
        "w(T) >= ||T||/4 + (||Re T|| + ||Im T||)/4 + | ||Re T|| - ||Im T|| |/2",
        ("q1", "q2", "r1", "r2"))
def _w_lower_th214(cx):
    nt, nr, ni = cx.n_t(), cx.n_re(), cx.n_im()
    q1, q2 = max(nr, nt / 2), max(ni, nt / 2)
    r1, r2 = abs(nr - nt / 2), abs(ni - nt / 2)
    val = nt / 4 + (nr + ni) / 4 + abs(nr - ni) / 2
    # intermediate stages of the derivation, largest first
    chain = [max(q1, q2),
             nt / 4 + (nr + ni) / 4 + (r1 + r2) / 4 + abs(q1 - q2) / 2,
             nt / 2 + (r1 + r2) / 4 + abs(q1 - q2) / 2,
             val]
    br = {"q1": q1, "q2": q2, "r1": r1, "r2": r2}
    br.update({f"chain_{k}": v for k, v in enumerate(chain)})
    return val, br


@_bound("w_lower_laa21_29", "lower", "w", "T",
        "w(T)^2 >= ||T*T+TT*||/4 + | ||Re T||^2 - ||Im T||^2 |/2")
def _w_lower_laa21_29(cx):
    a, b = cx.n_re() ** 2, cx.n_im() ** 2
    return _sqrt(cx.n_tt() / 4 + abs(a - b) / 2), {}


@_bound("w_lower_psk1_23", "lower", "w", "T",
        "w(T)^2 >= ||T*T+TT*||/4 + | ||Re T+Im T||^2 - ||Re T-Im T||^2 |/4")
def _w_lower_psk1_23(cx):
    c, d = cx.n_rpi() ** 2, cx.n_rmi() ** 2
    return _sqrt(cx.n_tt() / 4 + abs(c - d) / 4), {}


@_bound("w_lower_hks", "lower", "w", "T",
        "w(T) >= ||T||/2 + | ||Re T|| - ||T||/2 |/4 + | ||Im T|| - ||T||/2 |/4")
def _w_lower_hks(cx):
    nt, nr, ni = cx.n_t(), cx.n_re(), cx.n_im()
    return nt / 2 + abs(nr - nt / 2) / 4 + abs(ni - nt / 2) / 4, {}


@_bound("w_lower_laa21_21", "lower", "w", "T",
        "w(T) >= ||T||/2 + | ||Re T|| - ||Im T|| |/2")
def _w_lower_laa21_21(cx):
    return cx.n_t() / 2 + abs(cx.n_re() - cx.n_im()) / 2, {}


# -- numerical radius: two-sided --------------------------------------------

@_bound("w_twosided_29i", "twosided", "w", "T",
        "||T*T+TT*||/4 + | ||Re T||^2 - ||Im T||^2 |/2 <= w(T)^2 "
        "<= ||T*T+TT*||/4 + (||Re T||^2 + ||Im T||^2)/2",
        ("alpha", "beta"))
def _w_twosided_29i(cx):
    a, b = cx.n_re() ** 2, cx.n_im() ** 2
    q = cx.n_tt() / 4
    alpha, beta = abs(a - b) / 2, (a + b) / 2
    return (_sqrt(q + alpha), _sqrt(q + beta)), {"alpha": alpha, "beta": beta}


@_bound("w_twosided_29ii", "twosided", "w", "T",
        "||T*T+TT*||/4 + | ||Re T+Im T||^2 - ||Re T-Im T||^2 |/4 <= w(T)^2 "
        "<= ||T*T+TT*||/4 + (||Re T+Im T||^2 + ||Re T-Im T||^2)/4",
        ("gamma", "delta"))
def _w_twosided_29ii(cx):
    c, d = cx.n_rpi() ** 2, cx.n_rmi() ** 2
    q = cx.n_tt() / 4
    gamma, delta = abs(c - d) / 4, (c + d) / 4
    return (_sqrt(q + gamma), _sqrt(q + delta)), {"gamma": gamma, "delta": delta}


@_bound("w_sandwich_eqv", "twosided", "w", "T", "||T||/2 <= w(T) <= ||T||")
def _w_sandwich_eqv(cx):
    nt = cx.n_t()
    return (nt / 2, nt), {"norm": nt}


@_bound("we_sandwich_eqn1", "twosided", "we", "B,C",
        "||B*B + C*C||/8 <= w_e(B,C)^2 <= ||B*B + C*C||")
def _we_sandwich_eqn1(cx):
    s = spectral_norm(cx.s_pair()[0])
    return (_sqrt(s / 8), _sqrt(s)), {"gram_norm": s}


# -- numerical radius: upper bounds ------------------------------------------

@_bound("w_upper_cor313", "upper", "w", "T,r",
        "w(T)^2 <= ||int_0^1 (t T*T + (1-t) TT*)^r dt||^{1/r} <= ||((T*T)^r + (TT*)^r)/2||^{1/r}",
        ("w_squared_bound",))
def _w_upper_cor313(cx):
    r = cx.r
    t = cx.T
    a = t.conj().T @ t
    b = t @ t.conj().T
    integral = spectral_norm(segment_power_integral(a, b, r, cx.quad_tol(a, b, r)))
    f = ScalarFunctionSpec.power(r)
    ends = spectral_norm(psd_function(a, f) + psd_function(b, f)) / 2
    wsq = integral ** (1 / r)
    return math.sqrt(wsq), {"integral_norm": integral, "w_squared_bound": wsq,
                            "endpoint_w_squared_bound": ends ** (1 / r), "r": r}


def _aluthge_parts(cx, t):
    tt = cx.mat(("aluthge", t), lambda: aluthge_t(cx.T, t))
    p = cx.mat(("P_t", t), lambda: abs_power(cx.T, 2 * (1 - t)) + abs_power(cx.T, 2 * t))
    return tt, p


@_bound("w_upper_aluthge_t", "upper", "w", "T,t",
        "w(T)^2 <= ||P_t||^2/16 + w(T_t)^2/4 + w(T_t P_t + P_t T_t)/8 with T_t = |T|^t U |T|^{1-t}, "
        "P_t = |T|^{2(1-t)} + |T|^{2t}; relaxed form ||P_t||/4 + w(T_t)/2",
        ("P_t",))
def _w_upper_aluthge_t(cx):
    t = cx.t
    tt, p = _aluthge_parts(cx, t)
    np_ = spectral_norm(p)
    wa = cx.w(("aluthge", t), lambda: tt)
    wm = cx.w(("aluthge*P+P*aluthge", t), lambda: tt @ p + p @ tt)
    val = _sqrt(np_ ** 2 / 16 + wa ** 2 / 4 + wm / 8)
    return val, {"P_t": np_, "w_aluthge": wa, "w_mixed": wm, "relaxed": np_ / 4 + wa / 2, "t": t}


@_bound("w_upper_aluthge_half", "upper", "w", "T",
        "w(T)^2 <= ||T||^2/4 + w(T~)^2/4 + w(T~|T| + |T|T~)/4 with T~ = |T|^{1/2} U |T|^{1/2}; "
        "relaxed form ||T||/2 + w(T~)/2")
def _w_upper_aluthge_half(cx):
    tt = cx.mat(("aluthge", 0.5), lambda: aluthge_t(cx.T, 0.5))
    at = cx.mat("|T|", lambda: abs_power(cx.T, 1.0))
    nt = cx.n_t()
    wa = cx.w(("aluthge", 0.5), lambda: tt)
    wm = cx.w("aluthge|T|+|T|aluthge", lambda: tt @ at + at @ tt)
    val = _sqrt(nt ** 2 / 4 + wa ** 2 / 4 + wm / 4)
    return val, {"w_aluthge": wa, "w_mixed": wm, "relaxed": nt / 2 + wa / 2}


@_bound("w_upper_qt", "upper", "w", "T,t",
        "w(T)^2 <= ||Q_t||^2/16 + w(T)^2/4 + w(T Q_t + Q_t T)/8 with Q_t = |T*|^{2(1-t)} + |T|^{2t}, "
        "solved: w(T) <= (||Q_t||^2/12 + w(T Q_t + Q_t T)/6)^{1/2}",
        ("Q_t",))
def _w_upper_qt(cx):
    t = cx.t
    q = cx.mat(("Q_t", t), lambda: abs_adjoint_power(cx.T, 2 * (1 - t)) + abs_power(cx.T, 2 * t))
    nq = spectral_norm(q)
    wm = cx.w(("TQ+QT", t), lambda: cx.T @ q + q @ cx.T)
    val = _sqrt(nq ** 2 / 12 + wm / 6)
    wt = cx.w("T", lambda: cx.T)
    rhs = _sqrt(nq ** 2 / 16 + wt ** 2 / 4 + wm / 8)
    return val, {"Q_t": nq, "w_mixed": wm, "w_T": wt, "predicate_rhs": rhs,
                 "relaxed": nq / 4 + wt / 2, "norm_relaxed": nq / 2, "t": t}


# -- off-diagonal block ------------------------------------------------------

@_bound("offdiag_lower_31i", "lower", "w_offdiag", "X,Y",
        "w([[0,X],[Y,0]]) >= max{||X||, ||Y||}/4 + (||X+Y*|| + ||X-Y*||)/8 + | ||X+Y*|| - ||X-Y*|| |/4")
def _offdiag_lower_31i(cx):
    o = cx.off_norms()
    a, b = o["plus"] / 2, o["minus"] / 2
    val = max(o["nX"], o["nY"]) / 4 + (a + b) / 4 + abs(a - b) / 2
    return val, {"norm_X": o["nX"], "norm_Y": o["nY"], "half_plus": a, "half_minus": b}


def _off_sq(o, key_p, key_m):
    return (o[key_p] ** 2) / 4, (o[key_m] ** 2) / 4


@_bound("offdiag_lower_31ii", "lower", "w_offdiag", "X,Y",
        "w^2 >= max{||X*X+YY*||, ||XX*+Y*Y||}/8 + (||X+Y*||^2 + ||X-Y*||^2)/16 "
        "+ | ||X+Y*||^2 - ||X-Y*||^2 |/8", ("w_squared_bound",))
def _offdiag_lower_31ii(cx):
    o = cx.off_norms()
    a, b = _off_sq(o, "plus", "minus")
    wsq = o["gram"] / 8 + (a + b) / 4 + abs(a - b) / 2
    return _sqrt(wsq), {"w_squared_bound": wsq, "gram": o["gram"]}


@_bound("offdiag_lower_31iii", "lower", "w_offdiag", "X,Y",
        "w^2 >= max{||X*X+YY*||, ||XX*+Y*Y||}/8 + (||(1-i)X+(1+i)Y*||^2 + ||(1+i)X+(1-i)Y*||^2)/32 "
        "+ | ||(1-i)X+(1+i)Y*||^2 - ||(1+i)X+(1-i)Y*||^2 |/16", ("w_squared_bound",))
def _offdiag_lower_31iii(cx):
    o = cx.off_norms()
    a, b = _off_sq(o, "rot_p", "rot_m")
    wsq = o["gram"] / 8 + (a + b) / 8 + abs(a - b) / 4
    return _sqrt(wsq), {"w_squared_bound": wsq, "gram": o["gram"]}


@_bound("offdiag_upper_31iv", "upper", "w_offdiag", "X,Y",
        "w^2 <= max{||X*X+YY*||, ||XX*+Y*Y||}/4 + (||X+Y*||^2 + ||X-Y*||^2)/8", ("w_squared_bound",))
def _offdiag_upper_31iv(cx):
    o = cx.off_norms()
    a, b = _off_sq(o, "plus", "minus")
    wsq = o["gram"] / 4 + (a + b) / 2
    return _sqrt(wsq), {"w_squared_bound": wsq, "gram": o["gram"]}


@_bound("offdiag_upper_31v", "upper", "w_offdiag", "X,Y",
        "w^2 <= max{||X*X+YY*||, ||XX*+Y*Y||}/4 + (||(1-i)X+(1+i)Y*||^2 + ||(1+i)X+(1-i)Y*||^2)/16",
        ("w_squared_bound",))
def _offdiag_upper_31v(cx):
    o = cx.off_norms()
    a, b = _off_sq(o, "rot_p", "rot_m")
    wsq = o["gram"] / 4 + (a + b) / 4
    return _sqrt(wsq), {"w_squared_bound": wsq, "gram": o["gram"]}


@_bound("offdiag_upper_psk", "upper", "w_offdiag", "X,Y",
        "w^4 <= min{beta, gamma}, beta = ||S||^2/16 + w(YX)^2/4 + w(YXS + SYX)/8, S = |X|^2 + |Y*|^2, "
        "gamma = ||P||^2/16 + w(XY)^2/4 + w(XYP + PXY)/8, P = |X*|^2 + |Y|^2",
        ("S", "P", "beta", "gamma"))
def _offdiag_upper_psk(cx):
    x, y = cx.X, cx.Y
    s = x.conj().T @ x + y @ y.conj().T
    p = x @ x.conj().T + y.conj().T @ y
    yx, xy = y @ x, x @ y
    ns, np_ = spectral_norm(s), spectral_norm(p)
    w_yx = cx.w("YX", lambda: yx)
    w_xy = cx.w("XY", lambda: xy)
    w_ys = cx.w("YXS+SYX", lambda: yx @ s + s @ yx)
    w_xp = cx.w("XYP+PXY", lambda: xy @ p + p @ xy)
    beta = ns ** 2 / 16 + w_yx ** 2 / 4 + w_ys / 8
    gamma = np_ ** 2 / 16 + w_xy ** 2 / 4 + w_xp / 8
    wsq = _sqrt(min(beta, gamma))
    return _sqrt(wsq), {"S": ns, "P": np_, "beta": beta, "gamma": gamma, "w_squared_bound": wsq}


@_bound("offdiag_lower_pko27", "lower", "w_offdiag", "X,Y",
        "w >= max{||X||, ||Y||}/2 + | ||X+Y*|| - ||X-Y*|| |/4")
def _offdiag_lower_pko27(cx):
    o = cx.off_norms()
    return max(o["nX"], o["nY"]) / 2 + abs(o["plus"] - o["minus"]) / 4, {}


@_bound("offdiag_lower_pko212", "lower", "w_offdiag", "X,Y",
        "w^2 >= max{||X*X+YY*||, ||XX*+Y*Y||}/4 + | ||X+Y*||^2 - ||X-Y*||^2 |/8", ("w_squared_bound",))
def _offdiag_lower_pko212(cx):
    o = cx.off_norms()
    a, b = _off_sq(o, "plus", "minus")
    wsq = o["gram"] / 4 + abs(a - b) / 2
    return _sqrt(wsq), {"w_squared_bound": wsq}


# -- evaluation --------------------------------------------------------------

def _run(info: BoundInfo, cx: Context) -> BoundResult:
    missing = [n for n in info.inputs if n not in ("t", "r") and n not in cx.mats]
    if missing:
        raise WrongInputShape(f"{info.id} needs inputs {', '.join(info.inputs)}; missing {', '.join(missing)}")
    cx.start()
    out, breakdown = _FORMULAS[info.id](cx)
    breakdown = dict(breakdown)
    breakdown["w_uncertainty"] = cx.uncertainty()
    upper = None
    if info.kind == "twosided":
        value, upper = float(out[0]), float(out[1])
    else:
        value = float(out)
    return BoundResult(info.id, info.kind, info.target, value,
                       {k: float(v) for k, v in breakdown.items()}, cx.digest(info.inputs), upper)


def evaluate(id: str, *, T=None, B=None, C=None, X=None, Y=None, t=None, r=None,
             context: Context | None = None) -> BoundResult:
    """Evaluate one registered bound.

    Pass the matrices the id's signature names (``T``; ``B, C``; or ``X, Y``)
    plus ``t`` / ``r`` where relevant, or a prepared :class:`Context`.
    """
    info = REGISTRY[parse_bound_id(id)]
    if context is None:
        context = Context(T=T, B=B, C=C, X=X, Y=Y, t=t, r=r)
    return _run(info, context)


def applicable_ids(context: Context) -> list[str]:
    return [i for i, info in REGISTRY.items() if context.has(info.inputs)]


def evaluate_many(ids, context: Context, skip_not_applicable: bool = True) -> list[BoundResult]:
    """Evaluate several ids against one shared context (derived quantities and
    radius enclosures are computed once)."""
    out = []
    for id in ids:
        try:
            out.append(evaluate(id, context=context))
        except NotApplicable:
            if not skip_not_applicable:
                raise
    return out


def reference(target: str, context: Context, tol_rel: float = 1e-8):
    """Certified enclosure of the radius a bound targets."""
    needs = {"w": ("T",), "w_offdiag": ("X", "Y"), "we": ("B", "C")}
    if target not in needs:
        raise WrongInputShape(f"unknown target {target!r}")
    if not context.has(needs[target]):
        raise WrongInputShape(f"target {target} needs inputs {', '.join(needs[target])}")

    def build():
        if target == "w":
            m = context.T
            return numerical_radius(m, tol=tol_rel * max(1.0, spectral_norm(m)))
        if target == "w_offdiag":
            m = offdiag_block(context.X, context.Y)
            return numerical_radius(m, tol=tol_rel * max(1.0, spectral_norm(m)))
        if target == "we":
            b, c = context.B, context.C
            return euclidean_radius(b, c, tol=tol_rel * max(1.0, spectral_norm(b) + spectral_norm(c)))
    return context.memo(("ref", target, tol_rel), build)


__all__ = ["BoundInfo", "BoundResult", "Context", "REGISTRY", "applicable_ids", "evaluate",
           "evaluate_many", "list_bounds", "parse_bound_id", "reference"]
