import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opradius import bounds
from opradius.bounds import REGISTRY, Context, evaluate, evaluate_many, list_bounds, parse_bound_id, reference
from opradius.errors import NotApplicable, ParameterOutOfRange, WrongInputShape

from conftest import NILP, ginibre

SLOP = 1e-10


class TestRegistry:
    def test_membership_and_size(self):
        ids = [b.id for b in list_bounds()]
        assert "w_lower_th214" in ids
        assert len(ids) == len(set(ids)) == 33

    def test_roundtrip(self):
        for info in list_bounds():
            assert parse_bound_id(f"  {info.id} ") == info.id

    def test_unknown(self):
        with pytest.raises(WrongInputShape):
            parse_bound_id("w_lower_nope")

    def test_metadata(self):
        for info in list_bounds():
            assert info.kind in ("lower", "upper", "twosided")
            assert info.target in ("w", "we", "w_offdiag")
            assert info.anchor
            assert info.target == bounds.TARGETS[info.inputs[0]]


class TestExamples:
    def test_four_term_lower_nilpotent(self):
        r = evaluate("w_lower_th214", T=NILP)
        assert abs(r.value - 0.5) <= 1e-12
        assert {"q1", "q2", "r1", "r2"} <= set(r.breakdown)

    def test_cartesian_lower_nilpotent(self):
        r = evaluate("w_lower_cor25", T=NILP)
        assert abs(r.value - 0.5) <= 1e-12
        assert {"alpha", "beta", "gamma", "delta"} <= set(r.breakdown)

    def test_offdiag_scalar(self):
        assert abs(evaluate("offdiag_lower_31i", X=[[1]], Y=[[1]]).value - 1) <= 1e-12

    def test_integral_upper_nilpotent(self):
        # the squared-radius form gives (1/3)^(1/2); the value is its square root
        r = evaluate("w_upper_cor313", T=NILP, r=2)
        assert abs(r.breakdown["w_squared_bound"] - math.sqrt(1 / 3)) <= 1e-10
        assert abs(r.value - (1 / 3) ** 0.25) <= 1e-10

    def test_aluthge_half_nilpotent(self):
        assert abs(evaluate("w_upper_aluthge_half", T=NILP).value - 0.5) <= 1e-10

    def test_pair_lower_identity(self):
        r = evaluate("we_lower_th22", B=np.eye(2), C=np.eye(2))
        assert abs(r.value - 1) <= 1e-10
        assert r.value <= math.sqrt(2)

    def test_twosided_has_upper(self):
        r = evaluate("w_sandwich_eqv", T=NILP)
        assert r.value == pytest.approx(0.5) and r.upper == pytest.approx(1.0)
        assert r.to_dict()["upper"] == r.upper


class TestErrors:
    def test_missing_inputs(self):
        with pytest.raises(WrongInputShape):
            evaluate("w_lower_th214", B=NILP, C=NILP)

    def test_reference_needs_inputs(self):
        with pytest.raises(WrongInputShape):
            reference("we", Context(T=NILP))
        with pytest.raises(WrongInputShape):
            reference("nope", Context(T=NILP))

    def test_unpaired(self):
        with pytest.raises(WrongInputShape):
            Context(B=np.eye(2))

    def test_non_square(self):
        with pytest.raises(WrongInputShape):
            evaluate("w_lower_th214", T=np.zeros((2, 3)))

    def test_nan(self):
        with pytest.raises(WrongInputShape):
            evaluate("w_lower_th214", T=[[np.nan]])

    @pytest.mark.parametrize("kw", [{"t": 1.5}, {"t": -0.1}, {"r": 0.5}, {"r": 2.1}])
    def test_parameter_range(self, kw):
        with pytest.raises(ParameterOutOfRange):
            evaluate("w_upper_aluthge_t" if "t" in kw else "w_upper_cor313", T=NILP, **kw)

    def test_normal_only(self):
        with pytest.raises(NotApplicable):
            evaluate("we_lower_normal", B=NILP, C=np.eye(2))
        cx = Context(B=NILP, C=np.eye(2))
        assert all(r.id != "we_lower_normal" for r in evaluate_many(["we_lower_normal"], cx))
        with pytest.raises(NotApplicable):
            evaluate_many(["we_lower_normal"], cx, skip_not_applicable=False)


class TestDigestAndDefaults:
    def test_digest_stable(self, rng):
        t = ginibre(rng, 3)
        a = evaluate("w_lower_th214", T=t)
        b = evaluate("w_lower_th214", T=t.copy())
        assert a.inputs_digest == b.inputs_digest
        assert a.inputs_digest != evaluate("w_lower_th214", T=2 * t).inputs_digest

    def test_default_parameters(self, rng):
        t = ginibre(rng, 3)
        assert evaluate("w_upper_aluthge_t", T=t).value == evaluate("w_upper_aluthge_t", T=t, t=0.5).value
        assert evaluate("w_upper_cor313", T=t).value == evaluate("w_upper_cor313", T=t, r=1.5).value

    def test_breakdown_has_uncertainty(self, rng):
        cx = Context(T=ginibre(rng, 3), B=ginibre(rng, 3), C=ginibre(rng, 3),
                     X=ginibre(rng, 3), Y=ginibre(rng, 3), t=0.3, r=1.2)
        for res in evaluate_many(bounds.applicable_ids(cx), cx):
            assert "w_uncertainty" in res.breakdown
            assert set(REGISTRY[res.id].intermediates) <= set(res.breakdown)


def _check_sound(cx, slop=SLOP):
    present = {"w": "T", "we": "B", "w_offdiag": "X"}
    refs = {k: reference(k, cx) for k, m in present.items() if cx.has((m,))}
    for res in evaluate_many(bounds.applicable_ids(cx), cx):
        ref = refs[res.target]
        s = max(1.0, ref.upper)
        gate = slop * s + res.breakdown["w_uncertainty"] + (ref.upper - ref.lower)
        if res.kind in ("lower", "twosided"):
            assert res.value <= ref.upper + gate, res.id
        if res.kind == "upper":
            assert res.value >= ref.lower - gate, res.id
        if res.kind == "twosided":
            assert res.upper >= ref.lower - gate, res.id


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 4), t=st.floats(0, 1), r=st.floats(1, 2))
def test_soundness_random(seed, n, t, r):
    g = np.random.default_rng(seed)
    _check_sound(Context(T=ginibre(g, n), B=ginibre(g, n), C=ginibre(g, n),
                         X=ginibre(g, n), Y=ginibre(g, n), t=t, r=r))


def test_soundness_structured():
    q = np.linalg.qr(ginibre(np.random.default_rng(1), 3))[0]
    for m in (NILP, np.eye(2), np.diag([2.0, -3.0]), q, np.eye(3, k=1)):
        _check_sound(Context(T=m, B=m, C=m.conj().T, X=m, Y=m))


def test_normal_pair_bound():
    g = np.random.default_rng(2)
    q = np.linalg.qr(ginibre(g, 3))[0]
    b = q @ np.diag(ginibre(g, 3, 1)[:, 0]) @ q.conj().T
    c = q @ np.diag(ginibre(g, 3, 1)[:, 0]) @ q.conj().T
    res = evaluate("we_lower_normal", B=b, C=c)
    assert {"s1", "s2", "p1", "p2"} <= set(res.breakdown)
    _check_sound(Context(B=b, C=c))
