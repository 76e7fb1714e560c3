"""Specular calculus: A-combination, semi/specular derivatives, fields,
phototangents, S2 membership."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from speculus.expr import parse
from speculus.piecewise import classify_continuity, from_expression, is_proper
from speculus.specular import (
    a_combine,
    a_combine_f1,
    ftc_condition_check,
    odd_reflection_check,
    partial_field,
    phototangent,
    s2_membership,
    semi_derivatives,
    specular_field,
    specular_partial,
    specularly_differentiable_1d,
)

X = ("x",)
XY = ("x", "y")

finite_slopes = st.floats(-50.0, 50.0, allow_nan=False)


class TestACombine:
    def test_known_values(self):
        assert a_combine(1.0, 0.0) == pytest.approx(math.sqrt(2) - 1, abs=1e-12)
        assert a_combine(2.0, -1.0) == pytest.approx(math.sqrt(10) - 3, abs=1e-12)
        assert a_combine(2.0, 0.0) == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-12)
        assert a_combine(3.0, -3.0) == 0.0

    def test_classical_case(self):
        rng = np.random.default_rng(7)
        for m in rng.uniform(-100, 100, 1000):
            assert a_combine(m, m) == pytest.approx(m, abs=1e-12 * (1 + abs(m)))

    def test_f1_f2_agreement_bulk(self):
        rng = np.random.default_rng(11)
        pairs = rng.uniform(-30, 30, size=(10000, 2))
        for a, b in pairs:
            if abs(a + b) <= 1e-6:
                continue
            f1 = a_combine_f1(a, b)
            f2 = a_combine(a, b)
            assert abs(f1 - f2) <= 1e-12 * (1 + abs(f1))

    @given(finite_slopes, finite_slopes)
    @settings(max_examples=200, deadline=None)
    def test_symmetry_bitwise(self, a, b):
        assert a_combine(a, b) == a_combine(b, a)

    @given(finite_slopes, finite_slopes)
    @settings(max_examples=200, deadline=None)
    def test_monotone_bracketing(self, a, b):
        v = a_combine(a, b)
        assert min(a, b) - 1e-12 <= v <= max(a, b) + 1e-12

    @given(finite_slopes)
    @settings(max_examples=100, deadline=None)
    def test_antisymmetric_pair_zero(self, a):
        assert a_combine(a, -a) == 0.0


class TestSemiAndPartial:
    def test_table_point(self, table_fn):
        pair = semi_derivatives(table_fn, (3.0, 6.0), 0)
        assert pair.right == pytest.approx(3.0, abs=1e-12)
        assert pair.left == pytest.approx(-3.0, abs=1e-12)
        assert specular_partial(table_fn, (3.0, 6.0), 0) == 0.0

    def test_smooth_reduces_to_classical(self):
        u = from_expression(parse("x^2*y + sin(x)", XY), XY)
        rng = np.random.default_rng(3)
        for x, y in rng.uniform(-3, 3, size=(50, 2)):
            assert specular_partial(u, (x, y), 0) == pytest.approx(
                2 * x * y + math.cos(x), rel=1e-12, abs=1e-12
            )

    def test_abs_at_zero(self):
        u = from_expression(parse("abs(x)", X), X)
        assert specular_partial(u, (0.0,), 0) == 0.0


class TestSpecularField:
    def test_nine_case_table(self, table_fn):
        f = specular_field(table_fn, 0)
        cases = [
            ((5.0, 1.0), 3.0),                       # both positive
            ((5.0, 11.0), -1.0),                     # 2x-y<0, x-3>0
            ((1.0, -1.0), 1.0),                      # 2x-y>0, x-3<0
            ((0.0, 1.0), -3.0),                      # both negative
            ((4.0, 8.0), a_combine(3.0, -1.0)),      # on 2x-y=0, x>3
            ((1.0, 2.0), a_combine(1.0, -3.0)),      # on 2x-y=0, x<3
            ((3.0, 2.0), a_combine(3.0, 1.0)),       # on x=3, 2x-y>0
            ((3.0, 10.0), a_combine(-1.0, -3.0)),    # on x=3, 2x-y<0
            ((3.0, 6.0), 0.0),                       # crossing: A(3,-3)
        ]
        for p, want in cases:
            assert f.evaluate(p) == pytest.approx(want, abs=1e-12), p

    def test_field_classification(self, table_fn):
        f = specular_field(table_fn, 0)
        rep = classify_continuity(f)
        assert rep.verdict == "piecewise-continuous"
        assert sorted(rep.jump_forms) == [0, 1]

    def test_smooth_field_single_branch(self):
        u = from_expression(parse("x^3 - x*y", XY), XY)
        f = specular_field(u, 0)
        assert f.evaluate((2.0, 1.0)) == pytest.approx(12 - 1)

    def test_q_second_field_is_proper_sgn(self):
        q = from_expression(parse("(1/2)*x*abs(x)", X), X)
        d1 = partial_field(q, 0)
        d2 = specular_field(d1, 0)
        assert d1.evaluate((0.5,)) == pytest.approx(0.5)
        assert d1.evaluate((0.0,)) == 0.0          # A(1,-1) of |x| slopes
        assert d2.evaluate((2.0,)) == 1.0
        assert d2.evaluate((-2.0,)) == -1.0
        assert d2.evaluate((0.0,)) == 0.0
        ok, _ = is_proper(d2)
        assert ok

    def test_elu_chain(self):
        elu = from_expression(parse("elu(x)", X), X)
        d1 = partial_field(elu, 0)
        assert classify_continuity(d1).verdict == "continuous"
        assert d1.evaluate((0.0,)) == pytest.approx(1.0)  # A(1,1)
        d2 = specular_field(d1, 0)
        assert d2.evaluate((1.0,)) == 0.0
        assert d2.evaluate((-1.0,)) == pytest.approx(math.exp(-1.0))
        assert d2.evaluate((0.0,)) == pytest.approx(math.sqrt(2) - 1, abs=1e-12)


class TestPhototangent:
    def test_three_piece_shape(self):
        u = from_expression(parse("abs(x)", X), X)
        pht = phototangent(u, 0.0)
        assert pht(1.5) == pytest.approx(1.5)
        assert pht(-2.0) == pytest.approx(2.0)
        assert pht(0.0) == pytest.approx(0.0)
        assert pht.continuous

    def test_linearity(self):
        u = from_expression(parse("abs(x)", X), X)
        v = from_expression(parse("(1/2)*x*abs(x)", X), X)
        from speculus.piecewise import pw_add, pw_scale

        w = pw_add(pw_scale(2.0, u), pw_scale(-3.0, v))
        pw, pu, pv = phototangent(w, 0.0), phototangent(u, 0.0), phototangent(v, 0.0)
        for y in (-1.0, -0.25, 0.0, 0.4, 2.0):
            assert pw(y) == pytest.approx(2 * pu(y) - 3 * pv(y), abs=1e-12)

    def test_differentiability_flags(self):
        assert specularly_differentiable_1d(
            from_expression(parse("abs(x)", X), X)
        )
        heav = from_expression(parse("(1 + sgn(x))/2", X), X)
        assert not specularly_differentiable_1d(heav)


class TestFTCAndReflection:
    def test_sgn_satisfies_ftc_condition(self):
        f = from_expression(parse("sgn(x)", X), X)
        assert ftc_condition_check(f)

    def test_heaviside_fails_ftc_condition(self):
        f = from_expression(parse("(1 + sgn(x))/2", X), X)
        # direct policy stores 1/2 at 0, but A(0,1) = sqrt(2)-1
        assert not ftc_condition_check(f)

    def test_odd_reflection(self):
        u = from_expression(parse("abs(x) + x^2", X), X)
        for p in (0.5, 1.0, 2.0):
            assert odd_reflection_check(u, (p,), 0) <= 1e-9


class TestS2Membership:
    def test_q_plus_q_is_s2(self):
        u = from_expression(
            parse("(1/2)*x*abs(x) + (1/2)*y*abs(y)", XY), XY
        )
        rep = s2_membership(u)
        assert rep.verdict == "S2"
        assert rep.symmetry_residual <= 1e-9

    def test_smooth_is_s2(self):
        u = from_expression(parse("x^2*y - y^3", XY), XY)
        rep = s2_membership(u)
        assert rep.verdict == "S2"
        assert rep.symmetry_residual <= 1e-12

    def test_regularity_chain_heaviside_not_s1(self):
        # 2D embedding of the Heaviside jump: not even continuous
        u = from_expression(parse("(1 + sgn(x))/2 + 0*y", XY), XY)
        rep = s2_membership(u)
        assert rep.verdict in ("S0-only", "fails")

    def test_counterexample_fails_with_lines_named(self, printed_counterexample_u):
        rep = s2_membership(printed_counterexample_u)
        assert rep.verdict != "S2"
        named = {(f.coeffs, f.offset) for f in rep.failure_forms}
        assert ((1.0, -1.0), 0.0) in named or ((1.0, -1.0), -0.0) in named
        assert ((1.0, 1.0), 0.0) in named or ((1.0, 1.0), -0.0) in named
