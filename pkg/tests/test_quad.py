"""Integration layer: singular-aware 1D quadrature, FTC checks, dependence
triangle, Green-identity verifier."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from speculus.expr import parse
from speculus.piecewise import from_expression
from speculus.quad import (
    DependenceTriangle,
    QuadratureError,
    TypeIIIRegion,
    antiderivative_check,
    green_check,
    integrate_1d,
    integrate_triangle,
    singular_points_1d,
)

X = ("x",)
XY = ("x", "y")
XT = ("x", "t")


class TestIntegrate1D:
    def test_sgn_over_minus1_2(self):
        f = from_expression(parse("sgn(x)", X), X)
        assert integrate_1d(f, -1.0, 2.0) == pytest.approx(1.0, abs=1e-10)

    def test_abs_exact(self):
        f = from_expression(parse("abs(x)", X), X)
        assert integrate_1d(f, -2.0, 3.0) == pytest.approx(6.5, abs=1e-10)

    def test_orientation(self):
        f = from_expression(parse("abs(x)", X), X)
        assert integrate_1d(f, 3.0, -2.0) == pytest.approx(-6.5, abs=1e-10)

    def test_plain_callable(self):
        assert integrate_1d(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-10)

    def test_singular_points(self):
        f = from_expression(parse("abs(x - 1) + abs(2*x + 3)", X), X)
        assert singular_points_1d(f, -5.0, 5.0) == pytest.approx([-1.5, 1.0])

    @given(
        st.floats(-4, 4), st.floats(-4, 4), st.floats(-4, 4)
    )
    @settings(max_examples=40, deadline=None)
    def test_interval_additivity(self, a, b, c):
        f = from_expression(parse("abs(x) - sgn(x - 1)", X), X)
        whole = integrate_1d(f, a, c)
        split = integrate_1d(f, a, b) + integrate_1d(f, b, c)
        assert whole == pytest.approx(split, abs=1e-9)


class TestAntiderivativeCheck:
    def test_sgn_abs_pair(self):
        f = from_expression(parse("sgn(x)", X), X)
        F = from_expression(parse("abs(x)", X), X)
        assert antiderivative_check(f, F, -1.0, 2.0) <= 1e-10

    def test_abs_q_pair(self):
        f = from_expression(parse("abs(x)", X), X)
        F = from_expression(parse("(1/2)*x*abs(x)", X), X)
        assert antiderivative_check(f, F, -2.0, 1.5) <= 1e-10

    def test_wrong_antiderivative_detected(self):
        f = from_expression(parse("sgn(x)", X), X)
        F = from_expression(parse("abs(x) + x", X), X)
        assert antiderivative_check(f, F, -1.0, 2.0) > 0.5


class TestDependenceTriangle:
    def test_geometry(self):
        tri = DependenceTriangle((2.0, 1.0))
        assert tri.base == (1.0, 3.0)
        assert tri.inner_interval(0.5) == (1.5, 2.5)

    def test_rejects_nonpositive_height(self):
        with pytest.raises(QuadratureError):
            DependenceTriangle((0.0, 0.0))

    def test_constant_force_area(self):
        f = from_expression(parse("1 + 0*x + 0*t", XT), XT)
        for x0, t0 in ((0.0, 1.0), (2.0, 0.5), (-1.0, 2.0)):
            assert integrate_triangle(f, x0, t0) == pytest.approx(
                t0 * t0, abs=1e-10
            )

    def test_polynomial_oracle(self):
        # apex (0,1): int_0^1 int_{s-1}^{1-s} (x^2 + t) dx dt = 1/6 + 1/3
        f = from_expression(parse("x^2 + t", XT), XT)
        assert integrate_triangle(f, 0.0, 1.0) == pytest.approx(0.5, abs=1e-10)

    def test_step_force_half_area(self):
        # force supported on x > 0 cuts the apex-(0,1) triangle in half
        f = from_expression(parse("(1 + sgn(x))/2 + 0*t", XT), XT)
        assert integrate_triangle(f, 0.0, 1.0) == pytest.approx(0.5, abs=1e-10)

    def test_characteristic_step(self):
        # jump along x - t = 0 inside the apex-(1,1) triangle:
        # region x > t has area 3/2 of the total 1
        f = from_expression(parse("(1 + sgn(x - t))/2", XT), XT)
        # triangle apex (1,1): base [0,2]; the line t = x crosses it.
        # area where x > t: integrate 1 over {0 < t < 1, t < x < 2 - t}
        # intersected with x > t -> int_0^1 (2 - 2t) dt = 1... the region
        # x > t within the triangle is bounded by x from t to 2-t: width
        # 2 - 2t, total 1.
        assert integrate_triangle(f, 1.0, 1.0) == pytest.approx(1.0, abs=1e-10)


def _pw(text, variables=XY):
    return from_expression(parse(text, variables), variables)


class TestGreenCheck:
    def test_q_fixture_exact_value(self):
        # P = q(x), Q = 0 on [-1,1]^2: both sides equal 2
        P = _pw("(1/2)*x*abs(x) + 0*y")
        Q = _pw("0*x + 0*y")
        R = TypeIIIRegion.from_rectangle(-1.0, 1.0, -1.0, 1.0)
        lhs, rhs, gap, class_ok = green_check(P, Q, R)
        assert lhs == pytest.approx(2.0, abs=1e-8)
        assert rhs == pytest.approx(2.0, abs=1e-8)
        assert gap <= 1e-8
        assert class_ok

    def test_smooth_fixture(self):
        P = _pw("x^2*y")
        Q = _pw("x*sin(y)")
        R = TypeIIIRegion.from_rectangle(0.0, 2.0, -1.0, 1.0)
        lhs, rhs, gap, class_ok = green_check(P, Q, R)
        assert gap <= 1e-8
        assert class_ok
        # oracle: iint (2xy - x*cos(y)) over [0,2]x[-1,1] = -4*sin(1)
        assert lhs == pytest.approx(-4.0 * math.sin(1.0), abs=1e-8)

    def test_symmetric_kinks_cancel(self):
        P = _pw("abs(x) + 0*y")
        Q = _pw("abs(y) + 0*x")
        R = TypeIIIRegion.from_rectangle(-1.0, 1.0, -1.0, 1.0)
        lhs, rhs, gap, class_ok = green_check(P, Q, R)
        assert gap <= 1e-8
        assert lhs == pytest.approx(0.0, abs=1e-8)
        assert class_ok

    def test_q_in_second_slot(self):
        # P = 0, Q = q(y) on [-2,1]x[0,3]: both sides equal -13.5
        P = _pw("0*x + 0*y")
        Q = _pw("(1/2)*y*abs(y) + 0*x")
        R = TypeIIIRegion.from_rectangle(-2.0, 1.0, 0.0, 3.0)
        lhs, rhs, gap, class_ok = green_check(P, Q, R)
        assert lhs == pytest.approx(-13.5, abs=1e-8)
        assert gap <= 1e-8
        assert class_ok

    def test_diagonal_singular_line(self):
        P = _pw("abs(x - y)")
        Q = _pw("0*x + 0*y")
        R = TypeIIIRegion.from_rectangle(0.0, 1.0, 0.0, 1.0)
        lhs, rhs, gap, class_ok = green_check(P, Q, R)
        assert gap <= 1e-8
        assert lhs == pytest.approx(0.0, abs=1e-8)
        assert class_ok

    def test_parabolic_type_iii_region(self):
        # region between y = x^2 and y = 1 over [-1,1]
        P = _pw("x*y")
        Q = _pw("0*x + 0*y")
        R = TypeIIIRegion(
            -1.0, 1.0,
            lambda x: x * x, lambda x: 1.0,
            0.0, 1.0,
            lambda y: -math.sqrt(y), lambda y: math.sqrt(y),
        )
        assert R.spot_check()
        lhs, rhs, gap, class_ok = green_check(P, Q, R)
        assert gap <= 1e-8
        # oracle: iint y dA = int_{-1}^1 (1 - x^4)/2 dx = 4/5
        assert lhs == pytest.approx(0.8, abs=1e-8)
        assert class_ok

    def test_region_spot_check_rejects_mismatch(self):
        R = TypeIIIRegion(
            -1.0, 1.0,
            lambda x: 0.0, lambda x: 1.0,
            0.0, 1.0,
            lambda y: 0.0, lambda y: 0.5,  # wrong horizontal extent
        )
        assert not R.spot_check()
