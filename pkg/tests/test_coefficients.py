"""Coefficient domains: number fields, free constants, root search."""

from fractions import Fraction as F

import pytest

from puiseux.coefficients import (
    CoefficientError,
    NumberField,
    ParamPoly,
    UnsupportedSymbolic,
    poly_roots,
    sqrt_field,
)
from puiseux.polyutils import (
    irreducible_factors,
    isolate_real_roots,
    rational_roots,
    split_quartic,
)


class TestPolyUtils:
    def test_rational_roots_with_multiplicity(self):
        # (x - 1/2)^2 (x + 3) = x^3 + 2x^2 - 11/4 x + 3/4
        poly = [F(3, 4), F(-11, 4), F(2), F(1)]
        roots, rem = rational_roots(poly)
        assert dict(roots) == {F(1, 2): 2, F(-3): 1}
        assert rem == [F(1)]

    def test_sturm_isolation(self):
        # x^2 - 2: two real roots, isolated and disjoint
        intervals = isolate_real_roots([F(-2), F(0), F(1)])
        assert len(intervals) == 2
        (a1, b1), (a2, b2) = intervals
        assert b1 <= a2
        assert a1 < -1 < b1 or a1 < F(-3, 2) < b1

    def test_quartic_split(self):
        # (x^2+1)(x^2-2) has no rational roots but splits rationally
        quartic = [F(-2), F(0), F(-1), F(0), F(1)]
        pair = split_quartic(quartic)
        assert pair is not None
        q1, q2 = pair
        assert sorted([tuple(q1), tuple(q2)]) == sorted(
            [(F(1), F(0), F(1)), (F(-2), F(0), F(1))]
        )

    def test_irreducible_factors(self):
        # (x-1)^2 (x^2+1)
        poly = [F(1), F(-2), F(2), F(-2), F(1)]
        factors = irreducible_factors(poly)
        as_set = {(tuple(f), m) for f, m in factors}
        assert ((F(-1), F(1)), 2) in as_set
        assert ((F(1), F(0), F(1)), 1) in as_set


class TestNumberField:
    def test_sqrt2_arithmetic(self):
        field = sqrt_field(2)
        r = field.generator()
        assert r * r == 2
        assert (r + 1) * (r - 1) == 1
        assert (1 / r) * r == 1
        assert r ** -2 == F(1, 2)

    def test_inverse_via_minpoly(self):
        field = NumberField([F(-2), F(0), F(1)], (F(1), F(2)))
        e = field.element([1, 1])  # 1 + sqrt2
        assert e * e.inverse() == 1

    def test_mixed_fields_rejected(self):
        a = sqrt_field(2).generator()
        b = sqrt_field(3).generator()
        with pytest.raises(CoefficientError):
            _ = a + b

    def test_approx_selects_embedding(self):
        pos = sqrt_field(2)
        assert abs(pos.generator().approx() - 2**0.5) < 1e-9

    def test_complex_region(self):
        field = sqrt_field(-1)
        i = field.generator()
        assert i * i == -1
        assert isinstance(field.approx(), complex)


class TestParamPoly:
    def test_ring_ops(self):
        C = ParamPoly.parameter()
        p = (C + 1) * (C - 1)
        assert p == C * C - 1
        assert p.substitute(F(3)) == 8

    def test_unit_division_only(self):
        C = ParamPoly.parameter()
        assert (2 * C) / 2 == C
        with pytest.raises(UnsupportedSymbolic):
            _ = 1 / C

    def test_zero_detection(self):
        C = ParamPoly.parameter()
        assert not (C - C)
        assert C != 0


class TestPolyRoots:
    def test_rational_mode_reports_leftover(self):
        res = poly_roots([F(-2), F(0), F(1)])  # t^2 - 2
        assert res.roots == []
        assert res.unresolved is not None

    def test_algebraic_mode_adjoins(self):
        res = poly_roots([F(-2), F(0), F(1)], mode="algebraic")
        assert res.complete
        assert len(res.roots) == 2
        vals = sorted(r.approx() for r, _m in res.roots)
        assert abs(vals[0] + 2**0.5) < 1e-9
        assert abs(vals[1] - 2**0.5) < 1e-9

    def test_mixed_rational_and_adjoined(self):
        # (t - 1)(t^2 - 3)
        poly = [F(3), F(-3), F(-1), F(1)]
        res = poly_roots(poly, mode="algebraic")
        assert res.complete
        assert sum(m for _r, m in res.roots) == 3

    def test_roots_over_quadratic_field(self):
        field = sqrt_field(2)
        r = field.generator()
        # (t - sqrt2)(t - 1): coefficients in the field
        poly = [r, -(r + 1), field.lift(1)]
        res = poly_roots(poly)
        got = {str(root) for root, _m in res.roots}
        assert res.complete
        assert len(got) == 2

    def test_sqrt_inside_quadratic_field(self):
        # t^2 - 2 over Q(sqrt2) splits: roots +-sqrt2 in the field
        field = sqrt_field(2)
        poly = [field.lift(-2), field.lift(0), field.lift(1)]
        res = poly_roots(poly)
        assert res.complete
        assert {root for root, _m in res.roots} == {
            field.generator(),
            -field.generator(),
        }

    def test_param_coefficients_rejected(self):
        C = ParamPoly.parameter()
        with pytest.raises(UnsupportedSymbolic):
            poly_roots([C, F(1)])

    def test_multiplicity(self):
        # (t + 2)^3
        res = poly_roots([F(8), F(12), F(6), F(1)])
        assert res.roots == [(F(-2), 3)]
