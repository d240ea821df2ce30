from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from jordanian.errors import ContextMismatch, GrammarError, NotDivisible, PolePersists, ZeroDenominator
from jordanian.exact import (
    MPoly,
    RatFunc,
    limit_subst,
    parse,
    poly_divide_exact,
    ratfunc_make,
    substitute,
)

from strategies import CTX, mpolys, nonzero_mpolys, nonzero_rationals, ratfuncs

Z = ("z1", "z2", "h")


def P(text, ctx=Z):
    return parse(text, ctx).num


def R(text, ctx=Z):
    return parse(text, ctx)


class TestRatfuncMake:
    def test_difference_of_squares(self):
        f = ratfunc_make(P("z1^2 - z2^2"), P("z1 - z2"))
        assert f.num == P("z1 + z2") and f.den == P("1")

    def test_scalar_fold(self):
        f = ratfunc_make(P("2*h"), MPoly.const(Z, 4))
        assert f.num == P("1/2*h") and f.den == MPoly.const(Z, 1)
        assert str(f) == "1/2*h"

    def test_coprime_untouched(self):
        ctx = ("p",)
        f = ratfunc_make(P("p^2 - 1", ctx), P("p^2 + 1", ctx))
        assert (f.num, f.den) == (P("p^2 - 1", ctx), P("p^2 + 1", ctx))

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            ratfunc_make(P("z1"), MPoly(Z))

    def test_zero_is_zero_over_one(self):
        f = ratfunc_make(MPoly(Z), P("z1 - z2"))
        assert f.is_zero() and f.den == MPoly.const(Z, 1)

    def test_denominator_monic_under_grlex(self):
        f = ratfunc_make(P("1"), P("-3*z2 + 2*z1^2"))
        assert str(f) == "(1/2)/(z1^2 - 3/2*z2)"

    def test_contexts_do_not_mix(self):
        with pytest.raises(ContextMismatch):
            RatFunc(("x",), "x") + RatFunc(("y",), "y")


class TestDivideExact:
    def test_examples(self):
        assert poly_divide_exact(P("z1^2 - z2^2"), P("z1 - z2")) == P("z1 + z2")
        f = P("(z1 + h)*(z2 - h) - z2*z1")
        assert poly_divide_exact(f, P("z1 - z2 + h")) == P("-h")
        assert poly_divide_exact(MPoly(Z), P("z1 - z2 + h")).is_zero()

    def test_not_divisible(self):
        with pytest.raises(NotDivisible):
            poly_divide_exact(P("z1^2 + z2"), P("z1 - z2"))


class TestSubstitute:
    def test_shift(self):
        f = R("1/(z1 - z2)", ("z1", "z2", "p"))
        g = substitute(f, {"z1": R("z1 + p", f.ctx), "z2": R("z2 - p", f.ctx)})
        assert g == R("1/(z1 - z2 + 2*p)", f.ctx)

    def test_weight_shift(self):
        ctx = ("nu1", "nu2")
        f = RatFunc.var(ctx, "nu1")
        assert substitute(f, {"nu1": f + 1 - Fraction(1, 2)}) == R("nu1 + 1/2", ctx)

    def test_empty(self):
        f = RatFunc.var(("p",), "p")
        assert substitute(f, {}) == f

    def test_simultaneous(self):
        ctx = ("x", "y")
        f = R("x - 2*y", ctx)
        assert substitute(f, {"x": "y", "y": "x"}) == R("y - 2*x", ctx)

    def test_zero_denominator(self):
        ctx = ("x", "y")
        with pytest.raises(ZeroDivisionError):
            substitute(R("1/(x - y)", ctx), {"x": "y"})


class TestLimit:
    def test_removable(self):
        ctx = ("p",)
        assert limit_subst(R("(p^2 - 1)/(p - 1)", ctx), "p", 1) == 2

    def test_pole(self):
        with pytest.raises(PolePersists):
            limit_subst(R("1/(p - 1)", ("p",)), "p", 1)

    def test_boundary_mechanism(self):
        ctx = ("p",)
        f = R("(p^3 - 1)*(p + 1)/((p^3 + 1)*(p - 1))", ctx)
        assert limit_subst(f, "p", 1) == 3

    def test_keeps_other_variables(self):
        ctx = ("p", "h")
        f = R("h*(p^2 - 1)/(p - 1)", ctx)
        assert limit_subst(f, "p", 1) == R("2*h", ctx)


class TestGrammar:
    @pytest.mark.parametrize(
        "text",
        ["0", "1", "-3/4", "z1", "-3/4*z1^2*h + z2 - 1/2", "(z1 + 1)/(z2^2 - h)", "(1)/(z1 - z2)"],
    )
    def test_round_trip(self, text):
        assert str(R(text)) == text

    def test_negative_exponent_and_parentheses(self):
        assert R("(z1 - z2)^-1*(z1^2 - z2^2)") == R("z1 + z2")

    @pytest.mark.parametrize("text", ["", "z1 +", "(z1", "z1 ^ h", "q", "2 3", "z1 $ z2"])
    def test_bad_input(self, text):
        with pytest.raises(GrammarError):
            R(text)


# properties -------------------------------------------------------------------


@given(mpolys(), mpolys(), mpolys())
def test_mpoly_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == MPoly(CTX)


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_ratfunc_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if not a.is_zero():
        assert a * a.inverse() == 1


@given(mpolys(), nonzero_mpolys(), nonzero_mpolys(max_deg=1))
def test_canonical_form_ignores_common_factor(f, g, a):
    assert ratfunc_make(a * f, a * g) == ratfunc_make(f, g)
    r = ratfunc_make(a * f, a * g)
    same = ratfunc_make(f, g)
    assert (r.num, r.den) == (same.num, same.den)


@given(ratfuncs())
def test_canonical_den_is_monic(f):
    lead = max(f.den.terms, key=lambda e: (sum(e), e))
    assert f.den.terms[lead] == 1


@given(mpolys(), nonzero_mpolys())
def test_divide_exact_recovers_factor(f, g):
    assert poly_divide_exact(f * g, g) == f


@given(ratfuncs(), nonzero_rationals)
def test_limit_matches_substitution_off_poles(f, value):
    den_at = substitute(RatFunc(CTX, f.den), {"h": value})
    assume(not den_at.is_zero())
    assert limit_subst(f, "h", value) == substitute(f, {"h": value})


@given(ratfuncs())
def test_grammar_round_trip(f):
    text = str(f)
    assert parse(text, CTX) == f
    assert str(parse(text, CTX)) == text
