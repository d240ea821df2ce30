from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jordanian.constructors import dilation, make_rp_op, make_su_op, nilpotent_r_op, shift_twist, translation
from jordanian.errors import NotClosed, NotDivisible
from jordanian.exact import RatFunc, parse
from jordanian.funcfield import FieldOp, action_difference, apply, compose, embed_leg, restrict, zvars
from jordanian.tensor import TensorMat

from strategies import rationals

CTX = ("z1", "z2", "p", "q", "t")
Z3 = ("z1", "z2", "z3")


def rf(text, ctx=CTX):
    return parse(text, ctx)


def same(a, b, degree=4):
    return action_difference(a, b, degree) == {}


class TestApply:
    def test_su_on_z1(self):
        R = make_su_op()
        assert apply(R, "z1") == rf("z1 + kappa", R.ctx)

    def test_swap(self):
        P = FieldOp.swap(zvars(2))
        assert apply(P, "z1^2*z2") == rf("z2^2*z1", zvars(2))

    def test_rp_on_z1(self):
        R = make_rp_op(2)
        assert apply(R, "z1") == rf("z1 - h", R.ctx)

    def test_symmetric_monomials_fixed(self):
        R = make_su_op()
        assert apply(R, "z1*z2") == rf("z1*z2", R.ctx)

    def test_not_divisible(self):
        ctx = zvars(2)
        op = RatFunc(ctx, "1/(z1 - z2)") * FieldOp.identity(ctx)
        with pytest.raises(NotDivisible):
            apply(op, "1")

    def test_linear(self):
        R = make_rp_op(3)
        f, g = rf("z1^2 + 3*z2", R.ctx), rf("z1*z2 - 1/2", R.ctx)
        assert apply(R, f + 2 * g) == apply(R, f) + 2 * apply(R, g)


class TestCompose:
    def test_swap_involution(self):
        P = FieldOp.swap(CTX)
        assert same(compose(P, P), FieldOp.identity(CTX))
        assert compose(P, P).terms == FieldOp.identity(CTX).terms

    def test_additive_shifts(self):
        p, q = RatFunc.var(CTX, "p"), RatFunc.var(CTX, "q")
        lhs = compose(shift_twist(CTX, p), shift_twist(CTX, q))
        assert lhs.terms == shift_twist(CTX, p + q).terms

    def test_translation_after_dilation(self):
        p, t = RatFunc.var(CTX, "p"), RatFunc.var(CTX, "t")
        op = compose(translation(CTX, t), dilation(CTX, p))
        (term,) = op.terms
        assert term.sub.scale == (p.inverse(), p)
        assert term.sub.offset == (-t / p, -p * t)
        assert apply(op, "z1") == rf("z1/p - t/p")

    def test_dilation_after_translation(self):
        # the sub z1 -> z1/p - t, z2 -> p*z2 - t
        p, t = RatFunc.var(CTX, "p"), RatFunc.var(CTX, "t")
        op = compose(dilation(CTX, p), translation(CTX, t))
        (term,) = op.terms
        assert term.sub.offset == (-t, -t)
        assert apply(op, "z2") == rf("p*z2 - t")

    @pytest.mark.parametrize("f", ["z1", "z2", "z1^2*z2", "z1*z2^3 - z2"])
    def test_postcondition(self, f):
        R = make_rp_op(3)
        F = shift_twist(R.ctx, RatFunc.var(R.ctx, "h"))
        for a, b in ((R, F), (F, R), (R, R)):
            assert apply(compose(a, b), f) == apply(a, apply(b, f))


class TestEmbedLeg:
    def test_swap_13(self):
        P13 = embed_leg(FieldOp.swap(zvars(2)), (1, 3))
        assert apply(P13, "z1*z2^2*z3^3") == rf("z3*z2^2*z1^3", Z3)

    def test_identity(self):
        for legs in ((1, 2), (1, 3), (2, 3), (2, 1)):
            assert embed_leg(FieldOp.identity(zvars(2)), legs).terms == FieldOp.identity(Z3, 3).terms

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_spectator_variable(self, k):
        R = make_su_op()
        R12 = embed_leg(R, (1, 2))
        ctx3 = R12.ctx
        for f in ("z1", "z1^2*z2", "z2^3"):
            lhs = apply(R12, rf(f"z3^{k}*{f}", ctx3))
            rhs = rf(f"z3^{k}", ctx3) * apply(R, f).recast(ctx3)
            assert lhs == rhs


class TestRestrict:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_swap(self, n):
        assert restrict(FieldOp.swap(zvars(2)), n) == TensorMat.swap(n)

    def test_rp_at_h_zero(self):
        assert restrict(make_rp_op(2), 2).limit("h", 0).recast(()) == TensorMat.identity(2)
        assert restrict(make_rp_op(2, 0), 2) == TensorMat.identity(2)

    def test_rp_n2_images(self):
        R = restrict(make_rp_op(2), 2)
        h = RatFunc.var(("h",), "h")
        assert R[(2, 1), (2, 1)] == 1 and R[(1, 1), (2, 1)] == -h
        assert R[(1, 2), (1, 2)] == 1 and R[(1, 1), (1, 2)] == h
        assert R[(2, 2), (2, 2)] == 1 and R[(2, 1), (2, 2)] == -h
        assert R[(1, 2), (2, 2)] == h and R[(1, 1), (2, 2)] == h**2
        assert R.nnz == 9

    def test_not_closed(self):
        ctx = zvars(2)
        op = RatFunc.var(ctx, "z1") * FieldOp.identity(ctx)
        with pytest.raises(NotClosed):
            restrict(op, 2)


def test_json_round_trip():
    for op in (make_rp_op(3), make_su_op(), embed_leg(make_su_op(), (1, 3))):
        data = op.to_json()
        back = FieldOp.from_json(data, op.ctx, op.nz)
        assert back.terms == op.terms and back.to_json() == data


def test_nilpotent_r_maps_monomials_to_polynomials():
    r = nilpotent_r_op()
    for a in range(7):
        for b in range(7):
            assert apply(r, f"z1^{a}*z2^{b}").is_polynomial()


# properties -------------------------------------------------------------------

XY = ("x", "y", "kappa")


def alpha(x):
    return -RatFunc.var(XY, "kappa") / x


def beta(x):
    return 1 - alpha(x)


def test_functional_equations():
    x, y = RatFunc.var(XY, "x"), RatFunc.var(XY, "y")
    assert alpha(x) * alpha(y) == alpha(x - y) * alpha(y) + alpha(x) * alpha(y - x)
    lhs = alpha(x) * alpha(y) ** 2 + beta(y) * beta(-y) * alpha(x + y)
    rhs = alpha(x) ** 2 * alpha(y) + beta(x) * beta(-x) * alpha(x + y)
    assert lhs == rhs


@given(rationals, rationals, rationals)
def test_functional_equations_at_points(x, y, k):
    if 0 in (x, y, x - y, x + y):
        return
    a = lambda v: -k / v  # noqa: E731
    b = lambda v: 1 - a(v)  # noqa: E731
    assert a(x) * a(y) == a(x - y) * a(y) + a(x) * a(y - x)
    assert a(x) * a(y) ** 2 + b(y) * b(-y) * a(x + y) == a(x) ** 2 * a(y) + b(x) * b(-x) * a(x + y)


OPS_CTX = ("z1", "z2", "h", "kappa")


def _ops():
    h = RatFunc.var(OPS_CTX, "h")
    return {
        "P": FieldOp.swap(OPS_CTX),
        "F": shift_twist(OPS_CTX, h),
        "R_p": make_rp_op(2).recast(OPS_CTX),
        "R_p3": make_rp_op(3).recast(OPS_CTX),
        "su": make_su_op().recast(OPS_CTX),
        "r": nilpotent_r_op().recast(OPS_CTX),
    }


OPS = _ops()


@given(
    st.sampled_from(sorted(OPS)),
    st.sampled_from(sorted(OPS)),
    st.integers(1, 3),
    rationals,
)
def test_restrict_respects_composition(a, b, n, c):
    A, B = OPS[a] + c * OPS["P"], OPS[b]
    assert restrict(compose(A, B), n) == restrict(A, n) @ restrict(B, n)


@given(st.sampled_from(sorted(OPS)), st.integers(0, 4), st.integers(0, 4), st.integers(0, 3))
def test_embedded_operator_acts_on_its_legs(name, a, b, c):
    op = OPS[name]
    for legs in ((1, 2), (1, 3), (2, 3)):
        E = embed_leg(op, legs)
        exps = [0, 0, 0]
        exps[legs[0] - 1], exps[legs[1] - 1] = a, b
        other = ({1, 2, 3} - set(legs)).pop()
        exps[other - 1] = c
        mono = "*".join(f"z{i + 1}^{e}" for i, e in enumerate(exps))
        image = apply(op, f"z1^{a}*z2^{b}")
        expected = image.rename({"z1": f"z{legs[0]}", "z2": f"z{legs[1]}"}, E.ctx) * parse(f"z{other}^{c}", E.ctx)
        assert apply(E, mono) == expected
