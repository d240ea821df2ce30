import pytest
from hypothesis import given
from hypothesis import strategies as st

from jordanian.constructors import (
    b_cg,
    classical_rp,
    identity_plus_junk,
    make_cg_op,
    make_qp_op,
    make_rp_op,
    make_su_op,
    mqybe_lambda,
    nilpotent_r_op,
    shift_twist,
)
from jordanian.errors import DimensionMismatch, HNotPolynomial
from jordanian.exact import RatFunc
from jordanian.funcfield import FieldOp, embed_leg, restrict
from jordanian.tensor import TensorMat
from jordanian.verifiers import (
    boundary_limit,
    cybe_residual,
    cycle_operator,
    h_adic_valuation,
    hecke_residual,
    mqybe_residual,
    nilpotency_residual,
    omega,
    operator_residual,
    qybe_residual,
    semiclassical,
    similarity_check,
    unitarity_residual,
)

from strategies import rationals


class TestQybe:
    def test_identity(self):
        assert qybe_residual(TensorMat.identity(3))

    def test_junk_has_witness(self):
        r = qybe_residual(identity_plus_junk(2))
        assert not r and r.witness == ((1, 1, 2), (2, 1, 1), RatFunc((), -1))

    def test_square_zero_perturbation_solves(self):
        # I + E12 (x) E12: leg placements commute and square to zero
        assert qybe_residual(TensorMat.identity(2) + TensorMat.unit(2, [(1, 2), (1, 2)]))

    @pytest.mark.parametrize("n", [2, 3])
    def test_rp(self, n):
        assert qybe_residual(restrict(make_rp_op(n), n))

    def test_wrong_legs(self):
        with pytest.raises(DimensionMismatch):
            qybe_residual(TensorMat.identity(2, 3))


@given(st.lists(rationals, min_size=4, max_size=4), st.sampled_from([(1, 2), (2, 1), (1, 1)]))
def test_mqybe_at_zero_is_qybe(vals, pair):
    m = TensorMat.identity(2)
    for v, units in zip(vals, ([(1, 2), (2, 1)], [pair, pair], [(1, 1), (2, 2)], [(2, 1), (1, 2)])):
        m = m + TensorMat.unit(2, units, coeff=v)
    assert mqybe_residual(m, 0).matrix == qybe_residual(m).matrix


class TestMqybe:
    def test_slot_convention_is_a_representation(self):
        a = cycle_operator(2, (1, 2, 3))
        b = cycle_operator(2, (2, 1, 3))
        # P_123 (x) sends the factor in slot 1 to slot 2, etc.
        assert a == TensorMat.permutation(2, (3, 1, 2))
        assert b == TensorMat.permutation(2, (2, 3, 1))
        assert a @ a == b

    def test_omega_is_skew(self):
        w = omega(2)
        assert (w + w.transpose()).is_zero()

    def test_qp(self):
        n = 2
        Q = restrict(make_qp_op(n), n)
        assert mqybe_residual(Q, mqybe_lambda(n))

    def test_literal_reading_fails(self):
        n = 2
        Q = restrict(make_qp_op(n), n)
        assert not mqybe_residual(Q, mqybe_lambda(n), convention="literal")

    def test_wrong_lambda(self):
        n = 2
        Q = restrict(make_qp_op(n), n)
        assert not mqybe_residual(Q, 0)


class TestCybe:
    def test_zero(self):
        assert cybe_residual(TensorMat.zero(2))

    @pytest.mark.parametrize("n", [2, 3])
    def test_classical(self, n):
        assert cybe_residual(classical_rp(n)) and cybe_residual(b_cg(n))

    def test_mu_term(self):
        r = cybe_residual(TensorMat.zero(2), 1)
        assert not r and r.matrix == -omega(2)

    def test_non_solution(self):
        assert not cybe_residual(TensorMat.unit(2, [(1, 2), (2, 1)]))


class TestHecke:
    def test_qP(self):
        ring = ("q",)
        assert hecke_residual(TensorMat.swap(2, ring).scale(RatFunc.var(ring, "q")))

    def test_identity_fails(self):
        assert not hecke_residual(TensorMat.identity(2, 2, ("q",)))

    def test_cg(self):
        assert hecke_residual(restrict(make_cg_op(), 2))


class TestUnitarity:
    def test_swap(self):
        assert unitarity_residual(TensorMat.swap(3))

    def test_two_identity(self):
        assert not unitarity_residual(TensorMat.identity(2).scale(2))

    def test_qp(self):
        assert unitarity_residual(restrict(make_qp_op(2), 2))


class TestSemiclassical:
    def test_identity(self):
        I = TensorMat.identity(2, 2, ("h",))
        order0, order1 = semiclassical(I)
        assert order0 == TensorMat.identity(2) and order1.is_zero()

    def test_pole_in_h(self):
        ring = ("h",)
        m = TensorMat(2, 2, ring, {((1, 1), (1, 1)): RatFunc(ring, "1/(1 + h)")})
        with pytest.raises(HNotPolynomial):
            semiclassical(m)

    @pytest.mark.parametrize("n", [2, 3])
    def test_mqybe_lambda_valuation(self, n):
        # p = 1 + e*h: lambda vanishes to second order in h
        lam = mqybe_lambda(n, "1 + e*h")
        assert h_adic_valuation(lam, "h") == 2


class TestNilpotent:
    @pytest.mark.parametrize("n", [2, 3])
    def test_square_zero(self, n):
        assert nilpotency_residual(n)

    def test_quantum_part_is_not_nilpotent(self):
        m = restrict(make_su_op(), 2)
        assert not (m @ m).is_zero()


class TestSimilarity:
    def test_h_zero(self):
        assert similarity_check(2, "p", 0)

    def test_generic(self):
        assert similarity_check(2)

    def test_perturbed_shift(self):
        assert not similarity_check(2, "p", "h", "h/(p - 1) + 1", degree=1)


def test_boundary_limit_small():
    assert boundary_limit(1) and boundary_limit(2)


@pytest.mark.parametrize("legs", [(1, 2), (1, 3), (2, 3)])
@pytest.mark.parametrize("name", ["rp", "su", "r"])
def test_leg_embedding_consistency(name, legs):
    op = {"rp": make_rp_op(2), "su": make_su_op(), "r": nilpotent_r_op()}[name]
    n = 2
    assert restrict(embed_leg(op, legs), n) == restrict(op, n).place(legs, 3)


def test_operator_residual_detects_leg_order():
    R = make_su_op()
    assert not operator_residual(embed_leg(R, (1, 2)), embed_leg(R, (2, 1)), 3)
    F = shift_twist(R.ctx, RatFunc.var(R.ctx, "kappa"))
    assert operator_residual(embed_leg(F, (2, 1)), embed_leg(F, (1, 2)).inverse(), 4)
