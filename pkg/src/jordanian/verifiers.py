"""Exact residuals for the Yang-Baxter family of equations.

Every check returns a :class:`Residual`; ``is_zero`` is decided by exact
equality of canonical rational functions, never by sampling.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .constructors import (
    _val,
    classical_rp,
    make_boundary_op,
    make_qp_op,
    make_rp_op,
    mqybe_lambda,
    nilpotent_r_op,
    param_context,
    rp_matrix_formula,
    shift_twist,
    translation,
    make_su_op,
)
from .errors import DimensionMismatch, HNotPolynomial
from .exact import RatFunc, poly_ring
from .funcfield import FieldOp, _split, action_difference, degree_bound, embed_leg, restrict, zvars
from .tensor import TensorMat, flat_index

__all__ = [
    "Residual",
    "residual",
    "qybe_residual",
    "mqybe_residual",
    "braid_residual",
    "cybe_residual",
    "hecke_residual",
    "unitarity_residual",
    "nilpotency_residual",
    "exponential_residual",
    "semiclassical",
    "similarity_check",
    "boundary_limit",
    "twist_lemma",
    "operator_residual",
    "projective_ratio",
    "h_adic_valuation",
    "legs3",
    "omega",
    "cycle_operator",
]


@dataclass(frozen=True)
class Residual:
    matrix: TensorMat
    is_zero: bool
    witness: Optional[tuple]  # (row, col, value) of the first nonzero entry

    def __bool__(self):
        # truthy when the equation holds
        return self.is_zero

    def describe(self) -> str:
        if self.is_zero:
            return "zero"
        row, col, value = self.witness
        return f"nonzero: entry row={list(row)} col={list(col)} = {value}"

    def to_dict(self) -> dict:
        out = {"is_zero": self.is_zero, "nnz": self.matrix.nnz}
        if self.witness is not None:
            row, col, value = self.witness
            out["witness"] = {"row": list(row), "col": list(col), "coeff": str(value)}
        return out


def residual(m: TensorMat) -> Residual:
    return Residual(m, m.is_zero(), m.first_nonzero())


def _square2(m: TensorMat):
    if m.legs != 2:
        raise DimensionMismatch(f"expected a 2-leg matrix, got {m.legs} legs")


def legs3(m: TensorMat) -> tuple[TensorMat, TensorMat, TensorMat]:
    """``(M_12, M_13, M_23)`` on three legs."""
    _square2(m)
    return m.place((1, 2), 3), m.place((1, 3), 3), m.place((2, 3), 3)


def cycle_operator(n: int, cycle: tuple[int, ...], ring=(), convention: str = "slot") -> TensorMat:
    """Permutation operator ``P_(ijk)`` on three legs for the cycle ``i -> j -> k -> i``.

    ``convention="slot"``: the factor in slot ``i`` moves to slot ``sigma(i)``,
    so ``P_123(v1 v2 v3) = v3 v1 v2``; this makes ``sigma -> P_sigma`` a
    homomorphism and is the convention under which the modified equation holds.
    ``convention="literal"`` reads the factors off as ``v_sigma(1) v_sigma(2) v_sigma(3)``
    (the inverse permutation).
    """
    sigma = {cycle[t]: cycle[(t + 1) % len(cycle)] for t in range(len(cycle))}
    if convention == "literal":
        order = tuple(sigma.get(slot, slot) for slot in (1, 2, 3))
    elif convention == "slot":
        target = [0, 0, 0]
        for slot in (1, 2, 3):
            target[sigma.get(slot, slot) - 1] = slot
        order = tuple(target)
    else:
        raise ValueError(f"unknown permutation convention {convention!r}")
    return TensorMat.permutation(n, order, ring)


def omega(n: int, ring=(), convention: str = "slot") -> TensorMat:
    """``P_123 - P_213``."""
    return cycle_operator(n, (1, 2, 3), ring, convention) - cycle_operator(n, (2, 1, 3), ring, convention)


def qybe_residual(m: TensorMat) -> Residual:
    """``R12 R13 R23 - R23 R13 R12``."""
    r12, r13, r23 = legs3(m)
    return residual(r12 @ r13 @ r23 - r23 @ r13 @ r12)


def mqybe_residual(m: TensorMat, lam, convention: str = "slot") -> Residual:
    """``R12 R13 R23 - R23 R13 R12 - lam (P123 R12 - P213 R23)``; see :func:`cycle_operator`."""
    r12, r13, r23 = legs3(m)
    lam = lam if isinstance(lam, RatFunc) else RatFunc(m.ring, lam)
    lam = lam.recast(m.ring)
    lhs = r12 @ r13 @ r23 - r23 @ r13 @ r12
    if lam.is_zero():
        return residual(lhs)
    n, ring = m.n, m.ring
    p123 = cycle_operator(n, (1, 2, 3), ring, convention)
    p213 = cycle_operator(n, (2, 1, 3), ring, convention)
    return residual(lhs - (p123 @ r12 - p213 @ r23).scale(lam))


def braid_residual(m: TensorMat) -> Residual:
    """``R12 R23 R12 - R23 R12 R23``."""
    _square2(m)
    a, b = m.place((1, 2), 3), m.place((2, 3), 3)
    return residual(a @ b @ a - b @ a @ b)


def cybe_residual(r: TensorMat, mu=0) -> Residual:
    """``[r12,r13] + [r12,r23] + [r13,r23] - mu * Omega``."""
    r12, r13, r23 = legs3(r)

    def br(x, y):
        return x @ y - y @ x

    total = br(r12, r13) + br(r12, r23) + br(r13, r23)
    mu = mu if isinstance(mu, RatFunc) else RatFunc(r.ring, mu)
    if not mu.is_zero():
        total = total - omega(r.n, r.ring).scale(mu.recast(r.ring))
    return residual(total)


def hecke_residual(m: TensorMat, q="q") -> Residual:
    """``(PM - q)(PM + 1/q)``."""
    _square2(m)
    qv = _val(m.ring, q)
    PM = TensorMat.swap(m.n, m.ring) @ m
    I = TensorMat.identity(m.n, 2, m.ring)
    return residual((PM - I.scale(qv)) @ (PM + I.scale(qv.inverse())))


def unitarity_residual(Q: TensorMat) -> Residual:
    """``(P Q P) Q - I``."""
    _square2(Q)
    return residual(Q.flip() @ Q - TensorMat.identity(Q.n, 2, Q.ring))


def nilpotency_residual(n: int) -> Residual:
    """Square of the restricted ``(I - P)/(z1 - z2)``."""
    r = restrict(nilpotent_r_op(), n)
    return residual(r @ r)


def matrix_exp_nilpotent(m: TensorMat) -> TensorMat:
    """``exp(m)`` by its power series; ``m`` must be nilpotent (checked)."""
    term = TensorMat.identity(m.n, m.legs, m.ring)
    total = term
    for k in range(1, m.dim + 1):
        term = (term @ m).scale(Fraction(1, k))
        if term.is_zero():
            return total
        total = total + term
    raise ArithmeticError("matrix is not nilpotent")


def exponential_residual(n: int, kappa="kappa") -> Residual:
    """``exp(kappa r) - (I + kappa r)`` where ``I + kappa r`` is the restricted operator."""
    quantum = restrict(make_su_op(kappa), n)
    r = restrict(nilpotent_r_op(), n)
    ring = quantum.ring
    kr = r.recast(ring).scale(_val(ring, kappa))
    return residual(matrix_exp_nilpotent(kr) - quantum)


def semiclassical(m: TensorMat, var: str = "h") -> tuple[TensorMat, TensorMat]:
    """Constant term and coefficient of ``var`` of an entrywise polynomial matrix."""
    if var not in m.ring:
        raise HNotPolynomial(f"{var!r} not in ring {m.ring}")
    ring = tuple(v for v in m.ring if v != var)
    i = m.ring.index(var)
    pring = poly_ring(ring)
    order0, order1 = {}, {}
    for (r, c), v in m._e.items():
        if any(e[i] for e in v._den):
            raise HNotPolynomial(f"entry {v} has {var} in its denominator")
        den = pring.from_dict({e[:i] + e[i + 1:]: a for e, a in v._den.items()})
        parts: dict = {0: {}, 1: {}}
        for e, a in v._num.items():
            if e[i] in parts:
                parts[e[i]][e[:i] + e[i + 1:]] = a
        for k, target in ((0, order0), (1, order1)):
            if parts[k]:
                target[(r, c)] = RatFunc._make(ring, pring.from_dict(parts[k]), den)
    cls = type(m)
    return (
        cls._from_flat(m.n, m.legs, ring, order0),
        cls._from_flat(m.n, m.legs, ring, order1),
    )


def projective_ratio(a: TensorMat, b: TensorMat) -> Optional[RatFunc]:
    """The scalar ``c`` with ``a = c*b`` if one exists (``None`` otherwise)."""
    if (a.n, a.legs, a.ring) != (b.n, b.legs, b.ring) or set(a._e) != set(b._e) or b.is_zero():
        return None
    it = iter(b._e)
    k0 = next(it)
    c = a._e[k0] / b._e[k0]
    if all(a._e[k] == c * b._e[k] for k in b._e):
        return c
    return None


# operator-level checks ------------------------------------------------------


def operator_residual(a: FieldOp, b: FieldOp, degree: int) -> Residual:
    """``a - b`` evaluated on every monomial with exponents <= degree.

    The result is reported as a matrix on ``V_N`` per z-variable, large enough
    to hold every image.
    """
    diff = action_difference(a, b, degree)
    params = a.params
    N = degree + 1
    images = {col: _split(img, a.nz, params) for col, img in diff.items()}
    for img in images.values():
        for zexp in img:
            N = max(N, max(zexp) + 1)
    entries = {}
    for col, img in images.items():
        for zexp, v in img.items():
            entries[(flat_index([k + 1 for k in zexp], N), flat_index([k + 1 for k in col], N))] = v
    return residual(TensorMat._from_flat(N, a.nz, params, entries))


def similarity_check(n: int, p="p", h="h", t=None, degree: int | None = None) -> Residual:
    """``phi_t Q_p phi_t^{-1} - B_{p,h,n}`` with ``t = h/(p-1)`` unless given.

    Equality needs the full ``degree_bound(n)``; a smaller ``degree`` is enough
    to exhibit a witness when the operators differ.
    """
    B = make_boundary_op(n, p, h)
    ctx = B.ctx
    pv, hv = _val(ctx, p), _val(ctx, h)
    tv = hv / (pv - 1) if t is None else _val(ctx, t)
    Q = make_qp_op(n, p).recast(ctx)
    phi = translation(ctx, tv)
    conj = phi @ Q @ phi.inverse()
    return operator_residual(conj, B, degree_bound(n) if degree is None else degree)


def boundary_limit(n: int, h="h") -> Residual:
    """Entrywise ``p -> 1`` limit of the restricted boundary family minus R_p."""
    B = restrict(make_boundary_op(n, "p", h), n)
    lim = B.limit("p", 1).recast(param_context(h))
    return residual(lim - rp_matrix_formula(n, h))


def twist_lemma(p="p", kappa="kappa", n: int = 2) -> dict[str, Residual]:
    """The four twist relations for ``F = F~_p`` and ``R = I + kappa(I-P)/(z1-z2)``."""
    ctx2 = zvars(2) + param_context(p, kappa)
    F = shift_twist(ctx2, _val(ctx2, p))
    R = make_su_op(kappa).recast(ctx2)
    F12, F13, F23 = (embed_leg(F, legs) for legs in ((1, 2), (1, 3), (2, 3)))
    F21 = embed_leg(F, (2, 1))
    R12, R23 = embed_leg(R, (1, 2)), embed_leg(R, (2, 3))
    ctx3 = F12.ctx
    D = degree_bound(n)
    return {
        "F21 = F12^-1": operator_residual(F21 @ F12, FieldOp.identity(ctx3, 3), D),
        "F12 F13 F23 = F23 F13 F12": operator_residual(F12 @ F13 @ F23, F23 @ F13 @ F12, D),
        "R12 F23 F13 = F13 F23 R12": operator_residual(R12 @ F23 @ F13, F13 @ F23 @ R12, D),
        "R23 F12 F13 = F13 F12 R23": operator_residual(R23 @ F12 @ F13, F13 @ F12 @ R23, D),
    }


def h_adic_valuation(f: RatFunc, var: str) -> int:
    """Order of vanishing of ``f`` at ``var = 0`` (negative for a pole)."""
    if f.is_zero():
        raise ValueError("valuation of zero is infinite")
    i = f.ctx.index(var)
    return min(e[i] for e in f._num) - min(e[i] for e in f._den)
