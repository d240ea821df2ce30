"""Named operators and matrices: R_p (operator and closed formula), its
classical part, b_CG, the Cremmer-Gervais family and the boundary family.

Parameters (``h``, ``p``, ``q``, ``kappa``) are given as exact expressions:
a variable name (the default, symbolic), a number string such as ``"1/3"``,
an ``int``/``Fraction`` or a :class:`RatFunc`.  The parameter context of the
result consists of the variables those expressions mention, in argument
order.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Union

from .exact import RatFunc, free_names
from .funcfield import FieldOp, zvars
from .tensor import TensorMat, flat_index

Param = Union[str, int, Fraction, RatFunc]

__all__ = [
    "eta",
    "binom",
    "param_context",
    "make_su_op",
    "nilpotent_r_op",
    "shift_twist",
    "dilation",
    "boundary_twist",
    "translation",
    "make_rp_op",
    "rp_matrix_formula",
    "classical_rp",
    "b_cg",
    "phi_map",
    "make_cg_op",
    "hecke_to_mqybe",
    "make_qp_op",
    "qp_action_formula",
    "make_boundary_op",
    "mqybe_lambda",
    "identity_plus_junk",
]


def eta(i: int, j: int, k: int) -> int:
    if i <= k < j:
        return 1
    if j <= k < i:
        return -1
    return 0


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def binom(x: int, y: int) -> int:
    """Binomial coefficient, zero whenever ``y < 0`` or ``y > x``."""
    if y < 0 or y > x:
        return 0
    return comb(x, y)


def _names(value: Param) -> list[str]:
    if isinstance(value, str):
        return free_names(value)
    if isinstance(value, RatFunc):
        return [v for v in value.ctx if v in value.free_vars()]
    return []


def param_context(*values: Param) -> tuple[str, ...]:
    out: list[str] = []
    for v in values:
        for name in _names(v):
            if name not in out:
                out.append(name)
    return tuple(out)


def _val(ctx, value: Param) -> RatFunc:
    if isinstance(value, RatFunc):
        return value.recast(ctx)
    return RatFunc(ctx, value)


def _ctx(nz: int, *values: Param) -> tuple[str, ...]:
    params = param_context(*values)
    clash = set(params) & set(zvars(3))
    if clash:
        raise ValueError(f"parameter names {sorted(clash)} collide with z-variables")
    return zvars(nz) + params


# substitution symbols -------------------------------------------------------


def shift_twist(ctx, p: RatFunc, nz: int = 2) -> FieldOp:
    """``f(z1 + p, z2 - p)``."""
    return FieldOp.symbol(ctx, nz, maps={"z1": (1, p), "z2": (1, -p)})


def dilation(ctx, p: RatFunc) -> FieldOp:
    """``F_p f = f(z1/p, p*z2)``."""
    return FieldOp.symbol(ctx, 2, maps={"z1": (p.inverse(), 0), "z2": (p, 0)})


def boundary_twist(ctx, p: RatFunc, h: RatFunc) -> FieldOp:
    """``f(z1/p + h/p, p*z2 - h)``."""
    return FieldOp.symbol(ctx, 2, maps={"z1": (p.inverse(), h / p), "z2": (p, -h)})


def translation(ctx, t: RatFunc) -> FieldOp:
    """``phi_t f = f(z1 - t, z2 - t)``."""
    return FieldOp.symbol(ctx, 2, maps={"z1": (1, -t), "z2": (1, -t)})


# section 1 objects ----------------------------------------------------------


def make_su_op(kappa: Param = "kappa") -> FieldOp:
    """``I + kappa (I - P)/(z1 - z2)``."""
    ctx = _ctx(2, kappa)
    k = _val(ctx, kappa)
    z1, z2 = RatFunc.var(ctx, "z1"), RatFunc.var(ctx, "z2")
    I, P = FieldOp.identity(ctx), FieldOp.swap(ctx)
    return I + (k / (z1 - z2)) * (I - P)


def nilpotent_r_op() -> FieldOp:
    """The square-zero operator ``(I - P)/(z1 - z2)``."""
    ctx = zvars(2)
    z1, z2 = RatFunc.var(ctx, "z1"), RatFunc.var(ctx, "z2")
    I, P = FieldOp.identity(ctx), FieldOp.swap(ctx)
    return (RatFunc(ctx, 1) / (z1 - z2)) * (I - P)


def make_rp_op(n: int, h: Param = "h") -> FieldOp:
    """Twisted operator ``F~_h - hn/(z1 - z2 + h) (F~_h - P)``."""
    ctx = _ctx(2, h)
    hv = _val(ctx, h)
    z1, z2 = RatFunc.var(ctx, "z1"), RatFunc.var(ctx, "z2")
    F = shift_twist(ctx, hv)
    P = FieldOp.swap(ctx)
    return F - (hv * n / (z1 - z2 + hv)) * (F - P)


def rp_matrix_formula(n: int, h: Param = "h") -> TensorMat:
    """R_p assembled from the closed binomial formula for its coefficients."""
    ring = param_context(h)
    hv = _val(ring, h)
    entries = {}
    for i in range(n):
        for j in range(n):
            for a in range(n):
                for b in range(n):
                    bracket = binom(i, a) * binom(j, b) + n * sum(
                        _sign(k - a) * binom(i, k) * binom(j + k - a - 1, b) * eta(j, k, a)
                        for k in range(i + 1)
                    )
                    if not bracket:
                        continue
                    power = i + j - a - b
                    if power < 0:
                        raise ArithmeticError(f"negative h-power with nonzero bracket at {(i, j, a, b)}")
                    value = _sign(j - b) * bracket * hv**power
                    entries[(flat_index((a + 1, b + 1), n), flat_index((i + 1, j + 1), n))] = value
    return TensorMat._from_flat(n, 2, ring, entries)


def _wedge(entries: dict, n: int, x: tuple[int, int], y: tuple[int, int], c) -> None:
    """Accumulate ``c * (E_x (x) E_y - E_y (x) E_x)``; absent matrix units are skipped."""
    if not all(1 <= k <= n for k in x + y):
        return
    for (a, b), (cc, d), sign in ((x, y, 1), (y, x, -1)):
        key = (flat_index((a, cc), n), flat_index((b, d), n))
        entries[key] = entries.get(key, 0) + sign * c


def _const_matrix(n: int, entries: dict) -> TensorMat:
    return TensorMat._from_flat(n, 2, (), {k: RatFunc((), v) for k, v in entries.items() if v})


def classical_rp(n: int) -> TensorMat:
    entries: dict = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(i, j):
                _wedge(entries, n, (k, i), (i + j - k - 1, j), n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            _wedge(entries, n, (j - 1, j), (i, i), j - 1)
    return _const_matrix(n, entries)


def b_cg(n: int) -> TensorMat:
    entries: dict = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(1, j - i + 1):
                _wedge(entries, n, (i, j - k + 1), (j, i + k), n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            _wedge(entries, n, (i, i), (j, j + 1), n - j)
    return _const_matrix(n, entries)


def phi_map(m: TensorMat) -> TensorMat:
    """Apply ``E_ij -> -E_{n+1-j, n+1-i}`` on each leg."""
    n, legs = m.n, m.legs
    sign = (-1) ** legs
    e = {}
    for row, col, v in m.items():
        new_row = tuple(n + 1 - c for c in col)
        new_col = tuple(n + 1 - r for r in row)
        e[(flat_index(new_row, n), flat_index(new_col, n))] = v * sign
    return m._like(e)


# section 2 objects ----------------------------------------------------------


def make_cg_op(p: Param = "p", q: Param = "q") -> FieldOp:
    """Two-parameter Cremmer-Gervais operator."""
    ctx = _ctx(2, p, q)
    pv, qv = _val(ctx, p), _val(ctx, q)
    z1, z2 = RatFunc.var(ctx, "z1"), RatFunc.var(ctx, "z2")
    qhat = qv - qv.inverse()
    c = qhat * pv * z2 / (pv * z2 - z1)
    return c * FieldOp.swap(ctx) + (qv - c) * dilation(ctx, pv)


def hecke_to_mqybe(m: TensorMat, q: Param = "q") -> tuple[TensorMat, RatFunc]:
    """``Q = (2R + (1/q - q) P)/(q + 1/q)`` and ``lambda = (1 - q^2)^2/(1 + q^2)^2``."""
    qv = _val(m.ring, q)
    P = TensorMat.swap(m.n, m.ring)
    Q = (m.scale(2) + P.scale(qv.inverse() - qv)).scale((qv + qv.inverse()).inverse())
    lam = (1 - qv**2) ** 2 / (1 + qv**2) ** 2
    return Q, lam


def make_qp_op(n: int, p: Param = "p") -> FieldOp:
    """Modified one-parameter Cremmer-Gervais operator (``q^2 = p^n`` eliminated)."""
    ctx = _ctx(2, p)
    pv = _val(ctx, p)
    z1, z2 = RatFunc.var(ctx, "z1"), RatFunc.var(ctx, "z2")
    pn = pv**n
    F = dilation(ctx, pv)
    c = (pn - 1) * (z2 + z1 / pv) / ((pn + 1) * (z2 - z1 / pv))
    return F - c * (F - FieldOp.swap(ctx))


def qp_action_formula(n: int, p: Param = "p") -> TensorMat:
    """Q_p on monomials through the explicit eta-sum (independent of the operator route)."""
    ring = param_context(p)
    pv = _val(ring, p)
    ratio = (pv**n - 1) / (pv**n + 1)
    entries = {}
    for i in range(n):
        for j in range(n):
            col = flat_index((i + 1, j + 1), n)
            img = {(i, j): pv ** (j - i)}
            for k in range(i + j + 1):
                w = eta(i, j, k) + eta(i, j, k - 1)
                if w:
                    key = (k, i + j - k)
                    img[key] = img.get(key, 0) - ratio * w * pv ** (j - k)
            for (a, b), v in img.items():
                if v:
                    entries[(flat_index((a + 1, b + 1), n), col)] = v
    return TensorMat._from_flat(n, 2, ring, entries)


def make_boundary_op(n: int, p: Param = "p", h: Param = "h") -> FieldOp:
    """Three-term operator with twist ``f(z1/p + h/p, p z2 - h)``."""
    ctx = _ctx(2, p, h)
    pv, hv = _val(ctx, p), _val(ctx, h)
    z1, z2 = RatFunc.var(ctx, "z1"), RatFunc.var(ctx, "z2")
    pn = pv**n
    F = boundary_twist(ctx, pv, hv)
    D = F - FieldOp.swap(ctx)
    c1 = (pn - 1) * (pv * z2 + z1) / ((pn + 1) * (pv * z2 - z1 - hv))
    c2 = hv * (pn - 1) * (pv + 1) / ((pn + 1) * (pv - 1) * (pv * z2 - z1 - hv))
    return F - c1 * D + c2 * D


def mqybe_lambda(n: int, p: Param = "p", ring=None) -> RatFunc:
    """``(1 - p^n)^2/(1 + p^n)^2``, i.e. the Hecke lambda at ``q^2 = p^n``."""
    ring = param_context(p) if ring is None else tuple(ring)
    pn = _val(ring, p) ** n
    return (1 - pn) ** 2 / (1 + pn) ** 2


def identity_plus_junk(n: int = 2) -> TensorMat:
    """``I + E_12 (x) E_21``: a documented non-solution of the YBE.

    (``I + E_12 (x) E_12`` would not do: its three leg placements commute and
    square to zero, so it solves the YBE.)
    """
    return TensorMat.identity(n) + TensorMat.unit(n, [(1, 2), (2, 1)])
