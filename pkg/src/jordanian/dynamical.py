"""Weight shifts, the rational dynamical R-matrix and the vertex-IRF check.

Coefficients live in ``Q(nu1, ..., nun)`` with the ``nu_i`` independent
generators.  A weight shift by ``nu_j`` substitutes

    nu_i -> nu_i + sign * (delta_ij - 1/n)

for every ``i``; ``sign=+1`` is the convention under which the dynamical
braid equation and the vertex-IRF identity hold (``sign=-1`` is kept so the
other reading can be exercised).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .constructors import make_rp_op
from .exact import RatFunc, rsum, substitute
from .funcfield import restrict
from .tensor import TensorMat, flat_index
from .verifiers import Residual, residual

__all__ = [
    "WeightBasis",
    "DynMat",
    "nu_ring",
    "shift",
    "make_dyn_r",
    "make_A",
    "dyn_embed",
    "dbe_residual",
    "vertex_irf_residual",
    "READINGS",
    "conjugation_residual",
    "rp_braid_form",
    "determinant",
    "vandermonde",
]


def nu_ring(n: int) -> tuple[str, ...]:
    return tuple(f"nu{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class WeightBasis:
    n: int

    def pairing(self, i: int, j: int) -> Fraction:
        return Fraction(int(i == j)) - Fraction(1, self.n)

    @property
    def ring(self) -> tuple[str, ...]:
        return nu_ring(self.n)

    def nu(self, i: int) -> RatFunc:
        return RatFunc.var(self.ring, f"nu{i}")


class DynMat(TensorMat):
    """TensorMat over ``Q(nu1..nun)``; basis vector ``e_i`` has weight ``nu_i``."""

    __slots__ = ()

    @property
    def basis(self) -> WeightBasis:
        return WeightBasis(self.n)


def shift(f: RatFunc, j: int, sign: int = 1, n: int | None = None) -> RatFunc:
    """Shift every ``nu_i`` by ``sign * (nu_i, nu_j)``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    n = len(f.ctx) if n is None else n
    basis = WeightBasis(n)
    if f.ctx != basis.ring:
        raise ValueError(f"shift expects a function over {basis.ring}, got {f.ctx}")
    if f.is_constant():
        return f
    return substitute(
        f, {f"nu{i}": basis.nu(i) + sign * basis.pairing(i, j) for i in range(1, n + 1)}
    )


def make_dyn_r(n: int) -> DynMat:
    """``e_i e_j -> e_i e_j / (nu_i - nu_j + d_ij) + e_j e_i (1 - 1/(nu_i - nu_j + d_ij))``."""
    basis = WeightBasis(n)
    ring = basis.ring
    e: dict = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            alpha = (basis.nu(i) - basis.nu(j) + int(i == j)).inverse()
            col = flat_index((i, j), n)
            for row, c in (((i, j), alpha), ((j, i), 1 - alpha)):
                key = (flat_index(row, n), col)
                e[key] = e[key] + c if key in e else c
    return DynMat._from_flat(n, 2, ring, e)


def make_A(n: int) -> DynMat:
    """``A(e_i) = sum_k e_k nu_k^(i-1)``."""
    basis = WeightBasis(n)
    e = {}
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            e[(k - 1, i - 1)] = basis.nu(k) ** (i - 1)
    return DynMat._from_flat(n, 1, basis.ring, e)


def dyn_embed(m: TensorMat, legs: tuple[int, ...], total: int = 3, sign: int = 1) -> DynMat:
    """Place ``m`` on consecutive ``legs`` of ``total`` legs inside the twisted category.

    Coefficients are shifted by the weights of every leg to the right of the
    block (the twist carries them past those vectors); legs to the left leave
    them unchanged.
    """
    legs = tuple(legs)
    if legs != tuple(range(legs[0], legs[0] + m.legs)) or legs[-1] > total:
        raise ValueError(f"legs {legs} must be consecutive and within {total}")
    n = m.n
    right = total - legs[-1]
    left = legs[0] - 1
    items = list(m.items())
    cache: dict = {}

    def shifted(v: RatFunc, weights: tuple[int, ...]) -> RatFunc:
        key = (id(v), weights)
        if key not in cache:
            out = v
            for w in weights:
                out = shift(out, w, sign, n)
            cache[key] = out
        return cache[key]

    e = {}
    for lhs in itertools.product(range(1, n + 1), repeat=left):
        for rhs in itertools.product(range(1, n + 1), repeat=right):
            for row, col, v in items:
                R = lhs + row + rhs
                C = lhs + col + rhs
                e[(flat_index(R, n), flat_index(C, n))] = shifted(v, rhs)
    return DynMat._from_flat(n, total, m.ring, e)


def dbe_residual(m: TensorMat, sign: int = 1) -> Residual:
    """``M12 M23 M12 - M23 M12 M23`` in the twisted tensor category."""
    a = dyn_embed(m, (1, 2), 3, sign)
    b = dyn_embed(m, (2, 3), 3, sign)
    return residual(a @ b @ a - b @ a @ b)


def rp_braid_form(n: int) -> TensorMat:
    """``R~ = R_p P`` at ``h = 1/n``, as a constant matrix."""
    R = restrict(make_rp_op(n, Fraction(1, n)), n)
    return R @ TensorMat.swap(n)


READINGS = ("proof", "composition")


def _irf_r(n: int, reading: str) -> DynMat:
    if reading not in READINGS:
        raise ValueError(f"reading must be one of {READINGS}")
    R = make_dyn_r(n)
    # "proof": R^{ms}_{cd} is the e_c(x)e_d coefficient of R(e_m(x)e_s), which is
    # what the beta(nu_m^{nu_s} - nu_s) step of the argument uses.
    return R.transpose() if reading == "proof" else R


def vertex_irf_residual(n: int, sign: int = 1, reading: str = "proof") -> Residual:
    """Entrywise residual of ``sum_cd R^{ms}_{cd} (A^c_i)^{nu_d} A^d_j = sum_kl R~^{kl}_{ij} (A^m_k)^{nu_s} A^s_l``.

    Row ``(m, s)``, column ``(i, j)``.  ``reading`` fixes how ``R^{ms}_{cd}``
    indexes :func:`make_dyn_r`: ``"proof"`` takes ``(m, s)`` as the input pair,
    ``"composition"`` as the output pair.  Only the first makes the identity hold.
    """
    ring = nu_ring(n)
    R = _irf_r(n, reading)
    A = make_A(n)
    Rt = rp_braid_form(n).recast(ring)

    def a(k, i):
        return A[(k,), (i,)]

    zero = RatFunc(ring, 0)
    shifted = {(c, i, d): shift(a(c, i), d, sign, n) for c in range(1, n + 1)
               for i in range(1, n + 1) for d in range(1, n + 1)}
    r_cols: dict = {}
    for row, col, v in R.items():
        r_cols.setdefault(row, []).append((col, v))
    rt_cols: dict = {}
    for row, col, v in Rt.items():
        rt_cols.setdefault(col, []).append((row, v))
    e = {}
    for m, s, i, j in itertools.product(range(1, n + 1), repeat=4):
        lhs = rsum(
            (v * shifted[(c, i, d)] * a(d, j) for (c, d), v in r_cols.get((m, s), ())),
            ring,
        )
        rhs = rsum(
            (v * shifted[(m, k, s)] * a(s, l) for (k, l), v in rt_cols.get((i, j), ())),
            ring,
        )
        diff = lhs - rhs if (lhs or rhs) else zero
        if diff:
            e[(flat_index((m, s), n), flat_index((i, j), n))] = diff
    return residual(DynMat._from_flat(n, 2, ring, e))


def conjugation_residual(n: int, sign: int = 1, reading: str = "proof") -> Residual:
    """``R A_1 A_2 - A_1 A_2 R~`` as a product of twisted-category matrices.

    Independent of :func:`vertex_irf_residual`'s index bookkeeping: ``A_1``
    and ``A_2`` are built with :func:`dyn_embed` and multiplied.
    """
    ring = nu_ring(n)
    A = make_A(n)
    A1 = dyn_embed(A, (1,), 2, sign)
    A2 = dyn_embed(A, (2,), 2, sign)
    R = _irf_r(n, reading)
    Rt = rp_braid_form(n).recast(ring)
    return residual(R @ A1 @ A2 - A1 @ A2 @ Rt)


def determinant(m: TensorMat) -> RatFunc:
    """Exact determinant by Gaussian elimination over the coefficient field."""
    N = m.dim
    rows = [[m._e.get((r, c), RatFunc(m.ring, 0)) for c in range(N)] for r in range(N)]
    det = RatFunc(m.ring, 1)
    for c in range(N):
        pivot = next((r for r in range(c, N) if rows[r][c]), None)
        if pivot is None:
            return RatFunc(m.ring, 0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        p = rows[c][c]
        det = det * p
        inv = p.inverse()
        for r in range(c + 1, N):
            if rows[r][c]:
                f = rows[r][c] * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return det


def vandermonde(n: int) -> RatFunc:
    """``prod_{k<l} (nu_l - nu_k)``."""
    basis = WeightBasis(n)
    out = RatFunc(basis.ring, 1)
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            out = out * (basis.nu(l) - basis.nu(k))
    return out
