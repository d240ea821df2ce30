"""Operators on rational functions of ``z1, z2[, z3]``.

A :class:`FieldOp` is a finite formal sum ``sum_i c_i * sigma_i`` where each
``c_i`` is a rational function of the z-variables and parameters and each
``sigma_i`` is an affine substitution symbol.  A symbol is a permutation of
the z-variables followed by an independent affine map per variable::

    sigma f = f(w_{perm[0]}(z_{perm[0]}), ..., w_{perm[k-1]}(z_{perm[k-1]}))
    w_j(z) = scale_j * z + offset_j

i.e. the arguments are permuted first and then every ``z_j`` is replaced by
``scale_j*z_j + offset_j``.  Scales and offsets involve parameters only.

Operators act on polynomials in the z-variables (coefficients rational in
the parameters).  Images that are not polynomial in z raise
:class:`NotDivisible`; divisibility is never assumed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ContextMismatch, NotClosed, NotDivisible
from .exact import MPoly, RatFunc, poly_ring, rsum, substitute
from .tensor import TensorMat, flat_index

__all__ = [
    "AffineSub",
    "OpTerm",
    "FieldOp",
    "apply",
    "compose",
    "embed_leg",
    "restrict",
    "degree_bound",
    "action_difference",
    "zvars",
]


def zvars(k: int) -> tuple[str, ...]:
    return tuple(f"z{i}" for i in range(1, k + 1))


@dataclass(frozen=True)
class AffineSub:
    """Per-variable affine maps ``z_j -> scale_j * z_j + offset_j``."""

    scale: tuple[RatFunc, ...]
    offset: tuple[RatFunc, ...]

    def __post_init__(self):
        if len(self.scale) != len(self.offset):
            raise ValueError("scale/offset length mismatch")
        if any(s.is_zero() for s in self.scale):
            raise ValueError("affine substitution with zero scale is not invertible")

    @classmethod
    def identity(cls, ctx, k: int) -> "AffineSub":
        one, zero = RatFunc(ctx, 1), RatFunc(ctx, 0)
        return cls((one,) * k, (zero,) * k)

    def is_identity_at(self, j: int) -> bool:
        return self.scale[j] == 1 and self.offset[j].is_zero()


@dataclass(frozen=True)
class OpTerm:
    coeff: RatFunc
    perm: tuple[int, ...]
    sub: AffineSub

    @property
    def swap(self) -> bool:
        return self.perm != tuple(range(len(self.perm)))

    @property
    def key(self):
        return (self.perm, self.sub)

    def arguments(self, ctx) -> dict[str, RatFunc]:
        """Substitution ``{z_i: argument_i}`` realizing the symbol (identity slots omitted)."""
        out = {}
        for i, j in enumerate(self.perm):
            if j == i and self.sub.is_identity_at(j):
                continue
            z = RatFunc.var(ctx, ctx[j])
            out[ctx[i]] = self.sub.scale[j] * z + self.sub.offset[j]
        return out

    def act(self, g: RatFunc, ctx) -> RatFunc:
        """The symbol alone (no coefficient) applied to ``g``."""
        return substitute(g, self.arguments(ctx))


class FieldOp:
    """Formal sum of coefficient * substitution-symbol terms.

    ``ctx`` lists the z-variables first (``nz`` of them) followed by the
    parameters.  Terms with the same symbol are merged; zero terms dropped.
    """

    __slots__ = ("ctx", "nz", "terms")

    def __init__(self, ctx: Iterable[str], nz: int, terms: Iterable[OpTerm] = ()):
        self.ctx = tuple(ctx)
        self.nz = nz
        if self.ctx[:nz] != zvars(nz):
            raise ContextMismatch(f"context {self.ctx} must start with {zvars(nz)}")
        merged: dict = {}
        for t in terms:
            if t.coeff.ctx != self.ctx:
                raise ContextMismatch(f"term over {t.coeff.ctx} in operator over {self.ctx}")
            if len(t.perm) != nz:
                raise ValueError("term arity differs from the operator's")
            if t.key in merged:
                merged[t.key] = OpTerm(merged[t.key].coeff + t.coeff, t.perm, t.sub)
            else:
                merged[t.key] = t
        self.terms = tuple(t for t in merged.values() if not t.coeff.is_zero())

    @property
    def params(self) -> tuple[str, ...]:
        return self.ctx[self.nz:]

    @property
    def zvars(self) -> tuple[str, ...]:
        return self.ctx[: self.nz]

    # basic operators ------------------------------------------------------

    @classmethod
    def symbol(cls, ctx, nz: int, perm: Sequence[int] | None = None,
               maps: Mapping[str, tuple] | None = None, coeff=1) -> "FieldOp":
        """Single term ``coeff * sigma``; ``maps`` gives ``{z_j: (scale, offset)}``."""
        ctx = tuple(ctx)
        perm = tuple(range(nz)) if perm is None else tuple(perm)
        ident = AffineSub.identity(ctx, nz)
        scale, offset = list(ident.scale), list(ident.offset)
        for name, (s, o) in (maps or {}).items():
            j = ctx.index(name)
            scale[j] = s if isinstance(s, RatFunc) else RatFunc(ctx, s)
            offset[j] = o if isinstance(o, RatFunc) else RatFunc(ctx, o)
        for v in scale + offset:
            if v.free_vars() & set(zvars(nz)):
                raise ValueError("scales and offsets may only involve parameters")
        c = coeff if isinstance(coeff, RatFunc) else RatFunc(ctx, coeff)
        return cls(ctx, nz, [OpTerm(c, perm, AffineSub(tuple(scale), tuple(offset)))])

    @classmethod
    def identity(cls, ctx, nz: int = 2) -> "FieldOp":
        return cls.symbol(ctx, nz)

    @classmethod
    def zero(cls, ctx, nz: int = 2) -> "FieldOp":
        return cls(ctx, nz, ())

    @classmethod
    def swap(cls, ctx, nz: int = 2, legs: tuple[int, int] = (1, 2)) -> "FieldOp":
        """Transposition of two z-variables (``P`` for the default legs)."""
        perm = list(range(nz))
        a, b = legs[0] - 1, legs[1] - 1
        perm[a], perm[b] = perm[b], perm[a]
        return cls.symbol(ctx, nz, perm)

    # algebra --------------------------------------------------------------

    def _same(self, other: "FieldOp"):
        if (self.ctx, self.nz) != (other.ctx, other.nz):
            raise ContextMismatch(f"operators over {self.ctx} and {other.ctx}")

    def __add__(self, other: "FieldOp") -> "FieldOp":
        self._same(other)
        return FieldOp(self.ctx, self.nz, self.terms + other.terms)

    def __neg__(self) -> "FieldOp":
        return FieldOp(self.ctx, self.nz, [OpTerm(-t.coeff, t.perm, t.sub) for t in self.terms])

    def __sub__(self, other: "FieldOp") -> "FieldOp":
        return self + (-other)

    def __rmul__(self, c) -> "FieldOp":
        """Left multiplication by a coefficient function."""
        if not isinstance(c, RatFunc):
            c = RatFunc(self.ctx, c)
        return FieldOp(self.ctx, self.nz, [OpTerm(c * t.coeff, t.perm, t.sub) for t in self.terms])

    def __matmul__(self, other: "FieldOp") -> "FieldOp":
        return compose(self, other)

    def __call__(self, f):
        return apply(self, f)

    def recast(self, ctx: Iterable[str]) -> "FieldOp":
        """The same operator over a larger (or reordered) parameter context."""
        ctx = tuple(ctx)
        terms = [
            OpTerm(
                t.coeff.recast(ctx),
                t.perm,
                AffineSub(tuple(s.recast(ctx) for s in t.sub.scale), tuple(o.recast(ctx) for o in t.sub.offset)),
            )
            for t in self.terms
        ]
        return FieldOp(ctx, self.nz, terms)

    def inverse(self) -> "FieldOp":
        """Inverse of a single-term operator."""
        if len(self.terms) != 1:
            raise ValueError("only single-term operators are inverted formally")
        (t,) = self.terms
        perm = tuple(t.perm.index(m) for m in range(self.nz))
        scale, offset = [], []
        for m in range(self.nz):
            s, o = t.sub.scale[t.perm[m]], t.sub.offset[t.perm[m]]
            scale.append(s.inverse())
            offset.append(-o / s)
        inv_sym = OpTerm(RatFunc(self.ctx, 1), perm, AffineSub(tuple(scale), tuple(offset)))
        coeff = inv_sym.act(t.coeff.inverse(), self.ctx)
        return FieldOp(self.ctx, self.nz, [OpTerm(coeff, perm, inv_sym.sub)])

    def to_json(self) -> list[dict]:
        out = []
        for t in self.terms:
            item = {
                "swap": t.swap,
                "sub": {
                    z: [str(t.sub.scale[j]), str(t.sub.offset[j])] for j, z in enumerate(self.zvars)
                },
                "coeff": str(t.coeff),
            }
            if self.nz != 2:
                item["perm"] = [p + 1 for p in t.perm]
            out.append(item)
        return out

    @classmethod
    def from_json(cls, data: list[dict], ctx, nz: int = 2) -> "FieldOp":
        ctx = tuple(ctx)
        terms = []
        for item in data:
            if "perm" in item:
                perm = tuple(p - 1 for p in item["perm"])
            else:
                perm = (1, 0) if item["swap"] else (0, 1)
            scale = tuple(RatFunc(ctx, item["sub"][z][0]) for z in zvars(nz))
            offset = tuple(RatFunc(ctx, item["sub"][z][1]) for z in zvars(nz))
            terms.append(OpTerm(RatFunc(ctx, item["coeff"]), perm, AffineSub(scale, offset)))
        return cls(ctx, nz, terms)

    def __repr__(self):
        return f"<FieldOp over {self.ctx} with {len(self.terms)} terms>"


def compose(a: FieldOp, b: FieldOp) -> FieldOp:
    """Operator product: ``compose(a, b)(f) == a(b(f))``."""
    a._same(b)
    ctx, nz = a.ctx, a.nz
    terms = []
    for ta in a.terms:
        inv = [ta.perm.index(j) for j in range(nz)]
        for tb in b.terms:
            coeff = ta.coeff * ta.act(tb.coeff, ctx)
            perm = tuple(ta.perm[tb.perm[i]] for i in range(nz))
            scale, offset = [], []
            for j in range(nz):
                su, ou = tb.sub.scale[inv[j]], tb.sub.offset[inv[j]]
                scale.append(su * ta.sub.scale[j])
                offset.append(su * ta.sub.offset[j] + ou)
            terms.append(OpTerm(coeff, perm, AffineSub(tuple(scale), tuple(offset))))
    return FieldOp(ctx, nz, terms)


def _as_ratfunc(op: FieldOp, f) -> RatFunc:
    if isinstance(f, RatFunc):
        if f.ctx != op.ctx:
            raise ContextMismatch(f"argument over {f.ctx}, operator over {op.ctx}")
        return f
    if isinstance(f, MPoly):
        if f.ctx != op.ctx:
            raise ContextMismatch(f"argument over {f.ctx}, operator over {op.ctx}")
        return RatFunc(op.ctx, f)
    return RatFunc(op.ctx, f)


def apply(op: FieldOp, f) -> RatFunc:
    """Image of a polynomial; the result's denominator is free of z-variables."""
    g = _as_ratfunc(op, f)
    if any(any(e[: op.nz]) for e in g.den.terms):
        raise ValueError("apply expects a polynomial in the z-variables")
    out = rsum((t.coeff * t.act(g, op.ctx) for t in op.terms), op.ctx) if op.terms else RatFunc(op.ctx, 0)
    bad = out.den.terms
    nz = op.nz
    if any(any(e[:nz]) for e in bad):
        raise NotDivisible(f"operator does not map {g} to a polynomial: image {out}")
    return out


def embed_leg(op: FieldOp, legs: tuple[int, int], total: int = 3) -> FieldOp:
    """Let a two-variable operator act on ``(z_legs[0], z_legs[1])`` of ``total`` variables."""
    if op.nz != 2:
        raise ValueError("embed_leg expects a two-variable operator")
    l0, l1 = legs[0] - 1, legs[1] - 1
    if l0 == l1 or not (0 <= l0 < total and 0 <= l1 < total):
        raise ValueError(f"bad legs {legs} for {total} variables")
    L = (l0, l1)
    ctx = zvars(total) + op.params
    rename = {"z1": f"z{l0 + 1}", "z2": f"z{l1 + 1}"}
    one, zero = RatFunc(ctx, 1), RatFunc(ctx, 0)
    terms = []
    for t in op.terms:
        perm = list(range(total))
        scale = [one] * total
        offset = [zero] * total
        for s in range(2):
            perm[L[s]] = L[t.perm[s]]
            scale[L[s]] = t.sub.scale[s].rename(rename, ctx)
            offset[L[s]] = t.sub.offset[s].rename(rename, ctx)
        terms.append(
            OpTerm(t.coeff.rename(rename, ctx), tuple(perm), AffineSub(tuple(scale), tuple(offset)))
        )
    return FieldOp(ctx, total, terms)


def _split(image: RatFunc, nz: int, params: tuple[str, ...]) -> dict[tuple[int, ...], RatFunc]:
    """Coefficients (rational in the parameters) of each z-monomial of an image."""
    pring = poly_ring(params)
    groups: dict[tuple[int, ...], dict] = {}
    for e, c in image._num.items():
        groups.setdefault(e[:nz], {})[e[nz:]] = c
    den = pring.from_dict({e[nz:]: c for e, c in image._den.items()})
    out = {}
    for zexp, d in groups.items():
        out[zexp] = RatFunc._make(params, pring.from_dict(d), den)
    return out


def _monomial(ctx, exps: Sequence[int]) -> RatFunc:
    full = tuple(exps) + (0,) * (len(ctx) - len(exps))
    return RatFunc(ctx, MPoly(ctx, {full: 1}))


def restrict(op: FieldOp, n: int) -> TensorMat:
    """Matrix of ``op`` on polynomials of degree < n in each z-variable.

    Basis: ``e_i <-> z^(i-1)``, one leg per z-variable.
    """
    params = op.params
    entries = {}
    for exps in itertools.product(range(n), repeat=op.nz):
        image = apply(op, _monomial(op.ctx, exps))
        for zexp, c in _split(image, op.nz, params).items():
            if max(zexp) >= n:
                raise NotClosed(f"image of monomial {exps} has z-exponents {zexp} (n={n})")
            row = tuple(k + 1 for k in zexp)
            col = tuple(k + 1 for k in exps)
            entries[(flat_index(row, n), flat_index(col, n))] = c
    return TensorMat._from_flat(n, op.nz, params, entries)


def degree_bound(n: int, sub_degree: int = 1) -> int:
    """Monomial degree up to which two operators are compared."""
    return 2 * (sub_degree + n)


def action_difference(a: FieldOp, b: FieldOp, degree: int) -> dict[tuple[int, ...], RatFunc]:
    """Nonzero ``(a - b)(z^e)`` for all exponent vectors with entries <= degree."""
    a._same(b)
    diff = a - b
    out = {}
    for exps in itertools.product(range(degree + 1), repeat=a.nz):
        img = apply(diff, _monomial(a.ctx, exps))
        if not img.is_zero():
            out[exps] = img
    return out
