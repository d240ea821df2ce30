"""Exact coefficient arithmetic.

Everything here lives over the rationals.  A *context* is an ordered tuple of
variable names; polynomials and rational functions carry their context and
refuse to combine with values from a different one (use ``recast`` to move a
value between contexts explicitly).

Sparse storage, multiplication and multivariate gcd are delegated to sympy's
``PolyElement`` over ``QQ``.  This module owns the canonical form:

* ``gcd(num, den) = 1``;
* ``den`` has leading coefficient 1 in graded-lexicographic order on the
  declared variable order;
* zero is ``0/1``.

so equal values have equal representations.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import ContextMismatch, GrammarError, NotDivisible, PolePersists, ZeroDenominator

Rat = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "Rat",
    "MPoly",
    "RatFunc",
    "poly_ring",
    "ratfunc_make",
    "poly_divide_exact",
    "substitute",
    "limit_subst",
    "parse",
    "rsum",
]


@lru_cache(maxsize=None)
def poly_ring(ctx: tuple[str, ...]) -> PolyRing:
    """The (cached) sympy polynomial ring ``QQ[ctx]`` with grlex order."""
    if len(set(ctx)) != len(ctx):
        raise ValueError(f"duplicate variable in context {ctx}")
    return PolyRing(ctx, QQ, grlex)


def _qq(c: Scalar):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _check(a_ctx, b_ctx):
    if a_ctx != b_ctx:
        raise ContextMismatch(f"context {a_ctx} combined with {b_ctx}")


class MPoly:
    """Multivariate polynomial with rational coefficients over a named context."""

    __slots__ = ("ctx", "_p")

    def __init__(self, ctx: Iterable[str], terms: Mapping[tuple[int, ...], Scalar] | None = None):
        ctx = tuple(ctx)
        ring = poly_ring(ctx)
        data = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(ctx) or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent vector {exps} for context {ctx}")
            if c:
                data[exps] = _qq(c)
        self.ctx = ctx
        self._p = ring.from_dict(data) if data else ring.zero

    @classmethod
    def _wrap(cls, ctx, p: PolyElement) -> "MPoly":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._p = p
        return obj

    @classmethod
    def const(cls, ctx, c: Scalar) -> "MPoly":
        ctx = tuple(ctx)
        return cls._wrap(ctx, poly_ring(ctx).ground_new(_qq(c)))

    @classmethod
    def var(cls, ctx, name: str) -> "MPoly":
        ctx = tuple(ctx)
        return cls._wrap(ctx, poly_ring(ctx).gens[ctx.index(name)])

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {e: _frac(c) for e, c in self._p.items()}

    def is_zero(self) -> bool:
        return not self._p

    def degree(self, name: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self._p:
            return -1
        i = self.ctx.index(name)
        return max(e[i] for e in self._p)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._p), default=-1)

    def _coerce(self, other) -> PolyElement:
        if isinstance(other, MPoly):
            _check(self.ctx, other.ctx)
            return other._p
        if isinstance(other, (int, Fraction)):
            return poly_ring(self.ctx).ground_new(_qq(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MPoly._wrap(self.ctx, self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MPoly._wrap(self.ctx, self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MPoly._wrap(self.ctx, o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MPoly._wrap(self.ctx, self._p * o)

    __rmul__ = __mul__

    def __neg__(self):
        return MPoly._wrap(self.ctx, -self._p)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        return MPoly._wrap(self.ctx, self._p**k)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ctx == other.ctx and self._p == other._p
        if isinstance(other, (int, Fraction)):
            return self._p == poly_ring(self.ctx).ground_new(_qq(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, frozenset(self._p.items())))

    def __str__(self):
        return _format_poly(self._p, self.ctx)

    def __repr__(self):
        return f"MPoly({self.ctx}, {str(self)!r})"


class RatFunc:
    """Canonical reduced fraction ``num/den`` of polynomials over a context."""

    __slots__ = ("ctx", "_num", "_den")

    def __init__(self, ctx: Iterable[str], value: Union[Scalar, str, "RatFunc", MPoly] = 0):
        ctx = tuple(ctx)
        if isinstance(value, str):
            other = parse(value, ctx)
            num, den = other._num, other._den
        elif isinstance(value, RatFunc):
            _check(ctx, value.ctx)
            num, den = value._num, value._den
        elif isinstance(value, MPoly):
            _check(ctx, value.ctx)
            num, den = value._p, poly_ring(ctx).one
        else:
            num, den = poly_ring(ctx).ground_new(_qq(value)), poly_ring(ctx).one
        self.ctx = ctx
        self._num = num
        self._den = den

    # construction helpers -------------------------------------------------

    @classmethod
    def _raw(cls, ctx, num: PolyElement, den: PolyElement) -> "RatFunc":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._num = num
        obj._den = den
        return obj

    @classmethod
    def _normed(cls, ctx, num, den) -> "RatFunc":
        # caller guarantees gcd(num, den) = 1
        if not num:
            ring = poly_ring(ctx)
            return cls._raw(ctx, ring.zero, ring.one)
        lc = den.LC
        if lc != 1:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        return cls._raw(ctx, num, den)

    @classmethod
    def _make(cls, ctx, num: PolyElement, den: PolyElement) -> "RatFunc":
        if not den:
            raise ZeroDenominator("identically zero denominator")
        if num and not den.is_ground:
            _, num, den = num.cofactors(den)
        return cls._normed(ctx, num, den)

    @classmethod
    def var(cls, ctx, name: str) -> "RatFunc":
        ctx = tuple(ctx)
        ring = poly_ring(ctx)
        return cls._raw(ctx, ring.gens[ctx.index(name)], ring.one)

    @classmethod
    def const(cls, ctx, c: Scalar) -> "RatFunc":
        return cls(ctx, c)

    @property
    def num(self) -> MPoly:
        return MPoly._wrap(self.ctx, self._num)

    @property
    def den(self) -> MPoly:
        return MPoly._wrap(self.ctx, self._den)

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._num

    def is_polynomial(self) -> bool:
        return self._den.is_ground

    def is_constant(self) -> bool:
        return self._num.is_ground and self._den.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return _frac(self._num.LC) if self._num else Fraction(0)

    def free_vars(self) -> set[str]:
        used = set()
        for p in (self._num, self._den):
            for e in p:
                used.update(self.ctx[i] for i, k in enumerate(e) if k)
        return used

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            _check(self.ctx, other.ctx)
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.ctx, other)
        if isinstance(other, MPoly):
            return RatFunc(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self._num, self._den, o._num, o._den
        if b == d:
            if b.is_ground:
                return RatFunc._raw(self.ctx, a + c, b)
            return RatFunc._make(self.ctx, a + c, b)
        # one side polynomial: (a*d + c)/d is already reduced
        if b.is_ground:
            return RatFunc._normed(self.ctx, a * d + c, d)
        if d.is_ground:
            return RatFunc._normed(self.ctx, c * b + a, b)
        g = b.gcd(d)
        if g.is_ground:
            return RatFunc._normed(self.ctx, a * d + c * b, b * d)
        bq, dq = b.exquo(g), d.exquo(g)
        t = a * dq + c * bq
        g2 = t.gcd(g)
        if not g2.is_ground:
            t = t.exquo(g2)
            g = g.exquo(g2)
        return RatFunc._normed(self.ctx, t, bq * dq * g)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(self.ctx, -self._num, self._den)

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self._num, self._den, o._num, o._den
        if not a or not c:
            return RatFunc(self.ctx, 0)
        if not d.is_ground:
            g = a.gcd(d)
            if not g.is_ground:
                a, d = a.exquo(g), d.exquo(g)
        if not b.is_ground:
            g = c.gcd(b)
            if not g.is_ground:
                c, b = c.exquo(g), b.exquo(g)
        return RatFunc._normed(self.ctx, a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self._num:
            raise ZeroDenominator("inverse of zero")
        return RatFunc._normed(self.ctx, self._den, self._num)

    def __truediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._normed(self.ctx, self._num**k, self._den**k) if k else RatFunc(self.ctx, 1)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.ctx == other.ctx and self._num == other._num and self._den == other._den
        if isinstance(other, (int, Fraction)):
            return self._den == 1 and self._num == poly_ring(self.ctx).ground_new(_qq(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, frozenset(self._num.items()), frozenset(self._den.items())))

    def __bool__(self):
        return bool(self._num)

    # context moves --------------------------------------------------------

    def recast(self, ctx: Iterable[str]) -> "RatFunc":
        """The same value viewed in another context containing all its free variables."""
        ctx = tuple(ctx)
        if ctx == self.ctx:
            return self
        return self.rename({}, ctx)

    def rename(self, mapping: Mapping[str, str], ctx: Iterable[str]) -> "RatFunc":
        """Rename variables (``old -> new``, others keep their name) into context ``ctx``."""
        ctx = tuple(ctx)
        used = self.free_vars()
        pos = {}
        for i, v in enumerate(self.ctx):
            target = mapping.get(v, v)
            if v in used:
                if target not in ctx:
                    raise ContextMismatch(f"variable {target!r} not in context {ctx}")
                pos[i] = ctx.index(target)
        ring = poly_ring(ctx)

        def move(p):
            out = {}
            for e, c in p.items():
                ne = [0] * len(ctx)
                for i, k in enumerate(e):
                    if k:
                        ne[pos[i]] += k
                out[tuple(ne)] = c
            return ring.from_dict(out) if out else ring.zero

        num, den = move(self._num), move(self._den)
        if len(set(pos.values())) < len(pos):
            return RatFunc._make(ctx, num, den)
        return RatFunc._normed(ctx, num, den)

    def __str__(self):
        if self._den == 1:
            return _format_poly(self._num, self.ctx)
        return f"({_format_poly(self._num, self.ctx)})/({_format_poly(self._den, self.ctx)})"

    def __repr__(self):
        return f"RatFunc({self.ctx}, {str(self)!r})"


def rsum(values: Iterable[RatFunc], ctx=None) -> RatFunc:
    """Sum of rational functions, adding numerators over shared denominators first."""
    buckets: dict = {}
    for v in values:
        if ctx is None:
            ctx = v.ctx
        else:
            _check(ctx, v.ctx)
        key = v._den
        hit = buckets.get(key)
        buckets[key] = v._num if hit is None else hit + v._num
    if ctx is None:
        raise ValueError("rsum of an empty sequence needs a context")
    total = RatFunc(ctx, 0)
    for den, num in buckets.items():
        if num:
            total = total + (RatFunc._raw(ctx, num, den) if den.is_ground else RatFunc._make(ctx, num, den))
    return total


def ratfunc_make(num: MPoly, den: MPoly) -> RatFunc:
    """Canonical reduced fraction ``num/den``; raises ZeroDenominator if ``den == 0``."""
    _check(num.ctx, den.ctx)
    return RatFunc._make(num.ctx, num._p, den._p)


def poly_divide_exact(f: MPoly, g: MPoly) -> MPoly:
    _check(f.ctx, g.ctx)
    if g.is_zero():
        raise ZeroDenominator("division by the zero polynomial")
    if f.is_zero():
        return f
    (q,), r = f._p.div([g._p])
    if r:
        raise NotDivisible(f"{g} does not divide {f} (remainder {_format_poly(r, f.ctx)})")
    return MPoly._wrap(f.ctx, q)


def _subst_poly(p: PolyElement, ctx, values: dict[int, RatFunc]):
    """Simultaneous substitution into one polynomial.

    Returns an unreduced pair (num, den) with ``den = prod D_i**deg_i``.
    """
    ring = poly_ring(ctx)
    if not values or not p:
        return p, ring.one
    degs = {i: max(e[i] for e in p) for i in values}
    npow: dict = {}
    dpow: dict = {}

    def power(cache, base, i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = base**k
        return cache[key]

    num = ring.zero
    for e, c in p.items():
        base = list(e)
        term = None
        for i, v in values.items():
            k = e[i]
            base[i] = 0
            factor = power(npow, v._num, i, k) if k else None
            # canonical denominators are monic, so a ground one is exactly 1
            if not v._den.is_ground and degs[i] - k:
                dp = power(dpow, v._den, i, degs[i] - k)
                factor = dp if factor is None else factor * dp
            if factor is not None:
                term = factor if term is None else term * factor
        mono = ring.from_dict({tuple(base): c})
        num += mono if term is None else mono * term
    den = ring.one
    for i, v in values.items():
        if degs[i] and v._den != 1:
            den *= v._den ** degs[i]
    return num, den


def _coerce_value(ctx, value) -> RatFunc:
    if isinstance(value, RatFunc):
        _check(ctx, value.ctx)
        return value
    return RatFunc(ctx, value)


def substitute(f: RatFunc, assignment: Mapping[str, Union[RatFunc, Scalar, str]]) -> RatFunc:
    """Simultaneously replace variables by rational functions of the same context."""
    ctx = f.ctx
    values = {}
    for name, val in assignment.items():
        if name not in ctx:
            raise ContextMismatch(f"{name!r} not in context {ctx}")
        values[ctx.index(name)] = _coerce_value(ctx, val)
    if not values:
        return f
    n1, d1 = _subst_poly(f._num, ctx, values)
    n2, d2 = _subst_poly(f._den, ctx, values)
    num, den = n1 * d2, d1 * n2
    if not den:
        raise ZeroDenominator(f"denominator of {f} vanishes identically under the substitution")
    return RatFunc._make(ctx, num, den)


def limit_subst(f: RatFunc, var: str, value: Scalar) -> RatFunc:
    """Specialize ``var`` to ``value``; the limit exists because ``f`` is reduced."""
    ctx = f.ctx
    v = {ctx.index(var): RatFunc(ctx, value)}
    den, _ = _subst_poly(f._den, ctx, v)
    if not den:
        raise PolePersists(f"{f} has a pole at {var}={value}")
    num, _ = _subst_poly(f._num, ctx, v)
    return RatFunc._make(ctx, num, den)


# text grammar ---------------------------------------------------------------


def _format_poly(p: PolyElement, ctx) -> str:
    if not p:
        return "0"
    out = []
    for e, c in p.terms():
        c = _frac(c)
        mono = "*".join(
            name if k == 1 else f"{name}^{k}" for name, k in zip(ctx, e) if k
        )
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, op = m.groups()
        if num is not None:
            toks.append(("int", num))
        elif name is not None:
            toks.append(("name", name))
        elif op in "+-*/^()":
            toks.append(("op", op))
        else:
            raise GrammarError(f"unexpected character {op!r} in {text!r}")
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, ctx):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if tok[0] is None or (op is not None and tok != ("op", op)):
            raise GrammarError(f"expected {op or 'token'} at position {self.i} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> RatFunc:
        if not self.toks:
            raise GrammarError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise GrammarError(f"trailing input in {self.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            w = self.unary()
            v = v * w if op == "*" else v / w
        return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "int":
                raise GrammarError(f"exponent must be an integer in {self.text!r}")
            return base ** (sign * int(val))
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return RatFunc(self.ctx, int(val))
        if kind == "name":
            if val not in self.ctx:
                raise GrammarError(f"unknown variable {val!r} (context {self.ctx})")
            return RatFunc.var(self.ctx, val)
        if val == "(":
            v = self.expr()
            self.take(")")
            return v
        raise GrammarError(f"unexpected {val!r} in {self.text!r}")


def parse(text: str, ctx: Iterable[str]) -> RatFunc:
    """Parse the shared text grammar into a canonical RatFunc over ``ctx``."""
    return _Parser(text, tuple(ctx)).parse()


def free_names(text: str) -> list[str]:
    """Variable names appearing in an expression, in order of first appearance."""
    seen = []
    for kind, val in _tokenize(text):
        if kind == "name" and val not in seen:
            seen.append(val)
    return seen
