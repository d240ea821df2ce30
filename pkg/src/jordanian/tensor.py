"""Sparse exact matrices on tensor powers of an ``n``-dimensional space.

Basis vectors are 1-based multi-indices; ``e_i (x) e_j`` has flat position
``(i-1)*n + (j-1)`` (leg 1 most significant).  An entry ``(row, col)`` is the
coefficient of basis vector ``row`` in the image of basis vector ``col``.
Internally entries are keyed by 0-based flat positions.
"""
from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import ContextMismatch, DimensionMismatch
from .exact import RatFunc, limit_subst, parse, rsum, substitute

__all__ = ["TensorMat", "flat_index", "multi_index"]


def flat_index(idx: Sequence[int], n: int) -> int:
    """0-based flat position of a 1-based multi-index."""
    pos = 0
    for i in idx:
        if not 1 <= i <= n:
            raise IndexError(f"index {i} outside 1..{n}")
        pos = pos * n + (i - 1)
    return pos


def multi_index(pos: int, n: int, legs: int) -> tuple[int, ...]:
    out = []
    for _ in range(legs):
        pos, r = divmod(pos, n)
        out.append(r + 1)
    return tuple(reversed(out))


class TensorMat:
    """Exact matrix on ``V_n`` tensored ``legs`` times, entries RatFuncs over ``ring``."""

    __slots__ = ("n", "legs", "ring", "_e")

    def __init__(self, n: int, legs: int, ring: Iterable[str] = (), entries: Mapping | None = None):
        self.n = int(n)
        self.legs = int(legs)
        self.ring = tuple(ring)
        if self.n < 1 or self.legs < 1:
            raise ValueError("n and legs must be positive")
        e = {}
        for (row, col), v in (entries or {}).items():
            if not isinstance(v, RatFunc):
                v = RatFunc(self.ring, v)
            elif v.ctx != self.ring:
                raise ContextMismatch(f"entry over {v.ctx} in matrix over {self.ring}")
            if len(row) != self.legs or len(col) != self.legs:
                raise DimensionMismatch(f"multi-index length differs from legs={self.legs}")
            if v:
                e[(flat_index(row, self.n), flat_index(col, self.n))] = v
        self._e = e

    @classmethod
    def _from_flat(cls, n, legs, ring, e: dict) -> "TensorMat":
        obj = cls.__new__(cls)
        obj.n, obj.legs, obj.ring = n, legs, tuple(ring)
        obj._e = {k: v for k, v in e.items() if v}
        return obj

    def _like(self, e: dict, ring=None) -> "TensorMat":
        return type(self)._from_flat(self.n, self.legs, self.ring if ring is None else ring, e)

    # constructors ---------------------------------------------------------

    @classmethod
    def identity(cls, n: int, legs: int = 2, ring=()) -> "TensorMat":
        one = RatFunc(tuple(ring), 1)
        return cls._from_flat(n, legs, ring, {(i, i): one for i in range(n**legs)})

    @classmethod
    def zero(cls, n: int, legs: int = 2, ring=()) -> "TensorMat":
        return cls._from_flat(n, legs, ring, {})

    @classmethod
    def permutation(cls, n: int, perm: Sequence[int], ring=()) -> "TensorMat":
        """Leg permutation ``v_1 (x) .. (x) v_k -> v_perm[0] (x) .. (x) v_perm[k-1]``.

        ``perm`` holds 1-based leg labels.
        """
        legs = len(perm)
        one = RatFunc(tuple(ring), 1)
        e = {}
        for col in itertools.product(range(1, n + 1), repeat=legs):
            row = tuple(col[p - 1] for p in perm)
            e[(flat_index(row, n), flat_index(col, n))] = one
        return cls._from_flat(n, legs, ring, e)

    @classmethod
    def swap(cls, n: int, ring=()) -> "TensorMat":
        return cls.permutation(n, (2, 1), ring)

    @classmethod
    def unit(cls, n: int, pairs: Sequence[tuple[int, int]], coeff=1, ring=()) -> "TensorMat":
        """Tensor product of matrix units ``E_{a1 b1} (x) E_{a2 b2} (x) ...``."""
        row = tuple(a for a, _ in pairs)
        col = tuple(b for _, b in pairs)
        return cls(n, len(pairs), ring, {(row, col): coeff})

    # access ---------------------------------------------------------------

    def __getitem__(self, key) -> RatFunc:
        row, col = key
        k = (flat_index(row, self.n), flat_index(col, self.n))
        v = self._e.get(k)
        return v if v is not None else RatFunc(self.ring, 0)

    def items(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], RatFunc]]:
        """Nonzero entries in (row, col) order of the flat positions."""
        for (r, c) in sorted(self._e):
            yield multi_index(r, self.n, self.legs), multi_index(c, self.n, self.legs), self._e[(r, c)]

    @property
    def nnz(self) -> int:
        return len(self._e)

    @property
    def dim(self) -> int:
        return self.n**self.legs

    def is_zero(self) -> bool:
        return not self._e

    def first_nonzero(self):
        if not self._e:
            return None
        r, c = min(self._e)
        return multi_index(r, self.n, self.legs), multi_index(c, self.n, self.legs), self._e[(r, c)]

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "TensorMat"):
        if (self.n, self.legs) != (other.n, other.legs):
            raise DimensionMismatch(
                f"n={self.n},legs={self.legs} vs n={other.n},legs={other.legs}"
            )
        if self.ring != other.ring:
            raise ContextMismatch(f"ring {self.ring} vs {other.ring}")

    def __add__(self, other: "TensorMat") -> "TensorMat":
        self._check(other)
        e = dict(self._e)
        for k, v in other._e.items():
            e[k] = e[k] + v if k in e else v
        return self._like(e)

    def __neg__(self) -> "TensorMat":
        return self._like({k: -v for k, v in self._e.items()})

    def __sub__(self, other: "TensorMat") -> "TensorMat":
        return self + (-other)

    def scale(self, c) -> "TensorMat":
        if not isinstance(c, RatFunc):
            c = RatFunc(self.ring, c)
        return self._like({k: v * c for k, v in self._e.items()})

    def __rmul__(self, c) -> "TensorMat":
        return self.scale(c)

    def __matmul__(self, other: "TensorMat") -> "TensorMat":
        self._check(other)
        by_row: dict[int, list] = {}
        for (k, j), v in other._e.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], list] = {}
        for (i, k), a in self._e.items():
            for j, b in by_row.get(k, ()):
                acc.setdefault((i, j), []).append(a * b)
        return self._like({key: rsum(vals, self.ring) for key, vals in acc.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorMat):
            return NotImplemented
        return (self.n, self.legs, self.ring) == (other.n, other.legs, other.ring) and self._e == other._e

    __hash__ = None

    def map(self, fn: Callable[[RatFunc], RatFunc], ring=None) -> "TensorMat":
        return self._like({k: fn(v) for k, v in self._e.items()}, ring)

    def recast(self, ring: Iterable[str]) -> "TensorMat":
        ring = tuple(ring)
        return self.map(lambda v: v.recast(ring), ring)

    def subs(self, assignment: Mapping) -> "TensorMat":
        return self.map(lambda v: substitute(v, assignment))

    def limit(self, var: str, value) -> "TensorMat":
        """Entrywise specialization ``var -> value``; raises PolePersists on a genuine pole."""
        return self.map(lambda v: limit_subst(v, var, value))

    def transpose(self) -> "TensorMat":
        return self._like({(c, r): v for (r, c), v in self._e.items()})

    # leg manipulation -----------------------------------------------------

    def place(self, legs: Sequence[int], total: int) -> "TensorMat":
        """Embed a ``k``-leg matrix acting on the given 1-based legs of ``total`` legs."""
        legs = tuple(legs)
        if len(legs) != self.legs or len(set(legs)) != len(legs) or max(legs) > total:
            raise DimensionMismatch(f"cannot place {self.legs}-leg matrix on legs {legs} of {total}")
        rest = [t for t in range(1, total + 1) if t not in legs]
        n = self.n
        e = {}
        items = list(self.items())
        for other in itertools.product(range(1, n + 1), repeat=len(rest)):
            for row, col, v in items:
                R = [0] * total
                C = [0] * total
                for pos, a, b in zip(legs, row, col):
                    R[pos - 1], C[pos - 1] = a, b
                for pos, k in zip(rest, other):
                    R[pos - 1] = C[pos - 1] = k
                e[(flat_index(R, n), flat_index(C, n))] = v
        return type(self)._from_flat(n, total, self.ring, e)

    def flip(self) -> "TensorMat":
        """Swap the two legs: ``P M P``."""
        if self.legs != 2:
            raise DimensionMismatch("flip needs a 2-leg matrix")
        n = self.n

        def sw(pos):
            a, b = divmod(pos, n)
            return b * n + a

        return self._like({(sw(r), sw(c)): v for (r, c), v in self._e.items()})

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "legs": self.legs,
            "ring": list(self.ring),
            "entries": [
                {"row": list(r), "col": list(c), "coeff": str(v)} for r, c, v in self.items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> "TensorMat":
        ring = tuple(data["ring"])
        entries = {
            (tuple(it["row"]), tuple(it["col"])): parse(it["coeff"], ring) for it in data["entries"]
        }
        return cls(data["n"], data["legs"], ring, entries)

    @classmethod
    def from_json(cls, text: str) -> "TensorMat":
        return cls.from_dict(json.loads(text))

    def to_latex(self) -> str:
        rows = []
        for r in range(self.dim):
            rows.append(" & ".join(str(self._e.get((r, c), 0)) for c in range(self.dim)))
        body = " \\\\\n".join(rows)
        return "\\begin{pmatrix}\n" + body + "\n\\end{pmatrix}\n"

    def __repr__(self):
        return f"<{type(self).__name__} n={self.n} legs={self.legs} ring={self.ring} nnz={self.nnz}>"

    def __str__(self):
        lines = [repr(self)]
        for r, c, v in self.items():
            lines.append(f"  {r} <- {c}: {v}")
        return "\n".join(lines)


def matrix_from_images(n: int, legs: int, ring, images: Mapping[tuple[int, ...], Mapping]) -> TensorMat:
    """Build a matrix from ``{col: {row: coeff}}``."""
    entries = {}
    for col, img in images.items():
        for row, v in img.items():
            entries[(tuple(row), tuple(col))] = v
    return TensorMat(n, legs, ring, entries)


def scalar_matrix(n: int, legs: int, c, ring=()) -> TensorMat:
    if not isinstance(c, RatFunc):
        c = RatFunc(tuple(ring), Fraction(c) if not isinstance(c, str) else c)
    return TensorMat.identity(n, legs, ring).scale(c)
