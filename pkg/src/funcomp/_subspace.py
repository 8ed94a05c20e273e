"""Subspaces of F_q^N for the code checks and the linear search.

Two interchangeable backends share one interface.  ``GF2Ops`` stores a
vector as an int bitset (bit c is coordinate c) and runs on the compiled
kernels; ``TupleOps`` stores tuples and works for any q.  A ``Span`` is a
fully reduced basis with its pivots, so equal subspaces compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import _kernel
from .ffield import Field, gf, rref_rows


@dataclass(frozen=True)
class Span:
    basis: tuple
    pivots: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)


class LiftError(ValueError):
    pass


class GF2Ops:
    q = 2

    def __init__(self, N: int):
        self.N = N
        self.field = gf(2)
        self.zero = 0

    def unit(self, c: int) -> int:
        return 1 << c

    def from_tuple(self, t: Sequence[int]) -> int:
        v = 0
        for c, x in enumerate(t):
            if x:
                v |= 1 << c
        return v

    def to_tuple(self, v: int) -> tuple[int, ...]:
        return tuple((v >> c) & 1 for c in range(self.N))

    def span(self, vecs) -> Span:
        b, p = _kernel.gf2_rref(list(vecs))
        return Span(tuple(b), tuple(p))

    def reduce(self, v: int, s: Span) -> int:
        return _kernel.gf2_reduce(v, list(s.basis), list(s.pivots))

    def contains(self, s: Span, v: int) -> bool:
        return self.reduce(v, s) == 0

    def le(self, a: Span, b: Span) -> bool:
        return all(self.reduce(v, b) == 0 for v in a.basis)

    def join(self, a: Span, b: Span) -> Span:
        return self.span(list(a.basis) + list(b.basis))

    def meet(self, a: Span, b: Span) -> Span:
        # Zassenhaus: rows (u|u) and (v|0), the low half eliminated first.
        N = self.N
        rows = [u | (u << N) for u in a.basis] + list(b.basis)
        basis, pivots = _kernel.gf2_rref(rows)
        return self.span([r >> N for r, p in zip(basis, pivots) if p >= N])

    def coord_span(self, coords) -> Span:
        return self.span([1 << c for c in coords])

    def kill(self, v: int, coords) -> int:
        for c in coords:
            v &= ~(1 << c)
        return v

    def lift(self, targets, coords, R: Span) -> list[int]:
        """For each target t, some v supported on ``coords`` with v = t mod R."""
        N = self.N
        rows = [self.reduce(1 << c, R) | (1 << (c + N)) for c in coords]
        basis, pivots = _kernel.gf2_rref(rows)
        low = [(b, p) for b, p in zip(basis, pivots) if p < N]
        out = []
        for t in targets:
            r = self.reduce(t, R)
            for b, p in low:
                if (r >> p) & 1:
                    r ^= b
            if r & ((1 << N) - 1):
                raise LiftError("target not reachable from the given coordinates")
            out.append(r >> N)
        return out


class TupleOps:
    def __init__(self, N: int, field: Field):
        self.N = N
        self.field = field
        self.q = field.q
        self.zero = (0,) * N

    def unit(self, c: int) -> tuple[int, ...]:
        return tuple(int(i == c) for i in range(self.N))

    def from_tuple(self, t: Sequence[int]) -> tuple[int, ...]:
        return tuple(t)

    def to_tuple(self, v) -> tuple[int, ...]:
        return tuple(v)

    def _rref(self, vecs, ncols):
        return rref_rows(list(vecs), self.field, ncols)

    def span(self, vecs) -> Span:
        b, p = self._rref(vecs, self.N)
        return Span(tuple(b), tuple(p))

    def _reduce_with(self, v, basis, pivots):
        f = self.field
        w = list(v)
        for b, p in zip(basis, pivots):
            c = w[p]
            if c:
                nc = f.neg(c)
                w = [f.add(x, f.mul(nc, y)) for x, y in zip(w, b)]
        return tuple(w)

    def reduce(self, v, s: Span):
        return self._reduce_with(v, s.basis, s.pivots)

    def contains(self, s: Span, v) -> bool:
        return not any(self.reduce(v, s))

    def le(self, a: Span, b: Span) -> bool:
        return all(self.contains(b, v) for v in a.basis)

    def join(self, a: Span, b: Span) -> Span:
        return self.span(list(a.basis) + list(b.basis))

    def meet(self, a: Span, b: Span) -> Span:
        N = self.N
        rows = [tuple(u) + tuple(u) for u in a.basis] + [tuple(v) + self.zero for v in b.basis]
        basis, pivots = self._rref(rows, 2 * N)
        return self.span([r[N:] for r, p in zip(basis, pivots) if p >= N])

    def coord_span(self, coords) -> Span:
        return self.span([self.unit(c) for c in coords])

    def kill(self, v, coords):
        cs = set(coords)
        return tuple(0 if i in cs else x for i, x in enumerate(v))

    def lift(self, targets, coords, R: Span) -> list:
        N, f = self.N, self.field
        rows = [self.reduce(self.unit(c), R) + self.unit(c) for c in coords]
        basis, pivots = self._rref(rows, 2 * N)
        low = [(b, p) for b, p in zip(basis, pivots) if p < N]
        out = []
        for t in targets:
            r = list(self.reduce(t, R)) + [0] * N
            for b, p in low:
                c = r[p]
                if c:
                    nc = f.neg(c)
                    r = [f.add(x, f.mul(nc, y)) for x, y in zip(r, b)]
            if any(r[:N]):
                raise LiftError("target not reachable from the given coordinates")
            out.append(tuple(f.neg(x) for x in r[N:]))
        return out


def ops_for(field: Field, N: int):
    return GF2Ops(N) if field.q == 2 else TupleOps(N, field)
