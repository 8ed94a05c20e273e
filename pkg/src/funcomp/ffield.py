"""Exact arithmetic and linear algebra over GF(q), q a prime power up to 256.

Elements are canonical integers in ``[0, q)``: the base-p digits of the
integer are the coefficients of the polynomial representative (constant
term first).  Extension fields use a fixed irreducible reduction
polynomial per ``(p, e)``, checked for irreducibility when the field is
built.

All matrices are immutable.  Gaussian elimination scans columns left to
right and picks the first row with a nonzero entry, so results never
depend on anything but the input.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from . import _kernel

__all__ = [
    "Field",
    "FieldElement",
    "Matrix",
    "FieldError",
    "DimensionMismatch",
    "gf",
    "rank",
    "row_reduce",
    "row_space_contains",
    "invertible",
    "multiply",
    "solve",
]


class FieldError(ValueError):
    """Unsupported order or malformed field data."""


class DimensionMismatch(ValueError):
    """Operand shapes are incompatible."""


# Reduction polynomials, coefficients from x^0 up to the monic leading term.
_REDUCTION = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise FieldError(f"field order must be >= 2, got {q}")
    for p in range(2, q + 1):
        if q % p == 0:
            if not _is_prime(p):  # pragma: no cover - smallest divisor is prime
                break
            e, rest = 0, q
            while rest % p == 0:
                rest //= p
                e += 1
            if rest != 1:
                raise FieldError(f"{q} is not a prime power")
            return p, e
    raise FieldError(f"{q} is not a prime power")


def _poly_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m over GF(p)."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [x % p for x in a[:dm]] + [0] * max(0, dm - len(a))


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    e = len(poly) - 1
    if poly[-1] != 1:
        return False
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_poly_mod(list(poly), divisor, p)):
                return False
    return True


class Field:
    """GF(p^e) with lookup tables for +, *, negation and inverse."""

    __slots__ = ("p", "e", "q", "reduction", "_add", "_mul", "_neg", "_inv")

    def __init__(self, q: int):
        p, e = _factor_prime_power(q)
        if q > 256:
            raise FieldError(f"field order {q} exceeds the supported limit 256")
        self.p, self.e, self.q = p, e, q
        if e == 1:
            self.reduction = None
        else:
            red = _REDUCTION.get((p, e))
            if red is None or not _is_irreducible(red, p):  # pragma: no cover
                raise FieldError(f"no irreducible polynomial for GF({p}^{e})")
            self.reduction = red
        self._build_tables()

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, d: Sequence[int]) -> int:
        v = 0
        for c in reversed(d):
            v = v * self.p + c
        return v

    def _slow_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self._from_digits(_poly_mod(prod, self.reduction, self.p))

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        digits = [self._digits(a) for a in range(q)]
        add = [0] * (q * q)
        for a in range(q):
            da = digits[a]
            for b in range(q):
                add[a * q + b] = self._from_digits([(x + y) % p for x, y in zip(da, digits[b])])
        self._add = add
        self._neg = [self._from_digits([(-x) % p for x in digits[a]]) for a in range(q)]
        # multiplication through discrete logs of a generator
        gen = None
        for g in range(2, q) if q > 2 else [1]:
            seen, x = 1, g
            while x != 1:
                x = self._slow_mul(x, g)
                seen += 1
            if seen == q - 1:
                gen = g
                break
        if gen is None:
            gen = 1
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._slow_mul(exp[i - 1], gen)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        mul = [0] * (q * q)
        for a in range(1, q):
            la = log[a]
            for b in range(1, q):
                mul[a * q + b] = exp[(la + log[b]) % (q - 1)]
        self._mul = mul
        inv = [0] * q
        for a in range(1, q):
            inv[a] = exp[(-log[a]) % (q - 1)]
        self._inv = inv

    # scalar operations on canonical integers
    def add(self, a: int, b: int) -> int:
        return self._add[a * self.q + b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a * self.q + self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a * self.q + b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def check(self, a: int) -> int:
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.q:
            raise FieldError(f"{a!r} is not an element of GF({self.q})")
        return a

    def element(self, a: int) -> "FieldElement":
        return FieldElement(self.check(a), self)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(a, self) for a in range(self.q)]

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        return (gf, (self.q,))


@lru_cache(maxsize=None)
def gf(q: int) -> Field:
    """The (cached) field of order q."""
    return Field(q)


class FieldElement:
    """A value of GF(q) with operator overloading."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: Field):
        self.value = field.check(value)
        self.field = field

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.value
        return self.field.check(other)

    def __add__(self, other):
        return FieldElement(self.field.add(self.value, self._coerce(other)), self.field)

    def __sub__(self, other):
        return FieldElement(self.field.sub(self.value, self._coerce(other)), self.field)

    def __mul__(self, other):
        return FieldElement(self.field.mul(self.value, self._coerce(other)), self.field)

    def __truediv__(self, other):
        return FieldElement(self.field.div(self.value, self._coerce(other)), self.field)

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.q, self.value))

    def __repr__(self) -> str:
        return f"{self.value}@GF({self.field.q})"


# ---------------------------------------------------------------------------
# elimination on plain row lists


def _pack(row: Sequence[int]) -> int:
    v = 0
    for c, x in enumerate(row):
        if x:
            v |= 1 << c
    return v


def _unpack(v: int, ncols: int) -> tuple[int, ...]:
    return tuple((v >> c) & 1 for c in range(ncols))


def rref_rows(rows: Sequence[Sequence[int]], field: Field, ncols: int) -> tuple[list[tuple[int, ...]], list[int]]:
    """Nonzero rows of the reduced row-echelon form, and pivot columns."""
    if field.q == 2:
        basis, pivots = _kernel.gf2_rref([_pack(r) for r in rows])
        return [_unpack(b, ncols) for b in basis], list(pivots)
    work = [list(r) for r in rows]
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        sel = next((i for i in range(top, len(work)) if work[i][col]), None)
        if sel is None:
            continue
        work[top], work[sel] = work[sel], work[top]
        prow = work[top]
        s = field.inv(prow[col])
        if s != 1:
            prow = work[top] = [field.mul(s, x) for x in prow]
        for i in range(len(work)):
            f = work[i][col]
            if i != top and f:
                nf = field.neg(f)
                work[i] = [field.add(x, field.mul(nf, y)) for x, y in zip(work[i], prow)]
        pivots.append(col)
        top += 1
        if top == len(work):
            break
    return [tuple(r) for r in work[:top]], pivots


class Matrix:
    """Dense immutable matrix over a finite field."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_rref")

    def __init__(self, rows: Iterable[Sequence[int]], field: Field, ncols: Optional[int] = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionMismatch("column count needed for an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged matrix rows")
            for x in r:
                field.check(x)
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows
        self._rref = None

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field) -> "Matrix":
        return cls([(0,) * ncols for _ in range(nrows)], field, ncols)

    @classmethod
    def identity(cls, n: int, field: Field) -> "Matrix":
        return cls([tuple(int(i == j) for j in range(n)) for i in range(n)], field, n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.rows[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix([self.column(j) for j in range(self.ncols)], self.field, self.nrows)

    def select_rows(self, idx: Iterable[int]) -> "Matrix":
        return Matrix([self.rows[i] for i in idx], self.field, self.ncols)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix([tuple(r[j] for j in idx) for r in self.rows], self.field, len(idx))

    def hstack(self, other: "Matrix") -> "Matrix":
        if other.nrows != self.nrows:
            raise DimensionMismatch("hstack needs equal row counts")
        return Matrix([a + b for a, b in zip(self.rows, other.rows)], self.field, self.ncols + other.ncols)

    def _reduced(self):
        if self._rref is None:
            self._rref = rref_rows(self.rows, self.field, self.ncols)
        return self._rref

    def rref(self) -> tuple["Matrix", list[int]]:
        basis, pivots = self._reduced()
        full = list(basis) + [(0,) * self.ncols] * (self.nrows - len(basis))
        return Matrix(full, self.field, self.ncols), list(pivots)

    def rank(self) -> int:
        return len(self._reduced()[0])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"Matrix({self.tolist()}, GF({self.field.q}))"


def rank(M: Matrix) -> int:
    return M.rank()


def row_reduce(M: Matrix) -> Matrix:
    """Reduced row-echelon form, zero rows kept at the bottom."""
    return M.rref()[0]


def row_space_contains(M: Matrix, v: Sequence[int]) -> bool:
    if len(v) != M.ncols:
        raise DimensionMismatch(f"vector length {len(v)} != {M.ncols} columns")
    basis, pivots = M._reduced()
    f = M.field
    w = [f.check(int(x)) for x in v]
    for b, p in zip(basis, pivots):
        c = w[p]
        if c:
            nc = f.neg(c)
            w = [f.add(x, f.mul(nc, y)) for x, y in zip(w, b)]
    return not any(w)


def invertible(Q: Matrix) -> bool:
    return Q.nrows == Q.ncols and Q.rank() == Q.nrows


def multiply(A: Matrix, B: Matrix) -> Matrix:
    if A.ncols != B.nrows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    if A.field != B.field:
        raise FieldError("matrices over different fields")
    f = A.field
    cols = [B.column(j) for j in range(B.ncols)]
    out = []
    for r in A.rows:
        row = []
        for c in cols:
            acc = 0
            for x, y in zip(r, c):
                if x and y:
                    acc = f.add(acc, f.mul(x, y))
            row.append(acc)
        out.append(row)
    return Matrix(out, f, B.ncols)


def solve(A: Matrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Some x with A·x = b, or None.  Free variables are set to zero."""
    if len(b) != A.nrows:
        raise DimensionMismatch(f"right-hand side length {len(b)} != {A.nrows} rows")
    f = A.field
    aug = [r + (f.check(int(y)),) for r, y in zip(A.rows, b)]
    basis, pivots = rref_rows(aug, f, A.ncols + 1)
    if pivots and pivots[-1] == A.ncols:
        return None
    x = [0] * A.ncols
    for row, p in zip(basis, pivots):
        x[p] = row[-1]
    return tuple(x)
