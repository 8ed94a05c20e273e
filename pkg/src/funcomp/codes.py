"""k-shot source codes: representation, admissibility, rates, catalog.

Layout conventions used throughout:

* A source tuple is a vector of length ``k*s``; coordinate ``i*k + t``
  holds symbol ``t`` of source ``i``.
* Encoder j reads its *local* vector: the blocks of the sources in
  Theta(v_j) in increasing source order, each block in shot order.
* A linear encoder is a ``(k*|Theta|) x n_j`` matrix ``M``; its output is
  ``x_local @ M``, so every column is one transmitted linear form.
* A table encoder lists one label per local input, inputs ordered
  lexicographically with the first local coordinate most significant.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import _kernel
from ._subspace import ops_for
from .ffield import Matrix
from .model import OMEGA_2, Model, PermPair, apply_perm, leq, make_model

__all__ = [
    "CodeError",
    "NotAdmissible",
    "UnknownCode",
    "LinearCode",
    "TableCode",
    "RateReport",
    "ConverseReport",
    "local_coords",
    "target_forms",
    "encoder_forms",
    "is_realizable",
    "is_realizable_linear",
    "synthesize_decoder",
    "rate_of",
    "permute_code",
    "raw_forwarding",
    "code_from_json",
    "CATALOG",
    "CATALOG_IDS",
    "paper_code",
    "verify_converse_counting",
    "MAX_TUPLES",
]

MAX_TUPLES = 1 << 22
MAX_TABLE_DOMAIN = 1 << 20


class CodeError(ValueError):
    """Code does not fit the model (shape, field or domain mismatch)."""


class NotAdmissible(ValueError):
    pass


class UnknownCode(KeyError):
    pass


# ---------------------------------------------------------------- layout

def local_coords(model: Model, k: int, j: int) -> list[int]:
    """Global coordinates read by encoder j, in local order."""
    return [i * k + t for i in sorted(model.theta(j)) for t in range(k)]


def target_forms(model: Model, k: int) -> list[tuple[int, ...]]:
    """The ``k*r`` linear forms of the target; form ``c*k + t`` is column c at shot t."""
    N = k * model.s
    out = []
    for c in range(model.r):
        for t in range(k):
            v = [0] * N
            for i in range(model.s):
                v[i * k + t] = model.T[i, c]
            out.append(tuple(v))
    return out


# ---------------------------------------------------------------- codes

@dataclass(frozen=True)
class LinearCode:
    k: int
    enc: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "enc", tuple(self.enc))
        if self.k < 1:
            raise CodeError("k must be positive")

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "encoders": [{"linear": M.tolist(), "columns": M.ncols} for M in self.enc],
        }


@dataclass(frozen=True)
class TableCode:
    k: int
    enc: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.k < 1:
            raise CodeError("k must be positive")
        # relabel every table by first occurrence so the alphabet is the image
        canon = []
        for table in self.enc:
            seen: dict[int, int] = {}
            canon.append(tuple(seen.setdefault(x, len(seen)) for x in table))
        object.__setattr__(self, "enc", tuple(canon))

    def image_sizes(self) -> list[int]:
        return [max(t) + 1 if t else 0 for t in self.enc]

    def to_json(self) -> dict:
        return {"k": self.k, "encoders": [{"table": list(t)} for t in self.enc]}


Code = Union[LinearCode, TableCode]


def code_from_json(doc, model: Model) -> Code:
    """Parse the code JSON for ``model`` (the field and row counts come from it)."""
    if not isinstance(doc, dict) or "k" not in doc or "encoders" not in doc:
        raise CodeError("code must be an object with 'k' and 'encoders'")
    k, encs = doc["k"], doc["encoders"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise CodeError("k must be a positive integer")
    if not isinstance(encs, list) or len(encs) != model.m:
        raise CodeError(f"need {model.m} encoders")
    kinds = {("linear" if isinstance(e, dict) and "linear" in e else "table" if isinstance(e, dict) and "table" in e else None) for e in encs}
    if kinds == {"linear"}:
        mats = []
        for j, e in enumerate(encs):
            rows = e["linear"]
            d = k * len(model.theta(j))
            if not isinstance(rows, list) or len(rows) != d:
                raise CodeError(f"encoder {j + 1} needs {d} rows")
            ncols = e.get("columns", len(rows[0]) if rows else 0)
            try:
                mats.append(Matrix(rows, model.field, ncols))
            except (ValueError, TypeError) as exc:
                raise CodeError(f"encoder {j + 1}: {exc}") from None
        return LinearCode(k, tuple(mats))
    if kinds == {"table"}:
        tables = []
        for j, e in enumerate(encs):
            t = e["table"]
            size = model.q ** (k * len(model.theta(j)))
            if not isinstance(t, list) or len(t) != size or not all(isinstance(x, int) and not isinstance(x, bool) for x in t):
                raise CodeError(f"encoder {j + 1} table needs {size} integer entries")
            tables.append(tuple(t))
        return TableCode(k, tuple(tables))
    raise CodeError("every encoder must be either all 'linear' or all 'table'")


def _check_shape(model: Model, code: Code) -> None:
    if len(code.enc) != model.m:
        raise CodeError(f"code has {len(code.enc)} encoders, model has {model.m}")
    k = code.k
    for j, e in enumerate(code.enc):
        d = k * len(model.theta(j))
        if isinstance(code, LinearCode):
            if e.nrows != d:
                raise CodeError(f"encoder {j + 1} matrix has {e.nrows} rows, expected {d}")
            if e.field != model.field:
                raise CodeError(f"encoder {j + 1} matrix is over GF({e.field.q}), model over GF({model.q})")
        else:
            size = model.q ** d
            if size > MAX_TABLE_DOMAIN:
                raise CodeError(f"encoder {j + 1} table domain {size} exceeds {MAX_TABLE_DOMAIN}")
            if len(e) != size:
                raise CodeError(f"encoder {j + 1} table has {len(e)} entries, expected {size}")


def encoder_forms(model: Model, code: LinearCode) -> list[list[tuple[int, ...]]]:
    """Columns of each encoder matrix, spread onto global coordinates."""
    _check_shape(model, code)
    N = code.k * model.s
    out = []
    for j, M in enumerate(code.enc):
        coords = local_coords(model, code.k, j)
        forms = []
        for c in range(M.ncols):
            v = [0] * N
            for l, g in enumerate(coords):
                v[g] = M[l, c]
            forms.append(tuple(v))
        out.append(forms)
    return out


# ---------------------------------------------------------------- admissibility

def _outputs(model: Model, code: Code):
    """Per-tuple encoder outputs and target values, tuples indexed by ``sum x_g q^g``."""
    k, q = code.k, model.q
    N = k * model.s
    total = q ** N
    if total > MAX_TUPLES:
        raise CodeError(f"{total} source tuples exceed the enumeration cap {MAX_TUPLES}")
    tgt_forms = target_forms(model, k)
    if q == 2:
        pack = lambda v: sum(1 << g for g, x in enumerate(v) if x)
        target = _kernel.gf2_parity_profile([pack(v) for v in tgt_forms], N)
        encs = []
        if isinstance(code, LinearCode):
            for forms in encoder_forms(model, code):
                encs.append(_kernel.gf2_parity_profile([pack(v) for v in forms], N))
        else:
            for j, table in enumerate(code.enc):
                coords = local_coords(model, k, j)
                d = len(coords)
                idx = [0] * total
                for l, g in enumerate(coords):
                    bit = 1 << (d - 1 - l)
                    step = 1 << g
                    for x in range(total):
                        if x & step:
                            idx[x] |= bit
                encs.append([table[i] for i in idx])
        return encs, target
    f = model.field
    xs = [tuple(reversed(d)) for d in itertools.product(range(q), repeat=N)]
    # itertools.product varies the last digit fastest; reversing makes coordinate 0 fastest

    def dot(u, x):
        acc = 0
        for a, b in zip(u, x):
            if a and b:
                acc = f.add(acc, f.mul(a, b))
        return acc

    target = [tuple(dot(u, x) for u in tgt_forms) for x in xs]
    encs = []
    if isinstance(code, LinearCode):
        for forms in encoder_forms(model, code):
            encs.append([tuple(dot(u, x) for u in forms) for x in xs])
    else:
        for j, table in enumerate(code.enc):
            coords = local_coords(model, k, j)
            col = []
            for x in xs:
                i = 0
                for g in coords:
                    i = i * q + x[g]
                col.append(table[i])
            encs.append(col)
    return encs, target


def synthesize_decoder(model: Model, code: Code) -> Optional[dict]:
    """Map from joint encoder output to target value, or None if some output is ambiguous."""
    _check_shape(model, code)
    encs, target = _outputs(model, code)
    dec: dict = {}
    for x, val in enumerate(target):
        key = tuple(e[x] for e in encs)
        prev = dec.setdefault(key, val)
        if prev != val:
            return None
    return dec


def is_realizable(model: Model, code: Code) -> bool:
    """Zero-error decodability, by enumerating every source tuple."""
    return synthesize_decoder(model, code) is not None


def is_realizable_linear(model: Model, code: LinearCode) -> bool:
    """Target forms inside the span of all encoder forms."""
    if not isinstance(code, LinearCode):
        raise CodeError("is_realizable_linear needs a LinearCode")
    ops = ops_for(model.field, code.k * model.s)
    forms = [ops.from_tuple(v) for fs in encoder_forms(model, code) for v in fs]
    span = ops.span(forms)
    return all(ops.contains(span, ops.from_tuple(v)) for v in target_forms(model, code.k))


# ---------------------------------------------------------------- rates

@dataclass(frozen=True)
class RateReport:
    n_per_encoder: tuple[int, ...]
    n: int
    k: int
    rate: Fraction

    def to_json(self) -> dict:
        return {
            "n_per_encoder": list(self.n_per_encoder),
            "n": self.n,
            "k": self.k,
            "rate": f"{self.rate.numerator}/{self.rate.denominator}",
        }


def _ceil_log(q: int, size: int) -> int:
    n, p = 0, 1
    while p < size:
        p *= q
        n += 1
    return n


def rate_of(model: Model, code: Code) -> RateReport:
    _check_shape(model, code)
    if isinstance(code, LinearCode):
        ns = tuple(M.rank() for M in code.enc)
    else:
        ns = tuple(_ceil_log(model.q, size) for size in code.image_sizes())
    n = max(ns) if ns else 0
    return RateReport(ns, n, code.k, Fraction(n, code.k))


# ---------------------------------------------------------------- transforms

def permute_code(model: Model, code: Code, pp: PermPair) -> Code:
    """The code for ``apply_perm(model, pp)`` that behaves like ``code`` on relabelled sources."""
    _check_shape(model, code)
    k, q = code.k, model.q
    new_model = apply_perm(model, pp)
    new_enc: list = [None] * model.m
    for j, e in enumerate(code.enc):
        old_sources = sorted(model.theta(j))
        nj = pp.tau[j]
        new_sources = sorted(new_model.theta(nj))
        # new local block b holds old source old_of[b]
        inv_pi = {pp.pi[i]: i for i in old_sources}
        old_pos = {i: p for p, i in enumerate(old_sources)}
        perm = [old_pos[inv_pi[i]] * k + t for i in new_sources for t in range(k)]
        if isinstance(code, LinearCode):
            new_enc[nj] = Matrix([e.rows[p] for p in perm], e.field, e.ncols)
        else:
            d = len(perm)
            table = []
            for digits in itertools.product(range(q), repeat=d):
                old = [0] * d
                for l, p in enumerate(perm):
                    old[p] = digits[l]
                idx = 0
                for x in old:
                    idx = idx * q + x
                table.append(e[idx])
            new_enc[nj] = tuple(table)
    return LinearCode(k, tuple(new_enc)) if isinstance(code, LinearCode) else TableCode(k, tuple(new_enc))


def raw_forwarding(model: Model, k: int = 1) -> LinearCode:
    """Every encoder forwards its whole input."""
    return LinearCode(
        k, tuple(Matrix.identity(k * len(model.theta(j)), model.field) for j in range(model.m))
    )


# ---------------------------------------------------------------- catalog

_TERM = re.compile(r"([+-]?)x(\d)(\d?)")


def _form(expr: str, k: int, s: int, q: int) -> list[int]:
    v = [0] * (k * s)
    pos = 0
    for mt in _TERM.finditer(expr.replace(" ", "")):
        if mt.start() != pos:
            raise ValueError(f"bad term in {expr!r}")
        pos = mt.end()
        i = int(mt.group(2)) - 1
        t = int(mt.group(3)) - 1 if mt.group(3) else 0
        c = q - 1 if mt.group(1) == "-" else 1
        v[i * k + t] = (v[i * k + t] + c) % q
    if pos != len(expr.replace(" ", "")):
        raise ValueError(f"bad expression {expr!r}")
    return v


T1 = [[1, 0], [0, 1], [1, 1]]
T2 = [[1, 0], [1, 0], [0, 1]]

# id: (k, gamma 1-based, T, encoder outputs, rate)
CATALOG: dict[str, tuple] = {
    "T2-m3-rate34": (4, [[1, 2], [1, 3], [2, 3]], T2,
                     [["x11+x21", "x12+x22", "x13+x23"], ["x14", "x31", "x32"], ["x24", "x33", "x34"]],
                     Fraction(3, 4)),
    "T1-m3-rate23": (3, [[1, 2], [1, 3], [2, 3]], T1,
                     [["x21-x11", "x12-x22"], ["x11+x31", "x13+x33"], ["x22+x32", "x23+x33"]],
                     Fraction(2, 3)),
    "T2-m3-rate23": (3, [[1, 2], [1, 2], [2, 3]], T2,
                     [["x11+x21", "x12+x22"], ["x13+x23", "x31"], ["x32", "x33"]],
                     Fraction(2, 3)),
    "T2-m2-rate32": (2, [[1], [2], [1, 2]], T2,
                     [["x11", "x12", "x31"], ["x21", "x22", "x32"]],
                     Fraction(3, 2)),
    "T1-m1": (1, [[1], [1], [1]], T1, [["x1+x2", "x1+x3"]], Fraction(2)),
    "T2-m1": (1, [[1], [1], [1]], T2, [["x1+x2", "x3"]], Fraction(2)),
    "T1-m2-1A": (1, [[1], [1], [2]], T1, [["x1", "x2"], ["x3"]], Fraction(2)),
    "T1-m2-1B": (1, [[1], [2], [1]], T1, [["x1", "x3"], ["x2"]], Fraction(2)),
    "T1-m2-2A": (1, [[1, 2], [1], [2]], T1, [["x2-x1"], ["x1+x3"]], Fraction(1)),
    "T1-m2-2C": (1, [[1], [2], [1, 2]], T1, [["x1+x3"], ["x2+x3"]], Fraction(1)),
    "T2-m2-1A": (1, [[1], [1], [2]], T2, [["x1+x2"], ["x3"]], Fraction(1)),
    "T2-m2-1B": (1, [[1], [2], [1]], T2, [["x1", "x3"], ["x2"]], Fraction(2)),
    "T1-m3-id": (1, [[1], [2], [3]], T1, [["x1"], ["x2"], ["x3"]], Fraction(1)),
    "T2-m3-id": (1, [[1], [2], [3]], T2, [["x1"], ["x2"], ["x3"]], Fraction(1)),
}
CATALOG_IDS = tuple(CATALOG)


def paper_code(code_id: str, q: int = 2) -> tuple[Model, LinearCode]:
    """Model and linear code of a catalog entry."""
    if code_id not in CATALOG:
        raise UnknownCode(code_id)
    k, gamma, T, outputs, _ = CATALOG[code_id]
    m = max(j for g in gamma for j in g)
    model = make_model([{j - 1 for j in g} for g in gamma], T, q=q, m=m)
    s = model.s
    mats = []
    for j, exprs in enumerate(outputs):
        coords = local_coords(model, k, j)
        cols = [_form(e, k, s, q) for e in exprs]
        for col in cols:
            if any(col[g] for g in range(k * s) if g not in coords):
                raise ValueError(f"{code_id}: encoder {j + 1} reads a source it is not wired to")
        rows = [[col[g] for col in cols] for g in coords]
        mats.append(Matrix(rows, model.field, len(cols)))
    return model, LinearCode(k, tuple(mats))


# ---------------------------------------------------------------- counting converse

@dataclass(frozen=True)
class ConverseReport:
    q: int
    k: int
    n: int
    image_size: int
    image_product: int
    upper: int
    intermediate_sum: int
    lower: Fraction
    per_b_min: int
    per_b_bound: Fraction

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "image_le_product": self.image_size <= self.image_product,
            "product_le_q^3n": self.image_product <= self.upper,
            "image_ge_sum": self.image_size >= self.intermediate_sum,
            "per_b_ge_q^(k-n)": self.per_b_min >= self.per_b_bound,
            "sum_ge_q^(3k-n)": self.intermediate_sum >= self.lower,
        }

    @property
    def holds(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        fr = lambda x: f"{Fraction(x).numerator}/{Fraction(x).denominator}"
        return {
            "q": self.q,
            "k": self.k,
            "n": self.n,
            "image_size": self.image_size,
            "image_product": self.image_product,
            "q^3n": self.upper,
            "intermediate_sum": self.intermediate_sum,
            "q^(3k-n)": fr(self.lower),
            "per_b_min": self.per_b_min,
            "q^(k-n)": fr(self.per_b_bound),
            "checks": self.checks,
            "holds": self.holds,
        }


def verify_converse_counting(model: Model, code: Code) -> ConverseReport:
    """Evaluate both sides of the image-counting converse for an admissible code.

    Needs three sources and three encoders, a connectivity state below
    OMEGA_2, and a rank-2 target whose first two rows are dependent.
    """
    if model.s != 3 or model.m != 3 or model.r != 2 or model.T.rank() != 2:
        raise ValueError("needs s = m = 3 and a rank-2 target with two columns")
    if model.T.select_rows((0, 1)).rank() != 1:
        raise ValueError("target rows 1 and 2 must be linearly dependent")
    if not leq(model.omega, OMEGA_2):
        raise ValueError("connectivity state must lie below OMEGA_2")
    _check_shape(model, code)
    encs, target = _outputs(model, code)
    dec: dict = {}
    for x, val in enumerate(target):
        if dec.setdefault(tuple(e[x] for e in encs), val) != val:
            raise NotAdmissible("code is not admissible for the model")
    q, k = model.q, code.k
    n = rate_of(model, code).n
    image_size = len(dec)
    image_product = 1
    for e in encs:
        image_product *= len(set(e))
    # per value b of x3: distinct outputs of encoder 2 over all x1 (x2 fixed to 0)
    qk = q ** k
    per_b: dict[int, set] = {}
    for x in range(q ** (3 * k)):
        x2 = (x // qk) % qk
        if x2:
            continue
        b = x // (qk * qk)
        per_b.setdefault(b, set()).add(encs[1][x])
    counts = [len(per_b[b]) for b in range(qk)]
    # every target value (a, b) occurs; each b pairs with q^k values a
    intermediate = qk * sum(counts)
    return ConverseReport(
        q=q,
        k=k,
        n=n,
        image_size=image_size,
        image_product=image_product,
        upper=q ** (3 * n),
        intermediate_sum=intermediate,
        lower=Fraction(q) ** (3 * k - n),
        per_b_min=min(counts),
        per_b_bound=Fraction(q) ** (k - n),
    )
