"""Closed-form capacities for every characterized model.

Rank-1 and rank-s targets use the formulas in ``bounds``.  Three sources
with a rank-2 target and at most three encoders go through a clause table
keyed on the union sets ``G(i, j) = Gamma_i | Gamma_j``.  Everything else
is reported as ``OutOfCoverage``, which is a value, not an exception.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .bounds import capacity_id, capacity_sum
from .model import MatrixType, Model, classify, dependent_pairs, validate

__all__ = [
    "CapacityResult",
    "OutOfCoverage",
    "NoCaseMatches",
    "capacity_oracle",
    "case_of",
    "clause_table",
    "normalize_sources",
    "CITATIONS",
]

CITATIONS = {
    "Theorem1-Sum": "Theorem 1 (rank-1 target)",
    "Theorem1-Id": "Theorem 1 (identity target)",
    "Theorem3": "Theorem 3 (improved converse, capacity 3/4)",
    "Theorem5": "Theorem 5 (Type1 target)",
    "Theorem6": "Theorem 6 (Type2 target)",
}


class NoCaseMatches(RuntimeError):
    """No clause, or more than one, matched; the table is meant to be a partition."""


@dataclass(frozen=True)
class CapacityResult:
    value: Fraction
    provenance: str
    case: Optional[str] = None

    @property
    def citation(self) -> str:
        key = self.provenance if self.provenance in CITATIONS else self.provenance.split("-")[0]
        return CITATIONS[key]

    def to_json(self) -> dict:
        v = self.value
        return {
            "status": "ok",
            "value": f"{v.numerator}/{v.denominator}",
            "provenance": self.provenance,
            "case": self.case,
            "citation": self.citation,
        }


@dataclass(frozen=True)
class OutOfCoverage:
    reason: str

    def to_json(self) -> dict:
        return {"status": "out_of_coverage", "reason": self.reason}


# Clause predicates.  ``g`` is a tuple of the three encoder sets (0-based
# frozensets) with any dependent row pair already moved to sources 0, 1,
# ``V`` is the full encoder set.

def _u(g, i, j):
    return g[i] | g[j]


_PAIRS = ((0, 1), (0, 2), (1, 2))


def _some_pair_single(g, V):
    return any(len(_u(g, i, j)) == 1 for i, j in _PAIRS)


def _all_pairs_full(g, V):
    return all(_u(g, i, j) == V for i, j in _PAIRS)


def _t1_m3_c2(g, V):
    return _all_pairs_full(g, V) and all(len(x) >= 2 for x in g)


def _t1_m3_c3(g, V):
    return all(len(_u(g, i, j)) >= 2 for i, j in _PAIRS) and (
        any(len(_u(g, i, j)) == 2 for i, j in _PAIRS) or any(len(x) == 1 for x in g)
    )


def _t2_c1(g, V):
    return len(_u(g, 0, 2)) == 1 or len(_u(g, 1, 2)) == 1


def _t2_m2_c2(g, V):
    return _all_pairs_full(g, V) and not (g[0] & g[1])


def _t2_m2_c3(g, V):
    return len(_u(g, 0, 1)) == 1 or (_all_pairs_full(g, V) and bool(g[0] & g[1]))


def _t2_m3_c2(g, V):
    if len(_u(g, 0, 1)) == 1:
        return True
    return all(len(_u(g, i, j)) >= 2 for i, j in _PAIRS) and (
        len(_u(g, 0, 2)) == 2 or len(_u(g, 1, 2)) == 2 or any(len(x) == 1 for x in g)
    )


def _t2_m3_c3(g, V):
    return len(g[0] & g[1]) >= 2 and _u(g, 0, 2) == V and _u(g, 1, 2) == V and len(g[2]) >= 2


def _t2_m3_c4(g, V):
    return (
        len(g[0] & g[1]) == 1
        and len(g[0]) == 2
        and len(g[1]) == 2
        and _u(g, 0, 2) == V
        and _u(g, 1, 2) == V
    )


def _always(g, V):
    return True


Clause = tuple[str, Callable, Fraction]

_TABLE: dict[tuple[str, int], list[Clause]] = {
    ("Theorem5", 1): [("Theorem5-m1", _always, Fraction(2))],
    ("Theorem5", 2): [
        ("Theorem5-m2-clause1", _some_pair_single, Fraction(2)),
        ("Theorem5-m2-clause2", _all_pairs_full, Fraction(1)),
    ],
    ("Theorem5", 3): [
        ("Theorem5-m3-clause1", _some_pair_single, Fraction(2)),
        ("Theorem5-m3-clause2", _t1_m3_c2, Fraction(2, 3)),
        ("Theorem5-m3-clause3", _t1_m3_c3, Fraction(1)),
    ],
    ("Theorem6", 1): [("Theorem6-m1", _always, Fraction(2))],
    ("Theorem6", 2): [
        ("Theorem6-m2-clause1", _t2_c1, Fraction(2)),
        ("Theorem6-m2-clause2", _t2_m2_c2, Fraction(3, 2)),
        ("Theorem6-m2-clause3", _t2_m2_c3, Fraction(1)),
    ],
    ("Theorem6", 3): [
        ("Theorem6-m3-clause1", _t2_c1, Fraction(2)),
        ("Theorem6-m3-clause2", _t2_m3_c2, Fraction(1)),
        ("Theorem6-m3-clause3", _t2_m3_c3, Fraction(2, 3)),
        ("Theorem6-m3-clause4", _t2_m3_c4, Fraction(3, 4)),
    ],
}


def normalize_sources(model: Model) -> tuple[int, int, int]:
    """Source order putting the dependent row pair first (identity for Type1)."""
    pairs = dependent_pairs(model.T)
    if not pairs:
        return (0, 1, 2)
    a, b = pairs[0]
    (c,) = {0, 1, 2} - {a, b}
    return (a, b, c)


def _family(model: Model) -> str:
    kind = classify(model.T)
    if kind is MatrixType.TYPE1:
        return "Theorem5"
    if kind is MatrixType.TYPE2:
        return "Theorem6"
    raise ValueError(f"no clause table for a {kind.value} target")


def clause_table(model: Model) -> list[tuple[str, bool, Fraction]]:
    """Every clause of the relevant table with whether its literal predicate holds."""
    if model.s != 3 or model.T.rank() != 2 or not 1 <= model.m <= 3:
        raise ValueError("clause tables cover s = 3, rank 2, m <= 3 only")
    order = normalize_sources(model)
    g = tuple(model.gamma[i] for i in order)
    V = frozenset(range(model.m))
    return [(cid, bool(pred(g, V)), val) for cid, pred, val in _TABLE[(_family(model), model.m)]]


def case_of(model: Model) -> str:
    hits = [cid for cid, ok, _ in clause_table(model) if ok]
    if len(hits) != 1:
        raise NoCaseMatches(f"{len(hits)} clauses match {model!r}: {hits}")
    return hits[0]


def capacity_oracle(model: Model) -> Union[CapacityResult, OutOfCoverage]:
    validate(model)
    rk = model.T.rank()
    if rk == 1:
        return CapacityResult(capacity_sum(model), "Theorem1-Sum")
    if rk == model.s:
        return CapacityResult(capacity_id(model), "Theorem1-Id")
    if model.s == 3 and rk == 2 and model.m <= 3:
        cid = case_of(model)
        value = next(val for c, ok, val in clause_table(model) if c == cid)
        provenance = "Theorem3" if cid == "Theorem6-m3-clause4" else cid
        return CapacityResult(value, provenance, cid)
    return OutOfCoverage(f"no characterization for s={model.s}, m={model.m}, Rank(T)={rk}")
