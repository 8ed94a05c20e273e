"""Instances (s, m, Omega, T) and the structural operations on them.

Indices are 0-based in the Python API and 1-based in JSON.  A connectivity
state stores, for every source, the set of encoders it is wired to.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Optional, Sequence

from .ffield import Field, Matrix, gf, invertible, multiply

__all__ = [
    "ConnectivityState",
    "Model",
    "MatrixType",
    "PermPair",
    "ModelError",
    "MalformedModel",
    "EmptyGamma",
    "UncoveredEncoder",
    "ZeroRow",
    "NotColumnFullRank",
    "NotInvertible",
    "LimitExceeded",
    "validate",
    "theta_of",
    "classify",
    "column_transform",
    "apply_perm",
    "find_isomorphism",
    "leq",
    "enumerate_states",
    "T1_ROWS",
    "T2_ROWS",
    "OMEGA_1",
    "OMEGA_2",
    "make_model",
]


class ModelError(ValueError):
    """A model violates one of the standing assumptions."""


class MalformedModel(ModelError):
    """Structurally broken input (bad shapes, indices or entries)."""


class EmptyGamma(ModelError):
    def __init__(self, i: int):
        super().__init__(f"source {i + 1} is connected to no encoder")
        self.index = i


class UncoveredEncoder(ModelError):
    def __init__(self, j: int):
        super().__init__(f"encoder {j + 1} receives no source")
        self.index = j


class ZeroRow(ModelError):
    def __init__(self, i: int):
        super().__init__(f"row {i + 1} of T is zero")
        self.index = i


class NotColumnFullRank(ModelError):
    def __init__(self, rank: int, cols: int):
        super().__init__(f"T has rank {rank} but {cols} columns")
        self.rank = rank
        self.cols = cols


class NotInvertible(ValueError):
    """The column transform is singular."""


class LimitExceeded(ValueError):
    """Enumeration request beyond the supported size."""


@dataclass(frozen=True)
class ConnectivityState:
    """Omega: ``gamma[i]`` is the encoder set of source i."""

    s: int
    m: int
    gamma: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(frozenset(g) for g in self.gamma))
        if len(self.gamma) != self.s:
            raise MalformedModel(f"expected {self.s} encoder sets, got {len(self.gamma)}")
        for g in self.gamma:
            for j in g:
                if not 0 <= j < self.m:
                    raise MalformedModel(f"encoder index {j + 1} outside 1..{self.m}")

    @classmethod
    def from_sets(cls, gamma: Sequence[Iterable[int]], m: Optional[int] = None) -> "ConnectivityState":
        sets = [frozenset(g) for g in gamma]
        if m is None:
            m = max((max(g) for g in sets if g), default=-1) + 1
        return cls(len(sets), m, tuple(sets))

    @classmethod
    def from_masks(cls, masks: Sequence[int], m: int) -> "ConnectivityState":
        return cls(len(masks), m, tuple(frozenset(j for j in range(m) if mask >> j & 1) for mask in masks))

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << j for j in g) for g in self.gamma)

    def theta(self, j: int) -> frozenset[int]:
        return frozenset(i for i, g in enumerate(self.gamma) if j in g)

    def to_lists(self) -> list[list[int]]:
        return [sorted(j + 1 for j in g) for g in self.gamma]

    def __repr__(self) -> str:
        return f"Omega({self.to_lists()}, m={self.m})"


# Representative targets and the two states of the 3/4 result.
T1_ROWS = ((1, 0), (0, 1), (1, 1))
T2_ROWS = ((1, 0), (1, 0), (0, 1))
OMEGA_1 = ConnectivityState(3, 3, (frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})))
OMEGA_2 = ConnectivityState(3, 3, (frozenset({0, 1}), frozenset({0, 2}), frozenset({0, 1, 2})))


@dataclass(frozen=True)
class Model:
    omega: ConnectivityState
    T: Matrix

    def __post_init__(self):
        if self.T.nrows != self.omega.s:
            raise MalformedModel(f"T has {self.T.nrows} rows but there are {self.omega.s} sources")

    s = property(lambda self: self.omega.s)
    m = property(lambda self: self.omega.m)
    gamma = property(lambda self: self.omega.gamma)
    field = property(lambda self: self.T.field)
    q = property(lambda self: self.T.field.q)
    r = property(lambda self: self.T.ncols)

    def theta(self, j: int) -> frozenset[int]:
        return self.omega.theta(j)

    @cached_property
    def rank_profile(self) -> tuple[int, ...]:
        """``rank_profile[mask]`` = Rank(T[sources in mask]); the empty set has rank 0."""
        out = []
        for mask in range(1 << self.s):
            idx = [i for i in range(self.s) if mask >> i & 1]
            out.append(self.T.select_rows(idx).rank() if idx else 0)
        return tuple(out)

    def to_json(self) -> dict[str, Any]:
        return {
            "q": self.q,
            "s": self.s,
            "m": self.m,
            "gamma": self.omega.to_lists(),
            "T": self.T.tolist(),
        }

    @classmethod
    def from_json(cls, doc: Any) -> "Model":
        if not isinstance(doc, dict):
            raise MalformedModel("model must be a JSON object")
        try:
            q, s, m, gamma, T = (doc[key] for key in ("q", "s", "m", "gamma", "T"))
        except KeyError as exc:
            raise MalformedModel(f"missing key {exc.args[0]!r}") from None
        for name, val in (("q", q), ("s", s), ("m", m)):
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                raise MalformedModel(f"{name} must be a positive integer")
        try:
            field = gf(q)
        except ValueError as exc:
            raise MalformedModel(str(exc)) from None
        if not isinstance(gamma, list) or len(gamma) != s:
            raise MalformedModel(f"gamma must list {s} encoder sets")
        sets = []
        for g in gamma:
            if not isinstance(g, list) or not all(isinstance(j, int) and not isinstance(j, bool) for j in g):
                raise MalformedModel("each gamma entry must be a list of encoder indices")
            if any(not 1 <= j <= m for j in g):
                raise MalformedModel(f"encoder indices must lie in 1..{m}")
            sets.append(frozenset(j - 1 for j in g))
        if not isinstance(T, list) or len(T) != s or not T:
            raise MalformedModel(f"T must have {s} rows")
        if not all(isinstance(row, list) for row in T):
            raise MalformedModel("T rows must be lists")
        r = len(T[0])
        if r < 1:
            raise MalformedModel("T needs at least one column")
        try:
            mat = Matrix(T, field, r)
        except (ValueError, TypeError) as exc:
            raise MalformedModel(f"bad T: {exc}") from None
        return cls(ConnectivityState(s, m, tuple(sets)), mat)

    def __repr__(self) -> str:
        return f"Model(q={self.q}, gamma={self.omega.to_lists()}, T={self.T.tolist()})"


def make_model(gamma: Sequence[Iterable[int]], T: Sequence[Sequence[int]], q: int = 2, m: Optional[int] = None) -> Model:
    """Convenience constructor with 0-based encoder sets."""
    omega = ConnectivityState.from_sets(gamma, m)
    return Model(omega, Matrix(T, gf(q)))


def validate(model: Model) -> bool:
    """Return True or raise the first violated assumption."""
    for i, g in enumerate(model.gamma):
        if not g:
            raise EmptyGamma(i)
    covered = frozenset().union(*model.gamma)
    for j in range(model.m):
        if j not in covered:
            raise UncoveredEncoder(j)
    for i, row in enumerate(model.T.rows):
        if not any(row):
            raise ZeroRow(i)
    rk = model.T.rank()
    if rk != model.r:
        raise NotColumnFullRank(rk, model.r)
    return True


def theta_of(model: Model, j: int) -> frozenset[int]:
    """Sources wired to encoder j."""
    if not 0 <= j < model.m:
        raise IndexError(f"encoder index {j} out of range")
    return model.theta(j)


class MatrixType(str, enum.Enum):
    SUM_RANK1 = "SumRank1"
    IDENTITY_RANK_S = "IdentityRankS"
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    UNCLASSIFIED = "Unclassified"


def dependent_pairs(T: Matrix) -> list[tuple[int, int]]:
    """Row pairs (a, b), a < b, that are linearly dependent."""
    return [
        (a, b)
        for a, b in itertools.combinations(range(T.nrows), 2)
        if T.select_rows((a, b)).rank() < 2
    ]


def classify(T: Matrix) -> MatrixType:
    rk = T.rank()
    if rk == 1:
        return MatrixType.SUM_RANK1
    if rk == T.nrows:
        return MatrixType.IDENTITY_RANK_S
    if T.nrows == 3 and rk == 2:
        return MatrixType.TYPE2 if dependent_pairs(T) else MatrixType.TYPE1
    return MatrixType.UNCLASSIFIED


def column_transform(T: Matrix, Q: Matrix) -> Matrix:
    if Q.nrows != T.ncols or not invertible(Q):
        raise NotInvertible(f"column transform of shape {Q.shape} is not an invertible {T.ncols}x{T.ncols} matrix")
    return multiply(T, Q)


@dataclass(frozen=True)
class PermPair:
    """Source permutation ``pi`` and encoder permutation ``tau`` as image tuples (0-based)."""

    pi: tuple[int, ...]
    tau: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "pi", tuple(self.pi))
        object.__setattr__(self, "tau", tuple(self.tau))
        for name, perm in (("pi", self.pi), ("tau", self.tau)):
            if sorted(perm) != list(range(len(perm))):
                raise ValueError(f"{name} is not a permutation: {perm}")

    @classmethod
    def from_one_based(cls, pi: Sequence[int], tau: Sequence[int]) -> "PermPair":
        return cls(tuple(x - 1 for x in pi), tuple(x - 1 for x in tau))

    def inverse(self) -> "PermPair":
        pi = [0] * len(self.pi)
        for i, x in enumerate(self.pi):
            pi[x] = i
        tau = [0] * len(self.tau)
        for j, x in enumerate(self.tau):
            tau[x] = j
        return PermPair(tuple(pi), tuple(tau))

    def to_json(self) -> dict[str, list[int]]:
        return {"pi": [x + 1 for x in self.pi], "tau": [x + 1 for x in self.tau]}

    @classmethod
    def identity(cls, s: int, m: int) -> "PermPair":
        return cls(tuple(range(s)), tuple(range(m)))


def apply_perm(model: Model, pp: PermPair) -> Model:
    """Relabel source i as pi(i) and encoder j as tau(j).

    Source pi(i) of the result inherits both the encoder set (relabelled by
    tau) and the target row of source i.
    """
    if len(pp.pi) != model.s or len(pp.tau) != model.m:
        raise ValueError("permutation pair does not fit the model")
    gamma: list[frozenset[int]] = [frozenset()] * model.s
    rows: list[tuple[int, ...]] = [()] * model.s
    for i, g in enumerate(model.gamma):
        gamma[pp.pi[i]] = frozenset(pp.tau[j] for j in g)
        rows[pp.pi[i]] = model.T.rows[i]
    return Model(ConnectivityState(model.s, model.m, tuple(gamma)), Matrix(rows, model.field, model.r))


def find_isomorphism(a: Model, b: Model) -> Optional[PermPair]:
    """Lexicographically first (pi, tau) mapping a onto b exactly, if any."""
    if (a.s, a.m, a.q, a.r) != (b.s, b.m, b.q, b.r):
        return None
    for pi in itertools.permutations(range(a.s)):
        if any(b.T.rows[pi[i]] != a.T.rows[i] for i in range(a.s)):
            continue
        for tau in itertools.permutations(range(a.m)):
            if all(frozenset(tau[j] for j in a.gamma[i]) == b.gamma[pi[i]] for i in range(a.s)):
                return PermPair(pi, tau)
    return None


def leq(a: ConnectivityState, b: ConnectivityState) -> bool:
    """Componentwise containment of encoder sets."""
    if (a.s, a.m) != (b.s, b.m):
        raise ValueError("states of different shapes are incomparable")
    return all(x <= y for x, y in zip(a.gamma, b.gamma))


def enumerate_states(s: int, m: int) -> list[ConnectivityState]:
    """All covering states with nonempty encoder sets, ordered by bitmask tuples."""
    if not (1 <= s <= 4 and 1 <= m <= 4):
        raise LimitExceeded(f"enumeration supports 1 <= s, m <= 4, got s={s}, m={m}")
    full = (1 << m) - 1
    out = []
    for masks in itertools.product(range(1, full + 1), repeat=s):
        union = 0
        for x in masks:
            union |= x
        if union == full:
            out.append(ConnectivityState.from_masks(masks, m))
    return out


def field_of(q: int) -> Field:
    return gf(q)
