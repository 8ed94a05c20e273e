"""Exhaustive existence search for admissible codes at a fixed (k, n_max).

Linear search
    Encoders are taken in descending ``|Theta|`` order (ties by index).
    All but the last two are enumerated as subspaces of their local
    space, in canonical order: dimension ascending, then pivot set, then
    free entries, each lexicographically.  The last two are never
    enumerated: given the span ``Z`` of the fixed encoders, whether two
    subspaces of bounded dimension can finish the job has an exact
    answer in terms of a few intersections, and a witness is built
    directly.  ``prune=False`` instead enumerates every encoder and
    checks each leaf; it exists to cross-check the shortcut.

Table search
    Each encoder's table is a set partition of its domain into at most
    ``q**n_max`` blocks, listed as restricted growth strings.  All but the
    last encoder are enumerated; the last one is a graph colouring.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from ._subspace import Span, ops_for
from .bounds import restricted_growth_strings
from .codes import LinearCode, TableCode, is_realizable_linear, local_coords, target_forms
from .ffield import Matrix, rref_rows
from .model import Model

__all__ = [
    "CapExceeded",
    "SearchSpec",
    "SearchOutcome",
    "ScanReport",
    "search_linear",
    "search_table",
    "search",
    "scan_capacity_floor",
    "LINEAR_CAP_BITS",
    "TABLE_CAP_BITS",
]

LINEAR_CAP_BITS = 40
TABLE_CAP_BITS = 24


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class SearchSpec:
    model: Model
    k: int
    n_max: int
    cls: str = "linear"
    workers: int = 1
    prune: bool = True

    def __post_init__(self):
        if self.k < 1 or self.n_max < 0:
            raise ValueError("need k >= 1 and n_max >= 0")
        if self.cls not in ("linear", "table"):
            raise ValueError(f"unknown search class {self.cls!r}")


@dataclass
class SearchOutcome:
    found: Optional[object]
    nodes_visited: int
    pruned: int
    breakdown: dict = dc_field(default_factory=dict)
    k: int = 0
    n_max: int = 0
    cls: str = "linear"
    q: int = 2

    @property
    def rate(self) -> Optional[Fraction]:
        if self.found is None:
            return None
        if isinstance(self.found, LinearCode):
            n = max(M.rank() for M in self.found.enc)
        else:
            sizes = self.found.image_sizes()
            n = 0
            for size in sizes:
                nj, p = 0, 1
                while p < size:
                    p *= self.q
                    nj += 1
                n = max(n, nj)
        return Fraction(n, self.k)

    def to_json(self) -> dict:
        out = {
            "status": "found" if self.found is not None else "exhausted",
            "class": self.cls,
            "k": self.k,
            "n_max": self.n_max,
            "nodes_visited": self.nodes_visited,
            "pruned": self.pruned,
            "pruned_by": dict(self.breakdown),
            "certificate": self.found.to_json() if self.found is not None else None,
            "rate": None,
        }
        if self.found is not None:
            r = self.rate
            out["rate"] = f"{r.numerator}/{r.denominator}"
        return out


# ---------------------------------------------------------------- helpers

def _order(model: Model) -> list[int]:
    return sorted(range(model.m), key=lambda j: (-len(model.theta(j)), j))


def _rref_bases(d: int, maxdim: int, q: int):
    """RREF bases (lists of rows) of every subspace of F_q^d up to ``maxdim``, canonical order."""
    for dim in range(maxdim + 1):
        for piv in itertools.combinations(range(d), dim):
            pivset = set(piv)
            free = [(r, c) for r in range(dim) for c in range(piv[r] + 1, d) if c not in pivset]
            for vals in itertools.product(range(q), repeat=len(free)):
                rows = [[0] * d for _ in range(dim)]
                for r, p in enumerate(piv):
                    rows[r][p] = 1
                for (r, c), v in zip(free, vals):
                    rows[r][c] = v
                yield rows


def _gauss_binomial(d: int, r: int, q: int) -> int:
    num = den = 1
    for i in range(r):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _count_subspaces(d: int, maxdim: int, q: int) -> int:
    return sum(_gauss_binomial(d, r, q) for r in range(maxdim + 1))


# ---------------------------------------------------------------- linear

class _LinearSearch:
    def __init__(self, spec: SearchSpec):
        model = spec.model
        self.spec = spec
        self.model = model
        self.k = k = spec.k
        self.q = model.q
        self.N = N = k * model.s
        self.ops = ops = ops_for(model.field, N)
        self.order = _order(model)
        self.coords = [local_coords(model, k, j) for j in range(model.m)]
        self.cap = [min(spec.n_max, len(c)) for c in self.coords]
        self.L = [ops.coord_span(c) for c in self.coords]
        self.W = ops.span([ops.from_tuple(v) for v in target_forms(model, k)])
        enum_count = len(self.order) if not spec.prune else max(0, model.m - 2)
        self.enum = self.order[:enum_count]
        self.rest = self.order[enum_count:]
        for j in self.enum:
            if self.q ** (len(self.coords[j]) * self.cap[j]) > 1 << LINEAR_CAP_BITS:
                raise CapExceeded(
                    f"encoder {j + 1}: q^(k|Theta|*n) = {self.q}^{len(self.coords[j]) * self.cap[j]} exceeds 2^{LINEAR_CAP_BITS}"
                )
        # k * Rank(T[I_G]) for every encoder subset G
        masks = model.omega.masks
        self.need = []
        for g in range(1 << model.m):
            I = sum(1 << i for i in range(model.s) if masks[i] & ~g == 0)
            self.need.append(k * model.rank_profile[I])
        self.stats = {"dimension": 0, "containment": 0, "counting": 0, "completion": 0}
        self.nodes = 0

    # candidate spans for an enumerated encoder, in canonical order
    def candidates(self, j: int):
        ops, coords = self.ops, self.coords[j]
        for rows in _rref_bases(len(coords), self.cap[j], self.q):
            vecs = []
            for row in rows:
                v = [0] * self.N
                for l, g in enumerate(coords):
                    v[g] = row[l]
                vecs.append(ops.from_tuple(v))
            yield ops.span(vecs), len(rows)

    def count_candidates(self, j: int) -> int:
        return _count_subspaces(len(self.coords[j]), self.cap[j], self.q)

    def _prune(self, depth: int, Z: Span, dims: dict) -> Optional[str]:
        ops, m = self.ops, self.model.m
        budget = [dims.get(j, self.cap[j]) for j in range(m)]
        for g in range(1, 1 << m):
            if sum(budget[j] for j in range(m) if g >> j & 1) < self.need[g]:
                return "dimension"
        unfixed = [j for j in self.order if j not in dims]
        if not unfixed:
            return None
        free = sorted({c for j in unfixed for c in self.coords[j]})
        Zp = ops.span([ops.kill(v, free) for v in Z.basis])
        if not all(ops.contains(Zp, ops.kill(w, free)) for w in self.W.basis):
            return "containment"
        for r in range(1, len(unfixed) + 1):
            for G in itertools.combinations(unfixed, r):
                others = sorted({c for j in unfixed if j not in G for c in self.coords[j]})
                Zo = ops.span([ops.kill(v, others) for v in Z.basis])
                WZo = ops.join(Zo, ops.span([ops.kill(w, others) for w in self.W.basis]))
                if WZo.dim - Zo.dim > sum(self.cap[j] for j in G):
                    return "counting"
        return None

    # ---- closed-form completion of the last encoders

    def _complement(self, base: Span, vecs):
        out, cur = [], base
        for v in vecs:
            if not self.ops.contains(cur, v):
                out.append(v)
                cur = self.ops.join(cur, self.ops.span([v]))
        return out

    def _feasible(self, Z: Span) -> bool:
        ops, rest, W = self.ops, self.rest, self.W
        if not rest:
            return ops.le(W, Z)
        if len(rest) == 1:
            (j,) = rest
            WZ = ops.join(W, Z)
            return WZ.dim - Z.dim <= self.cap[j] and ops.le(W, ops.join(Z, self.L[j]))
        a, b = rest
        ZA, ZB = ops.join(Z, self.L[a]), ops.join(Z, self.L[b])
        if not ops.le(W, ops.join(ZA, self.L[b])):
            return False
        WZ = ops.join(W, Z)
        z = Z.dim
        x = WZ.dim - z
        Y = ops.meet(WZ, ZA)
        y = Y.dim - z
        yb = ops.meet(Y, ZB).dim - z
        a_need = ops.join(WZ, self.L[b]).dim - ZB.dim
        ca, cb = self.cap[a], self.cap[b]
        if a_need > ca:
            return False
        return (y - yb) + min(ca - a_need, yb) >= x - cb

    def _single(self, Z: Span, j: int) -> list:
        targets = self._complement(Z, self.W.basis)
        return self.ops.lift(targets, self.coords[j], Z)

    def _construct(self, Z: Span) -> dict:
        ops, rest = self.ops, self.rest
        if not rest:
            return {}
        if len(rest) == 1:
            (j,) = rest
            return {j: self._single(Z, j)}
        a, b = rest
        ZA, ZB = ops.join(Z, self.L[a]), ops.join(Z, self.L[b])
        W = self.W
        WZ = ops.join(W, Z)
        Y = ops.meet(WZ, ZA)
        YB = ops.meet(Y, ZB)
        a_need = ops.join(WZ, self.L[b]).dim - ZB.dim
        comp = self._complement(YB, Y.basis)
        t = min(self.cap[a] - a_need, YB.dim - Z.dim)
        extra = self._complement(Z, YB.basis)[:t]
        P = comp + extra
        lifted_p = ops.lift(P, self.coords[a], Z)
        E = self._complement(ops.join(ZB, ops.span(P)), W.basis)
        lifted_e = ops.lift(E, self.coords[a], ZB)
        Ua = ops.span(lifted_p + lifted_e)
        assert Ua.dim <= self.cap[a]
        Z2 = ops.join(Z, Ua)
        Ub = self._single(Z2, b)
        assert len(Ub) <= self.cap[b]
        assert ops.le(W, ops.join(Z2, ops.span(Ub)))
        return {a: list(Ua.basis), b: Ub}

    # ---- tree walk

    def walk(self, depth: int, Z: Span, dims: dict, chosen: dict):
        """Depth-first search below a node; returns the chosen spans on success."""
        ops = self.ops
        if depth == len(self.enum):
            if self.spec.prune:
                if not self._feasible(Z):
                    self.stats["completion"] += 1
                    return None
                done = dict(chosen)
                done.update(self._construct(Z))
                return done
            return dict(chosen) if ops.le(self.W, Z) else None
        j = self.enum[depth]
        for span, dim in self.candidates(j):
            res = self.step(depth, Z, dims, chosen, j, span, dim)
            if res is not None:
                return res
        return None

    def step(self, depth, Z, dims, chosen, j, span, dim):
        self.nodes += 1
        Z2 = self.ops.join(Z, span)
        dims2 = dict(dims)
        dims2[j] = dim
        if self.spec.prune:
            why = self._prune(depth, Z2, dims2)
            if why:
                self.stats[why] += 1
                return None
        chosen2 = dict(chosen)
        chosen2[j] = list(span.basis)
        return self.walk(depth + 1, Z2, dims2, chosen2)

    def to_code(self, chosen: dict) -> LinearCode:
        mats = []
        for j in range(self.model.m):
            coords = self.coords[j]
            local = [tuple(self.ops.to_tuple(v)[g] for g in coords) for v in chosen.get(j, [])]
            basis, _ = rref_rows(local, self.model.field, len(coords))
            rows = [[b[l] for b in basis] for l in range(len(coords))]
            mats.append(Matrix(rows, self.model.field, len(basis)))
        return LinearCode(self.k, tuple(mats))

    def empty_stats(self):
        return {key: 0 for key in self.stats}


def _linear_chunk(spec: SearchSpec, start: int, stop: int):
    """Process first-encoder candidates [start, stop); report the first hit and stats up to it."""
    s = _LinearSearch(spec)
    j = s.enum[0]
    root = s.ops.span([])
    for idx, (span, dim) in enumerate(itertools.islice(s.candidates(j), start, stop), start):
        res = s.step(0, root, {}, {}, j, span, dim)
        if res is not None:
            return idx, s.to_code(res), s.nodes, dict(s.stats)
    return None, None, s.nodes, dict(s.stats)


def search_linear(spec: SearchSpec) -> SearchOutcome:
    s = _LinearSearch(spec)
    found = None
    if not s.enum:
        s.nodes = 1
        res = s.walk(0, s.ops.span([]), {}, {})
        found = s.to_code(res) if res is not None else None
        nodes, stats = s.nodes, s.stats
    else:
        total = s.count_candidates(s.enum[0])
        workers = max(1, spec.workers)
        if workers == 1:
            chunks = [(0, total)]
        else:
            n_chunks = min(total, workers * 8)
            bounds = [total * i // n_chunks for i in range(n_chunks + 1)]
            chunks = [(bounds[i], bounds[i + 1]) for i in range(n_chunks) if bounds[i] < bounds[i + 1]]
        nodes, stats = 1, s.empty_stats()
        if workers == 1:
            results = iter([_linear_chunk(spec, *chunks[0])])
            pool = None
        else:
            pool = ProcessPoolExecutor(max_workers=workers)
            futures = [pool.submit(_linear_chunk, spec, a, b) for a, b in chunks]
            results = (f.result() for f in futures)
        try:
            for idx, code, n_nodes, n_stats in results:
                nodes += n_nodes
                for key, val in n_stats.items():
                    stats[key] += val
                if code is not None:
                    found = code
                    break
        finally:
            if pool is not None:
                pool.shutdown(wait=True, cancel_futures=True)
    if found is not None:
        assert is_realizable_linear(spec.model, found)
    return SearchOutcome(found, nodes, sum(stats.values()), dict(stats), spec.k, spec.n_max, "linear", spec.model.q)


# ---------------------------------------------------------------- table

class _TableSearch:
    def __init__(self, spec: SearchSpec):
        model = spec.model
        self.spec = spec
        self.model = model
        self.k = k = spec.k
        self.q = q = model.q
        N = k * model.s
        if q ** N > 1 << TABLE_CAP_BITS:
            raise CapExceeded(f"q^(k*s) = {q}^{N} exceeds 2^{TABLE_CAP_BITS}")
        self.B = q ** spec.n_max
        self.order = _order(model)
        coords = [local_coords(model, k, j) for j in range(model.m)]
        self.D = [q ** len(c) for c in coords]
        # digits of every tuple, coordinate 0 least significant
        total = q ** N
        xs = []
        for x in range(total):
            d, y = [], x
            for _ in range(N):
                d.append(y % q)
                y //= q
            xs.append(d)
        f = model.field
        forms = target_forms(model, k)

        def dot(u, d):
            acc = 0
            for a, b in zip(u, d):
                if a and b:
                    acc = f.add(acc, f.mul(a, b))
            return acc

        self.f = [tuple(dot(u, d) for u in forms) for d in xs]
        self.idx = []
        for j in range(model.m):
            col = []
            for d in xs:
                i = 0
                for g in coords[j]:
                    i = i * q + d[g]
                col.append(i)
            self.idx.append(col)
        self.total = total
        n_enum = model.m - 1 if spec.prune else model.m
        self.enum = self.order[:n_enum]
        self.rest = self.order[n_enum:]
        self.nodes = 0
        self.stats = {"refinement": 0, "counting": 0, "completion": 0}

    def _classes(self, cls, j, labels):
        idx = self.idx[j]
        table: dict = {}
        return [table.setdefault((c, labels[idx[x]]), len(table)) for x, c in enumerate(cls)]

    def _prune(self, cls, fixed: set) -> Optional[str]:
        rem = [j for j in self.order if j not in fixed]
        seen: dict = {}
        per_class: dict = {}
        for x, c in enumerate(cls):
            key = (c,) + tuple(self.idx[j][x] for j in rem)
            if seen.setdefault(key, self.f[x]) != self.f[x]:
                return "refinement"
            per_class.setdefault(c, set()).add(self.f[x])
        limit = self.B ** len(rem)
        if any(len(v) > limit for v in per_class.values()):
            return "counting"
        return None

    def _colour(self, cls, j):
        """Lexicographically first labelling of encoder j separating every conflict, or None."""
        idx, D, B = self.idx[j], self.D[j], self.B
        groups: dict = {}
        for x, c in enumerate(cls):
            groups.setdefault(c, []).append(x)
        adj = [set() for _ in range(D)]
        for xs in groups.values():
            for x, y in itertools.combinations(xs, 2):
                if self.f[x] != self.f[y]:
                    a, b = idx[x], idx[y]
                    if a == b:
                        return None
                    adj[a].add(b)
                    adj[b].add(a)
        lab = [-1] * D

        def rec(v, top):
            if v == D:
                return True
            for c in range(min(top + 1, B - 1) + 1):
                if all(lab[u] != c for u in adj[v] if u < v):
                    lab[v] = c
                    if rec(v + 1, max(top, c)):
                        return True
            lab[v] = -1
            return False

        return tuple(lab) if rec(0, -1) else None

    def walk(self, depth, cls, chosen):
        if depth == len(self.enum):
            if self.spec.prune:
                (j,) = self.rest
                lab = self._colour(cls, j)
                if lab is None:
                    self.stats["completion"] += 1
                    return None
                done = dict(chosen)
                done[j] = lab
                return done
            seen: dict = {}
            for x, c in enumerate(cls):
                if seen.setdefault(c, self.f[x]) != self.f[x]:
                    return None
            return dict(chosen)
        j = self.enum[depth]
        for rgs in restricted_growth_strings(self.D[j], self.B):
            res = self.step(depth, cls, chosen, j, rgs)
            if res is not None:
                return res
        return None

    def step(self, depth, cls, chosen, j, rgs):
        self.nodes += 1
        cls2 = self._classes(cls, j, rgs)
        if self.spec.prune:
            why = self._prune(cls2, set(chosen) | {j})
            if why:
                self.stats[why] += 1
                return None
        chosen2 = dict(chosen)
        chosen2[j] = rgs
        return self.walk(depth + 1, cls2, chosen2)

    def to_code(self, chosen) -> TableCode:
        return TableCode(self.k, tuple(chosen[j] for j in range(self.model.m)))


def search_table(spec: SearchSpec) -> SearchOutcome:
    s = _TableSearch(spec)
    s.nodes = 1
    res = s.walk(0, [0] * s.total, {})
    found = s.to_code(res) if res is not None else None
    return SearchOutcome(found, s.nodes, sum(s.stats.values()), dict(s.stats), spec.k, spec.n_max, "table", spec.model.q)


def search(spec: SearchSpec) -> SearchOutcome:
    return search_linear(spec) if spec.cls == "linear" else search_table(spec)


# ---------------------------------------------------------------- capacity floor

@dataclass(frozen=True)
class ScanReport:
    per_k: tuple[tuple[int, int], ...]
    floor: Fraction
    attained_at: int

    def to_json(self) -> dict:
        return {
            "per_k": [{"k": k, "n": n} for k, n in self.per_k],
            "floor": f"{self.floor.numerator}/{self.floor.denominator}",
            "attained_at": self.attained_at,
        }


def scan_capacity_floor(model: Model, k_max: int, workers: int = 1) -> ScanReport:
    """Smallest linear-code budget n for each k <= k_max, and min n/k."""
    if not 1 <= k_max <= 4:
        raise ValueError("k_max must be between 1 and 4")
    widest = max(len(model.theta(j)) for j in range(model.m))
    per_k = []
    for k in range(1, k_max + 1):
        lo, hi = 0, k * widest  # hi always works: forward everything
        while lo < hi:
            mid = (lo + hi) // 2
            if search_linear(SearchSpec(model, k, mid, "linear", workers)).found is not None:
                hi = mid
            else:
                lo = mid + 1
        per_k.append((k, lo))
    best = min(per_k, key=lambda kn: (Fraction(kn[1], kn[0]), kn[0]))
    return ScanReport(tuple(per_k), Fraction(best[1], best[0]), best[0])
