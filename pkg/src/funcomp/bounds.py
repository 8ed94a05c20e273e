"""Cut-set lower bounds and the closed forms for rank-1 and rank-s targets.

Rates and bounds are ``fractions.Fraction`` values; ``fmt`` and ``parse``
convert to and from the ``"num/den"`` wire format.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .model import Model
from .network import Network, i_of_cut, k_of_cut

__all__ = [
    "WrongRankForFormula",
    "CutTooLarge",
    "fmt",
    "parse",
    "restricted_growth_strings",
    "strong_partitions",
    "rank_partition",
    "lower_bound_general",
    "lower_bound_general_witness",
    "lower_bound_gamma",
    "capacity_sum",
    "capacity_id",
    "MAX_PARTITION_EDGES",
]

MAX_PARTITION_EDGES = 12


class WrongRankForFormula(ValueError):
    pass


class CutTooLarge(ValueError):
    pass


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse(text: str) -> Fraction:
    return Fraction(text)


def restricted_growth_strings(n: int, max_blocks: int | None = None) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length n in lexicographic order.

    a[0] = 0 and a[i] <= 1 + max(a[:i]); with ``max_blocks`` every value
    stays below it.
    """
    if n == 0:
        yield ()
        return
    cap = n if max_blocks is None else max_blocks
    if cap < 1:
        return
    a = [0] * n
    top = [0] * n  # top[i] = max(a[:i+1])

    def rec(i: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(min(top[i - 1] + 1, cap - 1) + 1):
            a[i] = v
            top[i] = max(top[i - 1], v)
            yield from rec(i + 1)

    yield from rec(1)


def _blocks(items: Sequence[int], rgs: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    parts: list[list[int]] = [[] for _ in range(max(rgs) + 1)]
    for x, b in zip(items, rgs):
        parts[b].append(x)
    return tuple(tuple(p) for p in parts)


def strong_partitions(net: Network, C: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Partitions of C whose parts each separate a source and do not interfere."""
    items = tuple(sorted(set(C)))
    if len(items) > MAX_PARTITION_EDGES:
        raise CutTooLarge(f"|C| = {len(items)} exceeds {MAX_PARTITION_EDGES}")
    if not i_of_cut(net, items):
        raise ValueError("C is not a cut set")
    for rgs in restricted_growth_strings(len(items)):
        parts = _blocks(items, rgs)
        I = [i_of_cut(net, p) for p in parts]
        if not all(I):
            continue
        K = [k_of_cut(net, p) for p in parts]
        if all(not (I[a] & K[b]) for a in range(len(parts)) for b in range(len(parts)) if a != b):
            yield parts


def _rank_of(model: Model, sources) -> int:
    mask = sum(1 << i for i in sources)
    return model.rank_profile[mask]


def rank_partition(model: Model, net: Network, parts: Sequence[Sequence[int]]) -> int:
    """Sum of part ranks plus Rank(T[I_C]) minus the rank of the union of the part sets."""
    C = [e for p in parts for e in p]
    I_parts = [i_of_cut(net, p) for p in parts]
    union = frozenset().union(*I_parts)
    return sum(_rank_of(model, I) for I in I_parts) + _rank_of(model, i_of_cut(net, C)) - _rank_of(model, union)


def lower_bound_gamma(model: Model) -> Fraction:
    """max over nonempty encoder subsets of Rank(T[I_Gamma]) / |Gamma|."""
    masks = model.omega.masks
    best = Fraction(0)
    for g in range(1, 1 << model.m):
        I = sum(1 << i for i, gm in enumerate(masks) if gm & ~g == 0)
        val = Fraction(model.rank_profile[I], bin(g).count("1"))
        if val > best:
            best = val
    return best


def lower_bound_general(model: Model) -> Fraction:
    """max of rank_P(T) / |C| over all cut sets C and all strong partitions P of C."""
    return _lb_general(model.s, model.m, model.r, model.omega.masks, model.rank_profile)[0]


def lower_bound_general_witness(model: Model):
    """The bound together with one maximizing (cut, partition) in edge indices."""
    from .network import to_network

    value, token_parts = _lb_general(model.s, model.m, model.r, model.omega.masks, model.rank_profile)
    net = to_network(model)
    index = {}
    for idx, e in enumerate(net.edges):
        if e.head == net.sink:
            index[("sink", e.tail - net.s)] = idx
        else:
            index[("pair", e.tail, e.head - net.s, e.copy)] = idx
    parts = tuple(tuple(sorted(index[t] for t in p)) for p in token_parts)
    return value, parts


def _family_gain(R: Sequence[int], s: int) -> list[int]:
    """gain[J] = R(J) + max over disjoint nonempty families inside J of sum R(parts) - R(union)."""
    best_extra = [0] * (1 << s)
    for U in range(1, 1 << s):
        members = [i for i in range(s) if U >> i & 1]
        top = 0
        for rgs in restricted_growth_strings(len(members)):
            blocks = [0] * (max(rgs) + 1)
            for i, b in zip(members, rgs):
                blocks[b] |= 1 << i
            top = max(top, sum(R[b] for b in blocks) - R[U])
        best_extra[U] = top
    gain = [0] * (1 << s)
    for J in range(1 << s):
        sub = J
        extra = 0
        while sub:
            extra = max(extra, best_extra[sub])
            sub = (sub - 1) & J
        gain[J] = R[J] + extra
    return gain


@lru_cache(maxsize=4096)
def _lb_general(s: int, m: int, r: int, masks: tuple[int, ...], R: tuple[int, ...]):
    """Exact maximization over cuts and strong partitions.

    Two reductions keep this exhaustive search small without changing the
    maximum.  Parallel copies of one (source, encoder) pair are
    interchangeable, so a cut only needs to say how many copies of each
    pair it holds.  And a strong partition has at most |I_C| parts, with
    numerator at most ``gain[I_C]``; cuts whose size makes
    ``gain / |C|`` no better than the incumbent are skipped, and the size
    loop stops once even the global gain cannot win.
    """
    ell = -(-m // r)
    theta = [sum(1 << i for i in range(s) if masks[i] >> j & 1) for j in range(m)]
    pairs = [(i, j) for i in range(s) for j in range(m) if masks[i] >> j & 1]
    gain = _family_gain(R, s)
    gmax = gain[(1 << s) - 1]

    # incumbent: encoder-side cuts with the trivial partition
    best_num, best_den = 0, 1
    best_parts: tuple = ()
    for g in range(1, 1 << m):
        I = sum(1 << i for i in range(s) if masks[i] & ~g == 0)
        num, den = R[I], bin(g).count("1")
        if num * best_den > best_num * den:
            best_num, best_den = num, den
            best_parts = (tuple(("sink", j) for j in range(m) if g >> j & 1),)

    def cut_sources(sinks: int, counts: dict) -> int:
        out = 0
        for i in range(s):
            ok = True
            for j in range(m):
                if masks[i] >> j & 1 and not (sinks >> j & 1) and counts.get((i, j), 0) < ell:
                    ok = False
                    break
            if ok:
                out |= 1 << i
        return out

    def part_sets(tokens) -> tuple[int, int]:
        sinks = 0
        counts: dict = {}
        K = 0
        for t in tokens:
            if t[0] == "sink":
                sinks |= 1 << t[1]
                K |= theta[t[1]]
            else:
                key = (t[1], t[2])
                counts[key] = counts.get(key, 0) + 1
                K |= 1 << t[1]
        return cut_sources(sinks, counts), K

    def count_vectors(total: int, start: int):
        # distribute `total` copies over pairs[start:], at most ell each
        if total == 0:
            yield ()
            return
        if start == len(pairs):
            return
        for c in range(min(ell, total), -1, -1):
            for rest in count_vectors(total - c, start + 1):
                yield ((pairs[start], c),) + rest if c else rest

    size = 1
    while size * best_num < gmax * best_den:
        for nsink in range(0, min(m, size) + 1):
            for sink_set in itertools.combinations(range(m), nsink):
                sinks = sum(1 << j for j in sink_set)
                for cv in count_vectors(size - nsink, 0):
                    counts = dict(cv)
                    IC = cut_sources(sinks, counts)
                    if not IC or gain[IC] * best_den <= best_num * size:
                        continue
                    tokens = [("sink", j) for j in sink_set]
                    for (i, j), c in cv:
                        tokens.extend(("pair", i, j, k) for k in range(c))
                    nI = bin(IC).count("1")
                    for rgs in restricted_growth_strings(len(tokens), nI):
                        parts = _blocks_tokens(tokens, rgs)
                        sets = [part_sets(p) for p in parts]
                        if any(I == 0 for I, _ in sets):
                            continue
                        bad = False
                        for a, (Ia, _) in enumerate(sets):
                            for b, (_, Kb) in enumerate(sets):
                                if a != b and Ia & Kb:
                                    bad = True
                                    break
                            if bad:
                                break
                        if bad:
                            continue
                        union = 0
                        total = 0
                        for Ia, _ in sets:
                            union |= Ia
                            total += R[Ia]
                        num = total + R[IC] - R[union]
                        if num * best_den > best_num * size:
                            best_num, best_den = num, size
                            best_parts = parts
        size += 1
    return Fraction(best_num, best_den), best_parts


def _blocks_tokens(tokens, rgs):
    parts: list[list] = [[] for _ in range(max(rgs) + 1)]
    for t, b in zip(tokens, rgs):
        parts[b].append(t)
    return tuple(tuple(p) for p in parts)


def capacity_sum(model: Model) -> Fraction:
    """max_i 1 / |Gamma_i|, valid when Rank(T) = 1."""
    if model.T.rank() != 1:
        raise WrongRankForFormula(f"needs Rank(T) = 1, got {model.T.rank()}")
    return max(Fraction(1, len(g)) for g in model.gamma)


def capacity_id(model: Model) -> Fraction:
    """max over encoder subsets of |I_Gamma| / |Gamma|, valid when Rank(T) = s."""
    if model.T.rank() != model.s:
        raise WrongRankForFormula(f"needs Rank(T) = s = {model.s}, got {model.T.rank()}")
    masks = model.omega.masks
    best = Fraction(0)
    for g in range(1, 1 << model.m):
        size = sum(1 for gm in masks if gm & ~g == 0)
        best = max(best, Fraction(size, bin(g).count("1")))
    return best
