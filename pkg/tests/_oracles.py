"""Brute-force reference computations used by the tests.

None of these reuse the package's elimination code: spans are built by
enumerating linear combinations, admissibility by evaluating every
encoder on every source tuple.
"""

import itertools
from fractions import Fraction
from math import comb

from funcomp.bounds import rank_partition, strong_partitions
from funcomp.codes import LinearCode, local_coords
from funcomp.network import cut_sets, to_network


def span_size(rows, field):
    """Number of distinct vectors in the span, by closure under the field ops."""
    ncols = len(rows[0]) if rows else 0
    seen = {(0,) * ncols}
    for r in rows:
        new = set()
        for v in seen:
            for c in range(field.q):
                new.add(tuple(field.add(x, field.mul(c, y)) for x, y in zip(v, r)))
        seen = new
    return len(seen)


def brute_rank(rows, field):
    size, r = span_size(rows, field), 0
    while field.q ** r < size:
        r += 1
    assert field.q ** r == size
    return r


def state_count(s, m):
    """Covering tuples of s nonempty subsets of an m-set, by inclusion-exclusion."""
    return sum((-1) ** i * comb(m, i) * (2 ** (m - i) - 1) ** s for i in range(m + 1))


def naive_lower_bound(model):
    net = to_network(model)
    best = Fraction(0)
    for C in cut_sets(net):
        for P in strong_partitions(net, C):
            best = max(best, Fraction(rank_partition(model, net, P), len(C)))
    return best


def naive_gamma_bound(model):
    best = Fraction(0)
    for r in range(1, model.m + 1):
        for G in itertools.combinations(range(model.m), r):
            I = [i for i in range(model.s) if model.gamma[i] <= set(G)]
            rk = brute_rank([model.T.rows[i] for i in I], model.field) if I else 0
            best = max(best, Fraction(rk, r))
    return best


def brute_admissible(model, code):
    """Evaluate the encoders on all source tuples and test the refinement property."""
    f, k, s = model.field, code.k, model.s
    dec = {}
    for x in itertools.product(range(model.q), repeat=k * s):
        outs = []
        for j, e in enumerate(code.enc):
            local = [x[g] for g in local_coords(model, k, j)]
            if isinstance(code, LinearCode):
                val = []
                for c in range(e.ncols):
                    acc = 0
                    for l, xv in enumerate(local):
                        acc = f.add(acc, f.mul(xv, e[l, c]))
                    val.append(acc)
                outs.append(tuple(val))
            else:
                idx = 0
                for xv in local:
                    idx = idx * model.q + xv
                outs.append(e[idx])
        target = []
        for c in range(model.r):
            for t in range(k):
                acc = 0
                for i in range(s):
                    acc = f.add(acc, f.mul(x[i * k + t], model.T[i, c]))
                target.append(acc)
        if dec.setdefault(tuple(outs), tuple(target)) != tuple(target):
            return False
    return True
