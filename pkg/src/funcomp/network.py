"""The induced network of a model and its cut-set quantities.

Node numbering: sources ``0..s-1``, encoders ``s..s+m-1``, sink ``s+m``.
Every wired (source, encoder) pair gets ``ell = ceil(m / r)`` parallel unit
edges; every encoder has one edge to the sink.  Edge order: by source, then
encoder, then copy index, and the sink edges last.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .model import Model

__all__ = [
    "Edge",
    "Network",
    "NetworkTooLarge",
    "to_network",
    "i_of_cut",
    "k_of_cut",
    "i_gamma",
    "cut_sets",
    "MAX_CUT_EDGES",
]

MAX_CUT_EDGES = 24


class NetworkTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    copy: int = 0


@dataclass(frozen=True)
class Network:
    s: int
    m: int
    ell: int
    edges: tuple[Edge, ...]

    @property
    def sink(self) -> int:
        return self.s + self.m

    @property
    def num_nodes(self) -> int:
        return self.s + self.m + 1

    def node_name(self, v: int) -> str:
        if v < self.s:
            return f"sigma{v + 1}"
        if v < self.s + self.m:
            return f"v{v - self.s + 1}"
        return "rho"

    def sink_edge(self, j: int) -> int:
        """Index of the edge from encoder j to the sink."""
        return len(self.edges) - self.m + j

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for idx, e in enumerate(self.edges):
            out[e.tail].append(idx)
        return tuple(tuple(x) for x in out)

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for idx, e in enumerate(self.edges):
            inc[e.head].append(idx)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def upstream_sources(self) -> tuple[frozenset[int], ...]:
        """Sources with a (possibly empty) path to each node."""
        out = []
        for v in range(self.num_nodes):
            seen = {v}
            todo = deque([v])
            while todo:
                u = todo.popleft()
                for idx in self.in_edges[u]:
                    t = self.edges[idx].tail
                    if t not in seen:
                        seen.add(t)
                        todo.append(t)
            out.append(frozenset(x for x in seen if x < self.s))
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "m": self.m,
            "ell": self.ell,
            "nodes": [self.node_name(v) for v in range(self.num_nodes)],
            "edges": [
                {"id": idx + 1, "tail": self.node_name(e.tail), "head": self.node_name(e.head), "copy": e.copy + 1}
                for idx, e in enumerate(self.edges)
            ],
        }


def to_network(model: Model) -> Network:
    s, m = model.s, model.m
    ell = -(-m // model.r)
    edges = []
    for i, g in enumerate(model.gamma):
        for j in sorted(g):
            for c in range(ell):
                edges.append(Edge(i, s + j, c))
    for j in range(m):
        edges.append(Edge(s + j, s + m))
    return Network(s, m, ell, tuple(edges))


def i_of_cut(net: Network, C: Iterable[int]) -> frozenset[int]:
    """Sources that cannot reach the sink once the edges of C are deleted."""
    removed = set(C)
    cut = set()
    for src in range(net.s):
        seen = {src}
        todo = deque([src])
        reached = False
        while todo and not reached:
            u = todo.popleft()
            for idx in net.out_edges[u]:
                if idx in removed:
                    continue
                h = net.edges[idx].head
                if h == net.sink:
                    reached = True
                    break
                if h not in seen:
                    seen.add(h)
                    todo.append(h)
        if not reached:
            cut.add(src)
    return frozenset(cut)


def k_of_cut(net: Network, C: Iterable[int]) -> frozenset[int]:
    """Sources with a path to the tail of some edge of C (empty paths count)."""
    out: set[int] = set()
    for idx in C:
        out |= net.upstream_sources[net.edges[idx].tail]
    return frozenset(out)


def i_gamma(model: Model, gamma: Iterable[int]) -> frozenset[int]:
    """Sources whose whole encoder set lies in ``gamma``."""
    g = frozenset(gamma)
    return frozenset(i for i, gi in enumerate(model.gamma) if gi <= g)


def _source_conditions(net: Network) -> list[list[tuple[int, int]]]:
    """Per source: (mask of parallel copies, sink-edge bit) for each wired encoder."""
    conds: list[list[tuple[int, int]]] = [[] for _ in range(net.s)]
    groups: dict[tuple[int, int], int] = {}
    for idx, e in enumerate(net.edges):
        if e.tail < net.s:
            groups[(e.tail, e.head)] = groups.get((e.tail, e.head), 0) | (1 << idx)
    for (i, v), mask in groups.items():
        conds[i].append((mask, 1 << net.sink_edge(v - net.s)))
    return conds


def cut_sets(net: Network) -> Iterator[tuple[int, ...]]:
    """Every edge subset C with nonempty I_C, in increasing bitmask order."""
    E = len(net.edges)
    if E > MAX_CUT_EDGES:
        raise NetworkTooLarge(f"{E} edges exceed the enumeration cap of {MAX_CUT_EDGES}")
    conds = _source_conditions(net)
    for mask in range(1, 1 << E):
        for src_conds in conds:
            if all((mask & cm) == cm or mask & sb for cm, sb in src_conds):
                yield tuple(idx for idx in range(E) if mask >> idx & 1)
                break
