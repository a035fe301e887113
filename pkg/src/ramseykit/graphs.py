"""Ordered simple graphs on {1,...,n}: bitset adjacency, seeded G(n,p)
sampling, clique streams and counts, and the clean-subgraph construction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

Edge = tuple[int, int]

__all__ = [
    "Edge",
    "OrderedGraph",
    "GnpSample",
    "gnp_generate",
    "count_cliques",
    "enumerate_cliques",
    "edge_count_between",
    "degree_into",
    "clean_subgraph",
    "vertex_mask",
    "bits",
    "read_graph",
    "write_graph",
]


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def normalise_edge(u: int, v: int) -> Edge:
    u, v = int(u), int(v)
    if u == v:
        raise ValueError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


class OrderedGraph:
    """Simple graph on the ordered vertex set {1,...,n}.

    Adjacency is one Python-int bitmask per vertex (bit v of ``adjacency(u)``
    is set iff uv is an edge), so neighbourhood intersections cost one word
    operation per 64 vertices.  Instances are immutable after construction
    and safe to share read-only across parallel workers.
    """

    __slots__ = ("n", "_adj", "_edges")

    def __init__(self, n: int, edges: Iterable[Edge] = ()) -> None:
        if n < 1:
            raise ValueError("vertex count must be >= 1")
        self.n = n
        adj = [0] * (n + 1)
        seen: set[Edge] = set()
        for u, v in edges:
            u, v = normalise_edge(u, v)
            if not (1 <= u and v <= n):
                raise ValueError(f"edge ({u},{v}) outside {{1,...,{n}}}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self._adj = adj
        self._edges = tuple(sorted(seen))

    @classmethod
    def complete(cls, n: int) -> "OrderedGraph":
        return cls(n, [(u, v) for u in range(1, n) for v in range(u + 1, n + 1)])

    @classmethod
    def empty(cls, n: int) -> "OrderedGraph":
        return cls(n, ())

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def edges(self) -> tuple[Edge, ...]:
        """All edges as (u,v) with u < v, lexicographically sorted."""
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def vertex_bitmask(self) -> int:
        """Bitmask with bits 1..n set."""
        return ((1 << (self.n + 1)) - 1) & ~1

    def adjacency(self, v: int) -> int:
        """Neighbourhood of v as a bitmask."""
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return bool(self._adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def is_complete(self) -> bool:
        return self.edge_count == self.n * (self.n - 1) // 2

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrderedGraph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"OrderedGraph(n={self.n}, m={self.edge_count})"


def vertex_mask(graph: OrderedGraph, vertices: Optional[Iterable[int]]) -> int:
    """Bitmask for a vertex subset (defaults to all vertices)."""
    if vertices is None:
        return graph.vertex_bitmask
    mask = 0
    for v in vertices:
        if not 1 <= v <= graph.n:
            raise ValueError(f"vertex {v} outside {{1,...,{graph.n}}}")
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class GnpSample:
    """A binomial random graph together with the parameters that produced it.

    Regenerating with the same (n, p, seed) reproduces the identical edge
    set bit for bit.
    """

    graph: OrderedGraph
    p: float
    seed: int


def gnp_generate(n: int, p: float, seed: int) -> GnpSample:
    """Sample G(n,p) with a fixed, portable randomness contract.

    The generator is numpy's PCG64 keyed by ``seed``; one uniform draw is
    consumed per vertex pair in lexicographic order (1,2), (1,3), ...,
    (n-1,n), and the pair is an edge iff its draw is < p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0,1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.random(n * (n - 1) // 2)
    iu, iv = np.triu_indices(n, k=1)
    chosen = draws < p
    edges = [(int(u) + 1, int(v) + 1) for u, v in zip(iu[chosen], iv[chosen])]
    return GnpSample(OrderedGraph(n, edges), float(p), int(seed))


def _count_extensions(adj: Sequence[int], cand: int, need: int) -> int:
    """Number of ``need``-cliques inside ``cand`` whose vertices ascend."""
    if need == 1:
        return cand.bit_count()
    total = 0
    rest = cand
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        rest ^= low
        if rest.bit_count() < need - 1:
            break
        sub = rest & adj[v]
        if sub.bit_count() >= need - 1:
            total += _count_extensions(adj, sub, need - 1)
    return total


def count_cliques(graph: OrderedGraph, ell: int,
                  within: Optional[Iterable[int]] = None) -> int:
    """Labeled K_ell count: (number of ell-sets inducing cliques) * ell!.

    Counts are exact Python integers, so there is no word-size overflow to
    detect; results of any magnitude are returned faithfully.
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    mask = vertex_mask(graph, within)
    if mask.bit_count() < ell:
        return 0
    return _count_extensions(graph._adj, mask, ell) * math.factorial(ell)


def enumerate_cliques(graph: OrderedGraph, ell: int,
                      within: Optional[Iterable[int]] = None) -> Iterator[tuple[int, ...]]:
    """Stream the increasing ell-tuples inducing K_ell, in lexicographic order.

    Restricting to ``within`` streams only cliques inside that vertex set.
    The stream supports early termination (it is a generator).
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    adj = graph._adj
    mask = vertex_mask(graph, within)

    prefix: list[int] = []

    def grow(cand: int, need: int) -> Iterator[tuple[int, ...]]:
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            if need == 1:
                yield tuple(prefix) + (v,)
                continue
            if rest.bit_count() < need - 1:
                break
            sub = rest & adj[v]
            if sub.bit_count() >= need - 1:
                prefix.append(v)
                yield from grow(sub, need - 1)
                prefix.pop()

    return grow(mask, ell)


def edge_count_between(graph: OrderedGraph, xs: Iterable[int], ys: Iterable[int]) -> int:
    """|{(x,y) in X x Y : xy is an edge}|; edges inside X∩Y count twice."""
    ymask = vertex_mask(graph, ys)
    total = 0
    for x in bits(vertex_mask(graph, xs)):
        total += (graph._adj[x] & ymask).bit_count()
    return total


def degree_into(graph: OrderedGraph, v: int, us: Iterable[int]) -> int:
    """|N(v) ∩ U|; v itself never contributes (no loops)."""
    if not 1 <= v <= graph.n:
        raise ValueError(f"vertex {v} outside {{1,...,{graph.n}}}")
    return (graph._adj[v] & vertex_mask(graph, us)).bit_count()


def _has_conflicting_clique_pair(adj: Sequence[int], common: int, k: int) -> bool:
    """Do two distinct k-cliques inside ``common`` share a vertex?

    Used by the cleaning scan with k = ell-2: two K_ell through a fixed edge
    intersect in >= 3 vertices iff their residual (ell-2)-cliques inside the
    common neighbourhood share a vertex.  For k = 1 distinct singletons are
    disjoint, so the answer is always False.
    """
    if k < 1 or common.bit_count() < k:
        return False
    if k == 1:
        return False
    membership: dict[int, int] = {}

    def scan(cand: int, chosen: list[int], need: int) -> bool:
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            if need == 1:
                for w in chosen + [v]:
                    count = membership.get(w, 0) + 1
                    if count >= 2:
                        return True
                    membership[w] = count
                continue
            if rest.bit_count() < need - 1:
                break
            sub = rest & adj[v]
            if sub.bit_count() >= need - 1:
                chosen.append(v)
                if scan(sub, chosen, need - 1):
                    return True
                chosen.pop()
        return False

    return scan(common, [], k)


def clean_subgraph(graph: OrderedGraph, ell: int) -> OrderedGraph:
    """Scan edges lexicographically, dropping any edge that currently lies in
    two distinct K_ell's sharing at least three vertices.

    The scan order makes the result unique and deterministic.  For ell = 3
    the removal condition is vacuous (two distinct triangles share at most
    two vertices) and the graph is returned unchanged.  For ell >= 4 the
    result contains no K_{ell+1} and no two K_ell's sharing >= 3 vertices,
    and the operation is idempotent.
    """
    if ell < 3:
        raise ValueError("ell must be >= 3")
    adj = list(graph._adj)
    kept: list[Edge] = []
    for u, v in graph.edges:
        common = adj[u] & adj[v]
        if _has_conflicting_clique_pair(adj, common, ell - 2):
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        else:
            kept.append((u, v))
    return OrderedGraph(graph.n, kept)


def write_graph(graph: OrderedGraph, path: str) -> None:
    """Write the text format: header "n m", then sorted lines "u v"."""
    lines = [f"{graph.n} {graph.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_graph(path: str) -> OrderedGraph:
    """Read the graph text format.

    Lines may appear in any order but duplicate edges, loops, and endpoints
    outside {1,...,n} are rejected with the offending line number.
    """
    with open(path) as fh:
        raw = [line.strip() for line in fh]
    lines = [line for line in raw if line]
    if not lines:
        raise ValueError("empty graph file")
    try:
        n, m = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"line 1: malformed header {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise ValueError(f"header announces {m} edges, file has {len(lines) - 1}")
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for idx, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {idx}: expected 'u v', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise ValueError(f"line {idx}: loop at vertex {u}")
        edge = normalise_edge(u, v)
        if not (1 <= edge[0] and edge[1] <= n):
            raise ValueError(f"line {idx}: edge {edge} outside {{1,...,{n}}}")
        if edge in seen:
            raise ValueError(f"line {idx}: duplicate edge {edge}")
        seen.add(edge)
        edges.append(edge)
    return OrderedGraph(n, edges)
