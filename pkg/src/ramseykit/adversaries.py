"""Structured edge-colouring generators used as adversaries in experiments."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .colouring import EdgeColouring
from .graphs import OrderedGraph

__all__ = [
    "KINDS",
    "AdversarySpec",
    "generate_colouring",
    "verify_properness",
    "max_colour_multiplicity",
]

KINDS = ("RandomR", "Injective", "MinOrder", "MaxOrder", "GreedyProper", "BoundedRandom")

_REDRAW_LIMIT = 100


@dataclass(frozen=True)
class AdversarySpec:
    """Declarative description of a colouring adversary.

    kind semantics:
      RandomR        -- i.i.d. uniform colours from {0,...,r-1}
      Injective      -- fresh colour per edge in lexicographic order
      MinOrder       -- phi(uv) = min(u, v)
      MaxOrder       -- phi(uv) = max(u, v)
      GreedyProper   -- greedy proper colouring, lexicographic edge scan,
                        least colour absent at both endpoints
      BoundedRandom  -- uniform colours from {0,...,r-1}, redrawn per edge
                        until no vertex sees > lam edges of one colour;
                        after 100 failed draws the edge gets a fresh colour
                        id beyond the palette (deterministic repair)

    The palette size r defaults to the host's vertex count for
    BoundedRandom, where the multiplicity constraint is the point.
    """

    kind: str
    r: Optional[int] = None
    lam: Optional[int] = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown adversary kind {self.kind!r}")
        if self.kind == "RandomR" and (self.r is None or self.r < 1):
            raise ValueError("RandomR needs r >= 1")
        if self.kind == "BoundedRandom":
            if self.lam is None or self.lam < 1:
                raise ValueError("BoundedRandom needs lambda >= 1")
            if self.r is not None and self.r < 1:
                raise ValueError("BoundedRandom palette must satisfy r >= 1")

    def with_seed(self, seed: int) -> "AdversarySpec":
        return replace(self, seed=int(seed))

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "seed": self.seed}
        if self.r is not None:
            out["r"] = self.r
        if self.lam is not None:
            out["lambda"] = self.lam
        return out

    @classmethod
    def from_json(cls, data: dict) -> "AdversarySpec":
        return cls(
            kind=data["kind"],
            r=data.get("r"),
            lam=data.get("lambda"),
            seed=int(data.get("seed", 0)),
        )


def _greedy_proper(graph: OrderedGraph) -> dict:
    used_at: list[set[int]] = [set() for _ in range(graph.n + 1)]
    mapping = {}
    for u, v in graph.edges:
        taken = used_at[u] | used_at[v]
        c = 0
        while c in taken:
            c += 1
        mapping[(u, v)] = c
        used_at[u].add(c)
        used_at[v].add(c)
    return mapping


def _bounded_random(graph: OrderedGraph, spec: AdversarySpec) -> dict:
    palette = spec.r if spec.r is not None else graph.n
    lam = spec.lam
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    # multiplicity[v][c] = edges of colour c already incident to v
    multiplicity: list[dict[int, int]] = [dict() for _ in range(graph.n + 1)]
    fresh = palette
    mapping = {}
    for u, v in graph.edges:
        chosen = None
        for _ in range(_REDRAW_LIMIT):
            c = int(rng.integers(0, palette))
            if multiplicity[u].get(c, 0) < lam and multiplicity[v].get(c, 0) < lam:
                chosen = c
                break
        if chosen is None:
            chosen = fresh  # fresh id: multiplicity 1 at both ends
            fresh += 1
        mapping[(u, v)] = chosen
        multiplicity[u][chosen] = multiplicity[u].get(chosen, 0) + 1
        multiplicity[v][chosen] = multiplicity[v].get(chosen, 0) + 1
    return mapping


def generate_colouring(graph: OrderedGraph, spec: AdversarySpec) -> EdgeColouring:
    """Produce the colouring described by ``spec``; same inputs, same output."""
    edges = graph.edges
    if spec.kind == "RandomR":
        rng = np.random.Generator(np.random.PCG64(spec.seed))
        draws = rng.integers(0, spec.r, size=len(edges))
        mapping = {edge: int(c) for edge, c in zip(edges, draws)}
    elif spec.kind == "Injective":
        mapping = {edge: i for i, edge in enumerate(edges)}
    elif spec.kind == "MinOrder":
        mapping = {(u, v): u for u, v in edges}
    elif spec.kind == "MaxOrder":
        mapping = {(u, v): v for u, v in edges}
    elif spec.kind == "GreedyProper":
        mapping = _greedy_proper(graph)
    elif spec.kind == "BoundedRandom":
        mapping = _bounded_random(graph, spec)
    else:  # pragma: no cover - guarded by AdversarySpec
        raise ValueError(f"unknown adversary kind {spec.kind!r}")
    return EdgeColouring(graph, mapping)


def verify_properness(phi: EdgeColouring) -> bool:
    """True iff no two incident edges share a colour."""
    seen: list[set[int]] = [set() for _ in range(phi.host.n + 1)]
    for (u, v), c in phi.items():
        if c in seen[u] or c in seen[v]:
            return False
        seen[u].add(c)
        seen[v].add(c)
    return True


def max_colour_multiplicity(phi: EdgeColouring) -> int:
    """max over vertices v and colours c of the colour degree d_c(v, V)."""
    counts: list[dict[int, int]] = [dict() for _ in range(phi.host.n + 1)]
    best = 0
    for (u, v), c in phi.items():
        for x in (u, v):
            counts[x][c] = counts[x].get(c, 0) + 1
            if counts[x][c] > best:
                best = counts[x][c]
    return best
