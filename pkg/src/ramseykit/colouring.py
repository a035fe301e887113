"""Edge colourings and their statistics: canonical-pattern classification,
(directed) colour degrees, boundedness predicates, non-rainbow copy counters,
pair/cherry densities, and greedy colour partitioning."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from .graphs import Edge, OrderedGraph, bits, normalise_edge, vertex_mask

__all__ = [
    "EdgeColouring",
    "PatternTag",
    "STRICT_TAGS",
    "CanonicalWitness",
    "NotAClique",
    "WeightExceedsCap",
    "classify_copy",
    "witness_for",
    "colour_degree",
    "directed_colour_degree",
    "is_delta_p_bounded",
    "unbounded_condition_holds",
    "unbounded_vertices",
    "bounded_side_split",
    "nonrainbow_cherry_count",
    "nonrainbow_matching_count",
    "pair_density",
    "cherry_density",
    "greedy_colour_partition",
    "read_colouring",
    "write_colouring",
]


class NotAClique(Exception):
    """A required edge of the candidate copy is absent from the host graph."""


class WeightExceedsCap(Exception):
    """A single colour's weight already exceeds the class capacity."""


class PatternTag(enum.Enum):
    MONOCHROMATIC = "Monochromatic"
    RAINBOW = "Rainbow"
    MIN_COLOURED = "MinColoured"
    MAX_COLOURED = "MaxColoured"
    NON_STRICT_MIN = "NonStrictMin"
    NON_STRICT_MAX = "NonStrictMax"


#: The four canonical patterns proper; non-strict variants are bookkeeping.
STRICT_TAGS = frozenset(
    {PatternTag.MONOCHROMATIC, PatternTag.RAINBOW,
     PatternTag.MIN_COLOURED, PatternTag.MAX_COLOURED}
)


class EdgeColouring:
    """A total map from the host graph's edge set to colour ids.

    Colour ids are opaque non-negative integers and need not be contiguous;
    ``relabel_dense`` produces an equivalent colouring with ids 0..k-1.
    """

    __slots__ = ("host", "_map")

    def __init__(self, host: OrderedGraph, mapping: Mapping[Edge, int]) -> None:
        norm: dict[Edge, int] = {}
        for (u, v), c in mapping.items():
            edge = normalise_edge(u, v)
            if int(c) < 0:
                raise ValueError(f"negative colour {c} on edge {edge}")
            norm[edge] = int(c)
        if set(norm) != set(host.edges):
            missing = set(host.edges) - set(norm)
            extra = set(norm) - set(host.edges)
            raise ValueError(
                f"colouring domain mismatch: missing {sorted(missing)[:3]}, "
                f"extraneous {sorted(extra)[:3]}"
            )
        self.host = host
        self._map = norm

    def colour(self, u: int, v: int) -> int:
        return self._map[normalise_edge(u, v)]

    def get(self, u: int, v: int) -> Optional[int]:
        if u == v:
            return None
        return self._map.get(normalise_edge(u, v))

    def items(self) -> Iterator[tuple[Edge, int]]:
        for edge in self.host.edges:
            yield edge, self._map[edge]

    def colours(self) -> set[int]:
        return set(self._map.values())

    def relabel_dense(self) -> "EdgeColouring":
        """Relabel colours to 0..k-1 by first appearance in edge order."""
        table: dict[int, int] = {}
        remapped = {}
        for edge in self.host.edges:
            c = self._map[edge]
            if c not in table:
                table[c] = len(table)
            remapped[edge] = table[c]
        return EdgeColouring(self.host, remapped)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeColouring):
            return NotImplemented
        return self.host == other.host and self._map == other._map

    def __repr__(self) -> str:
        return f"EdgeColouring(n={self.host.n}, m={self.host.edge_count}, colours={len(self.colours())})"


@dataclass(frozen=True)
class CanonicalWitness:
    """An increasing clique tuple, the pattern tags it realises, and the
    (edge, colour) evidence backing them."""

    vertices: tuple[int, ...]
    tags: frozenset[PatternTag]
    evidence: tuple[tuple[Edge, int], ...]

    def is_canonical(self) -> bool:
        return bool(self.tags & STRICT_TAGS)


def _classify(colour_of: Callable[[int, int], Optional[int]],
              vertices: Sequence[int]) -> set[PatternTag]:
    verts = tuple(vertices)
    if len(verts) < 2 or any(a >= b for a, b in zip(verts, verts[1:])):
        raise ValueError(f"vertices must be strictly increasing, got {verts}")
    ell = len(verts)
    grid: list[list[int]] = [[0] * ell for _ in range(ell)]
    all_colours: list[int] = []
    for i in range(ell):
        for j in range(i + 1, ell):
            c = colour_of(verts[i], verts[j])
            if c is None:
                raise NotAClique(f"edge ({verts[i]},{verts[j]}) absent")
            grid[i][j] = c
            all_colours.append(c)

    tags: set[PatternTag] = set()
    if len(set(all_colours)) == 1:
        tags.add(PatternTag.MONOCHROMATIC)
    if len(set(all_colours)) == len(all_colours):
        tags.add(PatternTag.RAINBOW)

    # min pattern: the colour of {v_i, v_j} (i<j) may depend only on i
    row_colours = []
    rows_constant = True
    for i in range(ell - 1):
        row = [grid[i][j] for j in range(i + 1, ell)]
        if len(set(row)) != 1:
            rows_constant = False
            break
        row_colours.append(row[0])
    if rows_constant:
        tags.add(PatternTag.NON_STRICT_MIN)
        if len(set(row_colours)) == len(row_colours):
            tags.add(PatternTag.MIN_COLOURED)

    # max pattern: colour may depend only on j
    col_colours = []
    cols_constant = True
    for j in range(1, ell):
        col = [grid[i][j] for i in range(j)]
        if len(set(col)) != 1:
            cols_constant = False
            break
        col_colours.append(col[0])
    if cols_constant:
        tags.add(PatternTag.NON_STRICT_MAX)
        if len(set(col_colours)) == len(col_colours):
            tags.add(PatternTag.MAX_COLOURED)
    return tags


def classify_copy(phi: EdgeColouring, vertices: Sequence[int]) -> set[PatternTag]:
    """All pattern tags realised by the given increasing clique tuple.

    Strict min/max test the full biconditional (colours agree exactly when
    the min resp. max endpoints agree); the non-strict variants test only
    the backward implication.  Raises NotAClique if an edge is missing.
    """
    return _classify(phi.get, vertices)


def witness_for(phi: EdgeColouring, vertices: Sequence[int]) -> CanonicalWitness:
    """Package a clique tuple with its tags and edge-colour evidence."""
    verts = tuple(vertices)
    tags = classify_copy(phi, verts)
    evidence = tuple(
        ((verts[i], verts[j]), phi.colour(verts[i], verts[j]))
        for i in range(len(verts))
        for j in range(i + 1, len(verts))
    )
    return CanonicalWitness(verts, frozenset(tags), evidence)


def _colour_counts(phi: EdgeColouring, v: int, umask: int) -> dict[int, int]:
    counts: dict[int, int] = {}
    for w in bits(phi.host.adjacency(v) & umask):
        c = phi.colour(v, w)
        counts[c] = counts.get(c, 0) + 1
    return counts


def colour_degree(phi: EdgeColouring, v: int, us: Iterable[int], c: int) -> int:
    """|{w in U : vw is an edge and phi(vw) = c}|."""
    umask = vertex_mask(phi.host, us)
    return sum(1 for w in bits(phi.host.adjacency(v) & umask)
               if phi.colour(v, w) == c)


def directed_colour_degree(phi: EdgeColouring, v: int, us: Iterable[int],
                           c: int, direction: str) -> int:
    """Colour degree restricted to neighbours w with v < w or v > w."""
    if direction not in ("<", ">"):
        raise ValueError("direction must be '<' or '>'")
    umask = vertex_mask(phi.host, us)
    if direction == "<":
        umask &= ~((1 << (v + 1)) - 1)
    else:
        umask &= (1 << v) - 1
    return sum(1 for w in bits(phi.host.adjacency(v) & umask)
               if phi.colour(v, w) == c)


def is_delta_p_bounded(phi: EdgeColouring, us: Iterable[int],
                       delta: float, p: float) -> bool:
    """Every colour degree into U stays <= delta * p * |U|, for every u in U."""
    umask = vertex_mask(phi.host, us)
    size = umask.bit_count()
    if size == 0:
        raise ValueError("U must be nonempty")
    cap = delta * p * size
    for u in bits(umask):
        counts = _colour_counts(phi, u, umask)
        if counts and max(counts.values()) > cap:
            return False
    return True


def unbounded_condition_holds(phi: EdgeColouring, us: Iterable[int],
                              delta: float, p: float) -> bool:
    """At least half of U has some colour degree >= 8 * delta * p * |U|.

    The half-of-U comparison is exact (2 * count >= |U|), avoiding
    floating-point ties.
    """
    umask = vertex_mask(phi.host, us)
    size = umask.bit_count()
    if size == 0:
        raise ValueError("U must be nonempty")
    threshold = 8.0 * delta * p * size
    if threshold <= 0.0:
        return True  # degree >= 0 holds vacuously at every vertex
    hits = 0
    for u in bits(umask):
        counts = _colour_counts(phi, u, umask)
        if counts and max(counts.values()) >= threshold:
            hits += 1
    return 2 * hits >= size


def unbounded_vertices(phi: EdgeColouring, us: Iterable[int], delta: float,
                       p: float, direction: str) -> tuple[int, ...]:
    """The set of u in U with some directed colour degree >= 4 * delta * p * |U|."""
    if direction not in ("<", ">"):
        raise ValueError("direction must be '<' or '>'")
    umask = vertex_mask(phi.host, us)
    size = umask.bit_count()
    if size == 0:
        raise ValueError("U must be nonempty")
    threshold = 4.0 * delta * p * size
    if threshold <= 0.0:
        return tuple(bits(umask))
    out = []
    for u in bits(umask):
        counts: dict[int, int] = {}
        hit = False
        for w in bits(phi.host.adjacency(u) & umask):
            if (direction == "<") != (u < w):
                continue
            c = phi.colour(u, w)
            counts[c] = counts.get(c, 0) + 1
            if counts[c] >= threshold:
                hit = True
                break
        if hit:
            out.append(u)
    return tuple(out)


def bounded_side_split(phi: EdgeColouring, us: Iterable[int], delta: float,
                       p: float) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Partition U into its unbounded part B(U) (some colour degree
    >= 8 * delta * p * |U|) and the bounded remainder U'."""
    umask = vertex_mask(phi.host, us)
    size = umask.bit_count()
    if size == 0:
        raise ValueError("U must be nonempty")
    threshold = 8.0 * delta * p * size
    if threshold <= 0.0:
        return tuple(bits(umask)), ()
    unbounded, rest = [], []
    for u in bits(umask):
        counts = _colour_counts(phi, u, umask)
        if counts and max(counts.values()) >= threshold:
            unbounded.append(u)
        else:
            rest.append(u)
    return tuple(unbounded), tuple(rest)


def _partite_cliques(host: OrderedGraph,
                     classes: Sequence[tuple[int, ...]]) -> Iterator[tuple[int, ...]]:
    """Stream tuples (u_1,...,u_ell), u_i in class i, inducing a clique."""
    ell = len(classes)

    def grow(chosen: list[int]) -> Iterator[tuple[int, ...]]:
        i = len(chosen)
        if i == ell:
            yield tuple(chosen)
            return
        for v in classes[i]:
            if all(host.has_edge(u, v) for u in chosen):
                chosen.append(v)
                yield from grow(chosen)
                chosen.pop()

    return grow([])


def _check_classes(host: OrderedGraph, classes: Sequence[Iterable[int]],
                   minimum: int) -> list[tuple[int, ...]]:
    norm = [tuple(sorted(set(cl))) for cl in classes]
    if len(norm) < minimum:
        raise ValueError(f"need at least {minimum} classes")
    seen: set[int] = set()
    for cl in norm:
        if not cl:
            raise ValueError("classes must be nonempty")
        for v in cl:
            if not 1 <= v <= host.n:
                raise ValueError(f"vertex {v} outside host")
            if v in seen:
                raise ValueError(f"classes are not disjoint at vertex {v}")
            seen.add(v)
    return norm


def nonrainbow_cherry_count(phi: EdgeColouring,
                            classes: Sequence[Iterable[int]]) -> int:
    """Cross-class K_ell copies whose edges into classes 2 and 3 from the
    class-1 vertex repeat a colour: phi(u1 u2) = phi(u1 u3)."""
    norm = _check_classes(phi.host, classes, 3)
    count = 0
    for tup in _partite_cliques(phi.host, norm):
        if phi.colour(tup[0], tup[1]) == phi.colour(tup[0], tup[2]):
            count += 1
    return count


def nonrainbow_matching_count(phi: EdgeColouring,
                              classes: Sequence[Iterable[int]]) -> int:
    """Cross-class K_ell copies with a repeated colour on the disjoint pair
    (u1 u2) and (u3 u4)."""
    norm = _check_classes(phi.host, classes, 4)
    count = 0
    for tup in _partite_cliques(phi.host, norm):
        if phi.colour(tup[0], tup[1]) == phi.colour(tup[2], tup[3]):
            count += 1
    return count


def pair_density(graph: OrderedGraph, ui: Iterable[int], uj: Iterable[int],
                 p: float) -> float:
    """e(U_i, U_j) / (p |U_i| |U_j|) for disjoint classes (edges counted once)."""
    if p <= 0:
        raise ValueError("p must be positive")
    a = tuple(sorted(set(ui)))
    b = tuple(sorted(set(uj)))
    if not a or not b:
        raise ValueError("classes must be nonempty")
    if set(a) & set(b):
        raise ValueError("classes must be disjoint")
    bmask = vertex_mask(graph, b)
    edges = sum((graph.adjacency(u) & bmask).bit_count() for u in a)
    return edges / (p * len(a) * len(b))


def cherry_density(graph: OrderedGraph, u1: Iterable[int], u2: Iterable[int],
                   u3: Iterable[int], p: float) -> float:
    """sum_{u in U1} d(u,U2) d(u,U3) / (p^2 |U1| |U2| |U3|)."""
    if p <= 0:
        raise ValueError("p must be positive")
    a = tuple(sorted(set(u1)))
    b = tuple(sorted(set(u2)))
    c = tuple(sorted(set(u3)))
    if not (a and b and c):
        raise ValueError("classes must be nonempty")
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise ValueError("classes must be disjoint")
    bmask = vertex_mask(graph, b)
    cmask = vertex_mask(graph, c)
    total = sum(
        (graph.adjacency(u) & bmask).bit_count() * (graph.adjacency(u) & cmask).bit_count()
        for u in a
    )
    return total / (p * p * len(a) * len(b) * len(c))


def greedy_colour_partition(weights: Mapping[int, int], cap: int) -> list[list[int]]:
    """Partition colour ids into classes of total weight <= cap.

    Colours are taken in ascending id order and appended to the current
    class while it still fits, so the output is deterministic.  The class
    count never exceeds ceil(2 * total / cap) + 1.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    for colour, weight in weights.items():
        if weight < 0:
            raise ValueError(f"negative weight for colour {colour}")
        if weight > cap:
            raise WeightExceedsCap(f"colour {colour} has weight {weight} > cap {cap}")
    classes: list[list[int]] = []
    load = 0
    current: list[int] = []
    for colour in sorted(weights):
        w = weights[colour]
        if current and load + w > cap:
            classes.append(current)
            current, load = [], 0
        current.append(colour)
        load += w
    if current:
        classes.append(current)
    return classes


def write_colouring(phi: EdgeColouring, path: str) -> None:
    """Write the text format: header "n m", then sorted lines "u v c"."""
    host = phi.host
    lines = [f"{host.n} {host.edge_count}"]
    lines.extend(f"{u} {v} {c}" for (u, v), c in phi.items())
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_colouring(path: str, host: OrderedGraph) -> EdgeColouring:
    """Read a colouring and validate it bijectively covers the host edges.

    The first offending line is reported on failure.
    """
    with open(path) as fh:
        raw = [line.strip() for line in fh]
    lines = [line for line in raw if line]
    if not lines:
        raise ValueError("empty colouring file")
    try:
        n, m = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"line 1: malformed header {lines[0]!r}") from exc
    if n != host.n:
        raise ValueError(f"line 1: header n={n} does not match host n={host.n}")
    if m != host.edge_count:
        raise ValueError(f"line 1: header m={m} does not match host m={host.edge_count}")
    mapping: dict[Edge, int] = {}
    for idx, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {idx}: expected 'u v c', got {line!r}")
        u, v, c = int(parts[0]), int(parts[1]), int(parts[2])
        if not u < v:
            raise ValueError(f"line {idx}: endpoints must satisfy u < v")
        if not host.has_edge(u, v):
            raise ValueError(f"line {idx}: ({u},{v}) is not an edge of the host")
        if (u, v) in mapping:
            raise ValueError(f"line {idx}: duplicate edge ({u},{v})")
        if c < 0:
            raise ValueError(f"line {idx}: negative colour {c}")
        mapping[(u, v)] = c
    if len(mapping) != host.edge_count:
        raise ValueError("colouring does not cover every host edge")
    return EdgeColouring(host, mapping)
