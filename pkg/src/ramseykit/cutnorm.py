"""Weighted graphs with cut-norm and homomorphism-density machinery:
exact and heuristic cut norms, pattern densities, executable forms of the
edge-sampling / counting / degree lemmata, 2-density, and strict balance."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from .graphs import Edge, OrderedGraph, count_cliques, normalise_edge

__all__ = [
    "WeightedGraph",
    "PatternGraph",
    "TooLarge",
    "TooFewVertices",
    "RangeViolation",
    "HypothesisViolated",
    "EXACT_CUTNORM_GUARD",
    "eval_e",
    "cutnorm_exact",
    "cutnorm_heuristic",
    "hom_density",
    "counting_lemma_check",
    "sample_graph_from_weights",
    "degree_lemma_check",
    "two_density",
    "is_strictly_balanced",
    "read_weighted",
    "write_weighted",
]

EXACT_CUTNORM_GUARD = 22

_BALANCE_GUARD = 8

_LEMMA_SLACK = 1e-9


class TooLarge(Exception):
    """Instance exceeds a hard exhaustive-computation guard."""


class TooFewVertices(Exception):
    """2-density needs at least three vertices."""


class RangeViolation(Exception):
    """Weights leave the [0,1] range a lemma hypothesis requires."""


class HypothesisViolated(Exception):
    """A lemma hypothesis (set size or cut-norm bound) fails."""


class WeightedGraph:
    """Symmetric real weights on vertex pairs of {1,...,n}, zero diagonal."""

    __slots__ = ("n", "w")

    def __init__(self, matrix, *, validate: bool = True) -> None:
        w = np.asarray(matrix, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight matrix must be square")
        if validate:
            if not np.all(np.isfinite(w)):
                raise ValueError("weights must be finite")
            if not np.array_equal(w, w.T):
                raise ValueError("weights must be symmetric")
            if np.any(np.diagonal(w) != 0.0):
                raise ValueError("diagonal must be zero")
        self.n = int(w.shape[0])
        self.w = w

    @classmethod
    def zeros(cls, n: int) -> "WeightedGraph":
        return cls(np.zeros((n, n)), validate=False)

    @classmethod
    def constant(cls, n: int, value: float) -> "WeightedGraph":
        w = np.full((n, n), float(value))
        np.fill_diagonal(w, 0.0)
        return cls(w, validate=False)

    @classmethod
    def indicator(cls, graph: OrderedGraph, scale: float = 1.0) -> "WeightedGraph":
        """The (optionally scaled) 0/1 edge indicator of an ordered graph."""
        w = np.zeros((graph.n, graph.n))
        for u, v in graph.edges:
            w[u - 1, v - 1] = scale
            w[v - 1, u - 1] = scale
        return cls(w, validate=False)

    def entry(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        return float(self.w[u - 1, v - 1])

    def is_indicator(self) -> bool:
        return bool(np.all((self.w == 0.0) | (self.w == 1.0)))

    def in_unit_range(self) -> bool:
        return bool(np.all(self.w >= 0.0) and np.all(self.w <= 1.0))

    def __sub__(self, other: "WeightedGraph") -> "WeightedGraph":
        self._check_compatible(other)
        return WeightedGraph(self.w - other.w, validate=False)

    def __add__(self, other: "WeightedGraph") -> "WeightedGraph":
        self._check_compatible(other)
        return WeightedGraph(self.w + other.w, validate=False)

    def __mul__(self, scalar: float) -> "WeightedGraph":
        return WeightedGraph(self.w * float(scalar), validate=False)

    __rmul__ = __mul__

    def _check_compatible(self, other: "WeightedGraph") -> None:
        if self.n != other.n:
            raise ValueError("vertex counts differ")

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n})"


@dataclass(frozen=True)
class PatternGraph:
    """A fixed small simple graph on {1,...,ell} used as a counting pattern."""

    ell: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.ell < 1:
            raise ValueError("pattern needs at least one vertex")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            if not (1 <= u < v <= self.ell):
                raise ValueError(f"edge ({u},{v}) invalid for ell={self.ell}")

    @classmethod
    def from_edges(cls, ell: int, edges: Iterable[Edge]) -> "PatternGraph":
        return cls(ell, frozenset(normalise_edge(u, v) for u, v in edges))

    @classmethod
    def complete(cls, ell: int) -> "PatternGraph":
        return cls.from_edges(ell, combinations(range(1, ell + 1), 2))

    @classmethod
    def cycle(cls, ell: int) -> "PatternGraph":
        if ell < 3:
            raise ValueError("cycle needs >= 3 vertices")
        return cls.from_edges(ell, [(i, i + 1) for i in range(1, ell)] + [(1, ell)])

    @classmethod
    def path(cls, ell: int) -> "PatternGraph":
        return cls.from_edges(ell, [(i, i + 1) for i in range(1, ell)])

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def is_complete(self) -> bool:
        return self.edge_count == self.ell * (self.ell - 1) // 2


def _indices(n: int, us: Iterable[int]) -> np.ndarray:
    out = sorted(set(us))
    for v in out:
        if not 1 <= v <= n:
            raise ValueError(f"vertex {v} outside {{1,...,{n}}}")
    return np.array(out, dtype=np.intp) - 1


def eval_e(f: WeightedGraph, us: Iterable[int], ws: Iterable[int]) -> float:
    """Sum of f over the ordered pairs U x W (diagonal terms are zero)."""
    ui = _indices(f.n, us)
    wi = _indices(f.n, ws)
    if ui.size == 0 or wi.size == 0:
        return 0.0
    return float(f.w[np.ix_(ui, wi)].sum())


def cutnorm_exact(f: WeightedGraph) -> float:
    """(1/n^2) * max over U, W of |e_f(U, W)|, by exhaustive U-enumeration.

    For each of the 2^n choices of U the optimal W follows the signs of the
    column sums, taken in both directions; guarded at n = 22.
    """
    n = f.n
    if n > EXACT_CUTNORM_GUARD:
        raise TooLarge(f"n={n} exceeds the exact guard of {EXACT_CUTNORM_GUARD}")
    M = f.w
    shifts = np.arange(n, dtype=np.uint32)
    best = 0.0
    total = 1 << n
    chunk = 1 << 14
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.uint32)
        members = ((idx[:, None] >> shifts) & 1).astype(np.float64)
        sums = members @ M
        pos = np.maximum(sums, 0.0).sum(axis=1)
        neg = np.maximum(-sums, 0.0).sum(axis=1)
        cand = max(float(pos.max()), float(neg.max()))
        if cand > best:
            best = cand
    return best / (n * n)


def cutnorm_heuristic(f: WeightedGraph, restarts: int = 20, seed: int = 0) -> float:
    """Alternating sign-ascent lower bound on the exact cut norm.

    Fixing one side, the best other side keeps exactly the vertices whose
    partial sums help; alternating reaches a fixed point.  The best value
    over random restarts (both sign directions) is returned; every evaluated
    pair is feasible, so the result never exceeds cutnorm_exact.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    n = f.n
    M = f.w
    rng = np.random.Generator(np.random.PCG64(seed))
    best = 0.0
    for restart in range(restarts):
        w0 = rng.random(n) < 0.5
        if not w0.any():
            w0[restart % n] = True
        for sign in (1.0, -1.0):
            wsel = w0.astype(np.float64)
            value = 0.0
            for _ in range(200):
                col = M @ wsel
                usel = (sign * col > 0.0).astype(np.float64)
                row = usel @ M
                wsel = (sign * row > 0.0).astype(np.float64)
                new_value = sign * float(usel @ M @ wsel)
                if new_value <= value + 1e-15:
                    value = max(value, new_value)
                    break
                value = new_value
            if value > best:
                best = value
    return best / (n * n)


_LETTERS = "abcdefghijklmnopqrstuvwxyz"

_DIRECT_PATTERN_GUARD = 5


def hom_density(f: WeightedGraph, pattern: PatternGraph) -> float:
    """n^{-ell} * sum over all vertex ell-tuples of the product of f over the
    pattern's edges, with f(v,v) = 0 killing adjacent repeats.

    Indicator weights with complete patterns route through exact clique
    counting; other inputs are summed directly (guarded at 5 pattern
    vertices).
    """
    n = f.n
    ell = pattern.ell
    if not pattern.edges:
        return 1.0
    if f.is_indicator() and pattern.is_complete():
        host = OrderedGraph(
            n,
            [(i + 1, j + 1) for i, j in zip(*np.nonzero(np.triu(f.w)))],
        )
        return count_cliques(host, ell) / n**ell
    if ell > _DIRECT_PATTERN_GUARD:
        raise TooLarge(f"direct summation guarded at {_DIRECT_PATTERN_GUARD} pattern vertices")
    spec = ",".join(_LETTERS[u - 1] + _LETTERS[v - 1] for u, v in sorted(pattern.edges))
    value = float(np.einsum(spec + "->", *([f.w] * pattern.edge_count), optimize=True))
    touched = {v for e in pattern.edges for v in e}
    isolated = ell - len(touched)
    return value * n**isolated / n**ell


def counting_lemma_check(f: WeightedGraph, g: WeightedGraph,
                         pattern: PatternGraph) -> tuple[float, float, bool]:
    """Evaluate |Lambda(f) - Lambda(g)| against 2 e(H) ||f - g||_cut.

    Both weight functions must map into [0,1]; returns (lhs, rhs, holds)
    with numerical slack 1e-9 on the comparison.
    """
    if not f.in_unit_range() or not g.in_unit_range():
        raise RangeViolation("weights must lie in [0,1]")
    lhs = abs(hom_density(f, pattern) - hom_density(g, pattern))
    rhs = 2.0 * pattern.edge_count * cutnorm_exact(f - g)
    return lhs, rhs, lhs <= rhs + _LEMMA_SLACK


def sample_graph_from_weights(d: WeightedGraph, seed: int) -> OrderedGraph:
    """Include each pair independently with probability d(u,v).

    Draws are consumed in lexicographic pair order from PCG64(seed), so the
    output is reproducible.
    """
    if not d.in_unit_range():
        raise RangeViolation("edge probabilities must lie in [0,1]")
    n = d.n
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.random(n * (n - 1) // 2)
    iu, iv = np.triu_indices(n, k=1)
    probs = d.w[iu, iv]
    chosen = draws < probs
    edges = [(int(u) + 1, int(v) + 1) for u, v in zip(iu[chosen], iv[chosen])]
    return OrderedGraph(n, edges)


def degree_lemma_check(f: WeightedGraph, g: WeightedGraph, us: Iterable[int],
                       eps: float, verify_cutnorm: bool = True) -> int:
    """Count vertices whose degree into U differs by more than eps^(1/3)|U|.

    Hypotheses checked: |U| > 2 eps^(1/3) n, and (when the exact guard
    permits and ``verify_cutnorm`` is set) ||f - g||_cut <= eps.  The
    returned count is at most eps^(1/3) n whenever the hypotheses hold.
    """
    f._check_compatible(g)
    n = f.n
    ui = _indices(n, us)
    root = eps ** (1.0 / 3.0)
    if ui.size <= 2.0 * root * n:
        raise HypothesisViolated(f"|U|={ui.size} is not above 2 eps^(1/3) n")
    if verify_cutnorm and n <= EXACT_CUTNORM_GUARD:
        actual = cutnorm_exact(f - g)
        if actual > eps + 1e-12:
            raise HypothesisViolated(f"cut norm {actual} exceeds eps={eps}")
    df = f.w[:, ui].sum(axis=1)
    dg = g.w[:, ui].sum(axis=1)
    return int(np.count_nonzero(np.abs(df - dg) > root * ui.size))


def two_density(pattern: PatternGraph) -> Fraction:
    """(|E| - 1) / (|V| - 2) as an exact rational."""
    if pattern.ell < 3:
        raise TooFewVertices("2-density needs at least three vertices")
    return Fraction(pattern.edge_count - 1, pattern.ell - 2)


def is_strictly_balanced(pattern: PatternGraph) -> bool:
    """Every proper subgraph on >= 3 vertices has strictly smaller 2-density.

    Checked by scanning induced proper vertex subsets: deleting edges at a
    fixed vertex set only lowers the ratio, so induced subgraphs dominate.
    Guarded at 8 pattern vertices.
    """
    if pattern.ell < 3:
        raise TooFewVertices("strict balance needs at least three vertices")
    if pattern.ell > _BALANCE_GUARD:
        raise TooLarge(f"subgraph scan guarded at {_BALANCE_GUARD} vertices")
    m2 = two_density(pattern)
    verts = range(1, pattern.ell + 1)
    for size in range(3, pattern.ell):
        for subset in combinations(verts, size):
            inside = set(subset)
            edges = sum(1 for u, v in pattern.edges if u in inside and v in inside)
            if Fraction(edges - 1, size - 2) >= m2:
                return False
    return True


def write_weighted(f: WeightedGraph, path: str) -> None:
    """Write "n" then n(n-1)/2 lines "u v w" in lexicographic pair order."""
    lines = [str(f.n)]
    for u in range(1, f.n):
        for v in range(u + 1, f.n + 1):
            lines.append(f"{u} {v} {float(f.w[u - 1, v - 1])!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_weighted(path: str) -> WeightedGraph:
    with open(path) as fh:
        raw = [line.strip() for line in fh]
    lines = [line for line in raw if line]
    if not lines:
        raise ValueError("empty weighted-graph file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ValueError(f"line 1: malformed header {lines[0]!r}") from exc
    expected = n * (n - 1) // 2
    if len(lines) - 1 != expected:
        raise ValueError(f"expected {expected} weight lines, found {len(lines) - 1}")
    w = np.zeros((n, n))
    pos = 1
    for u in range(1, n):
        for v in range(u + 1, n + 1):
            parts = lines[pos].split()
            if len(parts) != 3 or int(parts[0]) != u or int(parts[1]) != v:
                raise ValueError(f"line {pos + 1}: expected pair ({u},{v})")
            w[u - 1, v - 1] = w[v - 1, u - 1] = float(parts[2])
            pos += 1
    return WeightedGraph(w)
