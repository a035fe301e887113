"""The constructive Erdős–Rado procedure on complete graphs.

Two branches: iterated monochromatic directed neighbourhoods (leading, via
pigeonhole, to a monochromatic or strictly min/max-coloured clique), and a
vertex-sampling rainbow extraction for colourings that are delta-bounded on
the surviving set.  Both produce witnesses that re-verify under
classify_copy; a driver falls back to exhaustive search below the regime
where the quantitative guarantees kick in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .colouring import (
    CanonicalWitness,
    EdgeColouring,
    PatternTag,
    witness_for,
)
from .search import SearchOutcome, find_canonical_copy

__all__ = [
    "ErConstants",
    "SequenceStep",
    "NeighbourhoodSequence",
    "BoundedSubsetSignal",
    "ErResult",
    "NotComplete",
    "SequenceTooShort",
    "EmptyFinalSet",
    "NotBounded",
    "NoWitness",
    "build_sequence",
    "extract_canonical",
    "rainbow_by_sampling",
    "er_find",
]


class NotComplete(Exception):
    """The procedure requires the host graph to be complete."""


class SequenceTooShort(Exception):
    """Fewer steps than the pigeonhole extraction needs."""


class EmptyFinalSet(Exception):
    """No vertex survived the final step, so no apex can be chosen."""


class NotBounded(Exception):
    """The colouring violates the delta-boundedness the sampler assumes."""


class NoWitness(Exception):
    """Even exhaustive search found no canonical clique (tiny hosts only)."""


@dataclass(frozen=True)
class ErConstants:
    """Parameters of the procedure for a target clique size.

    Defaults: delta = 1/(4 ell^3) and length = 2(ell-2)^2 + 2 steps.  The
    regime where the full guarantee applies needs log2(n) >= min_n_log2,
    which is astronomically large; it is recorded for reference, never
    enforced.
    """

    ell: int
    delta: float
    length: int

    @classmethod
    def for_clique(cls, ell: int) -> "ErConstants":
        if ell < 3:
            raise ValueError("ell must be >= 3")
        return cls(ell=ell, delta=1.0 / (4 * ell**3), length=2 * (ell - 2) ** 2 + 2)

    @property
    def min_n_log2(self) -> float:
        return 6 * self.ell**2 * (math.log2(self.ell) + 1)


@dataclass(frozen=True)
class SequenceStep:
    vertex: int
    colour: int
    direction: str  # "<" or ">"


@dataclass(frozen=True)
class NeighbourhoodSequence:
    """Steps (v_i, c_i, dir_i) with the surviving intersection after each.

    Invariants maintained by construction: survivor sets are nested, each
    step's vertex is dir-related to (and joined in its colour to) everything
    surviving after the step, and |surviving_i| > (delta/2)^i * n.
    """

    steps: tuple[SequenceStep, ...]
    survivors: tuple[tuple[int, ...], ...]
    delta: float
    n: int
    colouring: EdgeColouring


@dataclass(frozen=True)
class BoundedSubsetSignal:
    """No step qualified: on ``surviving`` every colour degree is at most
    delta * |surviving|, which is what the rainbow sampler needs."""

    surviving: tuple[int, ...]
    delta: float


@dataclass(frozen=True)
class ErResult:
    witness: CanonicalWitness
    branch: str  # "sequence" | "sampling" | "exhaustive"
    sequence: Optional[NeighbourhoodSequence]


def _require_complete(phi: EdgeColouring) -> None:
    if not phi.host.is_complete():
        raise NotComplete("host graph must be complete")


def build_sequence(phi: EdgeColouring,
                   consts: ErConstants) -> Union[NeighbourhoodSequence, BoundedSubsetSignal]:
    """Greedily extend the directed monochromatic-neighbourhood sequence.

    Each step picks (v, c, dir) inside the current surviving set S with
    d^dir_c(v, S) > delta |S| / 2, maximising the degree and tie-breaking by
    smaller vertex, then smaller colour, then "<" before ">".  If no step
    qualifies, the colouring is delta-bounded on S and that set is returned
    as a BoundedSubsetSignal.
    """
    _require_complete(phi)
    n = phi.host.n
    delta = consts.delta
    surviving = list(range(1, n + 1))
    steps: list[SequenceStep] = []
    trace: list[tuple[int, ...]] = []
    for i in range(1, consts.length + 1):
        threshold = delta * len(surviving) / 2.0
        best = None  # (count, v, colour, dir_rank)
        for v in surviving:
            counts: dict[tuple[int, int], int] = {}
            for w in surviving:
                if w == v:
                    continue
                key = (phi.colour(v, w), 0 if v < w else 1)
                counts[key] = counts.get(key, 0) + 1
            for (c, rank), d in counts.items():
                if d <= threshold:
                    continue
                key = (-d, v, c, rank)
                if best is None or key < best:
                    best = key
        if best is None:
            return BoundedSubsetSignal(tuple(surviving), delta)
        d, v, c, rank = -best[0], best[1], best[2], best[3]
        direction = "<" if rank == 0 else ">"
        surviving = [
            w for w in surviving
            if w != v and phi.colour(v, w) == c and ((v < w) == (direction == "<"))
        ]
        steps.append(SequenceStep(v, c, direction))
        trace.append(tuple(surviving))
        # nested-neighbourhood size bound, relative to the original n
        assert len(surviving) > (delta / 2.0) ** i * n
    return NeighbourhoodSequence(tuple(steps), tuple(trace), delta, n, phi)


def extract_canonical(seq: NeighbourhoodSequence, ell: int) -> CanonicalWitness:
    """Pigeonhole a canonical K_ell out of a completed sequence.

    Picks (ell-2)^2 + 1 steps sharing one comparator plus an apex from the
    final surviving set.  If a colour repeats ell-1 times among the picked
    steps the witness is monochromatic; otherwise ell-1 pairwise distinct
    colours exist and the witness is strictly min- or max-coloured.
    """
    needed_steps = 2 * (ell - 2) ** 2 + 2
    take = (ell - 2) ** 2 + 1
    if len(seq.steps) < needed_steps:
        raise SequenceTooShort(f"have {len(seq.steps)} steps, need {needed_steps}")
    final = seq.survivors[-1]
    if not final:
        raise EmptyFinalSet("final surviving set is empty")

    by_dir = {"<": [], ">": []}
    for idx, step in enumerate(seq.steps):
        by_dir[step.direction].append(idx)
    direction = "<" if len(by_dir["<"]) >= take else ">"
    picked = by_dir[direction][:take]
    apex = min(final)

    colours = [seq.steps[i].colour for i in picked]
    multiplicity: dict[int, list[int]] = {}
    for idx, c in zip(picked, colours):
        multiplicity.setdefault(c, []).append(idx)

    mono_colour = next((c for c, idxs in multiplicity.items()
                        if len(idxs) >= ell - 1), None)
    if mono_colour is not None:
        chosen = multiplicity[mono_colour][: ell - 1]
        claimed = PatternTag.MONOCHROMATIC
    else:
        chosen = []
        seen: set[int] = set()
        for idx in picked:
            c = seq.steps[idx].colour
            if c not in seen:
                seen.add(c)
                chosen.append(idx)
            if len(chosen) == ell - 1:
                break
        if len(chosen) < ell - 1:
            # <= ell-2 repeats per colour over (ell-2)^2+1 steps forces this
            raise SequenceTooShort("fewer distinct colours than the pigeonhole promises")
        claimed = PatternTag.MIN_COLOURED if direction == "<" else PatternTag.MAX_COLOURED

    vertices = tuple(sorted([seq.steps[i].vertex for i in chosen] + [apex]))
    witness = witness_for(seq.colouring, vertices)
    if claimed not in witness.tags:
        raise AssertionError(f"extraction promised {claimed} but got {witness.tags}")
    return witness


def _first_colour_collision(phi: EdgeColouring,
                            sample: list[int]) -> Optional[tuple[tuple[int, int], tuple[int, int]]]:
    """Lexicographically first pair of equal-coloured edges in the sample."""
    first_edge: dict[int, tuple[int, int]] = {}
    best = None
    k = len(sample)
    for a in range(k):
        for b in range(a + 1, k):
            e = (sample[a], sample[b])
            c = phi.colour(*e)
            if c in first_edge:
                pair = (first_edge[c], e)
                if best is None or pair < best:
                    best = pair
            else:
                first_edge[c] = e
    return best


def rainbow_by_sampling(phi: EdgeColouring, us, ell: int, delta: float,
                        seed: int, rounds: int = 50) -> Optional[CanonicalWitness]:
    """Rainbow K_ell by sparse vertex sampling and conflict deletion.

    Requires the colouring restricted to U to be delta-bounded (every colour
    degree at most delta |U|); raises NotBounded otherwise.  Each round keeps
    every vertex of U independently with probability 2 ell / |U|, then
    repeatedly locates the lexicographically first pair of equal-coloured
    edges in the kept set and deletes the largest vertex it spans.  When at
    least ell vertices survive, every remaining edge colour is distinct, and
    the smallest ell survivors are returned as a verified rainbow witness.
    Returns None after ``rounds`` unsuccessful rounds.
    """
    _require_complete(phi)
    u_sorted = tuple(sorted(set(us)))
    if not u_sorted:
        raise ValueError("U must be nonempty")
    cap = delta * len(u_sorted)
    for v in u_sorted:
        counts: dict[int, int] = {}
        for w in u_sorted:
            if w == v:
                continue
            c = phi.colour(v, w)
            counts[c] = counts.get(c, 0) + 1
            if counts[c] > cap:
                raise NotBounded(
                    f"colour degree {counts[c]} at vertex {v} exceeds delta|U| = {cap}"
                )
    keep_p = min(1.0, 2.0 * ell / len(u_sorted))
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(rounds):
        draws = rng.random(len(u_sorted))
        sample = [v for v, x in zip(u_sorted, draws) if x < keep_p]
        while True:
            collision = _first_colour_collision(phi, sample)
            if collision is None:
                break
            doomed = max(collision[0] + collision[1])
            sample.remove(doomed)
        if len(sample) >= ell:
            witness = witness_for(phi, tuple(sample[:ell]))
            assert PatternTag.RAINBOW in witness.tags
            return witness
    return None


def er_find(phi: EdgeColouring, ell: int, seed: int = 0,
            rounds: int = 50) -> ErResult:
    """Run the full procedure and report which branch produced the witness.

    Below the (astronomical) size where the quantitative bounds hold, both
    branches may fail; exhaustive canonical search is then the fallback, and
    NoWitness is raised only when that also finds nothing (tiny hosts such
    as K_3 under a bad colouring).
    """
    _require_complete(phi)
    if ell < 3:
        raise ValueError("ell must be >= 3")
    consts = ErConstants.for_clique(ell)
    outcome = build_sequence(phi, consts)
    if isinstance(outcome, NeighbourhoodSequence):
        witness = extract_canonical(outcome, ell)
        return ErResult(witness, "sequence", outcome)
    if len(outcome.surviving) >= ell:
        witness = rainbow_by_sampling(
            phi, outcome.surviving, ell, outcome.delta, seed, rounds
        )
        if witness is not None:
            return ErResult(witness, "sampling", None)
    fallback: SearchOutcome = find_canonical_copy(phi, ell)
    if fallback.found:
        return ErResult(fallback.witness, "exhaustive", None)
    raise NoWitness(f"no canonical K_{ell} under this colouring")
