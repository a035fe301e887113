import pytest

from ramseykit import (
    AdversarySpec,
    BoundedSubsetSignal,
    EdgeColouring,
    EmptyFinalSet,
    ErConstants,
    NeighbourhoodSequence,
    NoWitness,
    NotBounded,
    NotComplete,
    OrderedGraph,
    PatternTag,
    STRICT_TAGS,
    SequenceTooShort,
    build_sequence,
    classify_copy,
    er_find,
    extract_canonical,
    generate_colouring,
    rainbow_by_sampling,
    restricted_growth_strings,
)


def mono_colouring(n, colour=0):
    host = OrderedGraph.complete(n)
    return EdgeColouring(host, {e: colour for e in host.edges})


def vertex_min_colouring(n, colour_of):
    """phi(uv) = colour_of[min(u,v)]; non-strictly min by construction."""
    host = OrderedGraph.complete(n)
    return EdgeColouring(host, {(u, v): colour_of[u] for u, v in host.edges})


class TestConstants:
    def test_defaults(self):
        c = ErConstants.for_clique(4)
        assert c.delta == 1 / 256
        assert c.length == 10
        assert ErConstants.for_clique(3).length == 4

    def test_recorded_size_bound_is_astronomical(self):
        assert ErConstants.for_clique(3).min_n_log2 > 100


class TestBuildSequence:
    def test_requires_complete_host(self):
        g = OrderedGraph(4, [(1, 2)])
        phi = EdgeColouring(g, {(1, 2): 0})
        with pytest.raises(NotComplete):
            build_sequence(phi, ErConstants.for_clique(3))

    def test_mono_host_runs_full_length(self):
        phi = mono_colouring(12, colour=5)
        seq = build_sequence(phi, ErConstants.for_clique(3))
        assert isinstance(seq, NeighbourhoodSequence)
        assert [s.vertex for s in seq.steps] == [1, 2, 3, 4]
        assert all(s.colour == 5 and s.direction == "<" for s in seq.steps)

    def test_injective_large_host_signals_immediately(self):
        # directed colour degrees are at most 1 < delta n / 2 once n > 2/delta
        n = 300
        phi = generate_colouring(OrderedGraph.complete(n), AdversarySpec("Injective"))
        consts = ErConstants.for_clique(3)
        assert n > 2 / consts.delta
        out = build_sequence(phi, consts)
        assert isinstance(out, BoundedSubsetSignal)
        assert out.surviving == tuple(range(1, n + 1))

    def test_min_colouring_k50(self):
        phi = generate_colouring(OrderedGraph.complete(50), AdversarySpec("MinOrder"))
        seq = build_sequence(phi, ErConstants.for_clique(3))
        assert [(s.vertex, s.colour, s.direction) for s in seq.steps] == [
            (1, 1, "<"), (2, 2, "<"), (3, 3, "<"), (4, 4, "<")
        ]

    def test_size_invariant_along_trace(self):
        for seed in range(5):
            phi = generate_colouring(
                OrderedGraph.complete(30), AdversarySpec("RandomR", r=2, seed=seed)
            )
            out = build_sequence(phi, ErConstants.for_clique(3))
            if isinstance(out, NeighbourhoodSequence):
                for i, survivors in enumerate(out.survivors, start=1):
                    assert len(survivors) > (out.delta / 2) ** i * out.n

    def test_survivors_nested_and_consistent(self):
        phi = generate_colouring(OrderedGraph.complete(25), AdversarySpec("RandomR", r=2, seed=1))
        out = build_sequence(phi, ErConstants.for_clique(3))
        assert isinstance(out, NeighbourhoodSequence)
        previous = set(range(1, 26))
        for step, survivors in zip(out.steps, out.survivors):
            current = set(survivors)
            assert step.vertex in previous
            assert current <= previous - {step.vertex}
            for w in current:
                assert phi.colour(step.vertex, w) == step.colour
                assert (step.vertex < w) == (step.direction == "<")
            previous = current

    def test_determinism(self):
        phi = generate_colouring(OrderedGraph.complete(20), AdversarySpec("RandomR", r=3, seed=3))
        a = build_sequence(phi, ErConstants.for_clique(3))
        b = build_sequence(phi, ErConstants.for_clique(3))
        assert a.steps == b.steps and a.survivors == b.survivors


class TestExtract:
    def test_mono_sequence_gives_mono_witness(self):
        seq = build_sequence(mono_colouring(12), ErConstants.for_clique(3))
        w = extract_canonical(seq, 3)
        assert PatternTag.MONOCHROMATIC in w.tags

    def test_min_sequence_gives_min_witness(self):
        phi = generate_colouring(OrderedGraph.complete(50), AdversarySpec("MinOrder"))
        seq = build_sequence(phi, ErConstants.for_clique(3))
        w = extract_canonical(seq, 3)
        assert PatternTag.MIN_COLOURED in w.tags
        assert w.vertices == (1, 2, 5)

    def test_max_sequence_gives_max_witness(self):
        # mirror case: all steps point downwards and colours are the maxima
        phi = generate_colouring(OrderedGraph.complete(50), AdversarySpec("MaxOrder"))
        seq = build_sequence(phi, ErConstants.for_clique(3))
        assert [(s.vertex, s.colour, s.direction) for s in seq.steps] == [
            (50, 50, ">"), (49, 49, ">"), (48, 48, ">"), (47, 47, ">")
        ]
        w = extract_canonical(seq, 3)
        assert PatternTag.MAX_COLOURED in w.tags
        assert w.vertices == (1, 49, 50)

    def test_branches_both_exercised_at_ell4(self):
        # colour map with exactly ell-2 = 2 repeats: distinct-colour branch
        n = 24
        colours = {v: v for v in range(1, n + 1)}
        colours[2] = 1
        seq = build_sequence(vertex_min_colouring(n, colours), ErConstants.for_clique(4))
        w = extract_canonical(seq, 4)
        assert PatternTag.MIN_COLOURED in w.tags
        assert w.vertices == (1, 3, 4, 11)
        # ell-1 = 3 repeats: monochromatic branch
        colours2 = {v: v for v in range(1, n + 1)}
        colours2[2] = colours2[3] = 1
        seq2 = build_sequence(vertex_min_colouring(n, colours2), ErConstants.for_clique(4))
        w2 = extract_canonical(seq2, 4)
        assert PatternTag.MONOCHROMATIC in w2.tags
        assert w2.vertices == (1, 2, 3, 11)

    def test_short_sequence_rejected(self):
        seq = build_sequence(mono_colouring(12), ErConstants.for_clique(3))
        with pytest.raises(SequenceTooShort):
            extract_canonical(seq, 4)

    def test_empty_final_set_rejected(self):
        seq = build_sequence(mono_colouring(12), ErConstants.for_clique(3))
        broken = NeighbourhoodSequence(
            seq.steps, seq.survivors[:-1] + ((),), seq.delta, seq.n, seq.colouring
        )
        with pytest.raises(EmptyFinalSet):
            extract_canonical(broken, 3)


class TestRainbowSampling:
    def test_injective_succeeds_quickly(self):
        n = 40
        phi = generate_colouring(OrderedGraph.complete(n), AdversarySpec("Injective"))
        w = rainbow_by_sampling(phi, range(1, n + 1), 4, delta=0.1, seed=5)
        assert w is not None and PatternTag.RAINBOW in w.tags

    def test_mono_not_bounded(self):
        phi = mono_colouring(10)
        with pytest.raises(NotBounded):
            rainbow_by_sampling(phi, range(1, 11), 3, delta=0.5, seed=0)

    def test_bounded_fixture_success_rate(self):
        # delta-bounded colouring on a large set: BoundedRandom(lam=3) keeps
        # every colour degree <= 3 <= delta |U| for delta = 1/256, |U| = 800
        n, ell = 800, 4
        delta = ErConstants.for_clique(ell).delta
        host = OrderedGraph.complete(n)
        phi = generate_colouring(host, AdversarySpec("BoundedRandom", r=n, lam=3, seed=2))
        assert 3 <= delta * n
        successes = 0
        for seed in range(10):
            w = rainbow_by_sampling(phi, range(1, n + 1), ell, delta, seed=seed)
            if w is not None:
                assert PatternTag.RAINBOW in w.tags
                successes += 1
        assert successes == 10

    def test_witness_colours_pairwise_distinct(self):
        n = 60
        phi = generate_colouring(OrderedGraph.complete(n), AdversarySpec("Injective"))
        w = rainbow_by_sampling(phi, range(1, n + 1), 4, delta=0.05, seed=9)
        colours = [c for _, c in w.evidence]
        assert len(set(colours)) == len(colours)


class TestDriver:
    def test_mono_k10(self):
        res = er_find(mono_colouring(10), 3)
        assert res.branch == "sequence"
        assert PatternTag.MONOCHROMATIC in res.witness.tags

    def test_injective_k10(self):
        phi = generate_colouring(OrderedGraph.complete(10), AdversarySpec("Injective"))
        res = er_find(phi, 3)
        assert PatternTag.RAINBOW in res.witness.tags

    def test_all_203_partitions_of_k4(self):
        host = OrderedGraph.complete(4)
        edges = host.edges
        count = 0
        for rgs in restricted_growth_strings(6):
            phi = EdgeColouring(host, dict(zip(edges, rgs)))
            res = er_find(phi, 3)
            assert classify_copy(phi, res.witness.vertices) & STRICT_TAGS
            count += 1
        assert count == 203

    def test_no_witness_on_k3_aba(self):
        host = OrderedGraph.complete(3)
        phi = EdgeColouring(host, {(1, 2): 0, (1, 3): 1, (2, 3): 0})
        with pytest.raises(NoWitness):
            er_find(phi, 3)

    def test_round_trip_on_random_colourings(self):
        host = OrderedGraph.complete(30)
        for seed, r in [(s, r) for s in range(25) for r in (2, 5, 30, 435)]:
            phi = generate_colouring(host, AdversarySpec("RandomR", r=r, seed=seed))
            res = er_find(phi, 3, seed=seed)
            tags = classify_copy(phi, res.witness.vertices)
            assert frozenset(tags) == res.witness.tags
            assert tags & STRICT_TAGS
