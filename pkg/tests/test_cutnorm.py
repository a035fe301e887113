import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from ramseykit import (
    HypothesisViolated,
    OrderedGraph,
    PatternGraph,
    RangeViolation,
    TooFewVertices,
    TooLarge,
    WeightedGraph,
    count_cliques,
    counting_lemma_check,
    cutnorm_exact,
    cutnorm_heuristic,
    degree_lemma_check,
    eval_e,
    gnp_generate,
    hom_density,
    is_strictly_balanced,
    read_weighted,
    sample_graph_from_weights,
    two_density,
    write_weighted,
)

K3 = PatternGraph.complete(3)


def random_weights(n, rng, lo=0.0, hi=1.0):
    a = rng.uniform(lo, hi, size=(n, n))
    a = (a + a.T) / 2
    np.fill_diagonal(a, 0.0)
    return WeightedGraph(a)


def brute_cutnorm(f):
    """Oracle: iterate both subsets explicitly."""
    verts = list(range(1, f.n + 1))
    best = 0.0
    for ru in range(f.n + 1):
        for us in itertools.combinations(verts, ru):
            for rw in range(f.n + 1):
                for ws in itertools.combinations(verts, rw):
                    best = max(best, abs(eval_e(f, us, ws)))
    return best / f.n**2


def brute_hom_density(f, pattern):
    """Oracle: sum the defining formula over all tuples."""
    n, ell = f.n, pattern.ell
    total = 0.0
    for tup in itertools.product(range(1, n + 1), repeat=ell):
        prod = 1.0
        for u, v in pattern.edges:
            prod *= f.entry(tup[u - 1], tup[v - 1])
        total += prod
    return total / n**ell


class TestEvalE:
    def test_constant_full(self):
        f = WeightedGraph.constant(6, 1.0)
        assert eval_e(f, range(1, 7), range(1, 7)) == 6 * 5

    def test_empty_side(self):
        f = random_weights(5, np.random.default_rng(0))
        assert eval_e(f, [], range(1, 6)) == 0.0

    def test_k3_indicator_overlap(self):
        f = WeightedGraph.indicator(OrderedGraph.complete(3))
        assert eval_e(f, [1, 2], [2, 3]) == 3.0


class TestCutnormExact:
    def test_zero(self):
        assert cutnorm_exact(WeightedGraph.zeros(8)) == 0.0

    def test_difference_with_self(self):
        f = WeightedGraph.indicator(gnp_generate(10, 0.5, 1).graph)
        assert cutnorm_exact(f - f) == 0.0

    def test_all_ones(self):
        assert cutnorm_exact(WeightedGraph.constant(10, 1.0)) == pytest.approx(0.9)

    def test_guard(self):
        with pytest.raises(TooLarge):
            cutnorm_exact(WeightedGraph.zeros(23))

    def test_matches_double_enumeration_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            f = random_weights(7, rng, lo=-1.0, hi=1.0)
            assert cutnorm_exact(f) == pytest.approx(brute_cutnorm(f))

    def test_seminorm_properties(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            f = random_weights(9, rng, lo=-1.0, hi=1.0)
            g = random_weights(9, rng, lo=-1.0, hi=1.0)
            alpha = rng.uniform(-2.0, 2.0)
            assert cutnorm_exact(f) >= 0.0
            assert cutnorm_exact(alpha * f) == pytest.approx(abs(alpha) * cutnorm_exact(f))
            assert cutnorm_exact(f + g) <= cutnorm_exact(f) + cutnorm_exact(g) + 1e-12


class TestCutnormHeuristic:
    def test_zero(self):
        assert cutnorm_heuristic(WeightedGraph.zeros(6), restarts=2, seed=0) == 0.0

    def test_all_ones_reaches_full_sets(self):
        for restarts in (1, 3):
            got = cutnorm_heuristic(WeightedGraph.constant(12, 1.0), restarts=restarts, seed=4)
            assert got == pytest.approx(11 / 12)

    def test_never_exceeds_exact(self):
        rng = np.random.default_rng(11)
        equal = 0
        for i in range(200):
            n = int(rng.integers(4, 13))
            f = random_weights(n, rng, lo=-1.0, hi=1.0)
            he = cutnorm_heuristic(f, restarts=10, seed=i)
            ex = cutnorm_exact(f)
            assert he <= ex + 1e-12
            if math.isclose(he, ex, rel_tol=1e-9, abs_tol=1e-12):
                equal += 1
        assert equal > 0  # informational: ascent usually reaches the optimum

    def test_deterministic_per_seed(self):
        f = random_weights(10, np.random.default_rng(5), lo=-1.0, hi=1.0)
        assert cutnorm_heuristic(f, 5, 9) == cutnorm_heuristic(f, 5, 9)


class TestHomDensity:
    def test_constant_k3(self):
        assert hom_density(WeightedGraph.constant(5, 1.0), K3) == pytest.approx(0.48)

    def test_zero_weights(self):
        assert hom_density(WeightedGraph.zeros(6), K3) == 0.0

    def test_k4_indicator(self):
        f = WeightedGraph.indicator(OrderedGraph.complete(4))
        assert hom_density(f, K3) == pytest.approx(0.375)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(1)
        patterns = [K3, PatternGraph.path(3), PatternGraph.cycle(4),
                    PatternGraph.from_edges(4, [(1, 2)])]
        for pattern in patterns:
            f = random_weights(6, rng)
            assert hom_density(f, pattern) == pytest.approx(brute_hom_density(f, pattern))

    def test_edgeless_pattern(self):
        f = random_weights(5, np.random.default_rng(2))
        assert hom_density(f, PatternGraph.from_edges(3, [])) == 1.0

    def test_scaling_multiplicativity(self):
        rng = np.random.default_rng(4)
        f = random_weights(8, rng)
        for alpha in (0.5, 0.25, 2.0):
            got = hom_density(alpha * f, K3)
            assert got == pytest.approx(alpha**3 * hom_density(f, K3))

    def test_cross_module_clique_identity(self):
        # both the indicator fast path and the direct-summation path must
        # reproduce the exact labeled clique count
        for seed in range(5):
            g = gnp_generate(12, 0.5, seed).graph
            ind = WeightedGraph.indicator(g)
            ell = 3
            assert hom_density(ind, K3) * 12**ell == pytest.approx(count_cliques(g, ell))
            scaled = hom_density(0.5 * ind, K3) * 2**3 * 12**ell
            assert scaled == pytest.approx(count_cliques(g, ell))

    def test_pattern_guard(self):
        f = random_weights(8, np.random.default_rng(0))
        with pytest.raises(TooLarge):
            hom_density(f, PatternGraph.path(6))


class TestCountingLemma:
    def test_equal_inputs(self):
        f = random_weights(8, np.random.default_rng(3))
        lhs, rhs, holds = counting_lemma_check(f, f, K3)
        assert lhs == 0.0 and rhs == 0.0 and holds

    def test_complete_vs_zero(self):
        f = WeightedGraph.indicator(OrderedGraph.complete(10))
        g = WeightedGraph.zeros(10)
        lhs, rhs, holds = counting_lemma_check(f, g, K3)
        assert lhs == pytest.approx(0.72)
        assert rhs == pytest.approx(5.4)
        assert holds

    def test_zero_violations_random(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            f = random_weights(10, rng)
            g = random_weights(10, rng)
            _, _, holds = counting_lemma_check(f, g, K3)
            assert holds

    def test_range_violation(self):
        f = WeightedGraph.constant(6, 1.5)
        with pytest.raises(RangeViolation):
            counting_lemma_check(f, WeightedGraph.zeros(6), K3)


class TestSampling:
    def test_degenerate_probabilities(self):
        assert sample_graph_from_weights(WeightedGraph.zeros(6), 1).edge_count == 0
        assert sample_graph_from_weights(WeightedGraph.constant(6, 1.0), 1) == OrderedGraph.complete(6)

    def test_deterministic(self):
        d = WeightedGraph.constant(10, 0.5)
        assert sample_graph_from_weights(d, 3) == sample_graph_from_weights(d, 3)

    def test_half_weights_concentrate(self):
        # empirical cut-norm distance of samples from their density matrix;
        # asymptotic statement, so only the observed maximum is asserted loosely
        d = WeightedGraph.constant(18, 0.5)
        worst = 0.0
        for seed in range(10):
            sampled = WeightedGraph.indicator(sample_graph_from_weights(d, seed))
            worst = max(worst, cutnorm_exact(sampled - d))
        assert worst <= 0.3

    def test_range_check(self):
        with pytest.raises(RangeViolation):
            sample_graph_from_weights(WeightedGraph.constant(4, 1.2), 0)


class TestDegreeLemma:
    def test_equal_inputs_no_violations(self):
        f = random_weights(12, np.random.default_rng(0))
        assert degree_lemma_check(f, f, range(1, 13), eps=0.001) == 0

    def test_equal_degree_functionals(self):
        n = 12
        f = WeightedGraph.indicator(OrderedGraph.complete(n))
        g = WeightedGraph.constant(n, 1.0)
        assert degree_lemma_check(f, g, range(1, n + 1), eps=0.01) == 0

    def test_bound_over_random_instances(self):
        rng = np.random.default_rng(12)
        n = 12
        for _ in range(100):
            f = random_weights(n, rng)
            noise = rng.uniform(-0.08, 0.08, size=(n, n))
            noise = (noise + noise.T) / 2
            np.fill_diagonal(noise, 0.0)
            g = WeightedGraph(np.clip(f.w + noise, 0.0, 1.0))
            eps = cutnorm_exact(f - g)
            count = degree_lemma_check(f, g, range(1, n + 1), eps)
            assert count <= eps ** (1 / 3) * n

    def test_small_u_rejected(self):
        f = random_weights(12, np.random.default_rng(1))
        g = random_weights(12, np.random.default_rng(2))
        with pytest.raises(HypothesisViolated):
            degree_lemma_check(f, g, [1, 2], eps=0.5)

    def test_cutnorm_hypothesis_enforced(self):
        f = WeightedGraph.indicator(OrderedGraph.complete(12))
        g = WeightedGraph.zeros(12)
        with pytest.raises(HypothesisViolated):
            degree_lemma_check(f, g, range(1, 13), eps=1e-6)


class TestTwoDensity:
    def test_triangle(self):
        assert two_density(K3) == 2

    def test_cliques(self):
        for ell in range(3, 9):
            assert two_density(PatternGraph.complete(ell)) == Fraction(ell + 1, 2)

    def test_c4(self):
        assert two_density(PatternGraph.cycle(4)) == Fraction(3, 2)

    def test_threshold_exponent_identity(self):
        for ell in range(3, 9):
            m2 = two_density(PatternGraph.complete(ell))
            assert Fraction(1, 1) / m2 == Fraction(2, ell + 1)

    def test_too_few_vertices(self):
        with pytest.raises(TooFewVertices):
            two_density(PatternGraph.from_edges(2, [(1, 2)]))


class TestStrictlyBalanced:
    def test_cliques_balanced(self):
        for ell in range(3, 9):
            assert is_strictly_balanced(PatternGraph.complete(ell))

    def test_k4_plus_pendant_not_balanced(self):
        pend = PatternGraph.from_edges(
            5, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (4, 5)]
        )
        assert not is_strictly_balanced(pend)

    def test_c5_balanced(self):
        assert is_strictly_balanced(PatternGraph.cycle(5))

    def test_guard(self):
        with pytest.raises(TooLarge):
            is_strictly_balanced(PatternGraph.complete(9))


class TestWeightedGraphObject:
    def test_validation(self):
        with pytest.raises(ValueError):
            WeightedGraph(np.ones((3, 3)))  # nonzero diagonal
        bad = np.zeros((3, 3))
        bad[0, 1] = 1.0
        with pytest.raises(ValueError):
            WeightedGraph(bad)  # asymmetric

    def test_io_round_trip(self, tmp_path):
        f = random_weights(7, np.random.default_rng(6))
        path = tmp_path / "w.txt"
        write_weighted(f, str(path))
        back = read_weighted(str(path))
        assert back.n == 7
        assert np.array_equal(back.w, f.w)

    def test_io_rejects_wrong_pair_order(self, tmp_path):
        path = tmp_path / "w.txt"
        path.write_text("3\n1 2 0.5\n2 3 0.25\n1 3 0.75\n")
        with pytest.raises(ValueError, match="line 3"):
            read_weighted(str(path))
