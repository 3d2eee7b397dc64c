import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.stats import beta as beta_dist

from mesoscale.graph import Graph
from mesoscale.model import (
    BlockCounts,
    BlockProbs,
    Hyperparameters,
    block_counts,
    log_likelihood,
    log_likelihood_delta,
    log_marginal_likelihood,
    log_prior_labels,
)


def labels(*entries):
    return np.array(entries, dtype=np.int64)


class TestBlockCounts:
    def test_hand_enumerated_four_nodes(self):
        # pairs: (0,1) in-1, (0,2) cross, (0,3) cross, (1,2) cross,
        # (1,3) cross, (2,3) in-2; edges (0,1), (0,2), (2,3)
        g = Graph.from_edges([(0, 1), (0, 2), (2, 3)])
        c = labels(1, 1, 2, 2)
        counts = block_counts(g, c)
        assert counts == BlockCounts(M11=1, M12=1, M22=1,
                                     m11=1, m12=4, m22=1, n1=2, n2=2)

    def test_empty_graph(self):
        g = Graph.from_edges([], n=5)
        counts = block_counts(g, labels(1, 1, 2, 2, 2))
        assert (counts.M11, counts.M12, counts.M22) == (0, 0, 0)
        assert (counts.m11, counts.m12, counts.m22) == (1, 6, 3)

    def test_complete_graph_single_block(self):
        g = Graph.from_edges([(i, j) for i in range(4) for j in range(i + 1, 4)])
        counts = block_counts(g, labels(1, 1, 1, 1))
        assert counts.M11 == counts.m11 == 6
        assert counts.n2 == 0
        assert counts.m12 == counts.m22 == 0

    def test_length_mismatch(self):
        g = Graph.from_edges([(0, 1)])
        with pytest.raises(ValueError, match="length"):
            block_counts(g, labels(1, 2, 1))

    @given(st.data())
    @settings(max_examples=100)
    def test_edge_total_and_pair_total(self, data):
        n = data.draw(st.integers(min_value=2, max_value=10))
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        edges = data.draw(st.sets(st.sampled_from(pairs)))
        g = Graph.from_edges(sorted(edges), n=n)
        c = labels(*data.draw(st.lists(st.sampled_from((1, 2)),
                                       min_size=n, max_size=n)))
        counts = block_counts(g, c)
        assert counts.M11 + counts.M12 + counts.M22 == g.m
        assert counts.m11 + counts.m12 + counts.m22 == n * (n - 1) // 2
        assert counts.n1 + counts.n2 == n
        assert 0 <= counts.M11 <= counts.m11
        assert 0 <= counts.M12 <= counts.m12
        assert 0 <= counts.M22 <= counts.m22


class TestLogLikelihood:
    def test_all_half_is_total_pairs_times_log_half(self):
        counts = BlockCounts(M11=2, M12=1, M22=0, m11=3, m12=6, m22=1, n1=3, n2=2)
        total_pairs = counts.m11 + counts.m12 + counts.m22
        assert log_likelihood(counts, BlockProbs(0.5, 0.5, 0.5)) == pytest.approx(
            -total_pairs * math.log(2)
        )

    def test_direct_substitution(self):
        counts = BlockCounts(M11=1, M12=1, M22=1, m11=1, m12=4, m22=1, n1=2, n2=2)
        expected = (math.log(0.2) + math.log(0.1) + 3 * math.log(0.9)
                    + math.log(0.3))
        assert log_likelihood(counts, BlockProbs(0.2, 0.1, 0.3)) == pytest.approx(
            expected, rel=1e-12
        )

    def test_impossible_configuration_is_minus_inf(self):
        counts = BlockCounts(M11=0, M12=2, M22=0, m11=0, m12=4, m22=1, n1=1, n2=4)
        assert log_likelihood(counts, BlockProbs(0.5, 0.0, 0.5)) == -math.inf
        # p = 1 with a missing edge is impossible too
        assert log_likelihood(counts, BlockProbs(0.5, 1.0, 0.5)) == -math.inf

    def test_saturated_probabilities_can_be_certain(self):
        counts = BlockCounts(M11=0, M12=4, M22=0, m11=0, m12=4, m22=1, n1=1, n2=4)
        assert log_likelihood(counts, BlockProbs(0.5, 1.0, 0.0)) == pytest.approx(0.0)

    def test_relabel_symmetry(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n1, n2 = rng.integers(0, 6, size=2)
            m11, m12, m22 = n1 * (n1 - 1) // 2, n1 * n2, n2 * (n2 - 1) // 2
            counts = BlockCounts(
                M11=int(rng.integers(0, m11 + 1)),
                M12=int(rng.integers(0, m12 + 1)),
                M22=int(rng.integers(0, m22 + 1)),
                m11=m11, m12=m12, m22=m22, n1=int(n1), n2=int(n2),
            )
            p = BlockProbs(*rng.random(3))
            swapped = counts.swapped()
            assert log_likelihood(counts, p) == pytest.approx(
                log_likelihood(swapped, BlockProbs(p.p22, p.p12, p.p11)),
                rel=1e-12, abs=1e-12,
            )


def random_graph_labels_probs(rng, n):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = rng.random(len(pairs)) < 0.4
    edges = [pairs[k] for k in np.nonzero(mask)[0]]
    g = Graph.from_edges(edges, n=n)
    c = rng.integers(1, 3, size=n).astype(np.int64)
    p = BlockProbs(*(rng.uniform(0.05, 0.95, size=3).tolist()))
    return g, c, p


class TestLogLikelihoodDelta:
    def test_two_nodes_no_edges(self):
        g = Graph.from_edges([], n=2)
        c = labels(1, 2)
        counts = block_counts(g, c)
        p = BlockProbs(0.3, 0.6, 0.2)
        delta, new_counts = log_likelihood_delta(g, c, counts, p, 1)
        assert delta == pytest.approx(math.log1p(-0.3) - math.log1p(-0.6))
        assert new_counts == BlockCounts(M11=0, M12=0, M22=0,
                                         m11=1, m12=0, m22=0, n1=2, n2=0)

    def test_uniform_p_gives_zero_delta(self):
        g = Graph.from_edges([(0, 1), (1, 2), (2, 3)])
        c = labels(1, 2, 1, 2)
        counts = block_counts(g, c)
        for i in range(4):
            delta, _ = log_likelihood_delta(g, c, counts,
                                            BlockProbs(0.5, 0.5, 0.5), i)
            assert delta == pytest.approx(0.0, abs=1e-12)

    def test_matches_full_recompute_randomized(self):
        rng = np.random.default_rng(123)
        for _ in range(200):
            g, c, p = random_graph_labels_probs(rng, 12)
            counts = block_counts(g, c)
            i = int(rng.integers(0, g.n))
            delta, new_counts = log_likelihood_delta(g, c, counts, p, i)
            flipped = c.copy()
            flipped[i] = 3 - flipped[i]
            recomputed = block_counts(g, flipped)
            assert new_counts == recomputed
            full = log_likelihood(recomputed, p) - log_likelihood(counts, p)
            assert delta == pytest.approx(full, rel=1e-9, abs=1e-12)

    def test_out_of_range_node(self):
        g = Graph.from_edges([(0, 1)])
        c = labels(1, 2)
        with pytest.raises(ValueError, match="out of range"):
            log_likelihood_delta(g, c, block_counts(g, c),
                                 BlockProbs(0.5, 0.5, 0.5), 2)


class TestLogPriorLabels:
    def test_flat_prior(self):
        h = Hyperparameters.uniform(4)
        assert log_prior_labels(labels(1, 2, 2, 1), h) == pytest.approx(
            -4 * math.log(2)
        )

    def test_direct_substitution(self):
        h = Hyperparameters(a0_11=1, b0_11=1, a0_12=1, b0_12=1, a0_22=1, b0_22=1,
                            pi=np.array([0.9, 0.1]))
        assert log_prior_labels(labels(1, 2), h) == pytest.approx(
            math.log(0.9) + math.log(0.9)
        )

    def test_flip_invariance_at_half(self):
        h = Hyperparameters.uniform(5)
        c = labels(1, 1, 2, 1, 2)
        flipped = 3 - c
        assert log_prior_labels(c, h) == pytest.approx(log_prior_labels(flipped, h))


def quadrature_marginal(counts, h):
    """Independent oracle: integrate the likelihood against the Beta priors."""
    blocks = (
        (counts.M11, counts.m11, h.a0_11, h.b0_11),
        (counts.M12, counts.m12, h.a0_12, h.b0_12),
        (counts.M22, counts.m22, h.a0_22, h.b0_22),
    )
    total = 0.0
    for M, m, a0, b0 in blocks:
        val, _ = quad(
            lambda p, M=M, m=m, a0=a0, b0=b0:
                p ** M * (1 - p) ** (m - M) * beta_dist.pdf(p, a0, b0),
            0.0, 1.0, epsabs=1e-12, epsrel=1e-12,
        )
        total += math.log(val)
    return total


class TestLogMarginalLikelihood:
    def test_all_zero_counts(self):
        counts = BlockCounts(M11=0, M12=0, M22=0, m11=0, m12=0, m22=0, n1=1, n2=0)
        h = Hyperparameters.uniform(1)
        assert log_marginal_likelihood(counts, h) == pytest.approx(0.0, abs=1e-12)

    def test_single_pair_single_edge(self):
        counts = BlockCounts(M11=1, M12=0, M22=0, m11=1, m12=0, m22=0, n1=2, n2=0)
        h = Hyperparameters.uniform(2)
        assert log_marginal_likelihood(counts, h) == pytest.approx(math.log(0.5))

    def test_uniform_prior_closed_form(self):
        counts = BlockCounts(M11=2, M12=3, M22=1, m11=3, m12=8, m22=3, n1=3, n2=4)
        h = Hyperparameters.uniform(7)
        expected = sum(
            math.log(
                math.factorial(M) * math.factorial(m - M) / math.factorial(m + 1)
            )
            for M, m in ((2, 3), (3, 8), (1, 3))
        )
        assert log_marginal_likelihood(counts, h) == pytest.approx(expected, rel=1e-12)

    def test_matches_quadrature_oracle(self):
        rng = np.random.default_rng(99)
        for _ in range(20):
            n1, n2 = int(rng.integers(1, 5)), int(rng.integers(1, 5))
            m11, m12, m22 = n1 * (n1 - 1) // 2, n1 * n2, n2 * (n2 - 1) // 2
            counts = BlockCounts(
                M11=int(rng.integers(0, m11 + 1)),
                M12=int(rng.integers(0, m12 + 1)),
                M22=int(rng.integers(0, m22 + 1)),
                m11=m11, m12=m12, m22=m22, n1=n1, n2=n2,
            )
            a0, b0 = rng.uniform(0.5, 3.0, size=2)
            h = Hyperparameters.uniform(n1 + n2, a0=float(a0), b0=float(b0))
            assert log_marginal_likelihood(counts, h) == pytest.approx(
                quadrature_marginal(counts, h), abs=1e-6
            )


class TestHyperparameters:
    def test_rejects_nonpositive_shapes(self):
        with pytest.raises(ValueError, match="positive"):
            Hyperparameters.uniform(3, a0=0.0)

    def test_rejects_degenerate_pi(self):
        with pytest.raises(ValueError, match="strictly"):
            Hyperparameters(a0_11=1, b0_11=1, a0_12=1, b0_12=1,
                            a0_22=1, b0_22=1, pi=np.array([0.5, 1.0]))

    def test_block_symmetry_flag(self):
        assert Hyperparameters.uniform(3).block_symmetric()
        h = Hyperparameters(a0_11=2, b0_11=1, a0_12=1, b0_12=1,
                            a0_22=1, b0_22=1, pi=np.full(3, 0.5))
        assert not h.block_symmetric()
