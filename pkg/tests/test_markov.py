from itertools import product as iproduct

import numpy as np
import pytest

from covrad.errors import InvalidInputError, InvalidMarkovChainError, ParallelEdgeError
from covrad.graphs import LabeledGraph, build_full_shift, build_rll_0k, build_rll_d_inf
from covrad.markov import (
    MarkovChain,
    markov_from_edge_probs,
    product_graph,
    sample_word,
    sample_words,
    uniform_bernoulli,
)
from covrad.markov_bound import rll0k_product_chain

FULL2 = build_full_shift(2).presentation


class TestValidation:
    def test_full_shift(self):
        mc = markov_from_edge_probs(FULL2, [0.5, 0.5])
        assert mc.vertex_probs.tolist() == [1.0]
        assert mc.conditional.tolist() == [0.5, 0.5]

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_product_chain_validates(self, k):
        prod = product_graph(build_rll_0k(k).presentation, FULL2)
        mc = markov_from_edge_probs(prod.product, rll0k_product_chain(k))
        assert mc.vertex_probs.sum() == pytest.approx(1.0, abs=1e-12)
        g = mc.graph
        inflow = np.bincount(g.targets, weights=mc.edge_probs, minlength=g.vertex_count)
        assert np.allclose(inflow, mc.vertex_probs, atol=1e-12)
        # (j, y) pairs with Y-vertex fixed: k+1 live vertices
        assert g.vertex_count == k + 1

    def test_flow_violation(self):
        g = build_rll_0k(1).presentation
        # canonical order (0,1,0), (0,0,1), (1,0,1); all mass on 0 -> 1 leaves vertex 1 without outflow
        with pytest.raises(InvalidMarkovChainError, match="flow"):
            markov_from_edge_probs(g, [1.0, 0.0, 0.0])

    def test_not_normalized(self):
        with pytest.raises(InvalidMarkovChainError):
            markov_from_edge_probs(FULL2, [0.5, 0.6])

    def test_negative(self):
        with pytest.raises(InvalidMarkovChainError):
            markov_from_edge_probs(FULL2, [1.5, -0.5])

    def test_zero_mass_vertex_removed(self):
        g = build_rll_0k(1).presentation  # canonical order (0,1,0), (0,0,1), (1,0,1)
        mc = markov_from_edge_probs(g, [0.0, 1.0, 0.0])
        assert mc.graph.vertex_count == 1
        assert mc.vertex_origin == (0,)
        assert mc.edge_origin == (1,)
        assert mc.full_edge_probs().tolist() == [0.0, 1.0, 0.0]

    def test_conditionals_sum_to_one(self):
        g = build_rll_0k(2).presentation
        rng = np.random.default_rng(0)
        # build a valid chain from a random positive Q and its stationary vector
        for _ in range(10):
            w = rng.random(g.edge_count) + 0.1
            out_sum = np.bincount(g.sources, weights=w)
            qmat = np.zeros((g.vertex_count, g.vertex_count))
            for e, (s, t, _) in enumerate(g.edges):
                qmat[s, t] += w[e] / out_sum[s]
            vals, vecs = np.linalg.eig(qmat.T)
            pi = np.real(vecs[:, np.argmin(abs(vals - 1))])
            pi /= pi.sum()
            p = pi[g.sources] * w / out_sum[g.sources]
            mc = markov_from_edge_probs(g, p)
            sums = np.bincount(mc.graph.sources, weights=mc.conditional)
            assert np.allclose(sums, 1.0, atol=1e-9)

    def test_json_round_trip(self):
        prod = product_graph(build_rll_0k(2).presentation, FULL2)
        mc = markov_from_edge_probs(prod.product, rll0k_product_chain(2))
        back = MarkovChain.from_json(mc.to_json())
        assert back.base_graph == mc.base_graph
        assert np.allclose(back.full_edge_probs(), mc.full_edge_probs(), atol=1e-15)

    def test_json_missing_probs(self):
        with pytest.raises(InvalidInputError):
            MarkovChain.from_dict(FULL2.to_dict())


class TestUniform:
    def test_q2(self):
        assert uniform_bernoulli(2).edge_probs.tolist() == [0.5, 0.5]

    def test_q4(self):
        mc = uniform_bernoulli(4)
        assert mc.graph.edge_count == 4 and np.allclose(mc.edge_probs, 0.25)

    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_symbol_frequencies(self, q):
        w = sample_words(uniform_bernoulli(q), 10**5, 1, 0)[0]
        freq = np.bincount(w, minlength=q) / w.size
        assert np.abs(freq - 1 / q).max() < 0.01

    def test_length3_cylinders(self):
        words = sample_words(uniform_bernoulli(2), 3, 10**6, 1)
        codes = words[:, 0] * 4 + words[:, 1] * 2 + words[:, 2]
        freq = np.bincount(codes, minlength=8) / codes.size
        assert np.abs(freq - 1 / 8).max() < 0.01

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_cylinder_three_se(self, m):
        count = 10**6
        words = sample_words(uniform_bernoulli(2), m, count, 100 + m)
        codes = words @ (2 ** np.arange(m)[::-1])
        freq = np.bincount(codes, minlength=2**m) / count
        p = 2.0**-m
        se = np.sqrt(p * (1 - p) / count)
        assert (np.abs(freq - p) <= 3 * se).all()


class TestSampling:
    def test_periodic(self):
        g = LabeledGraph(2, 3, ((0, 1, 0), (1, 2, 0), (2, 0, 1)))
        mc = markov_from_edge_probs(g, [1 / 3] * 3)
        w = sample_word(mc, 30, 4)
        start = w.index(1)
        tail = w[start:]
        assert all(a == (1 if i % 3 == 0 else 0) for i, a in enumerate(tail))

    def test_seed_determinism(self):
        mc = markov_from_edge_probs(product_graph(build_rll_0k(1).presentation, FULL2).product,
                                    rll0k_product_chain(1))
        assert sample_word(mc, 50, 9) == sample_word(mc, 50, 9)
        assert sample_word(mc, 50, 9) != sample_word(mc, 50, 10)

    def test_walk_respects_graph(self):
        # samples from a chain on the (0,2)-RLL graph never contain 000
        g = build_rll_0k(2).presentation
        mc = markov_from_edge_probs(g, _rll_chain(g))
        w = sample_words(mc, 200, 50, 3)
        s = "".join(map(str, w.ravel().tolist()))
        for row in w:
            assert "000" not in "".join(map(str, row))
        assert s.count("1") > 0

    def test_start_distribution(self):
        # two-vertex chain whose label reveals the start vertex
        g = LabeledGraph(2, 2, ((0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)))
        p = np.array([0.5, 0.1, 0.1, 0.3])
        mc = markov_from_edge_probs(g, p)
        first = sample_words(mc, 1, 10**5, 5)[:, 0]
        assert first.mean() == pytest.approx(0.4, abs=0.01)

    def test_rejects_bad_length(self):
        with pytest.raises(InvalidInputError):
            sample_word(uniform_bernoulli(2), 0, 1)


def _rll_chain(g):
    # maxentropic-ish valid chain: uniform Q where possible
    out_sum = np.array([len(o) for o in g.out_edges], float)
    qmat = np.zeros((g.vertex_count, g.vertex_count))
    for s, t, _ in g.edges:
        qmat[s, t] += 1 / out_sum[s]
    vals, vecs = np.linalg.eig(qmat.T)
    pi = np.real(vecs[:, np.argmin(abs(vals - 1))])
    pi /= pi.sum()
    return pi[g.sources] / out_sum[g.sources]


class TestProduct:
    def test_rll01_sizes(self):
        prod = product_graph(build_rll_0k(1).presentation, FULL2)
        assert prod.product.vertex_count == 2 and prod.product.edge_count == 6

    def test_dinf1_sizes(self):
        prod = product_graph(build_rll_d_inf(1).presentation, FULL2)
        assert prod.product.vertex_count == 2 and prod.product.edge_count == 6

    def test_single_loop_factor(self):
        gx = build_rll_0k(2).presentation
        loop = LabeledGraph(1, 1, ((0, 0, 0),))
        prod = product_graph(gx, loop)
        assert prod.product == gx
        prod2 = product_graph(loop, gx)
        assert prod2.product == gx

    def test_provenance_reconstructs(self):
        gx, gy = build_rll_0k(2).presentation, build_rll_d_inf(1).presentation
        prod = product_graph(gx, gy)
        assert sorted(prod.provenance) == list(iproduct(range(gx.edge_count), range(gy.edge_count)))
        vy = gy.vertex_count
        for e, (ix, iy) in enumerate(prod.provenance):
            sx, tx, ax = gx.edges[ix]
            sy, ty, ay = gy.edges[iy]
            assert prod.product.edges[e] == (sx * vy + sy, tx * vy + ty, ax * 2 + ay)
            assert prod.pair_label(e) == (ax, ay)

    def test_parallel_rejected(self):
        g = LabeledGraph(2, 1, ((0, 0, 0), (0, 0, 0), (0, 0, 1)))
        with pytest.raises(ParallelEdgeError):
            product_graph(g, FULL2)

    def test_non_essential_rejected(self):
        g = LabeledGraph(2, 2, ((0, 0, 0), (0, 1, 1)))
        with pytest.raises(InvalidInputError):
            product_graph(g, FULL2)
