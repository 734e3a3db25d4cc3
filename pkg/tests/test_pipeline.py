import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from oracles import alpha, has_clique, matrix_of
from polarity_ramsey.digraph import Digraph
from polarity_ramsey.freeness import find_clique, independence_number, independent_sets_of_size
from polarity_ramsey.geometry import LoopyGraph, build_polarity_graph, complement
from polarity_ramsey.pipeline import (
    PipelineError,
    choose_p,
    count_cliques,
    monochromatic_counts,
    multicolor_build,
    multicolor_expected,
    orient,
    ramsey_upper,
    sample_and_prune,
    stream,
    witness_from_digraph,
)
from polarity_ramsey.product import build_f2_digraph, build_pair_digraph


@pytest.fixture(scope="module")
def d4():
    return build_f2_digraph(4)


@pytest.fixture(scope="module")
def pair_digraph():
    G = build_polarity_graph(2, 3)
    return build_pair_digraph(complement(G), G)


def test_orient_arcless():
    D = Digraph(6, [0] * 6)
    for seed in range(5):
        assert orient(D, seed).graph.edge_count == 0


def test_single_arc_frequency():
    D = Digraph.from_arcs(2, [(0, 1)])
    trials = 10_000
    hits = sum(orient(D, seed).graph.has_edge(0, 1) for seed in range(trials))
    sigma = math.sqrt(trials * 0.25)
    assert abs(hits - trials / 2) <= 3 * sigma


def test_orient_edges_are_forward_arcs(d4):
    o = orient(d4, 3)
    M = d4.arc_matrix()
    pi = o.pi
    for u, v in o.graph.edges():
        assert u != v
        a, b = (u, v) if pi[u] < pi[v] else (v, u)
        assert M[a, b]
    # every forward arc between distinct vertices became an edge
    forward = {frozenset((int(u), int(v))) for u, v in zip(*np.nonzero(M)) if u != v and pi[u] < pi[v]}
    assert o.graph.edge_count == len(forward)


@pytest.mark.parametrize("seed", range(10))
def test_orientation_soundness(d4, seed):
    o = orient(d4, seed, certify=True, s=4)
    assert o.digraph_certified
    assert find_clique(o.graph, 4).free
    out = d4.out_rows
    for S in independent_sets_of_size(o.graph, 4):
        tup = o.order(S)
        for i in range(4):
            for j in range(i + 1, 4):
                assert not (out[tup[i]] >> tup[j]) & 1


def test_orient_is_deterministic(d4):
    a, b = orient(d4, 42), orient(d4, 42)
    assert a.graph == b.graph and np.array_equal(a.pi, b.pi)
    assert orient(d4, 43).graph != a.graph


def test_streams_independent():
    x = stream(5, 1, 0).random(4)
    y = stream(5, 1, 1).random(4)
    assert not np.allclose(x, y)
    assert np.array_equal(stream(5, 2, 1).integers(0, 100, 10), stream(5, 2, 1).integers(0, 100, 10))


def test_choose_p_examples():
    assert choose_p(1, 4) == 1.0
    assert choose_p(2 ** 5, 5) == pytest.approx(0.5, abs=1e-15)
    assert choose_p(393216, 4) == pytest.approx(393216 ** -0.25)
    assert abs(choose_p(393216, 4) - 0.0399) < 1e-4
    assert choose_p(0, 3) is None


def test_sample_p_zero_is_vacuous():
    G = LoopyGraph.cycle(5)
    w = sample_and_prune(G, 3, 2, 0.0, seed=1)
    assert w.n == 0 and w.certified


def test_sample_p_one_keeps_graph():
    G = LoopyGraph.cycle(5)
    w = sample_and_prune(G, 3, 3, 1.0, seed=1)
    assert w.n == 5 and w.deleted == [] and w.certified
    assert w.alpha == 2


def test_sample_prunes_until_no_independent_k_set():
    G = LoopyGraph.cycle(9)
    w = sample_and_prune(G, 3, 3, 1.0, seed=0, attempts=3)
    adj = matrix_of(w.graph)
    assert alpha(adj) < 3 and not has_clique(adj, 3)
    assert w.certified and w.alpha < 3


def test_sample_rejects_bad_p():
    with pytest.raises(PipelineError):
        sample_and_prune(LoopyGraph.cycle(5), 3, 2, 1.5, seed=0)


def test_witness_on_pair(pair_digraph):
    w = witness_from_digraph(pair_digraph, 4, seed=0)
    assert w.certified and w.n == 117
    bound = w.implied_bound()
    k = w.alpha + 1
    assert bound["statement"] == f"r(4, {k}) > 117"
    assert 117 < ramsey_upper(4, k) == math.comb(k + 2, 3)
    d = w.as_dict(timings=False)
    assert d["pi"] == w.pi and len(d["pi"]) == 117


def test_witness_with_sampling(pair_digraph):
    gamma = orient(pair_digraph, 1).graph
    k = independence_number(gamma).value
    i_k = sum(1 for _ in independent_sets_of_size(gamma, k))
    p = choose_p(i_k, k)
    w = witness_from_digraph(pair_digraph, 4, seed=1, k=k, p=p, attempts=3)
    assert w.p == p
    assert w.certified and w.alpha < k
    assert 0 < w.n < 117


def test_multicolor_arcless():
    D = Digraph(4, [0] * 4)
    col = multicolor_build(D, 3, 6, seed=0)
    off = ~np.eye(6, dtype=bool)
    assert np.all(col.colors[off] == 3)
    assert multicolor_expected(D, 3, 6, 4) == math.comb(6, 4)


def test_multicolor_small_n(d4):
    col = multicolor_build(d4, 3, 1, seed=0)
    assert col.colors.shape == (1, 1) and col.colors[0, 0] == 0
    assert multicolor_expected(d4, 3, 3, 4) == 0


def test_multicolor_partition_and_rule(d4):
    col = multicolor_build(d4, 4, 12, seed=9)
    M = d4.arc_matrix()
    for i, j in combinations(range(12), 2):
        c = col.colors[i, j]
        assert col.colors[j, i] == c and 1 <= c <= 4
        hits = [k for k in range(1, 4) if M[col.maps[k - 1][i], col.maps[k - 1][j]]]
        assert c == (hits[0] if hits else 4)
    total = sum(col.class_graph(c).edge_count for c in range(1, 5))
    assert total == math.comb(12, 2)


def test_multicolor_rejects_loops():
    D = Digraph.from_arcs(2, [(0, 0), (0, 1)])
    with pytest.raises(PipelineError):
        multicolor_build(D, 3, 5, seed=0)


@pytest.mark.parametrize("seed", range(20))
def test_multicolor_low_colours_clique_free(d4, seed):
    col = multicolor_build(d4, 3, 20, seed)
    counts = monochromatic_counts(col, 4)
    assert counts[1] == counts[2] == 0
    for c in (1, 2):
        assert find_clique(col.class_graph(c), 4).free


def test_count_cliques_bruteforce():
    rng = np.random.default_rng(0)
    M = np.triu(rng.random((11, 11)) < 0.6, 1)
    G = LoopyGraph.from_matrix(M | M.T)
    adj = matrix_of(G)
    for s in (2, 3, 4):
        expected = sum(1 for S in combinations(range(11), s) if all(adj[u][v] for u, v in combinations(S, 2)))
        assert count_cliques(G, s) == expected


def test_multicolor_expected_formula(d4):
    value = multicolor_expected(d4, 3, 20, 4)
    assert value == math.comb(20, 4) * Fraction(34048, 28 ** 4) ** 2
