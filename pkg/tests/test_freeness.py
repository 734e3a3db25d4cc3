from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import alpha, clique_number, has_clique, hs_exists, matrix_of, ts_exists
from polarity_ramsey.digraph import Digraph
from polarity_ramsey.freeness import (
    SearchError,
    SearchReport,
    find_clique,
    find_Hs_witness,
    find_Ts_witness,
    independence_number,
    independent_sets_of_size,
    max_clique,
    validate_clique,
    validate_hs_witness,
    validate_independent_set,
    validate_ts_witness,
)
from polarity_ramsey.geometry import LoopyGraph, build_polarity_graph, complement
from polarity_ramsey.product import build_f2_digraph, build_pair_digraph


def random_graph(n, p, seed, loops=False):
    rng = np.random.default_rng(seed)
    M = np.triu(rng.random((n, n)) < p, 1)
    M = M | M.T
    if loops:
        np.fill_diagonal(M, rng.random(n) < 0.3)
    return LoopyGraph.from_matrix(M)


def test_clique_examples():
    rep = find_clique(LoopyGraph.complete(5), 4)
    assert rep.found and len(rep.witness) == 4
    assert validate_clique(LoopyGraph.complete(5), rep.witness)
    assert find_clique(LoopyGraph.empty(6), 2).free


def test_fano_non_loop_vertices():
    G = build_polarity_graph(2, 2)
    keep = [v for v in range(G.n) if not G.loops[v]]
    H = G.induced(keep)
    expected = has_clique(matrix_of(H), 4)
    assert find_clique(H, 4).found == expected


def test_independence_examples():
    assert independence_number(LoopyGraph.empty(9)).value == 9
    rep = independence_number(LoopyGraph.cycle(5))
    assert rep.value == 2 and validate_independent_set(LoopyGraph.cycle(5), rep.witness)


def test_independence_polarity_bruteforce():
    G = build_polarity_graph(2, 3)
    assert independence_number(G).value == alpha(matrix_of(G))


def test_independence_cap():
    with pytest.raises(SearchError):
        independence_number(LoopyGraph.empty(201))


@pytest.mark.parametrize("seed", range(25))
def test_clique_and_independence_vs_bruteforce(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 17))
    G = random_graph(n, float(rng.random()), seed, loops=True)
    adj = matrix_of(G)
    w = clique_number(adj)
    rep = max_clique(G)
    assert rep.value == w and validate_clique(G, rep.witness)
    for s in range(2, 6):
        assert find_clique(G, s).found == (w >= s)
    a = independence_number(G)
    assert a.value == alpha(adj) and validate_independent_set(G, a.witness)


def test_loops_ignored_in_independence():
    G = LoopyGraph.complete(4, loops=True).complement().complement()
    assert independence_number(G).value == 1
    H = LoopyGraph.from_edges(3, [(0, 0), (1, 1)])
    assert independence_number(H).value == 3


@pytest.mark.parametrize("seed", range(10))
def test_independent_sets_of_size_enumeration(seed):
    G = random_graph(10, 0.4, seed)
    adj = matrix_of(G)
    for k in (1, 2, 3, 4):
        expected = {S for S in combinations(range(10), k)
                    if all(not adj[u][v] for u, v in combinations(S, 2))}
        got = {tuple(sorted(S)) for S in independent_sets_of_size(G, k)}
        assert got == expected


def test_hs_complete_with_loops():
    K = LoopyGraph.complete(3, loops=True)
    rep = find_Hs_witness(K, K, 2)
    assert rep.found and validate_hs_witness(K, K, rep.witness)


@pytest.mark.parametrize("t,q", [(2, 2), (2, 3), (3, 2), (2, 4)])
def test_polarity_pairs_hs_free(t, q):
    G = build_polarity_graph(t, q)
    F = complement(G)
    assert find_Hs_witness(F, G, t + 2).free
    below = find_Hs_witness(F, G, t + 1)
    assert below.found and validate_hs_witness(F, G, below.witness)


@pytest.mark.parametrize("seed", range(12))
def test_hs_vs_naive(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(2, 6))
    F = random_graph(n, float(rng.random()), seed, loops=True)
    G = random_graph(n, float(rng.random()), seed + 1000, loops=True)
    for s in (1, 2, 3):
        if n ** (2 * s) > 10 ** 8:
            continue
        rep = find_Hs_witness(F, G, s)
        assert rep.found == hs_exists(matrix_of(F), matrix_of(G), s)
        if rep.found:
            assert validate_hs_witness(F, G, rep.witness)


def test_hs_vs_naive_fano_pair():
    G = build_polarity_graph(2, 2)
    F = complement(G)
    for s in (1, 2):
        assert find_Hs_witness(F, G, s).found == hs_exists(matrix_of(F), matrix_of(G), s)


def test_ts_examples():
    T = Digraph.transitive_tournament(5)
    rep = find_Ts_witness(T, 5)
    assert rep.found and validate_ts_witness(T, rep.witness)
    assert find_Ts_witness(T, 6).free
    assert find_Ts_witness(build_f2_digraph(4), 4).free
    G = build_polarity_graph(2, 3)
    assert find_Ts_witness(build_pair_digraph(complement(G), G), 4).free


@pytest.mark.parametrize("seed", range(12))
def test_ts_vs_bruteforce(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    M = rng.random((n, n)) < rng.random()
    np.fill_diagonal(M, False)
    D = Digraph.from_arcs(n, zip(*np.nonzero(M)))
    arc = M.tolist()
    for s in (2, 3, 4):
        rep = find_Ts_witness(D, s)
        assert rep.found == ts_exists(arc, s)
        if rep.found:
            assert validate_ts_witness(D, rep.witness)


def test_report_roundtrip_and_budget():
    rep = find_clique(LoopyGraph.complete(5), 3)
    again = SearchReport.from_dict(rep.as_dict())
    assert again.result == rep.result and again.witness == rep.witness
    assert "elapsed" not in rep.as_dict(timings=False)
    slow = find_clique(random_graph(150, 0.9, 1), 40, budget_seconds=0.0)
    assert not slow.conclusive and not slow.free


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 14), st.floats(0, 1), st.integers(0, 10 ** 6))
def test_witnesses_always_revalidate(n, p, seed):
    G = random_graph(n, p, seed, loops=True)
    rep = max_clique(G)
    assert validate_clique(G, rep.witness)
    a = independence_number(G)
    assert validate_independent_set(G, a.witness)
