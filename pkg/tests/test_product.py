import math
from fractions import Fraction

import numpy as np
import pytest

from polarity_ramsey.freeness import find_Hs_witness, find_Ts_witness, validate_ts_witness
from polarity_ramsey.geometry import LoopyGraph, build_polarity_graph, complement
from polarity_ramsey.product import (
    PairSystem,
    ProductError,
    build_f2_digraph,
    build_pair_digraph,
    f2_defined_vertex_count,
    f2_stated_vertex_count,
    pair_params,
    random_forward_independent_tuple,
    shrinking_sequence,
)


@pytest.fixture(scope="module")
def pair23():
    G = build_polarity_graph(2, 3)
    return pair_params(complement(G), G)


def test_pair_digraph_size(pair23):
    D = pair23.digraph
    assert D.n == 117 == pair23.d_F * pair23.n
    assert D.loopless


def test_pair_digraph_matches_definition():
    G = build_polarity_graph(2, 2)
    F = complement(G)
    D = build_pair_digraph(F, G)
    f, g = F.matrix(), G.matrix()
    pairs = [(a, b) for a in range(7) for b in range(7) if f[a, b]]
    assert D.labels == pairs
    for u, (a1, b1) in enumerate(pairs):
        for v, (a2, b2) in enumerate(pairs):
            assert D.has_arc(u, v) == bool(g[a1, b2])
    M = D.arc_matrix()
    assert M.sum() == D.arc_count() == len(list(D.arcs()))
    for u in range(D.n):
        assert D.index_of(*pairs[u]) == u


def test_pair_digraph_trivial_cases():
    E = LoopyGraph.empty(4)
    assert build_pair_digraph(E, build_polarity_graph(2, 2).induced([0, 1, 2, 3])).n == 0
    L = LoopyGraph.from_edges(1, [(0, 0)])
    D = build_pair_digraph(L, L)
    assert D.n == 1 and D.loops() == [0]
    with pytest.raises(ProductError):
        build_pair_digraph(LoopyGraph.empty(3), LoopyGraph.empty(4))


@pytest.mark.parametrize("seed", range(8))
def test_loop_rule(seed):
    rng = np.random.default_rng(seed)
    n = 6
    mats = []
    for _ in range(2):
        M = np.triu(rng.random((n, n)) < 0.5)
        mats.append(M | M.T)
    F, G = (LoopyGraph.from_matrix(M) for M in mats)
    D = build_pair_digraph(F, G)
    expected = [i for i, (a, b) in enumerate(D.labels) if mats[0][a, b] and mats[1][a, b]]
    assert D.loops() == expected
    assert D.n == int(F.degrees.sum())


@pytest.mark.parametrize("s", [4, 5])
def test_f2_equals_pair_of_polarity(s):
    D2 = build_f2_digraph(s)
    G = build_polarity_graph(s - 2, 2)
    D = build_pair_digraph(complement(G), G)
    assert D2.n == D.n
    assert D2.F.labels == [tuple(x) for x in G.labels]
    assert np.array_equal(D2.arc_matrix(), D.arc_matrix())


@pytest.mark.parametrize("s", [4, 5, 6])
def test_f2_vertex_counts(s):
    D = build_f2_digraph(s)
    p = s - 1
    brute = sum(1 for x in range(1, 2 ** p) for y in range(1, 2 ** p) if bin(x & y).count("1") % 2 == 1)
    assert D.n == brute == f2_defined_vertex_count(s)
    assert D.meta["stated_vertex_count"] == f2_stated_vertex_count(s)
    # the quoted closed form is the number of adjacent ordered pairs n * d
    n, d = 2 ** p - 1, 2 ** (p - 1) - 1
    assert f2_stated_vertex_count(s) == n * d
    ref = 2 ** (2 * s - 3)
    for value in (D.n, f2_stated_vertex_count(s)):
        assert ref / 2 <= value <= 2 * ref
    assert D.loopless


def test_f2_examples():
    D = build_f2_digraph(4)
    assert D.n == 28
    assert D.meta["discrepancy"] is not None
    assert find_Ts_witness(D, 4).free
    rep = find_Ts_witness(D, 3)
    assert rep.found and validate_ts_witness(D, rep.witness)
    with pytest.raises(ProductError):
        build_f2_digraph(3)


@pytest.mark.parametrize("t,q", [(2, 2), (2, 3)])
def test_hs_free_implies_ts_free(t, q):
    G = build_polarity_graph(t, q)
    F = complement(G)
    s = t + 2
    assert find_Hs_witness(F, G, s).free
    assert find_Ts_witness(build_pair_digraph(F, G), s).free


def test_eta_and_w(pair23):
    assert pair23.eta_terms_squared == (Fraction(9, 256), Fraction(1, 144))
    assert pair23.eta_squared == Fraction(9, 256)
    assert pair23.eta_exact == Fraction(3, 16)
    assert abs(pair23.w - 13 * math.log(13)) < 1e-9
    assert 0 < pair23.eta <= 1


def test_eta_zero_when_lambda_zero():
    S = PairSystem.from_parameters(10, 3, 3, 0, 0)
    assert S.eta_squared == 0 and S.eta == 0


def test_pair_params_requires_certificates():
    C4 = LoopyGraph.cycle(4)
    with pytest.raises(ValueError):
        pair_params(complement(C4), C4)


def test_synthetic_pair_has_no_digraph():
    with pytest.raises(ProductError):
        PairSystem.from_parameters(10, 3, 3, 1, 1).digraph


def test_shrinking_examples(pair23):
    assert len(shrinking_sequence(pair23, [])) == 0
    for v in range(0, 117, 13):
        assert shrinking_sequence(pair23, [v]).z == (0,)
    with pytest.raises(ProductError):
        shrinking_sequence(pair23, [117])


def test_shrinking_weight_bounded(pair23):
    D = pair23.digraph
    rng = np.random.default_rng(2024)
    out = D.out_rows
    for _ in range(1000):
        tup = random_forward_independent_tuple(D, 20, rng)
        # forward independence, checked on the raw arc rule
        for i in range(20):
            for j in range(i + 1, 20):
                assert not (out[tup[i]] >> tup[j]) & 1
        seq = shrinking_sequence(pair23, tup)
        assert seq.weight <= math.ceil(pair23.w)
        assert seq.weight <= pair23.w


def test_arc_export_pairs_sorted(pair23):
    D = pair23.digraph
    keys = [a * 13 + b for a, b in D.labels]
    assert keys == sorted(keys)
    F = pair23.F
    assert all(F.has_edge(a, b) for a, b in D.labels)
