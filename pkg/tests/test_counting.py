import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bad_tuples_bruteforce, fwi_bruteforce
from polarity_ramsey.counting import (
    BudgetExceeded,
    CountError,
    CountResult,
    RankSequence,
    bad_tuple_count,
    bad_tuples_by_rank_sequence,
    fwi_count,
    rank_formula_bound,
    rank_formula_summands,
    rank_sequence_bound,
    rank_sequence_of,
    spectral_fwi_bound,
)
from polarity_ramsey.digraph import Digraph
from polarity_ramsey.geometry import build_polarity_graph, complement
from polarity_ramsey.product import PairSystem, build_f2_digraph, pair_params

F2_FWI = {1: 28, 2: 448, 3: 4480, 4: 34048, 5: 222208}


@pytest.fixture(scope="module")
def d4():
    return build_f2_digraph(4)


def test_fwi_bruteforce_small(d4):
    arc = d4.arc_matrix().tolist()
    assert fwi_bruteforce(arc, 1) == 28
    assert fwi_bruteforce(arc, 2) == 448
    assert fwi_bruteforce(arc, 3) == F2_FWI[3]


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_fwi_f2_values(d4, k):
    assert fwi_count(d4, k).count == F2_FWI[k]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_fwi_two_methods_agree(d4, k):
    assert fwi_count(d4, k, method="enumerate").count == fwi_count(d4, k).count


def test_fwi_trivial():
    D = Digraph(5, [0] * 5)
    assert fwi_count(D, 3).count == 125
    assert fwi_count(D, 0).count == 1
    assert fwi_count(build_f2_digraph(5), 1).count == build_f2_digraph(5).n


@pytest.mark.parametrize("seed", range(10))
def test_fwi_random_digraphs(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    M = rng.random((n, n)) < rng.random()
    D = Digraph.from_arcs(n, zip(*np.nonzero(M)))
    for k in range(1, 5):
        assert fwi_count(D, k).count == fwi_bruteforce(M.tolist(), k)
        if k < 4:
            assert fwi_count(D, k + 1).count <= n * fwi_count(D, k).count


def test_fwi_budget(d4):
    with pytest.raises(BudgetExceeded):
        fwi_count(d4, 5, node_budget=3)
    with pytest.raises(BudgetExceeded):
        fwi_count(build_f2_digraph(6), 6, method="enumerate")


@pytest.mark.parametrize("p,k", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2), (2, 3)])
def test_bad_tuples_bruteforce(p, k):
    assert bad_tuple_count(p, k).count == bad_tuples_bruteforce(p, k)


def test_bad_tuple_examples():
    assert bad_tuple_count(3, 1).count == 28
    assert bad_tuple_count(3, 2).count == 448
    assert bad_tuple_count(1, 2).count == 1


@pytest.mark.parametrize("s,k", [(4, 1), (4, 2), (4, 3), (5, 1), (5, 2)])
def test_oracle_equivalence(s, k):
    bad = bad_tuple_count(s - 1, k).count
    assert bad == fwi_count(build_f2_digraph(s), k).count
    assert rank_formula_bound(s, k).count >= bad


@pytest.mark.parametrize("p,k", [(3, 4), (4, 3), (5, 3), (3, 6)])
def test_rank_recursion_matches_dfs(p, k):
    assert bad_tuple_count(p, k, method="rank-recursion").count == bad_tuple_count(p, k).count


def test_bad_tuple_limits():
    with pytest.raises(CountError):
        bad_tuple_count(9, 2)
    with pytest.raises(CountError):
        bad_tuple_count(3, 7)


def test_rank_formula_examples(d4):
    assert rank_formula_bound(4, 4).count == 393216 == 4 * 2 ** 14 + 6 * 2 ** 15 + 4 * 2 ** 15
    assert rank_formula_bound(4, 2).count == 1024
    assert rank_formula_summands(4, 2) == [512, 512, 0]
    assert rank_formula_bound(4, 4).count >= fwi_count(d4, 4).count


def test_rank_sequence_examples():
    assert rank_sequence_of([(1, 0, 0), (0, 1, 0), (0, 0, 1)]).ranks == (0, 1, 2, 3)
    assert rank_sequence_of([(1, 0, 0), (1, 0, 0)]).ranks == (0, 1, 1)
    assert rank_sequence_of([4, 2, 6]).ranks == (0, 1, 2, 2)
    assert RankSequence((0, 1, 1, 2)).is_valid(3)
    assert not RankSequence((0, 1, 3)).is_valid(3)
    assert not RankSequence((0, 0, 1)).is_valid(3)


def test_per_rank_sequence_bound():
    p, k = 3, 2
    strata = bad_tuples_by_rank_sequence(p, k)
    assert sum(strata.values()) == 448
    for ranks, count in strata.items():
        r = RankSequence(ranks)
        assert r.is_valid(p)
        assert count <= rank_sequence_bound(p, k, r.final_rank)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 31), max_size=8))
def test_rank_sequence_matches_numpy_rank(vectors):
    seq = rank_sequence_of(vectors)
    for i in range(len(vectors) + 1):
        rows = np.array([[(v >> b) & 1 for b in range(5)] for v in vectors[:i]], dtype=np.int64)
        assert seq.ranks[i] == _gf2_rank(rows)


def _gf2_rank(rows):
    if rows.size == 0:
        return 0
    M = rows.copy() % 2
    r = 0
    for c in range(M.shape[1]):
        piv = [i for i in range(r, M.shape[0]) if M[i, c]]
        if not piv:
            continue
        M[[r, piv[0]]] = M[[piv[0], r]]
        for i in range(M.shape[0]):
            if i != r and M[i, c]:
                M[i] ^= M[r]
        r += 1
    return r


def test_spectral_bound():
    G = build_polarity_graph(2, 3)
    pair = pair_params(complement(G), G)
    res = spectral_fwi_bound(pair, 34)
    assert math.isfinite(res.log2_bound)
    expected = 4 * 34 + (34 - pair.w) * math.log2(3 / 16) + 34 * math.log2(117)
    assert res.log2_bound == pytest.approx(expected, abs=1e-9)
    # exact counts on the full 117-vertex digraph, in the bound's own range k >= w
    for k in (34, 40, 60):
        exact = fwi_count(pair.digraph, k)
        assert exact.log2_value <= spectral_fwi_bound(pair, k).log2_bound
        assert spectral_fwi_bound(pair, k).dominates(exact)
    with pytest.raises(CountError):
        spectral_fwi_bound(pair, 10)


def test_spectral_bound_eta_one():
    S = PairSystem.from_parameters(10, 5, 2, 4, 4)
    assert S.eta == 1
    k = math.ceil(S.w)
    assert spectral_fwi_bound(S, k).log2_bound == pytest.approx(4 * k + k * math.log2(50))


def test_count_result_serialisation():
    big = CountResult("formula-rank", {"s": 9}, rank_formula_bound(9, 9).count)
    d = big.as_dict()
    assert isinstance(d["count"], str) and int(d["count"]) == big.count
    b = CountResult("formula-spectral", {}, log2_bound=1234.5678901234567)
    assert b.as_dict()["log2_bound"] == 1234.56789012
    assert b.dominates(CountResult("x", {}, 2 ** 1000))
