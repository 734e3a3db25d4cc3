"""Exact counts of forward independent tuples and the bounds that dominate them.

Two independent routes count the same quantity for the F_2 digraph:

* :func:`fwi_count` works on the digraph itself (bitset DFS, or plain
  enumeration of V(D)^k for small instances);
* :func:`bad_tuple_count` never builds a digraph; it walks sequences of
  vectors a_1, a_2, ... in F_2^p and counts the b_i by linear algebra.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .digraph import Digraph

DEFAULT_NODE_BUDGET = 5_000_000
ENUMERATION_LIMIT = 10 ** 9


class CountError(ValueError):
    pass


class BudgetExceeded(CountError):
    """The search needed more nodes than allowed; no count is reported."""


@dataclass
class CountResult:
    method: str
    params: dict = field(default_factory=dict)
    count: int | None = None
    log2_bound: float | None = None
    nodes: int = 0

    @property
    def log2_value(self) -> float:
        if self.count is not None:
            return math.log2(self.count) if self.count > 0 else -math.inf
        return self.log2_bound

    def dominates(self, other: "CountResult") -> bool:
        """True when this bound is at least the other's exact count (log2 slack 1e-9)."""
        if self.count is not None and other.count is not None:
            return self.count >= other.count
        return other.log2_value <= self.log2_value + 1e-9

    def as_dict(self) -> dict:
        out = {"method": self.method, "params": self.params}
        if self.count is not None:
            out["count"] = str(self.count)
        if self.log2_bound is not None:
            out["log2_bound"] = float(f"{self.log2_bound:.12g}")
        return out


# -- forward independent tuples ---------------------------------------------------

def fwi_count(D: Digraph, k: int, method: str = "dfs", node_budget: int = DEFAULT_NODE_BUDGET) -> CountResult:
    """Number of (v_1..v_k) in V(D)^k with no arc (v_i, v_j), i < j.  Repeats allowed.

    ``method="dfs"`` memoises on the set of still-allowed vertices and groups
    vertices with identical out-rows.  ``method="enumerate"`` walks V(D)^k
    directly with an arc matrix.
    """
    if k < 0:
        raise CountError("k must be nonnegative")
    params = {"k": k, "n": D.n}
    if method == "enumerate":
        if D.n ** k > ENUMERATION_LIMIT:
            raise BudgetExceeded(f"{D.n}^{k} tuples exceeds the enumeration limit")
        return CountResult("oracle-enumerate", params, _fwi_enumerate(D, k), nodes=D.n ** k)
    if method != "dfs":
        raise CountError(f"unknown method {method!r}")

    # vertices sharing an out-row are interchangeable as the next tuple entry
    members: dict[int, int] = {}
    for v, row in enumerate(D.out_rows):
        members[row] = members.get(row, 0) | (1 << v)
    groups = list(members.items())
    nodes = 0

    @lru_cache(maxsize=None)
    def count(allowed: int, r: int) -> int:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"fwi DFS exceeded the node budget {node_budget}")
        if r == 1:
            return allowed.bit_count()
        total = 0
        for row, mask in groups:
            mult = (allowed & mask).bit_count()
            if mult:
                total += mult * count(allowed & ~row, r - 1)
        return total

    total = 1 if k == 0 else count((1 << D.n) - 1, k)
    return CountResult("oracle-dfs", params, total, nodes=nodes)


def _fwi_enumerate(D: Digraph, k: int) -> int:
    if k == 0:
        return 1
    M = D.arc_matrix()
    n = D.n
    # ok[t] marks prefixes (as flattened index tuples) that are forward independent
    ok = np.ones(n, dtype=bool)
    prefix = np.arange(n, dtype=np.int64)[:, None]
    for _ in range(1, k):
        m = prefix.shape[0]
        cand = np.repeat(prefix, n, axis=0)
        last = np.tile(np.arange(n, dtype=np.int64), m)
        good = np.repeat(ok, n)
        for j in range(cand.shape[1]):
            good &= ~M[cand[:, j], last]
        prefix = np.concatenate([cand, last[:, None]], axis=1)[good]
        ok = np.ones(prefix.shape[0], dtype=bool)
    return int(prefix.shape[0])


# -- bad 2k-tuples over F_2^p -----------------------------------------------------

def _insert(basis: tuple[int, ...], v: int) -> tuple[int, ...]:
    """Insert v into a reduced echelon basis (ints, pivot = top bit)."""
    for b in basis:
        if v ^ b < v:
            v ^= b
    if not v:
        return basis
    top = v.bit_length() - 1
    new = [b ^ v if (b >> top) & 1 else b for b in basis]
    new.append(v)
    return tuple(sorted(new, reverse=True))


def bad_tuple_count(p: int, k: int, method: str = "dfs",
                    node_budget: int = DEFAULT_NODE_BUDGET) -> CountResult:
    """Number of (a_1, b_1, ..., a_k, b_k) in (F_2^p)^{2k} with <a_j, b_i> = 1 for all j <= i.

    The system <a_j, b> = 1 (j <= i) is consistent iff the augmented vector
    (0, ..., 0 | 1) is outside span{(a_j | 1)}; then it has 2^{p - rank} solutions.

    ``method="dfs"`` enumerates a-sequences, memoising on the echelon basis of
    the augmented span.  ``method="rank-recursion"`` uses that the number of
    completions depends only on the rank r of that span: 2^{r-1} choices of a
    keep the rank, 2^p - 2^r raise it, the rest are inconsistent.
    """
    if p < 1 or k < 0:
        raise CountError("need p >= 1 and k >= 0")
    if p > 8 or k > 6:
        raise CountError("bad_tuple_count is limited to p <= 8, k <= 6")
    if method == "rank-recursion":
        return CountResult("oracle-rank-recursion", {"p": p, "k": k}, _bad_tuples_by_rank(p, k))
    if method != "dfs":
        raise CountError(f"unknown method {method!r}")
    flag = 1  # augmented coordinate stored in bit 0; a occupies bits 1..p
    nodes = 0

    @lru_cache(maxsize=None)
    def count(basis: tuple[int, ...], remaining: int) -> int:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"bad-tuple DFS exceeded the node budget {node_budget}")
        if remaining == 0:
            return 1
        total = 0
        for a in range(1, 2 ** p):
            new = _insert(basis, (a << 1) | flag)
            if flag in new:  # (0 | 1) in the span: inconsistent
                continue
            rank = len(new)
            total += 2 ** (p - rank) * count(new, remaining - 1)
        return total

    return CountResult("oracle-bad-tuples", {"p": p, "k": k}, count((), k), nodes=nodes)


def _bad_tuples_by_rank(p: int, k: int) -> int:
    @lru_cache(maxsize=None)
    def completions(r: int, remaining: int) -> int:
        if remaining == 0:
            return 1
        if r == 0:
            return (2 ** p - 1) * 2 ** (p - 1) * completions(1, remaining - 1)
        same = 2 ** (r - 1) * 2 ** (p - r) * completions(r, remaining - 1)
        grow = 0
        if r < p:
            grow = (2 ** p - 2 ** r) * 2 ** (p - r - 1) * completions(r + 1, remaining - 1)
        return same + grow

    return completions(0, k)


@dataclass(frozen=True)
class RankSequence:
    ranks: tuple[int, ...]

    def is_valid(self, p: int) -> bool:
        r = self.ranks
        if len(r) < 2 or r[0] != 0 or r[1] != 1 or r[-1] > p:
            return False
        return all(r[i] - r[i - 1] in (0, 1) for i in range(1, len(r)))

    @property
    def final_rank(self) -> int:
        return self.ranks[-1]


def rank_sequence_of(vectors) -> RankSequence:
    """Prefix dimensions (r_0 = 0, r_i = dim span{a_1..a_i}) over F_2.

    Vectors may be ints (bit patterns) or 0/1 sequences.
    """
    ranks = [0]
    basis: list[int] = []
    for v in vectors:
        if not isinstance(v, (int, np.integer)):
            x = 0
            for bit in v:
                x = (x << 1) | (int(bit) & 1)
            v = x
        v = int(v)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
        ranks.append(len(basis))
    return RankSequence(tuple(ranks))


def bad_tuples_by_rank_sequence(p: int, k: int) -> dict[tuple[int, ...], int]:
    """Plain enumeration of bad 2k-tuples grouped by the rank sequence of the a's.

    Every b_i is enumerated explicitly; intended for tiny (p, k).
    """
    vecs = range(2 ** p)
    out: Counter = Counter()

    def rec(As: list[int], remaining: int):
        if remaining == 0:
            out[rank_sequence_of(As).ranks] += 1
            return
        for a in vecs:
            prefix = As + [a]
            for b in vecs:
                if all((aj & b).bit_count() % 2 == 1 for aj in prefix):
                    rec(prefix, remaining - 1)
    rec([], k)
    return dict(out)


def rank_sequence_bound(p: int, k: int, t: int) -> int:
    """2^{pt + pk - C(t+1, 2)}: bound on bad tuples with a given rank sequence ending at t."""
    return 2 ** (p * t + p * k - t * (t + 1) // 2)


def rank_formula_bound(s: int, k: int) -> CountResult:
    """sum_{t=1}^{s-1} C(k, t) 2^{(s-1)(t+k) - C(t+1, 2)}, exactly."""
    if s < 1 or k < 0:
        raise CountError("need s >= 1 and k >= 0")
    total = sum(math.comb(k, t) * 2 ** ((s - 1) * (t + k) - t * (t + 1) // 2) for t in range(1, s))
    return CountResult("formula-rank", {"s": s, "k": k}, total)


def rank_formula_summands(s: int, k: int) -> list[int]:
    """The individual summands M_t, t = 1..s-1 (diagnostic only)."""
    return [math.comb(k, t) * 2 ** ((s - 1) * (t + k) - t * (t + 1) // 2) for t in range(1, s)]


def spectral_fwi_bound(pair, k: float) -> CountResult:
    """log2 of 16^k eta^{k-w} (d(F) n)^k; requires k >= w."""
    w = pair.w
    if k < w:
        raise CountError(f"the spectral bound holds only for k >= w = {w:.6g}; got k = {k}")
    log2_eta = pair.log2_eta
    eta_term = 0.0 if k == w else (k - w) * log2_eta
    value = 4 * k + eta_term + k * math.log2(pair.product_size)
    return CountResult("formula-spectral", {"k": k, "w": w}, log2_bound=value)
