"""Exhaustive certification searches: cliques, independence number, H_s pairs, T_s.

Every search returns a :class:`SearchReport`.  A report with result ``"free"``
is a certificate that no witness exists; ``"inconclusive"`` means the time
budget ran out and must never be read as freeness.  Witnesses are re-checked
by the ``validate_*`` functions, which probe adjacency one pair at a time and
share no code with the bitset searches.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .digraph import Digraph
from .geometry import LoopyGraph, iter_bits

DEFAULT_BUDGET_SECONDS = 300.0
MAX_EXACT_INDEPENDENCE = 200

FREE = "free"
WITNESS = "witness"
INCONCLUSIVE = "inconclusive"


class SearchError(ValueError):
    pass


class _OutOfTime(Exception):
    pass


@dataclass
class SearchReport:
    property: str
    result: str
    witness: tuple[int, ...] | None = None
    nodes: int = 0
    elapsed: float = 0.0
    params: dict = field(default_factory=dict)
    value: int | None = None

    @property
    def free(self) -> bool:
        return self.result == FREE

    @property
    def found(self) -> bool:
        return self.result == WITNESS

    @property
    def conclusive(self) -> bool:
        return self.result != INCONCLUSIVE

    def as_dict(self, timings: bool = True) -> dict:
        out = {
            "property": self.property,
            "result": self.result,
            "witness": list(self.witness) if self.witness is not None else None,
            "nodes": self.nodes,
            "params": self.params,
            "method": "search",
        }
        if self.value is not None:
            out["value"] = self.value
        if timings:
            out["elapsed"] = self.elapsed
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "SearchReport":
        w = d.get("witness")
        return cls(d["property"], d["result"], tuple(w) if w is not None else None,
                   d.get("nodes", 0), d.get("elapsed", 0.0), d.get("params", {}), d.get("value"))


class _Clock:
    def __init__(self, budget: float | None):
        self.start = time.perf_counter()
        self.deadline = None if budget is None else self.start + budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.deadline is not None and not self.nodes & 1023 and time.perf_counter() > self.deadline:
            raise _OutOfTime

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start


# -- independent re-validation ----------------------------------------------

def validate_clique(G: LoopyGraph, vertices: Sequence[int]) -> bool:
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        return False
    return all(G.has_edge(u, v) for u, v in combinations(vs, 2))


def validate_independent_set(G: LoopyGraph, vertices: Sequence[int]) -> bool:
    """No edge between distinct members; loops are ignored."""
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        return False
    return not any(G.has_edge(u, v) for u, v in combinations(vs, 2))


def validate_hs_witness(F: LoopyGraph, G: LoopyGraph, tup: Sequence[int]) -> bool:
    """tup = (a_1, b_1, ..., a_s, b_s): a_i b_i in E(F), a_i b_j in E(G) for i < j."""
    if len(tup) % 2:
        return False
    a, b = tup[0::2], tup[1::2]
    s = len(a)
    if not all(F.has_edge(a[i], b[i]) for i in range(s)):
        return False
    return all(G.has_edge(a[i], b[j]) for i in range(s) for j in range(i + 1, s))


def validate_ts_witness(D, vertices: Sequence[int]) -> bool:
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        return False
    return all(D.has_arc(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs)))


# -- cliques ------------------------------------------------------------------

def _degree_order(rows: Sequence[int]) -> list[int]:
    return sorted(range(len(rows)), key=lambda v: (-rows[v].bit_count(), v))


def _relabel(rows: Sequence[int], order: Sequence[int]) -> list[int]:
    """Rows re-indexed so that new vertex i is old vertex order[i]."""
    pos = {old: new for new, old in enumerate(order)}
    out = []
    for old in order:
        r, x = 0, rows[old]
        for v in iter_bits(x):
            r |= 1 << pos[v]
        out.append(r)
    return out


def _loopless_rows(G: LoopyGraph) -> list[int]:
    return [row & ~(1 << u) for u, row in enumerate(G.rows)]


def _color_sort(P: int, adj: Sequence[int]) -> tuple[list[int], list[int]]:
    """Greedy colouring of P; returns vertices and their colours, colours non-decreasing."""
    order, colors = [], []
    U, k = P, 0
    while U:
        k += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~adj[v] & ~low
            U &= ~low
            order.append(v)
            colors.append(k)
    return order, colors


def _max_clique_rows(adj: Sequence[int], clock: _Clock, target: int | None = None) -> list[int]:
    """Maximum clique of a loopless bitset graph (or any clique of size ``target``)."""
    best: list[int] = []
    goal = target

    def expand(R: list[int], P: int):
        nonlocal best
        clock.tick()
        order, colors = _color_sort(P, adj)
        for idx in range(len(order) - 1, -1, -1):
            if len(R) + colors[idx] <= len(best):
                return
            if goal is not None and len(R) + colors[idx] < goal:
                return
            v = order[idx]
            R.append(v)
            newP = P & adj[v]
            if newP:
                expand(R, newP)
            elif len(R) > len(best):
                best = list(R)
            if goal is not None and len(best) >= goal:
                return
            R.pop()
            P &= ~(1 << v)

    n = len(adj)
    if n:
        expand([], (1 << n) - 1)
    return best


def find_clique(G: LoopyGraph, s: int, budget_seconds: float | None = DEFAULT_BUDGET_SECONDS) -> SearchReport:
    """Search for s distinct pairwise adjacent vertices (loops ignored)."""
    if s < 2:
        raise SearchError(f"s must be >= 2, got {s}")
    clock = _Clock(budget_seconds)
    rows = _loopless_rows(G)
    order = _degree_order(rows)
    adj = _relabel(rows, order)
    params = {"s": s, "n": G.n}
    try:
        found = _max_clique_rows(adj, clock, target=s)
    except _OutOfTime:
        return SearchReport(f"K{s}-free", INCONCLUSIVE, None, clock.nodes, clock.elapsed, params)
    if len(found) >= s:
        witness = tuple(sorted(order[v] for v in found[:s]))
        if not validate_clique(G, witness):
            raise AssertionError(f"clique search returned an invalid witness {witness}")
        return SearchReport(f"K{s}-free", WITNESS, witness, clock.nodes, clock.elapsed, params)
    return SearchReport(f"K{s}-free", FREE, None, clock.nodes, clock.elapsed, params)


def max_clique(G: LoopyGraph, budget_seconds: float | None = DEFAULT_BUDGET_SECONDS) -> SearchReport:
    clock = _Clock(budget_seconds)
    rows = _loopless_rows(G)
    order = _degree_order(rows)
    adj = _relabel(rows, order)
    try:
        found = _max_clique_rows(adj, clock)
    except _OutOfTime:
        return SearchReport("clique-number", INCONCLUSIVE, None, clock.nodes, clock.elapsed, {"n": G.n})
    witness = tuple(sorted(order[v] for v in found))
    if G.n and not validate_clique(G, witness):
        raise AssertionError("max clique search returned an invalid witness")
    return SearchReport("clique-number", FREE, witness, clock.nodes, clock.elapsed,
                        {"n": G.n}, value=len(witness))


def _independence_rows(G: LoopyGraph) -> list[int]:
    full = (1 << G.n) - 1
    return [~row & full & ~(1 << u) for u, row in enumerate(G.rows)]


def independence_number(G: LoopyGraph, budget_seconds: float | None = DEFAULT_BUDGET_SECONDS) -> SearchReport:
    """Exact alpha(G) with a witness; loops do not exclude a vertex.

    The report's ``value`` holds alpha and ``witness`` a maximum independent
    set.  Result is ``"free"`` (exact) or ``"inconclusive"``.
    """
    if G.n > MAX_EXACT_INDEPENDENCE:
        raise SearchError(f"exact independence number is capped at n={MAX_EXACT_INDEPENDENCE}, got {G.n}")
    clock = _Clock(budget_seconds)
    rows = _independence_rows(G)
    order = _degree_order(rows)
    adj = _relabel(rows, order)
    try:
        found = _max_clique_rows(adj, clock)
    except _OutOfTime:
        return SearchReport("independence-number", INCONCLUSIVE, None, clock.nodes, clock.elapsed, {"n": G.n})
    witness = tuple(sorted(order[v] for v in found))
    if not validate_independent_set(G, witness):
        raise AssertionError("independence search returned an invalid witness")
    return SearchReport("independence-number", FREE, witness, clock.nodes, clock.elapsed,
                        {"n": G.n}, value=len(witness))


def independent_sets_of_size(G: LoopyGraph, k: int, alive: int | None = None):
    """Yield every independent k-set (sorted tuples) inside the ``alive`` bitset."""
    rows = _independence_rows(G)
    if alive is None:
        alive = (1 << G.n) - 1

    def rec(chosen: list[int], P: int):
        need = k - len(chosen)
        if need == 0:
            yield tuple(chosen)
            return
        while P and P.bit_count() >= need:
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            chosen.append(v)
            yield from rec(chosen, P & rows[v])
            chosen.pop()

    if k <= 0:
        yield ()
        return
    yield from rec([], alive)


# -- H_s pairs --------------------------------------------------------------------

def find_Hs_witness(F: LoopyGraph, G: LoopyGraph, s: int,
                    budget_seconds: float | None = DEFAULT_BUDGET_SECONDS) -> SearchReport:
    """Search for (a_1, b_1, ..., a_s, b_s) with a_i b_i in E(F) and a_i b_j in E(G), i < j.

    Vertices may repeat.  Since b_i is only constrained by a_1..a_i, the
    search runs over the a's carrying C = common G-neighbourhood of the a's
    chosen so far; any b_i in N_F(a_i) ∩ C completes step i.  Dead states
    (C, remaining) are memoised.
    """
    if F.n != G.n:
        raise SearchError(f"F and G must share a vertex set ({F.n} vs {G.n} vertices)")
    if s < 1:
        raise SearchError(f"s must be >= 1, got {s}")
    n = G.n
    clock = _Clock(budget_seconds)
    fr, gr = F.rows, G.rows
    order = _degree_order(gr)
    dead: set[tuple[int, int]] = set()
    params = {"s": s, "n": n}

    def rec(C: int, remaining: int, chosen: list[tuple[int, int]]) -> bool:
        clock.tick()
        if remaining == 0:
            return True
        if (C, remaining) in dead:
            return False
        for a in order:
            hit = fr[a] & C
            if not hit:
                continue
            b = (hit & -hit).bit_length() - 1
            chosen.append((a, b))
            if rec(C & gr[a], remaining - 1, chosen):
                return True
            chosen.pop()
        dead.add((C, remaining))
        return False

    chosen: list[tuple[int, int]] = []
    try:
        ok = n > 0 and rec((1 << n) - 1, s, chosen)
    except _OutOfTime:
        return SearchReport(f"H{s}-free", INCONCLUSIVE, None, clock.nodes, clock.elapsed, params)
    if ok:
        witness = tuple(x for pair in chosen for x in pair)
        if not validate_hs_witness(F, G, witness):
            raise AssertionError(f"H_s search returned an invalid witness {witness}")
        return SearchReport(f"H{s}-free", WITNESS, witness, clock.nodes, clock.elapsed, params)
    return SearchReport(f"H{s}-free", FREE, None, clock.nodes, clock.elapsed, params)


# -- transitive tournaments -------------------------------------------------------

def find_Ts_witness(D: Digraph, s: int, budget_seconds: float | None = DEFAULT_BUDGET_SECONDS) -> SearchReport:
    """Search for distinct v_1..v_s with (v_i, v_j) an arc for every i < j."""
    if s < 2:
        raise SearchError(f"s must be >= 2, got {s}")
    clock = _Clock(budget_seconds)
    out = D.out_rows
    n = D.n
    order = _degree_order(out)
    dead: set[tuple[int, int]] = set()
    params = {"s": s, "n": n}

    def rec(cand: int, remaining: int, chosen: list[int]) -> bool:
        clock.tick()
        if remaining == 0:
            return True
        if cand.bit_count() < remaining or (cand, remaining) in dead:
            return False
        for v in order:
            if not (cand >> v) & 1:
                continue
            chosen.append(v)
            nxt = cand & out[v]
            for u in chosen:
                nxt &= ~(1 << u)
            if rec(nxt, remaining - 1, chosen):
                return True
            chosen.pop()
        dead.add((cand, remaining))
        return False

    chosen: list[int] = []
    try:
        ok = rec((1 << n) - 1, s, chosen)
    except _OutOfTime:
        return SearchReport(f"T{s}-free", INCONCLUSIVE, None, clock.nodes, clock.elapsed, params)
    if ok:
        witness = tuple(chosen)
        if not validate_ts_witness(D, witness):
            raise AssertionError(f"T_s search returned an invalid witness {witness}")
        return SearchReport(f"T{s}-free", WITNESS, witness, clock.nodes, clock.elapsed, params)
    return SearchReport(f"T{s}-free", FREE, None, clock.nodes, clock.elapsed, params)
