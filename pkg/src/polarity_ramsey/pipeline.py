"""Randomised constructions: orientation, vertex sampling, witnesses, multicolourings.

Random streams
--------------
All randomness comes from numpy's PCG64 seeded through ``SeedSequence``.
A run with seed ``S`` derives independent child streams by spawn key:

* ``(0,)``      the orientation permutation pi;
* ``(1, j)``    the vertex sample of attempt j in :func:`sample_and_prune`;
* ``(2, c)``    the map phi_c of colour c in :func:`multicolor_build`.

Runs are deterministic given the seed within one build; nothing is promised
across numpy versions or languages.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .counting import fwi_count
from .digraph import Digraph
from .freeness import (
    DEFAULT_BUDGET_SECONDS,
    MAX_EXACT_INDEPENDENCE,
    SearchReport,
    find_clique,
    find_Ts_witness,
    independence_number,
    independent_sets_of_size,
)
from .geometry import LoopyGraph, iter_bits

ORIENT_STREAM = 0
SAMPLE_STREAM = 1
COLOR_STREAM = 2


class PipelineError(ValueError):
    pass


def stream(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=path)))


# -- orientation ----------------------------------------------------------------

@dataclass
class Orientation:
    graph: LoopyGraph
    pi: np.ndarray  # pi[v] = position of v in the random order
    seed: int
    digraph_certified: bool | None

    def order(self, vertices) -> list[int]:
        return sorted(vertices, key=lambda v: self.pi[v])


def orient(D: Digraph, seed: int, certify: bool = False, s: int | None = None,
           budget_seconds: float | None = DEFAULT_BUDGET_SECONDS) -> Orientation:
    """Keep {u, v} for every arc (u, v) of D going forward in a uniform random order.

    With ``certify=True`` the digraph is first checked T_s-free; otherwise the
    orientation is flagged as unverified (``digraph_certified is None``).
    """
    certified = None
    if certify:
        if s is None:
            raise PipelineError("certify=True needs s")
        report = find_Ts_witness(D, s, budget_seconds)
        if not report.free:
            raise PipelineError(f"digraph is not certified T{s}-free: {report.result}")
        certified = True
    pi = stream(seed, ORIENT_STREAM).permutation(D.n)
    M = D.arc_matrix()
    forward = M & (pi[:, None] < pi[None, :])
    adj = forward | forward.T
    np.fill_diagonal(adj, False)
    return Orientation(LoopyGraph.from_matrix(adj), pi, seed, certified)


# -- sampling and pruning -------------------------------------------------------

def ramsey_upper(s: int, k: int) -> int:
    """C(k+s-2, s-1), the classical upper bound on r(s, k)."""
    return math.comb(k + s - 2, s - 1)


@dataclass
class RamseyWitness:
    graph: LoopyGraph
    s: int
    k: int
    seed: int | None
    vertices: list[int]  # indices into the source graph
    deleted: list[int] = field(default_factory=list)
    clique_report: SearchReport | None = None
    independence_report: SearchReport | None = None
    pi: list[int] | None = None
    attempt: int | None = None
    p: float | None = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def alpha(self) -> int | None:
        rep = self.independence_report
        return rep.value if rep is not None and rep.conclusive else None

    @property
    def certified(self) -> bool:
        return (self.clique_report is not None and self.clique_report.free
                and self.alpha is not None and self.alpha < self.k)

    def implied_bound(self) -> dict | None:
        """r(s, alpha + 1) > n, recorded only for fully certified witnesses."""
        if not self.certified:
            return None
        k = self.alpha + 1
        return {
            "s": self.s, "k": k, "n": self.n,
            "statement": f"r({self.s}, {k}) > {self.n}",
            "upper_bound": str(ramsey_upper(self.s, k)),
            "consistent_with_upper_bound": self.n < ramsey_upper(self.s, k),
        }

    def as_dict(self, timings: bool = True) -> dict:
        return {
            "s": self.s, "k": self.k, "n": self.n, "seed": self.seed,
            "p": self.p, "attempt": self.attempt,
            "vertices": self.vertices,
            "pi": self.pi,
            "deleted": self.deleted,
            "clique_report": self.clique_report.as_dict(timings) if self.clique_report else None,
            "independence_report": self.independence_report.as_dict(timings) if self.independence_report else None,
            "certified": self.certified,
            "implied_bound": self.implied_bound(),
        }


def certify_witness(w: RamseyWitness, budget_seconds: float | None = DEFAULT_BUDGET_SECONDS) -> RamseyWitness:
    if w.graph.n > MAX_EXACT_INDEPENDENCE:
        raise PipelineError(f"witness has {w.graph.n} vertices; exact certification is capped at "
                            f"{MAX_EXACT_INDEPENDENCE}")
    if w.graph.n < w.s:
        w.clique_report = SearchReport(f"K{w.s}-free", "free", None, 0, 0.0, {"s": w.s, "n": w.graph.n})
    else:
        w.clique_report = find_clique(w.graph, w.s, budget_seconds)
    w.independence_report = independence_number(w.graph, budget_seconds)
    return w


def prune_independent_sets(G: LoopyGraph, k: int, alive: int) -> tuple[int, list[int]]:
    """Delete vertices until no independent k-set survives.

    Each round removes the vertex lying in the most alive independent k-sets,
    ties to the lowest index.  Returns (alive bitset, deleted vertices in order).
    """
    deleted = []
    while True:
        hits: dict[int, int] = {}
        for S in independent_sets_of_size(G, k, alive):
            for v in S:
                hits[v] = hits.get(v, 0) + 1
        if not hits:
            return alive, deleted
        v = min(hits, key=lambda u: (-hits[u], u))
        alive &= ~(1 << v)
        deleted.append(v)


def sample_and_prune(graph: LoopyGraph, s: int, k: int, p: float, seed: int, attempts: int = 1,
                     budget_seconds: float | None = DEFAULT_BUDGET_SECONDS) -> RamseyWitness:
    """Keep each vertex with probability p, delete a vertex from every independent k-set.

    Repeats ``attempts`` times and returns the certified witness with the most
    vertices.  ``p = 0`` gives the empty witness, which is vacuously certified.
    """
    if not 0 <= p <= 1:
        raise PipelineError(f"p must lie in [0, 1], got {p}")
    if attempts < 1:
        raise PipelineError("attempts must be >= 1")
    best: RamseyWitness | None = None
    for j in range(attempts):
        rng = stream(seed, SAMPLE_STREAM, j)
        keep = rng.random(graph.n) < p
        alive = 0
        for v in np.flatnonzero(keep):
            alive |= 1 << int(v)
        alive, deleted = prune_independent_sets(graph, k, alive)
        verts = list(iter_bits(alive))
        w = RamseyWitness(graph.induced(verts), s, k, seed, verts, deleted, attempt=j, p=p)
        if best is not None and w.n <= best.n:
            continue
        certify_witness(w, budget_seconds)
        if w.certified:
            best = w
    if best is None or (best.n == 0 and p > 0):
        raise PipelineError(f"no attempt out of {attempts} produced a nonempty certified witness")
    return best


def count_independent_sets(G: LoopyGraph, k: int) -> int:
    """i_k(G), by enumeration."""
    return sum(1 for _ in independent_sets_of_size(G, k))


def choose_p(i_k: int, k: int) -> float | None:
    """min(1, i_k^{-1/k}) computed in log space; None when i_k = 0 (keep everything)."""
    if i_k < 0 or k < 1:
        raise PipelineError("need i_k >= 0 and k >= 1")
    if i_k == 0:
        return None
    return min(1.0, 2.0 ** (-math.log2(i_k) / k))


def witness_from_digraph(D: Digraph, s: int, seed: int, k: int | None = None, p: float | None = None,
                         attempts: int = 1, certify_digraph: bool = True,
                         budget_seconds: float | None = DEFAULT_BUDGET_SECONDS) -> RamseyWitness:
    """Orient D, then sample and prune.

    Without ``k`` the oriented graph's exact independence number a is computed
    and k = a + 1 (so nothing needs deleting).  Without ``p`` it is chosen
    from i_k of the oriented graph.
    """
    o = orient(D, seed, certify=certify_digraph, s=s, budget_seconds=budget_seconds)
    gamma = o.graph
    if k is None:
        rep = independence_number(gamma, budget_seconds)
        if not rep.conclusive:
            raise PipelineError("independence number of the oriented graph is inconclusive")
        k = rep.value + 1
    if p is None:
        chosen = choose_p(count_independent_sets(gamma, k), k)
        p = 1.0 if chosen is None else chosen
    w = sample_and_prune(gamma, s, k, p, seed, attempts, budget_seconds)
    w.pi = [int(x) for x in o.pi]
    return w


# -- multicolour ------------------------------------------------------------------

@dataclass
class MultiColoring:
    n: int
    ell: int
    colors: np.ndarray  # symmetric, colours 1..ell off the diagonal, 0 on it
    maps: list[np.ndarray]
    seed: int

    def class_graph(self, c: int) -> LoopyGraph:
        adj = self.colors == c
        np.fill_diagonal(adj, False)
        return LoopyGraph.from_matrix(adj)

    def as_dict(self) -> dict:
        return {
            "n": self.n, "ell": self.ell, "seed": self.seed,
            "maps": [m.tolist() for m in self.maps],
            "edges": [[i, j, int(self.colors[i, j])] for i in range(self.n) for j in range(i + 1, self.n)],
        }


def multicolor_build(D: Digraph, ell: int, n: int, seed: int) -> MultiColoring:
    """Colour ij (i < j) with the least c whose map sends (i, j) onto an arc; else colour ell."""
    if ell < 2:
        raise PipelineError("ell must be >= 2")
    if not D.loopless:
        raise PipelineError("the digraph has loops; the colouring argument needs a loopless digraph")
    if D.n == 0:
        raise PipelineError("the digraph has no vertices")
    M = D.arc_matrix()
    colors = np.full((n, n), ell, dtype=np.int64)
    maps = []
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    unset = upper.copy()
    for c in range(1, ell):
        phi = stream(seed, COLOR_STREAM, c).integers(0, D.n, size=n)
        maps.append(phi)
        hit = M[phi[:, None], phi[None, :]] & unset
        colors[hit] = c
        unset &= ~hit
    colors = np.where(upper, colors, 0)
    colors = colors + colors.T
    return MultiColoring(n, ell, colors, maps, seed)


def count_cliques(G: LoopyGraph, s: int) -> int:
    """Number of s-cliques (loops ignored)."""
    rows = [row & ~(1 << u) for u, row in enumerate(G.rows)]

    def rec(P: int, need: int) -> int:
        if need == 0:
            return 1
        if need == 1:
            return P.bit_count()
        total = 0
        while P:
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            total += rec(P & rows[v], need - 1)
        return total

    return rec((1 << G.n) - 1, s)


def multicolor_expected(D: Digraph, ell: int, n: int, s: int, fwi: int | None = None) -> Fraction:
    """C(n, s) (fwi_s(D) / N^s)^{ell-1}: expected number of colour-ell copies of K_s."""
    if fwi is None:
        fwi = fwi_count(D, s).count
    return math.comb(n, s) * Fraction(fwi, D.n ** s) ** (ell - 1)


def monochromatic_counts(coloring: MultiColoring, s: int) -> dict[int, int]:
    return {c: count_cliques(coloring.class_graph(c), s) for c in range(1, coloring.ell + 1)}
