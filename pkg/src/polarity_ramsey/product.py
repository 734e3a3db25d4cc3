"""The pair digraph of a graph pair (F, G) and its pseudorandomness parameters.

Vertices of D are ordered F-edges (a, b) (a loop at v gives the single vertex
(v, v)); there is an arc (a1, b1) -> (a2, b2) iff a1 b2 is an edge of G.  The
out-neighbourhood of (a, b) therefore depends on a alone, which the counting
and search kernels exploit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .digraph import Digraph
from .geometry import LoopyGraph, SpectralCertificate, certify_spectrum, iter_bits

MAX_PAIR_VERTICES = 10 ** 6


class ProductError(ValueError):
    pass


class PairDigraph(Digraph):
    """Digraph on ordered F-edges with arcs probed through G.

    ``heads[i], tails[i]`` is the pair (a, b) of vertex i; vertices are in
    lexicographic order of (a, b).
    """

    def __init__(self, F: LoopyGraph, G: LoopyGraph, heads: np.ndarray, tails: np.ndarray,
                 meta: dict | None = None):
        self.F = F
        self.G = G
        self.heads = np.asarray(heads, dtype=np.int64)
        self.tails = np.asarray(tails, dtype=np.int64)
        self.n = len(self.heads)
        self.meta = dict(meta or {})
        self._keys = self.heads * G.n + self.tails
        self._row_cache: dict[int, int] = {}

    @property
    def labels(self) -> list[tuple[int, int]]:
        return list(zip(self.heads.tolist(), self.tails.tolist()))

    def pair(self, i: int) -> tuple[int, int]:
        return int(self.heads[i]), int(self.tails[i])

    def index_of(self, a: int, b: int) -> int:
        key = a * self.G.n + b
        i = int(np.searchsorted(self._keys, key))
        if i >= self.n or self._keys[i] != key:
            raise ProductError(f"({a}, {b}) is not an F-edge")
        return i

    def has_arc(self, u: int, v: int) -> bool:
        return self.G.has_edge(int(self.heads[u]), int(self.tails[v]))

    def head_row(self, a: int) -> int:
        """Bitset of D-vertices (x, y) with y in N_G(a): the out-row of any (a, b)."""
        row = self._row_cache.get(a)
        if row is None:
            mask = np.unpackbits(self.G.packed[a], count=self.G.n, bitorder="little").astype(bool)
            bits = np.packbits(mask[self.tails], bitorder="little")
            row = int.from_bytes(bits.tobytes(), "little")
            self._row_cache[a] = row
        return row

    def tail_row(self, b: int) -> int:
        """Bitset of D-vertices (x, y) with x in N_G(b): the in-row of any (a, b)."""
        mask = np.unpackbits(self.G.packed[b], count=self.G.n, bitorder="little").astype(bool)
        bits = np.packbits(mask[self.heads], bitorder="little")
        return int.from_bytes(bits.tobytes(), "little")

    @cached_property
    def out_rows(self) -> list[int]:
        return [self.head_row(int(a)) for a in self.heads]

    def loops(self) -> list[int]:
        return [i for i in range(self.n) if self.G.has_edge(int(self.heads[i]), int(self.tails[i]))]

    def arc_matrix(self) -> np.ndarray:
        return self.G.matrix()[np.ix_(self.heads, self.tails)]

    def arcs(self):
        for u in range(self.n):
            for v in iter_bits(self.head_row(int(self.heads[u]))):
                yield u, v

    def arc_count(self) -> int:
        return sum(self.head_row(int(a)).bit_count() for a in self.heads)


def _pairs_from_mask(mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b = np.nonzero(mask)
    return a.astype(np.int64), b.astype(np.int64)


def build_pair_digraph(F: LoopyGraph, G: LoopyGraph) -> PairDigraph:
    if F.n != G.n:
        raise ProductError(f"F and G must share a vertex set ({F.n} vs {G.n} vertices)")
    size = int(F.degrees.sum()) if F.n else 0
    if size > MAX_PAIR_VERTICES:
        raise ProductError(f"pair digraph would have {size} vertices, above the cap {MAX_PAIR_VERTICES}")
    heads, tails = _pairs_from_mask(F.matrix())
    return PairDigraph(F, G, heads, tails, {"construction": "pair"})


# -- the F_2 specialisation -------------------------------------------------------

def f2_stated_vertex_count(s: int) -> int:
    """Closed-form vertex count quoted for the F_2 digraph: 2^{2s-3} - 2^{s-1} - 2^{s-2} + 1."""
    return 2 ** (2 * s - 3) - 2 ** (s - 1) - 2 ** (s - 2) + 1


def f2_defined_vertex_count(s: int) -> int:
    """|{(x, y) : <x, y> = 1}| over nonzero x, y in F_2^{s-1}: 2^{2s-3} - 2^{s-2}."""
    return 2 ** (2 * s - 3) - 2 ** (s - 2)


def _parity_graph(p: int) -> LoopyGraph:
    """Nonzero vectors of F_2^p as integers, x ~ y iff popcount(x & y) is even."""
    xs = np.arange(1, 2 ** p, dtype=np.int64)
    orth = np.bitwise_count(xs[:, None] & xs[None, :]) % 2 == 0
    labels = [tuple((int(x) >> (p - 1 - i)) & 1 for i in range(p)) for x in xs]
    return LoopyGraph.from_matrix(orth, labels, {"t": p - 1, "q": 2, "construction": "parity"})


def build_f2_digraph(s: int) -> PairDigraph:
    """Pairs (x, y) of nonzero vectors in F_2^{s-1} with <x, y> = 1; arc iff <x, y'> = 0."""
    if not 4 <= s <= 14:
        raise ProductError(f"s must lie in [4, 14], got {s}")
    G = _parity_graph(s - 1)
    F = G.complement()
    heads, tails = _pairs_from_mask(F.matrix())
    stated = f2_stated_vertex_count(s)
    meta = {
        "construction": "f2",
        "s": s,
        "stated_vertex_count": stated,
        "defined_vertex_count": len(heads),
        "discrepancy": (
            f"the vertex set defined by <x,y> = 1 has {len(heads)} elements; the quoted closed "
            f"form gives {stated}, which equals the number of ordered adjacent pairs n*d"
        ) if stated != len(heads) else None,
    }
    return PairDigraph(F, G, heads, tails, meta)


# -- pseudorandom pair parameters -------------------------------------------------

def _exact_sqrt(x: Fraction) -> Fraction | None:
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


@dataclass
class PairSystem:
    """A graph pair with the spectral parameters used by the product bound.

    ``eta_squared`` is exact; ``eta_exact`` is the rational eta when eta_squared
    is a perfect square of a rational and None otherwise.
    """

    n: int
    d_F: int
    d_G: int
    lambda2_F: int
    lambda2_G: int
    F: LoopyGraph | None = None
    G: LoopyGraph | None = None
    cert_F: SpectralCertificate | None = None
    cert_G: SpectralCertificate | None = None
    synthetic: bool = False

    @classmethod
    def from_parameters(cls, n: int, d_F: int, d_G: int, lambda2_F: int, lambda2_G: int) -> "PairSystem":
        """A pair known only through (n, d, lambda^2); no graphs attached."""
        return cls(n, d_F, d_G, lambda2_F, lambda2_G, synthetic=True)

    @property
    def eta_terms_squared(self) -> tuple[Fraction, Fraction]:
        first = Fraction(self.lambda2_G ** 2, self.d_G ** 4)
        cross = Fraction(self.lambda2_F * self.lambda2_G, self.d_F ** 2 * self.d_G ** 2)
        return first, cross

    @property
    def eta_squared(self) -> Fraction:
        return max(self.eta_terms_squared)

    @property
    def eta_exact(self) -> Fraction | None:
        return _exact_sqrt(self.eta_squared)

    @property
    def eta(self) -> float:
        exact = self.eta_exact
        return float(exact) if exact is not None else math.sqrt(self.eta_squared)

    @property
    def log2_eta(self) -> float:
        e2 = self.eta_squared
        if e2 == 0:
            return -math.inf
        return 0.5 * (math.log2(e2.numerator) - math.log2(e2.denominator))

    @property
    def w(self) -> float:
        """4 n ln(n) / d(G), natural logarithm."""
        return 4 * self.n * math.log(self.n) / self.d_G

    @property
    def product_size(self) -> int:
        return self.d_F * self.n

    @cached_property
    def digraph(self) -> PairDigraph:
        if self.F is None or self.G is None:
            raise ProductError("synthetic pair has no graphs to build a digraph from")
        return build_pair_digraph(self.F, self.G)

    def as_dict(self) -> dict:
        exact = self.eta_exact
        return {
            "n": self.n, "d_F": self.d_F, "d_G": self.d_G,
            "lambda2_F": self.lambda2_F, "lambda2_G": self.lambda2_G,
            "eta_squared": str(self.eta_squared),
            "eta": str(exact) if exact is not None else None,
            "eta_float": self.eta,
            "w": self.w,
            "log": "natural",
            "synthetic": self.synthetic,
        }


def pair_params(F: LoopyGraph, G: LoopyGraph, cert_F: SpectralCertificate | None = None,
                cert_G: SpectralCertificate | None = None) -> PairSystem:
    if F.n != G.n:
        raise ProductError("F and G must share a vertex set")
    cert_F = cert_F or certify_spectrum(F)
    cert_G = cert_G or certify_spectrum(G)
    cert_F.require()
    cert_G.require()
    return PairSystem(G.n, cert_F.d, cert_G.d, cert_F.lambda_squared, cert_G.lambda_squared,
                      F, G, cert_F, cert_G)


# -- shrinking sequences ----------------------------------------------------------

@dataclass(frozen=True)
class ShrinkingSequence:
    z: tuple[int, ...]
    sizes_B: tuple[int, ...] = field(default=(), compare=False)
    sizes_A: tuple[int, ...] = field(default=(), compare=False)

    @property
    def weight(self) -> int:
        return sum(self.z)

    def __len__(self):
        return len(self.z)


def shrinking_sequence(pair: PairSystem, tup: Sequence[int]) -> ShrinkingSequence:
    """z_i = 1 iff a_i has few G-neighbours in B_i = V minus N_G(a_1) ∪ ... ∪ N_G(a_{i-1})."""
    D = pair.digraph
    G = pair.G
    n, d = pair.n, pair.d_G
    rows = G.rows
    B = (1 << n) - 1
    z, sb, sa = [], [], []
    for v in tup:
        if not 0 <= v < D.n:
            raise ProductError(f"{v} is not a vertex of the pair digraph")
        a = int(D.heads[v])
        size_b = B.bit_count()
        low = [u for u in range(n) if 2 * n * (rows[u] & B).bit_count() <= d * size_b]
        z.append(1 if a in low else 0)
        sb.append(size_b)
        sa.append(len(low))
        B &= ~rows[a]
    return ShrinkingSequence(tuple(z), tuple(sb), tuple(sa))


def random_forward_independent_tuple(D: Digraph, length: int, rng: np.random.Generator) -> list[int]:
    """Sequentially uniform choice among vertices keeping the prefix forward independent."""
    out = D.out_rows
    allowed = (1 << D.n) - 1
    tup: list[int] = []
    for _ in range(length):
        choices = list(iter_bits(allowed))
        if not choices:
            raise ProductError("prefix cannot be extended (digraph has loops everywhere)")
        v = choices[int(rng.integers(len(choices)))]
        tup.append(v)
        allowed &= ~out[v]
    return tup
