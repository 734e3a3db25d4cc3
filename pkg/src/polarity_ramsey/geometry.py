"""Projective points, polarity graphs G(t, q) and their exact spectral data."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .field import FiniteField, FieldVector

MAX_POLARITY_VERTICES = 50_000
MAX_SPECTRUM_VERTICES = 5_000


class GraphError(ValueError):
    pass


class SpectralError(ValueError):
    pass


def _bitset(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << int(i)
    return out


def iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class LoopyGraph:
    """Undirected graph whose vertices may carry a single loop.

    Adjacency is stored as bit-packed rows (little bit order, so vertex ``j``
    is bit ``j % 8`` of byte ``j // 8``).  A loop adds one to the degree of
    its vertex.  Instances are treated as immutable.
    """

    def __init__(self, packed: np.ndarray, n: int, labels: Sequence | None = None,
                 meta: dict | None = None):
        packed = np.ascontiguousarray(packed, dtype=np.uint8)
        if packed.shape != (n, (n + 7) // 8):
            raise GraphError(f"packed adjacency has shape {packed.shape}, expected ({n}, {(n + 7) // 8})")
        self._packed = packed
        self._packed.flags.writeable = False
        self.n = n
        self.labels = list(labels) if labels is not None else None
        self.meta = dict(meta or {})

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_matrix(cls, matrix, labels=None, meta=None) -> "LoopyGraph":
        m = np.asarray(matrix).astype(bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise GraphError("adjacency matrix must be square")
        if not np.array_equal(m, m.T):
            raise GraphError("adjacency matrix must be symmetric")
        n = m.shape[0]
        return cls(np.packbits(m, axis=1, bitorder="little").reshape(n, (n + 7) // 8), n, labels, meta)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None, meta=None) -> "LoopyGraph":
        m = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            m[u, v] = m[v, u] = True
        return cls.from_matrix(m, labels, meta)

    @classmethod
    def empty(cls, n: int) -> "LoopyGraph":
        return cls(np.zeros((n, (n + 7) // 8), dtype=np.uint8), n)

    @classmethod
    def complete(cls, n: int, loops: bool = False) -> "LoopyGraph":
        m = np.ones((n, n), dtype=bool)
        if not loops:
            np.fill_diagonal(m, False)
        return cls.from_matrix(m)

    @classmethod
    def cycle(cls, n: int) -> "LoopyGraph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    # -- queries ---------------------------------------------------------

    @property
    def packed(self) -> np.ndarray:
        return self._packed

    def matrix(self) -> np.ndarray:
        return np.unpackbits(self._packed, axis=1, count=self.n, bitorder="little").astype(bool)

    @cached_property
    def rows(self) -> list[int]:
        """Row ``u`` as a Python int bitset (bit ``v`` set iff uv is an edge)."""
        return [int.from_bytes(r.tobytes(), "little") for r in self._packed]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._packed[u, v >> 3] >> (v & 7)) & 1)

    def neighbors(self, u: int) -> np.ndarray:
        return np.flatnonzero(np.unpackbits(self._packed[u], count=self.n, bitorder="little"))

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bitwise_count(self._packed).sum(axis=1, dtype=np.int64)

    @cached_property
    def loops(self) -> np.ndarray:
        idx = np.arange(self.n)
        return ((self._packed[idx, idx >> 3] >> (idx & 7)) & 1).astype(bool)

    @property
    def loop_count(self) -> int:
        return int(self.loops.sum())

    @property
    def degree(self) -> int | None:
        """Common degree if the graph is regular, else None."""
        if self.n == 0:
            return 0
        d = self.degrees
        return int(d[0]) if np.all(d == d[0]) else None

    @property
    def edge_count(self) -> int:
        """Number of edges, each loop counted once."""
        return (int(self.degrees.sum()) + self.loop_count) // 2

    def edges(self):
        """Yield (u, v) with u <= v, loops included."""
        for u, row in enumerate(self.rows):
            for v in iter_bits(row >> u):
                yield u, u + v

    def complement(self) -> "LoopyGraph":
        """Flip every pair, loops included."""
        inv = np.invert(self._packed)
        tail = self.n % 8
        if tail:
            inv[:, -1] &= np.uint8((1 << tail) - 1)
        meta = dict(self.meta)
        meta["complemented"] = not meta.get("complemented", False)
        return LoopyGraph(inv, self.n, self.labels, meta)

    def without_loops(self) -> "LoopyGraph":
        m = self.matrix()
        np.fill_diagonal(m, False)
        return LoopyGraph.from_matrix(m, self.labels, self.meta)

    def induced(self, vertices: Sequence[int]) -> "LoopyGraph":
        vs = np.asarray(list(vertices), dtype=np.int64)
        m = self.matrix()[np.ix_(vs, vs)]
        labels = [self.labels[i] for i in vs] if self.labels is not None else None
        return LoopyGraph.from_matrix(m, labels, self.meta)

    def e(self, A: Iterable[int], B: Iterable[int]) -> int:
        """Ordered pairs (a, b) in A x B with ab an edge; a loop at v in A∩B counts once."""
        bmask = _bitset(B)
        rows = self.rows
        return sum((rows[a] & bmask).bit_count() for a in set(int(x) for x in A))

    def __eq__(self, other):
        return (isinstance(other, LoopyGraph) and self.n == other.n
                and np.array_equal(self._packed, other._packed))

    def __hash__(self):
        return hash((self.n, self._packed.tobytes()))

    def __repr__(self):
        return f"LoopyGraph(n={self.n}, edges={self.edge_count}, loops={self.loop_count})"


# -- projective geometry -------------------------------------------------

@dataclass(frozen=True)
class ProjectivePoint:
    vector: FieldVector

    def __post_init__(self):
        coords = self.vector.coords
        nz = next((c for c in coords if c), None)
        if nz is None:
            raise GraphError("the zero vector is not a projective point")
        if nz != 1:
            raise GraphError(f"{coords} is not canonical (first nonzero entry must be 1)")

    @classmethod
    def canonical(cls, vector: FieldVector) -> "ProjectivePoint":
        nz = next((c for c in vector.coords if c), None)
        if nz is None:
            raise GraphError("the zero vector is not a projective point")
        return cls(vector.scale(vector.field.inv(nz)))

    @property
    def coords(self) -> tuple[int, ...]:
        return self.vector.coords


def projective_points(t: int, F: FiniteField) -> np.ndarray:
    """Canonical representatives of PG(t, q) as rows, in lexicographic order."""
    q = F.q
    blocks = []
    for lead in range(t + 1):
        free = t - lead
        count = q ** free
        block = np.zeros((count, t + 1), dtype=np.int64)
        block[:, lead] = 1
        codes = np.arange(count, dtype=np.int64)
        for j in range(free - 1, -1, -1):
            block[:, lead + 1 + j] = codes % q
            codes //= q
        blocks.append(block)
    # leading position 0 sorts last lexicographically; reverse to get ascending order
    return np.concatenate(blocks[::-1], axis=0)


def gram_zero_mask(X: np.ndarray, Y: np.ndarray, F: FiniteField, chunk: int = 1 << 22) -> np.ndarray:
    """Boolean matrix M[i, j] = <X_i, Y_j> == 0 over F."""
    nx, ny = X.shape[0], Y.shape[0]
    out = np.empty((nx, ny), dtype=bool)
    step = max(1, chunk // max(ny, 1))
    for lo in range(0, nx, step):
        Xc = X[lo:lo + step]
        if F.m == 1:
            acc = (Xc @ Y.T) % F.p
        else:
            add, mul = F.add_table, F.mul_table
            acc = np.zeros((Xc.shape[0], ny), dtype=np.int64)
            for i in range(X.shape[1]):
                acc = add[acc, mul[Xc[:, i, None], Y[None, :, i]]]
        out[lo:lo + step] = acc == 0
    return out


def polarity_counts(t: int, q: int) -> tuple[int, int, int]:
    """(n, d, a) of G(t, q) from the closed forms."""
    n = (q ** (t + 1) - 1) // (q - 1)
    d = (q ** t - 1) // (q - 1)
    a = (q ** (t - 1) - 1) // (q - 1)
    return n, d, a


def build_polarity_graph(t: int, q: int | FiniteField) -> LoopyGraph:
    """G(t, q): projective points, x ~ y iff <x, y> = 0 (loops where <x, x> = 0)."""
    F = q if isinstance(q, FiniteField) else FiniteField.of_order(q)
    if t < 2:
        raise GraphError(f"t must be >= 2, got {t}")
    n, _, _ = polarity_counts(t, F.q)
    if n > MAX_POLARITY_VERTICES:
        raise GraphError(f"G({t},{F.q}) has {n} vertices, above the cap {MAX_POLARITY_VERTICES}")
    P = projective_points(t, F)
    assert P.shape[0] == n
    adj = gram_zero_mask(P, P, F)
    labels = [tuple(int(c) for c in row) for row in P]
    meta = {"t": t, "q": F.q, "field": F.descriptor()}
    return LoopyGraph.from_matrix(adj, labels, meta)


def complement(G: LoopyGraph) -> LoopyGraph:
    return G.complement()


# -- spectral certificate ------------------------------------------------

@dataclass
class SpectralCertificate:
    """Exact record of A^2 = aJ + (d - a)I; lambda is kept as lambda_squared."""

    n: int
    d: int
    a: int | None
    lambda_squared: int | None
    verified: bool
    reason: str | None = None
    offending_pair: tuple[int, int] | None = None

    @property
    def lam(self) -> float:
        return math.sqrt(self.lambda_squared)

    def require(self) -> "SpectralCertificate":
        if not self.verified:
            raise SpectralError(f"spectral certificate not verified: {self.reason}")
        return self

    def as_dict(self) -> dict:
        return {
            "n": self.n, "d": self.d, "a": self.a,
            "lambda_squared": self.lambda_squared, "verified": self.verified,
            "reason": self.reason,
            "offending_pair": list(self.offending_pair) if self.offending_pair else None,
        }


def common_neighbor_matrix(G: LoopyGraph, chunk_rows: int = 512):
    """Yield (row_offset, block of A^2) with exact integer entries.

    The product runs through float64 BLAS; every entry and partial sum is an
    integer at most n <= 5000, well inside the 2^53 exact range.
    """
    A = G.matrix().astype(np.float64)
    for lo in range(0, G.n, chunk_rows):
        block = A[lo:lo + chunk_rows] @ A
        yield lo, np.rint(block).astype(np.int64)


def certify_spectrum(G: LoopyGraph) -> SpectralCertificate:
    """Check A^2 = aJ + (d-a)I entrywise; raises SpectralError if G is not regular."""
    if G.n > MAX_SPECTRUM_VERTICES:
        raise SpectralError(f"n={G.n} exceeds the certification cap {MAX_SPECTRUM_VERTICES}")
    degs = G.degrees
    if G.n and not np.all(degs == degs[0]):
        bad = int(np.flatnonzero(degs != degs[0])[0])
        raise SpectralError(f"graph is not regular: vertex {bad} has degree {int(degs[bad])}, "
                            f"vertex 0 has degree {int(degs[0])}")
    d = int(degs[0]) if G.n else 0
    if G.n < 2:
        return SpectralCertificate(G.n, d, 0, d, True)
    a = None
    for lo, block in common_neighbor_matrix(G):
        rows = np.arange(lo, lo + block.shape[0])
        diag = block[np.arange(block.shape[0]), rows]
        if np.any(diag != d):
            i = int(np.flatnonzero(diag != d)[0])
            return SpectralCertificate(G.n, d, None, None, False,
                                       f"diagonal entry ({lo + i},{lo + i}) of A^2 is {int(diag[i])}, expected {d}",
                                       (lo + i, lo + i))
        if a is None:
            a = int(block[0, 1])
        off = block != a
        off[np.arange(block.shape[0]), rows] = False
        if off.any():
            i, j = (int(x) for x in np.argwhere(off)[0])
            return SpectralCertificate(G.n, d, None, None, False,
                                       f"vertices {lo + i} and {j} have {int(block[i, j])} common neighbours, "
                                       f"expected {a}", (lo + i, j))
    return SpectralCertificate(G.n, d, a, d - a, True)


# -- expander mixing -----------------------------------------------------

def mixing_discrepancy(G: LoopyGraph, A: Iterable[int], B: Iterable[int]) -> tuple[int, int, int]:
    """Return (e_G(A,B), |A|, |B|)."""
    A, B = set(int(x) for x in A), set(int(x) for x in B)
    return G.e(A, B), len(A), len(B)


def mixing_holds(G: LoopyGraph, cert: SpectralCertificate, A, B) -> bool:
    """|e(A,B) - d|A||B|/n| <= lambda sqrt(|A||B|), checked by squaring in integers."""
    cert.require()
    e, a, b = mixing_discrepancy(G, A, B)
    n, d = cert.n, cert.d
    lhs = (n * e - d * a * b) ** 2
    return lhs <= cert.lambda_squared * n * n * a * b


def mixing_slack(G: LoopyGraph, cert: SpectralCertificate, A, B) -> float:
    """lambda*sqrt(|A||B|) - |e(A,B) - (d/n)|A||B||; nonnegative when the lemma holds."""
    cert.require()
    e, a, b = mixing_discrepancy(G, A, B)
    return math.sqrt(cert.lambda_squared * a * b) - abs(e - cert.d * a * b / cert.n)


def low_degree_set(G: LoopyGraph, d: int, B: Iterable[int]) -> list[int]:
    """Vertices u with |N(u) ∩ B| <= d|B|/(2n)."""
    B = set(int(x) for x in B)
    bmask = _bitset(B)
    n = G.n
    return [u for u, row in enumerate(G.rows) if 2 * n * (row & bmask).bit_count() <= d * len(B)]


def low_degree_product_holds(G: LoopyGraph, cert: SpectralCertificate, B) -> tuple[bool, int, int]:
    """Check |A||B| <= 4 lambda^2 n^2 / d^2 for A = low_degree_set(B).

    Returns (holds, |A|, |B|).
    """
    cert.require()
    B = set(int(x) for x in B)
    A = low_degree_set(G, cert.d, B)
    lhs = len(A) * len(B) * cert.d ** 2
    return lhs <= 4 * cert.lambda_squared * cert.n ** 2, len(A), len(B)
