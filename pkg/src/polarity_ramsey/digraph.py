"""Minimal directed graph on vertices 0..n-1 with out-neighbourhoods as int bitsets."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .geometry import iter_bits


class Digraph:
    """Out-neighbourhood bitsets; ``out_rows[u]`` has bit v set iff (u, v) is an arc."""

    def __init__(self, n: int, out_rows: Sequence[int], labels: Sequence | None = None):
        if len(out_rows) != n:
            raise ValueError(f"expected {n} out-rows, got {len(out_rows)}")
        self.n = n
        self._out_rows = list(out_rows)
        self.labels = list(labels) if labels is not None else None

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]], labels=None) -> "Digraph":
        rows = [0] * n
        for u, v in arcs:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
        return cls(n, rows, labels)

    @classmethod
    def transitive_tournament(cls, n: int) -> "Digraph":
        return cls.from_arcs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @property
    def out_rows(self) -> list[int]:
        return self._out_rows

    def has_arc(self, u: int, v: int) -> bool:
        return bool((self.out_rows[u] >> v) & 1)

    def arcs(self):
        for u, row in enumerate(self.out_rows):
            for v in iter_bits(row):
                yield u, v

    def arc_count(self) -> int:
        return sum(row.bit_count() for row in self.out_rows)

    def loops(self) -> list[int]:
        return [u for u, row in enumerate(self.out_rows) if (row >> u) & 1]

    @property
    def loopless(self) -> bool:
        return not self.loops()

    def arc_matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.arcs():
            m[u, v] = True
        return m

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, arcs={self.arc_count()})"
