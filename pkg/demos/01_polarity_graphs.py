"""
Polarity graphs and their spectrum
==================================

Build G(t, q) over PG(t, q), look at its loops, and certify the
A^2 = aJ + (d - a)I identity that fixes every nontrivial eigenvalue.
"""

import numpy as np

from polarity_ramsey import build_polarity_graph, certify_spectrum
from polarity_ramsey.geometry import mixing_holds, polarity_counts

# G(2, 3): points of the projective plane over GF(3), joined when orthogonal
G = build_polarity_graph(2, 3)
print(G)
print("n, d, a from the closed forms:", polarity_counts(2, 3))

# self-orthogonal points carry a loop; over GF(3) they form a conic of q + 1 points
print("loops at", [G.labels[v] for v in np.flatnonzero(G.loops)])

# every pair of distinct points has exactly a common neighbours
cert = certify_spectrum(G)
print("certificate:", cert.as_dict())
print("lambda =", round(cert.lam, 6))

# the mixing inequality then holds for any pair of vertex sets
rng = np.random.default_rng(0)
A = np.flatnonzero(rng.random(G.n) < 0.5)
B = np.flatnonzero(rng.random(G.n) < 0.5)
print("e(A, B) =", G.e(A, B), "with |A|, |B| =", len(A), len(B), "->", mixing_holds(G, cert, A, B))

# larger fields work the same way
for t, q in [(2, 4), (3, 2), (2, 7)]:
    H = build_polarity_graph(t, q)
    print(f"G({t},{q}): n={H.n} d={H.degree} loops={H.loop_count} verified={certify_spectrum(H).verified}")
