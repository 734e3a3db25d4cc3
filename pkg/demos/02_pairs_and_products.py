"""
H_s-free pairs and the product digraph
======================================

The pair (complement of G, G) has no H_{t+2}.  Its product digraph lives on
the edges of the first graph and is T_{t+2}-free; this script checks both
by exhaustive search and prints the pseudorandomness parameters.
"""

from polarity_ramsey import build_polarity_graph, complement
from polarity_ramsey.freeness import find_Hs_witness, find_Ts_witness
from polarity_ramsey.product import (
    build_f2_digraph,
    build_pair_digraph,
    f2_defined_vertex_count,
    f2_stated_vertex_count,
    pair_params,
)

G = build_polarity_graph(2, 3)
F = complement(G)

# H_4-freeness of the pair, and a witness for the smaller H_3
print("H_4:", find_Hs_witness(F, G, 4).result)
rep = find_Hs_witness(F, G, 3)
print("H_3:", rep.result, "witness", rep.witness)

# the product digraph: one vertex per ordered F-edge
D = build_pair_digraph(F, G)
print(f"|V(D)| = {D.n} = d(F) n = {F.degree} * {G.n}, arcs = {D.arc_count()}")
print("T_4:", find_Ts_witness(D, 4).result)

# eta and w drive the counting bound
pair = pair_params(F, G)
print("eta =", pair.eta_exact, " w = 4 n ln n / d(G) =", round(pair.w, 6))

# the F_2 product digraph for s = 4 has 28 vertices; the closed form printed
# beside it counts 21, which is n * d rather than the vertex set
D4 = build_f2_digraph(4)
print("F_2 digraph:", D4.n, "vertices (closed form", f2_stated_vertex_count(4),
      "enumerated", f2_defined_vertex_count(4), ")", "T_4:", find_Ts_witness(D4, 4).result)
