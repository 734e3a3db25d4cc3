"""
A certified Ramsey witness
==========================

Orient the product digraph along a random order, keep the forward arcs as
edges, and certify the result: no K_4, plus its exact independence number.
"""

import math

from polarity_ramsey import build_polarity_graph, complement
from polarity_ramsey.pipeline import witness_from_digraph
from polarity_ramsey.product import build_pair_digraph

G = build_polarity_graph(2, 3)
D = build_pair_digraph(complement(G), G)

for seed in range(3):
    w = witness_from_digraph(D, 4, seed=seed)
    bound = w.implied_bound()
    print(f"seed {seed}: {bound['statement']}  (upper bound C({w.alpha + 3}, 3) = "
          f"{math.comb(w.alpha + 3, 3)})")
