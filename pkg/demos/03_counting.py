"""
Forward independent tuples
==========================

Count forward independent k-tuples of the F_2 product digraph two ways,
compare them with the bad-tuple count and the rank formula, and look at
how far the spectral bound sits above the exact count on the G(2,3) pair.
"""

from polarity_ramsey import build_polarity_graph, complement
from polarity_ramsey.counting import bad_tuple_count, fwi_count, rank_formula_bound, spectral_fwi_bound
from polarity_ramsey.product import build_f2_digraph, pair_params

D4 = build_f2_digraph(4)
for k in range(1, 6):
    fwi = fwi_count(D4, k).count
    bad = bad_tuple_count(3, k).count
    print(f"k={k}: fwi={fwi} bad tuples={bad} rank formula={rank_formula_bound(4, k).count}")

# the spectral bound holds for k >= w; compare it with the exact count
G = build_polarity_graph(2, 3)
pair = pair_params(complement(G), G)
for k in (34, 40, 60):
    exact = fwi_count(pair.digraph, k)
    bound = spectral_fwi_bound(pair, k)
    print(f"k={k}: log2 fwi = {exact.log2_value:.2f}, spectral bound {bound.log2_bound:.2f}")
