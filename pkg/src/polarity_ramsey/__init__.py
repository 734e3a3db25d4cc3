"""Ramsey lower-bound witnesses from polarity graphs, with exact certification."""
from .bounds import BoundReport, LLLSolution, erdos_szekeres_upper, lower_bound_formula, pc_solve, spencer_lll, thm28_eval
from .counting import CountResult, bad_tuple_count, fwi_count, rank_formula_bound, spectral_fwi_bound
from .digraph import Digraph
from .field import FiniteField, FieldVector, field_create, inner_product
from .freeness import SearchReport, find_clique, find_Hs_witness, find_Ts_witness, independence_number
from .geometry import LoopyGraph, SpectralCertificate, build_polarity_graph, certify_spectrum, complement
from .pipeline import RamseyWitness, multicolor_build, orient, sample_and_prune, witness_from_digraph
from .product import PairDigraph, PairSystem, build_f2_digraph, build_pair_digraph, pair_params

__version__ = "0.1.0"
