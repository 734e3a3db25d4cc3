"""
Closed-form bounds
==================

Evaluate the lower-bound formulas next to the Erdos-Szekeres upper bound,
solve for p_C, and balance the two local lemma bounds near the diagonal.
"""

import math

from polarity_ramsey.bounds import erdos_szekeres_upper, lower_bound_formula, pc_solve, spencer_lll

s = 10
for k in (10, 15, 20, 40):
    upper = erdos_szekeres_upper(s, k).log2_value
    close = lower_bound_formula("thm-close", s=s, a=k - s).log2_value
    general = lower_bound_formula("thm-general", s=s, k=k, delta=0.1).log2_value
    print(f"r({s},{k}): log2 lower {max(close, general):.2f} <= log2 upper {upper:.2f}")

for C in (1.5, 2, 10):
    print(f"p_C for C={C}: {pc_solve(C):.12f}")
print("C = 2 against (3 - sqrt 5)/2:", pc_solve(2), (3 - math.sqrt(5)) / 2)

for a in (0, 5, 20):
    sol = spencer_lll(1000, a)
    print(f"a={a}: delta={sol.delta:.6g} log2 n-bound={sol.log2_n_bound:.4f}")
