"""
Truth values and threshold terms
================================

Exact arithmetic on the chain [0, 1], the finite grids, and the doubling
terms that turn a value into 1 exactly when it reaches a threshold.
"""

from fractions import Fraction as F

from lukmodal import eval_term, grid, implies, neg, odot, oplus, synthesize_tau, synthesize_tau_for_grid
from lukmodal.mvcore import dyadic_surrogate

# the basic operations stay exact
print("1/2 (+) 3/4 =", oplus(F(1, 2), F(3, 4)))
print("1/2 (.) 1/2 =", odot(F(1, 2), F(1, 2)))
print("4/5 -> 1/2 =", implies(F(4, 5), F(1, 2)))
print("~3/4 =", neg(F(3, 4)))

# the grid of step 1/3 is closed under every connective
g = grid(3)
print("grid(3):", [str(x) for x in g])
print("closed:", all(oplus(a, b) in g and odot(a, b) in g for a in g for b in g))

# a threshold term for r = 3/4: square first, then double
t = synthesize_tau(F(3, 4))
print("term for 3/4:", t)
for x in (F(1, 2), F(5, 8), F(11, 16), F(3, 4), F(7, 8)):
    print(f"  tau({x}) = {eval_term(t, x)}")

# off the dyadics we only need the term to work on a grid
r = F(2, 3)
print("surrogate for 2/3 on grid 1/3:", dyadic_surrogate(r, 3))
t = synthesize_tau_for_grid(r, 3)
print([str(eval_term(t, x)) for x in grid(3)])
