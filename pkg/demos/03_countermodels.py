"""
Bounded counter-model search
============================

Search every small model for one that falsifies a formula.  A clean search
only says nothing was found up to the bound.
"""

from lukmodal import SearchBudget, certify_theorem_list, find_countermodel, parse
from lukmodal.search import NON_THEOREM, check_box_tau_commutation

budget = SearchBudget(n=2, max_worlds=3)

k = find_countermodel(parse("[](p -> q) -> ([]p -> []q)"), budget)
print(k.verdict.value, k.statistics.models_examined, "models")

report = find_countermodel(parse(NON_THEOREM[1]), budget)
w = report.witness
print(report.verdict.value, "after", report.statistics.models_examined, "models")
print("fails at", w.world, "with value", w.value)
print("relation:", sorted(w.model.relation))

# premises restrict the search to models where they hold at every world;
# p everywhere gives []p, but a dead end still falsifies <>p
prem = SearchBudget(n=2, max_worlds=2, premises=(parse("p"),))
for text in ("[]p", "<>p"):
    print(f"p |- {text}:", find_countermodel(parse(text), prem).verdict.value)

# box commutes with the doubling terms
print("box/tau 3/4:", check_box_tau_commutation("3/4", 4, 2).verdict.value)

for row in certify_theorem_list(n=1, max_worlds=2):
    print(f"  {row.label:18} {row.verdict.value}")
