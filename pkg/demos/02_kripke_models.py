"""
Many-valued Kripke models
=========================

Build a small model by hand, evaluate formulas at its worlds, and see why
the box does not split over strong conjunction.
"""

from fractions import Fraction as F

from lukmodal import KripkeModel, evaluate, parse
from lukmodal.semantics import dump_model

# w sees two worlds that disagree on which of p, q is only half true
m = KripkeModel.from_table(
    ["w", "v1", "v2"],
    [("w", "v1"), ("w", "v2")],
    {"p": {"w": 0, "v1": 1, "v2": F(1, 2)}, "q": {"w": 0, "v1": F(1, 2), "v2": 1}},
)

for text in ("[]p", "[]q", "[](p * q)", "[]p * []q", "[](p * q) -> ([]p * []q)"):
    print(f"{text:28} at w: {evaluate(m, parse(text), 'w')}")

# a world without successors makes every box true
for text in ("[]p", "<>p", "[]0"):
    print(f"{text:6} at v1: {evaluate(m, parse(text), 'v1')}")

# the same model as the JSON the command line reads
print(dump_model(m, n=2))
