"""
Frames with restricted grids
============================

n+1-frames attach divisor classes to worlds; a world in r_m only takes values
on the grid of step 1/m.  Validity then depends on the classes as well as on
the relation.
"""

import random

from lukmodal import Frame, NFrame, frame_property, frame_valid, is_pi_morphism, nframe_valid, parse, validate_nframe
from lukmodal.frames import model_count
from lukmodal.generators import random_nframe, random_pi_morphism

# u is unrestricted, v is two-valued
F2 = NFrame.from_levels(2, ["u", "v"], {("u", "v")}, {"u": 2, "v": 1})
print("laws hold:", validate_nframe(F2).ok, " models over p:", model_count(F2, {"p"}))

# a world in r_1 may not see an unrestricted one
bad = NFrame(2, ("u", "v"), frozenset({("u", "v")}), {1: frozenset({"u"}), 2: frozenset({"u", "v"})})
for v in validate_nframe(bad).violations:
    print("  violation:", v.clause, v.message)

# p | ~p is not valid, but its box is, since v only takes 0 or 1
print("[](p | ~p):", nframe_valid(F2, parse("[](p | ~p)")), " p | ~p:", nframe_valid(F2, parse("p | ~p")))

# reflexive and transitive frames, checked against the frame conditions
cycle = Frame(("a", "b"), frozenset({("a", "b"), ("b", "a")}))
for text in ("[]p -> p", "[]p -> [][]p"):
    print(text, frame_valid(cycle, parse(text), 2),
          "reflexive:", frame_property(cycle, "reflexive"), "transitive:", frame_property(cycle, "transitive"))

# surjective pi-morphisms carry validity from source to target
rng = random.Random(7)
G = random_nframe(rng, 6, 2)
S, f = random_pi_morphism(rng, G, max_extra=1)
print("map:", f, "ok:", is_pi_morphism(f, S, G).ok)
for text in ("[]p -> p", "[](p | ~p)", "<>p -> []p"):
    phi = parse(text)
    print(f"  {text:12} source {nframe_valid(S, phi)!s:5} target {nframe_valid(G, phi)}")
