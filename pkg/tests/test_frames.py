import itertools
import json
import random
from fractions import Fraction as F

import pytest

from lukmodal.frames import (
    Frame, FrameBudgetExceeded, NFrame, divisors, enumerate_models, find_frame_countermodel,
    frame_property, frame_valid, is_pi_morphism, is_surjective, load_nframe, load_world_map,
    model_count, nframe_from_dict, nframe_to_dict, nframe_valid, validate_nframe,
)
from lukmodal.generators import random_formula, random_nframe, random_pi_morphism
from lukmodal.semantics import evaluate, true_in_model
from lukmodal.syntax import parse, variables

from oracles import all_frames


def l2_frame(n=2):
    return NFrame.from_levels(n, ["u", "v"], {("u", "v")}, {"u": n, "v": 1})


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]


def test_l2_frame_is_valid():
    F2 = l2_frame()
    assert validate_nframe(F2).ok
    assert F2.classes[1] == {"v"} and F2.classes[2] == {"u", "v"}
    assert validate_nframe(l2_frame(6)).ok


def test_single_irreflexive_point_is_valid():
    assert validate_nframe(NFrame.from_levels(4, ["x"], set(), {"x": 4})).ok


def test_closure_violation():
    F2 = NFrame(2, ("u", "v"), frozenset({("u", "v")}), {1: frozenset({"u"}), 2: frozenset({"u", "v"})})
    report = validate_nframe(F2)
    assert not report.ok
    assert report.clauses() == {"closure"}
    assert report.violations[0].witness == (1, "u", "v")


def test_intersection_and_top_violations():
    bad = NFrame(6, ("a", "b"), frozenset(), {
        1: frozenset(), 2: frozenset({"a"}), 3: frozenset({"a"}), 6: frozenset({"a"}),
    })
    report = validate_nframe(bad)
    assert {"intersection", "top"} <= report.clauses()
    data = json.loads(report.to_json())
    assert {"clause", "message", "witness"} <= set(data[0])


def test_unknown_divisor_and_world():
    bad = NFrame(4, ("a",), frozenset({("a", "z")}), {3: frozenset({"a"}), 4: frozenset({"a", "q"})})
    assert {"divisors", "worlds"} <= validate_nframe(bad).clauses()


def test_omitted_divisors_follow_levels():
    F6 = nframe_from_dict({"n": 6, "worlds": ["a", "b", "c"], "relation": [["a", "b"]],
                           "classes": {"2": ["b"], "3": ["b", "c"]}})
    assert F6.levels() == {"a": 6, "b": 1, "c": 3}
    assert F6.classes[1] == {"b"}
    assert F6.classes[6] == {"a", "b", "c"}
    assert validate_nframe(F6).ok
    assert nframe_from_dict(nframe_to_dict(F6)) == F6


def test_enumerate_counts():
    one_r1 = NFrame.from_levels(2, ["w"], set(), {"w": 1})
    one_r2 = NFrame.from_levels(2, ["w"], set(), {"w": 2})
    assert [m.value("p", "w") for m in enumerate_models(one_r1, {"p"})] == [0, 1]
    assert [m.value("p", "w") for m in enumerate_models(one_r2, {"p"})] == [0, F(1, 2), 1]
    models = list(enumerate_models(l2_frame(), {"p"}))
    assert len(models) == 6 == model_count(l2_frame(), {"p"})
    assert all(m.value("p", "v") in (0, 1) for m in models)


def test_enumerate_order_is_fixed():
    frame = Frame(("b", "a"), frozenset())
    seq = [(m.value("p", "a"), m.value("q", "a"), m.value("p", "b")) for m in enumerate_models(frame, {"q", "p"}, 1)]
    # worlds sorted (a before b), variables sorted, last slot fastest
    assert seq[:3] == [(0, 0, 0), (0, 0, 0), (0, 0, 1)]
    assert len(seq) == 16


def test_enumerate_with_no_variables():
    assert len(list(enumerate_models(Frame(("a",), frozenset()), set(), 3))) == 1


def test_count_matches_product_formula():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.choice([2, 4, 6])
        F_ = random_nframe(rng, n, rng.randint(1, 3))
        names = {"p", "q"} if rng.random() < 0.5 else {"p"}
        expected = 1
        for w in F_.worlds:
            expected *= (F_.level(w) + 1) ** len(names)
        assert model_count(F_, names) == expected
        if expected <= 2000:
            assert sum(1 for _ in enumerate_models(F_, names)) == expected


def test_reflexive_frame_validates_t():
    frame = Frame(("a", "b"), frozenset({("a", "a"), ("b", "b"), ("a", "b")}))
    assert frame_valid(frame, parse("[]p -> p"), 3)


def test_irreflexive_cycle_refutes_t_with_witness():
    frame = Frame(("a", "b"), frozenset({("a", "b"), ("b", "a")}))
    phi = parse("[]p -> p")
    assert not frame_valid(frame, phi, 2)
    witness = find_frame_countermodel(frame, phi, 2)
    assert witness.value < 1
    assert evaluate(witness.model, phi, witness.world) == witness.value
    # first in enumeration order: p(a) = 0 and p(b) = 1/2 gives 1/2 at a
    assert witness.world == "a" and witness.value == F(1, 2)


def test_l1_class_validates_box_or_box_not():
    # successors in r_1, at most one per world
    F_ = NFrame.from_levels(4, ["a", "b", "c"], {("a", "b"), ("b", "c"), ("c", "c")}, {"a": 4, "b": 1, "c": 1})
    assert validate_nframe(F_).ok
    phi = parse("[]p | []~p")
    assert nframe_valid(F_, phi)
    assert not frame_valid(F_.frame, phi, 4)


def test_box_or_box_not_needs_a_single_successor():
    # two Boolean successors with opposite values sink both disjuncts
    F_ = NFrame.from_levels(4, ["a", "b", "c"], {("a", "b"), ("a", "c")}, {"a": 4, "b": 1, "c": 1})
    witness = find_frame_countermodel(F_, parse("[]p | []~p"))
    assert witness.world == "a" and witness.value == 0


def test_n_mismatch_rejected():
    with pytest.raises(ValueError):
        list(enumerate_models(l2_frame(2), {"p"}, 3))
    with pytest.raises(ValueError):
        list(enumerate_models(Frame(("a",), frozenset()), {"p"}))


def test_budget_guard():
    frame = Frame(tuple("abc"), frozenset())
    with pytest.raises(FrameBudgetExceeded):
        frame_valid(frame, parse("p + q + r"), 9, max_models=1000)


POOL = [parse(t) for t in [
    "[]p -> p", "[]p -> [][]p", "[]p | []~p", "<>p -> []p", "p -> []<>p",
    "[](p + p) <-> []p + []p", "[](p * q) -> []p * []q", "[]p * []q -> [](p * q)",
    "<>p & <>~p", "[](p | ~p)",
]]


def test_batch_validity_matches_plain_enumeration():
    for worlds, rel in all_frames(2):
        frame = Frame(worlds, rel)
        for phi in POOL:
            brute = all(true_in_model(m, phi) for m in enumerate_models(frame, variables(phi), 2))
            assert frame_valid(frame, phi, 2) == brute


def test_batch_validity_matches_plain_enumeration_on_nframes():
    rng = random.Random(8)
    for _ in range(30):
        F_ = random_nframe(rng, rng.choice([2, 3, 6]), rng.randint(1, 3))
        for phi in POOL[:6]:
            brute = all(true_in_model(m, phi) for m in enumerate_models(F_, variables(phi)))
            assert nframe_valid(F_, phi) == brute


def test_frame_property_examples():
    full = Frame(("a", "b"), frozenset(itertools.product("ab", repeat=2)))
    assert frame_property(full, "reflexive") and frame_property(full, "transitive")
    one = Frame(("u", "v"), frozenset({("u", "v")}))
    assert frame_property(one, "transitive") and not frame_property(one, "reflexive")
    chain = Frame(("u", "v", "w"), frozenset({("u", "v"), ("v", "w")}))
    assert not frame_property(chain, "transitive")
    with pytest.raises(ValueError):
        frame_property(full, "euclidean")


def test_identity_is_a_pi_morphism():
    rng = random.Random(4)
    for _ in range(20):
        F_ = random_nframe(rng, 6, rng.randint(1, 4))
        assert is_pi_morphism({w: w for w in F_.worlds}, F_, F_).ok


def test_collapse_of_clique_onto_reflexive_point():
    clique = NFrame.from_levels(2, ["a", "b"], set(itertools.product("ab", repeat=2)), {"a": 2, "b": 2})
    point = NFrame.from_levels(2, ["x"], {("x", "x")}, {"x": 2})
    f = {"a": "x", "b": "x"}
    assert is_pi_morphism(f, clique, point).ok
    assert is_surjective(f, point)


def test_class_clause_violation():
    src = NFrame.from_levels(2, ["a"], set(), {"a": 1})
    dst = NFrame.from_levels(2, ["x"], set(), {"x": 2})
    report = is_pi_morphism({"a": "x"}, src, dst)
    assert report.clauses() == {"class"}


def test_forth_back_and_totality_violations():
    src = NFrame.from_levels(2, ["a", "b"], {("a", "b")}, {"a": 2, "b": 2})
    dst = NFrame.from_levels(2, ["x", "y"], {("x", "x")}, {"x": 2, "y": 2})
    report = is_pi_morphism({"a": "x", "b": "y"}, src, dst)
    assert {"forth", "back"} <= report.clauses()
    assert is_pi_morphism({"a": "x"}, src, dst).clauses() == {"totality"}
    other_n = NFrame.from_levels(4, ["x"], set(), {"x": 4})
    assert is_pi_morphism({"a": "x", "b": "x"}, src, other_n).clauses() == {"n"}


def test_generated_pi_morphisms_pass_the_checker():
    rng = random.Random(12)
    for _ in range(100):
        n = rng.choice([2, 4, 6, 12])
        G = random_nframe(rng, n, rng.randint(1, 3))
        F_, f = random_pi_morphism(rng, G, max_extra=2)
        assert validate_nframe(F_).ok
        assert is_pi_morphism(f, F_, G).ok
        assert is_surjective(f, G)


def test_pi_morphic_images_preserve_validity_small():
    rng = random.Random(13)
    for _ in range(25):
        G = random_nframe(rng, rng.choice([2, 6]), rng.randint(1, 2))
        F_, f = random_pi_morphism(rng, G)
        for phi in POOL:
            if nframe_valid(F_, phi):
                assert nframe_valid(G, phi)


def test_file_loaders(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps(nframe_to_dict(l2_frame())))
    assert load_nframe(path) == l2_frame()
    mp = tmp_path / "m.json"
    mp.write_text(json.dumps({"map": {"u": "x"}}))
    assert load_world_map(mp) == {"u": "x"}


def test_random_formula_pool_is_consistent_between_frame_and_nframe_at_top_level():
    # with every world at level n the n+1-frame is just the plain frame
    rng = random.Random(21)
    for _ in range(20):
        n = rng.choice([2, 3])
        k = rng.randint(1, 2)
        worlds = [f"a{i}" for i in range(k)]
        rel = {(u, v) for u in worlds for v in worlds if rng.random() < 0.5}
        top = NFrame.from_levels(n, worlds, rel, {w: n for w in worlds})
        phi = random_formula(rng, 3, ("p",))
        assert nframe_valid(top, phi) == frame_valid(top.frame, phi, n)
