import json
import random
from fractions import Fraction as F

import pytest

from lukmodal.generators import POSITIVE_OPS, random_formula, random_model
from lukmodal.mvcore import grid
from lukmodal.semantics import (
    KripkeModel, ModelError, SemanticError, dump_model, evaluate, is_model_of,
    is_n_valued, load_model, model_from_dict, model_to_dict, satisfies, true_in_model,
)
from lukmodal.syntax import K, MVN_BASE, Const, core_axioms, instantiate_axiom, normalize, parse

from oracles import classical_eval


@pytest.fixture
def odot_countermodel():
    return KripkeModel.from_table(
        ["w", "v1", "v2"],
        [("w", "v1"), ("w", "v2")],
        {
            "p": {"w": 0, "v1": 1, "v2": F(1, 2)},
            "q": {"w": 0, "v1": F(1, 2), "v2": 1},
        },
    )


def test_box_over_no_successors_is_one():
    m = KripkeModel.from_table(["w"], [], {"p": {"w": 0}})
    assert evaluate(m, parse("[]p"), "w") == 1
    assert evaluate(m, parse("<>p"), "w") == 0


def test_odot_split_counter_model(odot_countermodel):
    m = odot_countermodel
    # p*q is 1/2 at both successors, so [](p*q) = 1/2; []p = []q = 1/2 and
    # 1/2 * 1/2 = 0; finally 1/2 -> 0 = 1/2
    assert evaluate(m, parse("[](p * q)"), "w") == F(1, 2)
    assert evaluate(m, parse("[]p"), "w") == F(1, 2)
    assert evaluate(m, parse("[]p * []q"), "w") == 0
    phi = parse("[](p*q) -> ([]p * []q)")
    assert evaluate(m, phi, "w") == F(1, 2)
    assert evaluate(m, normalize(phi), "w") == F(1, 2)
    assert not satisfies(m, "w", phi)


def test_two_valued_models_are_classical():
    rng = random.Random(17)
    for _ in range(300):
        m = random_model(rng, 1, rng.randint(1, 4))
        phi = random_formula(rng, 6)
        truth = {key: x == 1 for key, x in m.valuation.items()}
        for w in m.worlds:
            assert evaluate(m, phi, w) == (1 if classical_eval(m.worlds, m.relation, truth, phi, w) else 0)


def test_k_axiom_holds_in_random_models():
    rng = random.Random(1)
    k = instantiate_axiom(K, {"p": parse("p"), "q": parse("q")})
    for _ in range(50):
        m = random_model(rng, 2, 3)
        assert all(satisfies(m, w, k) for w in m.worlds)


def test_constant_one_is_true(odot_countermodel):
    assert true_in_model(odot_countermodel, Const(1))


def test_is_model_of():
    m = KripkeModel.from_table(["a", "b"], [("a", "b")], {"p": {"a": 1, "b": 1}})
    assert is_model_of(m, [])
    assert is_model_of(m, [parse("p")])
    # irreflexive world a: []p = 1 there while p = 1/2
    m2 = KripkeModel.from_table(["a", "b"], [("a", "b")], {"p": {"a": F(1, 2), "b": 1}})
    assert evaluate(m2, parse("[]p"), "a") == 1
    assert not is_model_of(m2, [parse("[]p -> p")])


def test_is_n_valued():
    boolean = KripkeModel.from_table(["a"], [], {"p": {"a": 1}, "q": {"a": 0}})
    half = KripkeModel.from_table(["a"], [], {"p": {"a": F(1, 2)}})
    assert is_n_valued(boolean, 1)
    assert not is_n_valued(half, 1)
    assert is_n_valued(half, 4)  # 1/2 = 2/4
    assert not is_n_valued(half, 3)


@pytest.mark.parametrize("n", [2, 3])
def test_grid_closure_of_evaluation(n):
    rng = random.Random(n)
    g = set(grid(n))
    for _ in range(150):
        m = random_model(rng, n, rng.randint(1, 3))
        phi = random_formula(rng, 5)
        assert all(evaluate(m, phi, w) in g for w in m.worlds)


def test_sugar_evaluates_like_its_expansion():
    rng = random.Random(23)
    for _ in range(300):
        m = random_model(rng, rng.choice([2, 3, 5]), rng.randint(1, 3))
        phi = random_formula(rng, 4)
        expanded = normalize(phi)
        assert all(evaluate(m, phi, w) == evaluate(m, expanded, w) for w in m.worlds)


def test_positive_formulas_are_monotone_in_the_valuation():
    rng = random.Random(29)
    for _ in range(200):
        n = 4
        m = random_model(rng, n, rng.randint(1, 3))
        phi = random_formula(rng, 4, ops=POSITIVE_OPS, constants=False)
        (var, w), x = rng.choice(sorted(m.valuation.items()))
        if x == 1:
            continue
        raised = m.with_value(var, w, x + F(1, n))
        assert all(evaluate(m, phi, u) <= evaluate(raised, phi, u) for u in m.worlds)


def test_axioms_and_box_and_distribution_hold_in_sampled_models():
    rng = random.Random(31)
    conj = parse("[](p & q) <-> ([]p & []q)")
    for n in (1, 2, 3, 4):
        formulas = [instantiate_axiom(a) for a in core_axioms(3)] + [conj, instantiate_axiom(MVN_BASE(n))]
        for _ in range(20):
            m = random_model(rng, n, rng.randint(1, 3), names=("p", "q", "r"))
            for phi in formulas:
                assert true_in_model(m, phi), (n, phi)


def test_mvn_base_is_sound_exactly_on_divisor_grids():
    for n in range(1, 9):
        base = instantiate_axiom(MVN_BASE(n))
        for m in range(1, 13):
            holds = all(
                evaluate(KripkeModel.from_table(["a"], [], {"p": {"a": x}}), base, "a") == 1
                for x in grid(m)
            )
            assert holds == (n % m == 0), (n, m)


def test_evaluation_errors(odot_countermodel):
    with pytest.raises(SemanticError):
        evaluate(odot_countermodel, parse("p"), "nowhere")
    with pytest.raises(SemanticError):
        evaluate(odot_countermodel, parse("r"), "w")


def test_construction_errors():
    with pytest.raises(ModelError):
        KripkeModel((), frozenset(), {})
    with pytest.raises(ModelError):
        KripkeModel.from_table(["a"], [("a", "b")], {})
    with pytest.raises(ModelError):
        KripkeModel(("a", "b"), frozenset(), {("p", "a"): 1})
    with pytest.raises(ValueError):
        KripkeModel.from_table(["a"], [], {"p": {"a": "3/2"}})


def test_with_value_keeps_the_rest(odot_countermodel):
    m = odot_countermodel.with_value("p", "v1", F(1, 2))
    assert m.value("p", "v1") == F(1, 2)
    assert m.value("q", "v1") == F(1, 2)
    assert odot_countermodel.value("p", "v1") == 1


def test_json_round_trip(tmp_path, odot_countermodel):
    text = dump_model(odot_countermodel, n=2)
    data = json.loads(text)
    assert data["valuation"]["q"]["v1"] == "1/2"
    assert data["valuation"]["p"]["v1"] == "1"
    path = tmp_path / "m.json"
    path.write_text(text)
    assert load_model(path) == odot_countermodel
    assert model_to_dict(load_model(path), 2) == data


def test_json_rejects_values_outside_declared_grid():
    with pytest.raises(ModelError):
        model_from_dict({"n": 1, "worlds": ["a"], "relation": [], "valuation": {"p": {"a": "1/2"}}})
    with pytest.raises(ModelError):
        model_from_dict({"n": 1, "worlds": ["a"], "relation": [], "valuation": {"p": {}}})
