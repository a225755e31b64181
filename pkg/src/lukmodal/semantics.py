"""Finite many-valued Kripke models and exact evaluation of formulas."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional

from . import mvcore
from .mvcore import ONE, ZERO
from .syntax import (
    And, Box, Const, Diamond, Formula, Iff, Implies, Neg, Odot, Oplus, Or,
    Power, Var, variables,
)


class ModelError(ValueError):
    """A model (or frame) is malformed."""


class SemanticError(LookupError):
    """Evaluation referred to an unknown world or an unvalued variable."""


World = str


@dataclass(frozen=True)
class KripkeModel:
    """A finite model ``(worlds, relation, valuation)``.

    ``valuation`` maps ``(variable, world)`` to a truth value and must be total
    over the declared variables.  The declared variables are those that occur
    in the valuation keys, or ``declared`` when given explicitly (which lets a
    model with no worlds valued still fix its vocabulary).
    """

    worlds: tuple[World, ...]
    relation: frozenset[tuple[World, World]]
    valuation: Mapping[tuple[str, World], Fraction]
    declared: frozenset[str] = field(default=frozenset())
    _succ: Mapping[World, tuple[World, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        worlds = tuple(self.worlds)
        if not worlds:
            raise ModelError("a model needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ModelError("duplicate world ids")
        world_set = set(worlds)
        relation = frozenset((u, v) for u, v in self.relation)
        for u, v in relation:
            if u not in world_set or v not in world_set:
                raise ModelError(f"relation pair ({u}, {v}) mentions an unknown world")
        valuation = {}
        for (p, w), x in dict(self.valuation).items():
            if w not in world_set:
                raise ModelError(f"valuation of {p} at unknown world {w}")
            valuation[(p, w)] = mvcore.truth_value(x)
        declared = frozenset(self.declared) | {p for p, _ in valuation}
        for p in declared:
            for w in worlds:
                if (p, w) not in valuation:
                    raise ModelError(f"valuation missing for {p} at world {w}")
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "relation", relation)
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "declared", declared)
        succ = {w: tuple(v for v in worlds if (w, v) in relation) for w in worlds}
        object.__setattr__(self, "_succ", succ)

    def __hash__(self) -> int:
        return hash((self.worlds, self.relation, frozenset(self.valuation.items())))

    def successors(self, w: World) -> tuple[World, ...]:
        try:
            return self._succ[w]
        except KeyError:
            raise SemanticError(f"unknown world {w!r}") from None

    def value(self, p: str, w: World) -> Fraction:
        try:
            return self.valuation[(p, w)]
        except KeyError:
            if w not in self._succ:
                raise SemanticError(f"unknown world {w!r}") from None
            raise SemanticError(f"variable {p!r} has no value at world {w!r}") from None

    def with_value(self, p: str, w: World, x: Any) -> "KripkeModel":
        """A copy with the single entry ``Val(p, w)`` replaced."""
        valuation = dict(self.valuation)
        valuation[(p, w)] = x
        return KripkeModel(self.worlds, self.relation, valuation, self.declared)

    @classmethod
    def from_table(
        cls,
        worlds: Iterable[World],
        relation: Iterable[tuple[World, World]],
        table: Mapping[str, Mapping[World, Any]],
    ) -> "KripkeModel":
        """Build from a nested ``{var: {world: value}}`` table."""
        valuation = {(p, w): x for p, row in table.items() for w, x in row.items()}
        return cls(tuple(worlds), frozenset(relation), valuation, frozenset(table))


def evaluate(model: KripkeModel, phi: Formula, w: World) -> Fraction:
    """Truth value of ``phi`` at world ``w``.

    Derived connectives are computed from the closed forms of their
    expansions (``max``/``min`` for the lattice connectives, and so on).
    A box over a world with no successors is 1.
    """
    model.successors(w)
    return _eval(model, phi, w, {})


def _eval(model: KripkeModel, phi: Formula, w: World, memo: dict) -> Fraction:
    key = (phi, w)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(phi, Var):
        out = model.value(phi.name, w)
    elif isinstance(phi, Const):
        out = ONE if phi.value else ZERO
    elif isinstance(phi, Neg):
        out = ONE - _eval(model, phi.arg, w, memo)
    elif isinstance(phi, (Box, Diamond)):
        vals = [_eval(model, phi.arg, v, memo) for v in model.successors(w)]
        if isinstance(phi, Box):
            out = min(vals, default=ONE)
        else:
            out = max(vals, default=ZERO)
    elif isinstance(phi, Power):
        out = mvcore.power(_eval(model, phi.arg, w, memo), phi.m)
    else:
        a = _eval(model, phi.left, w, memo)
        b = _eval(model, phi.right, w, memo)
        out = _BINARY[type(phi)](a, b)
    memo[key] = out
    return out


_BINARY = {
    Oplus: mvcore.oplus,
    Implies: mvcore.implies,
    Odot: mvcore.odot,
    Or: mvcore.join,
    And: mvcore.meet,
    Iff: mvcore.iff,
}


def satisfies(model: KripkeModel, w: World, phi: Formula) -> bool:
    return evaluate(model, phi, w) == ONE


def true_in_model(model: KripkeModel, phi: Formula) -> bool:
    return all(satisfies(model, w, phi) for w in model.worlds)


def is_model_of(model: KripkeModel, gamma: Iterable[Formula]) -> bool:
    return all(true_in_model(model, g) for g in gamma)


def is_n_valued(model: KripkeModel, n: int) -> bool:
    return all(mvcore.in_grid(x, n) for x in model.valuation.values())


def check_vocabulary(model: KripkeModel, phi: Formula) -> None:
    missing = variables(phi) - model.declared
    if missing:
        raise SemanticError(f"model gives no value to {sorted(missing)}")


# --- JSON model format ------------------------------------------------------


def model_to_dict(model: KripkeModel, n: Optional[int] = None) -> dict:
    return {
        "n": n,
        "worlds": list(model.worlds),
        "relation": [[u, v] for u in model.worlds for v in model.successors(u)],
        "valuation": {
            p: {w: str(model.valuation[(p, w)]) for w in model.worlds}
            for p in sorted(model.declared)
        },
    }


def model_from_dict(data: Mapping[str, Any]) -> KripkeModel:
    try:
        worlds = [str(w) for w in data["worlds"]]
        relation = [(str(u), str(v)) for u, v in data.get("relation", [])]
        table = data.get("valuation", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed model: {exc}") from exc
    if not isinstance(table, Mapping):
        raise ModelError("valuation must be an object {var: {world: value}}")
    model = KripkeModel.from_table(worlds, relation, {p: {str(w): x for w, x in row.items()} for p, row in table.items()})
    n = data.get("n")
    if n is not None and not is_n_valued(model, int(n)):
        raise ModelError(f"model declares n={n} but has values outside that grid")
    return model


def load_model(path) -> KripkeModel:
    with open(path, encoding="utf-8") as fh:
        try:
            return model_from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: not valid JSON ({exc})") from exc


def dump_model(model: KripkeModel, n: Optional[int] = None) -> str:
    return json.dumps(model_to_dict(model, n), indent=2, sort_keys=False)
