"""Frames, n+1-frames, model enumeration, frame validity and pi-morphisms.

An n+1-frame decorates a frame with a subset ``r_m`` of worlds for every
positive divisor ``m`` of ``n``.  A model based on it may only give a world
in ``r_m`` values from the chain of step ``1/m``.  Since the classes are
closed under intersection (``r_m & r_k == r_gcd(m,k)``), every world has a
least class, its *level*, and the admissible values at that world are the
multiples of ``1/level``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping, Optional, Union

from . import engine
from .semantics import KripkeModel, ModelError, World, evaluate
from .syntax import Formula, variables

DEFAULT_MAX_MODELS = 5_000_000


class FrameBudgetExceeded(RuntimeError):
    pass


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("n must be positive")
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class Frame:
    worlds: tuple[World, ...]
    relation: frozenset[tuple[World, World]]

    def __post_init__(self) -> None:
        worlds = tuple(self.worlds)
        if not worlds:
            raise ModelError("a frame needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ModelError("duplicate world ids")
        relation = frozenset((u, v) for u, v in self.relation)
        unknown = {x for pair in relation for x in pair} - set(worlds)
        if unknown:
            raise ModelError(f"relation mentions unknown worlds {sorted(unknown)}")
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "relation", relation)

    def successors(self, w: World) -> list[World]:
        return [v for v in self.worlds if (w, v) in self.relation]


@dataclass(frozen=True)
class NFrame:
    """An n+1-frame.  ``classes`` maps divisors of ``n`` to world sets.

    Divisors left out of ``classes`` are filled in from the levels implied by
    the ones given: ``r_m`` becomes the set of worlds whose level divides
    ``m``.  No other checking happens here; see :func:`validate_nframe`.
    """

    n: int
    worlds: tuple[World, ...]
    relation: frozenset[tuple[World, World]]
    classes: Mapping[int, frozenset[World]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ModelError("n must be a positive integer")
        worlds = tuple(self.worlds)
        if not worlds:
            raise ModelError("a frame needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ModelError("duplicate world ids")
        given = {int(m): frozenset(ws) for m, ws in dict(self.classes).items()}
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "relation", frozenset((u, v) for u, v in self.relation))
        levels = _levels_from(self.n, worlds, given)
        classes = {
            m: given[m] if m in given else frozenset(w for w in worlds if m % levels[w] == 0)
            for m in divisors(self.n)
        }
        classes.update({m: ws for m, ws in given.items() if m not in classes})
        object.__setattr__(self, "classes", classes)

    def __hash__(self) -> int:
        return hash((self.n, self.worlds, self.relation, frozenset(self.classes.items())))

    @classmethod
    def from_levels(cls, n: int, worlds: Iterable[World], relation, levels: Mapping[World, int]) -> "NFrame":
        """Build from each world's least class (the form used in proofs)."""
        worlds = tuple(worlds)
        classes = {m: frozenset(w for w in worlds if m % levels[w] == 0) for m in divisors(n)}
        return cls(n, worlds, frozenset(relation), classes)

    def level(self, w: World) -> int:
        """gcd of all ``m`` with ``w`` in ``r_m`` (``n`` if in none)."""
        g = self.n
        for m, ws in self.classes.items():
            if w in ws:
                g = math.gcd(g, m)
        return g

    def levels(self) -> dict[World, int]:
        return {w: self.level(w) for w in self.worlds}

    @property
    def frame(self) -> Frame:
        return Frame(self.worlds, self.relation)

    def successors(self, w: World) -> list[World]:
        return [v for v in self.worlds if (w, v) in self.relation]


def _levels_from(n: int, worlds, given: Mapping[int, frozenset]) -> dict[World, int]:
    out = {}
    for w in worlds:
        g = n
        for m, ws in given.items():
            if w in ws and m > 0:
                g = math.gcd(g, m)
        out[w] = g
    return out


AnyFrame = Union[Frame, NFrame]


# --- violation reports ---------------------------------------------------


@dataclass(frozen=True)
class Violation:
    clause: str
    message: str
    witness: tuple = ()

    def to_dict(self) -> dict:
        return {"clause": self.clause, "message": self.message, "witness": list(self.witness)}


@dataclass(frozen=True)
class Report:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def clauses(self) -> set[str]:
        return {v.clause for v in self.violations}

    def to_list(self) -> list[dict]:
        return [v.to_dict() for v in self.violations]

    def to_json(self) -> str:
        return json.dumps(self.to_list(), indent=2)


def validate_nframe(F: NFrame) -> Report:
    """Check the structural laws of an n+1-frame, listing every violation."""
    out: list[Violation] = []
    world_set = set(F.worlds)
    divs = divisors(F.n)
    for u, v in sorted(F.relation):
        if u not in world_set or v not in world_set:
            out.append(Violation("worlds", f"relation pair ({u}, {v}) leaves the frame", (u, v)))
    for m in sorted(F.classes):
        if m not in divs:
            out.append(Violation("divisors", f"{m} is not a divisor of {F.n}", (m,)))
        stray = sorted(F.classes[m] - world_set)
        if stray:
            out.append(Violation("worlds", f"r_{m} contains unknown worlds", (m, *stray)))
    if F.classes.get(F.n, frozenset()) != world_set:
        missing = sorted(world_set - F.classes.get(F.n, frozenset()))
        out.append(Violation("top", f"r_{F.n} must contain every world", tuple(missing)))
    present = [m for m in divs if m in F.classes]
    for m, k in itertools.combinations_with_replacement(present, 2):
        g = math.gcd(m, k)
        meet = F.classes[m] & F.classes[k]
        if g in F.classes and meet != F.classes[g]:
            out.append(Violation(
                "intersection",
                f"r_{m} & r_{k} = {sorted(meet)} but r_{g} = {sorted(F.classes[g])}",
                (m, k),
            ))
    for m in present:
        for u, v in sorted(F.relation):
            if u in F.classes[m] and v not in F.classes[m]:
                out.append(Violation("closure", f"{u} in r_{m} sees {v} outside r_{m}", (m, u, v)))
    return Report(tuple(out))


# --- enumeration and validity ------------------------------------------------


def _sorted_worlds(F: AnyFrame) -> list[World]:
    return sorted(F.worlds)


def _space(F: AnyFrame, names: Iterable[str], n: Optional[int]) -> engine.ValuationSpace:
    worlds = _sorted_worlds(F)
    names = tuple(sorted(set(names)))
    if isinstance(F, NFrame):
        if n is not None and n != F.n:
            raise ValueError(f"n={n} does not match the n+1-frame's n={F.n}")
        levels = F.levels()
        return engine.ValuationSpace(names, len(worlds), F.n, tuple(F.n // levels[w] for w in worlds))
    if n is None:
        raise ValueError("enumerating models on a plain frame needs n")
    return engine.ValuationSpace.uniform(names, len(worlds), n)


def model_count(F: AnyFrame, names: Iterable[str], n: Optional[int] = None) -> int:
    return _space(F, names, n).size


def _model_from_row(F: AnyFrame, space: engine.ValuationSpace, row: int) -> KripkeModel:
    worlds = _sorted_worlds(F)
    entries = space.decode_one(row)
    valuation = {(p, worlds[w]): x for (p, w), x in entries.items()}
    return KripkeModel(tuple(F.worlds), F.relation, valuation, frozenset(space.names))


def enumerate_models(F: AnyFrame, names: Iterable[str], n: Optional[int] = None) -> Iterator[KripkeModel]:
    """Every model based on ``F`` over the variables ``names``.

    Order: worlds sorted by id, variables sorted, each grid ascending, the
    last ``(world, variable)`` slot varying fastest.
    """
    worlds = _sorted_worlds(F)
    space = _space(F, names, n)
    slots = [(p, w) for w in range(space.k) for p in space.names]
    choices = [
        [Fraction(j * space.steps[w], space.n) for j in range(space.n // space.steps[w] + 1)]
        for (_, w) in slots
    ]
    for combo in itertools.product(*choices):
        valuation = {(p, worlds[w]): x for (p, w), x in zip(slots, combo)}
        yield KripkeModel(tuple(F.worlds), F.relation, valuation, frozenset(space.names))


@dataclass(frozen=True)
class FrameWitness:
    model: KripkeModel
    world: World
    value: Fraction


def find_frame_countermodel(
    F: AnyFrame,
    phi: Formula,
    n: Optional[int] = None,
    max_models: Optional[int] = DEFAULT_MAX_MODELS,
) -> Optional[FrameWitness]:
    """First model based on ``F`` (in enumeration order) where ``phi`` is not
    true, with the first failing world; ``None`` if ``phi`` is valid."""
    space = _space(F, variables(phi), n)
    if max_models is not None and space.size > max_models:
        raise FrameBudgetExceeded(f"{space.size} models exceed the ceiling of {max_models}")
    worlds = _sorted_worlds(F)
    pos = {w: i for i, w in enumerate(worlds)}
    succ = engine.successor_lists(len(worlds), [(pos[u], pos[v]) for u, v in F.relation])
    result = engine.Scanner(phi, (), space).scan(succ)
    if result.row is None:
        return None
    model = _model_from_row(F, space, result.row)
    w = worlds[result.world]
    return FrameWitness(model, w, evaluate(model, phi, w))


def frame_valid(F: AnyFrame, phi: Formula, n: Optional[int] = None,
                max_models: Optional[int] = DEFAULT_MAX_MODELS) -> bool:
    """Whether ``phi`` is true in every model on ``F`` with values in the grid
    of step ``1/n``.  Exhaustive, so a decision for fixed ``F``, ``phi``, ``n``."""
    if isinstance(F, NFrame):
        F = F.frame
    return find_frame_countermodel(F, phi, n, max_models) is None


def nframe_valid(F: NFrame, phi: Formula, max_models: Optional[int] = DEFAULT_MAX_MODELS) -> bool:
    return find_frame_countermodel(F, phi, None, max_models) is None


# --- relational properties and pi-morphisms ----------------------------------


def frame_property(F: AnyFrame, which: str) -> bool:
    if which == "reflexive":
        return all((w, w) in F.relation for w in F.worlds)
    if which == "transitive":
        return all(
            (u, x) in F.relation
            for (u, v) in F.relation
            for (v2, x) in F.relation
            if v == v2
        )
    raise ValueError(f"unknown frame property {which!r}")


WorldMap = Mapping[World, World]


def is_pi_morphism(f: WorldMap, F: NFrame, G: NFrame) -> Report:
    """Check forth, back and class preservation for ``f: F -> G``."""
    out: list[Violation] = []
    if F.n != G.n:
        out.append(Violation("n", f"source n={F.n} differs from target n={G.n}", (F.n, G.n)))
        return Report(tuple(out))
    g_worlds = set(G.worlds)
    for u in F.worlds:
        if u not in f:
            out.append(Violation("totality", f"{u} has no image", (u,)))
        elif f[u] not in g_worlds:
            out.append(Violation("totality", f"{u} maps to unknown world {f[u]}", (u, f[u])))
    if out:
        return Report(tuple(out))
    for u, v in sorted(F.relation):
        if (f[u], f[v]) not in G.relation:
            out.append(Violation("forth", f"{u}R{v} but not {f[u]}R'{f[v]}", (u, v)))
    for u in F.worlds:
        images = {f[v] for v in F.successors(u)}
        for v2 in G.successors(f[u]):
            if v2 not in images:
                out.append(Violation("back", f"{f[u]}R'{v2} has no preimage among successors of {u}", (u, v2)))
    for m in sorted(F.classes):
        for u in sorted(F.classes[m]):
            if f[u] not in G.classes.get(m, frozenset()):
                out.append(Violation("class", f"{u} in r_{m} but {f[u]} not in r'_{m}", (m, u)))
    return Report(tuple(out))


def is_surjective(f: WorldMap, G: AnyFrame) -> bool:
    return set(f.values()) >= set(G.worlds)


# --- JSON formats ------------------------------------------------------------


def frame_from_dict(data: Mapping[str, Any]) -> Frame:
    try:
        return Frame(tuple(str(w) for w in data["worlds"]),
                     frozenset((str(u), str(v)) for u, v in data.get("relation", [])))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed frame: {exc}") from exc


def nframe_from_dict(data: Mapping[str, Any]) -> NFrame:
    try:
        n = int(data["n"])
        worlds = tuple(str(w) for w in data["worlds"])
        relation = frozenset((str(u), str(v)) for u, v in data.get("relation", []))
        classes = {int(m): frozenset(str(w) for w in ws) for m, ws in data.get("classes", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed n+1-frame: {exc}") from exc
    return NFrame(n, worlds, relation, classes)


def nframe_to_dict(F: NFrame) -> dict:
    return {
        "n": F.n,
        "worlds": list(F.worlds),
        "relation": [[u, v] for u, v in sorted(F.relation)],
        "classes": {str(m): sorted(F.classes[m]) for m in sorted(F.classes)},
    }


def _load_json(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: not valid JSON ({exc})") from exc


def load_frame(path) -> Frame:
    return frame_from_dict(_load_json(path))


def load_nframe(path) -> NFrame:
    return nframe_from_dict(_load_json(path))


def load_world_map(path) -> dict[World, World]:
    data = _load_json(path)
    if isinstance(data, Mapping) and "map" in data:
        data = data["map"]
    if not isinstance(data, Mapping):
        raise ModelError("a world map is a JSON object {source: target}")
    return {str(u): str(v) for u, v in data.items()}
