"""Seeded random formulas, models, n+1-frames and pi-morphisms."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .frames import NFrame, divisors
from .semantics import KripkeModel
from .syntax import (
    And, Box, Const, Diamond, Formula, Iff, Implies, Neg, Odot, Oplus, Or,
    Power, Var,
)

DEFAULT_SEED = 20240601

PRIMITIVE_OPS = ("neg", "box", "oplus")
ALL_OPS = ("neg", "box", "oplus", "dia", "imp", "odot", "and", "or", "iff", "pow")
POSITIVE_OPS = ("box", "oplus", "odot", "and", "or")

_UNARY = {"neg": Neg, "box": Box, "dia": Diamond}
_BINARY = {"oplus": Oplus, "imp": Implies, "odot": Odot, "and": And, "or": Or, "iff": Iff}


def random_formula(
    rng: random.Random,
    depth: int,
    names: Sequence[str] = ("p", "q"),
    ops: Sequence[str] = ALL_OPS,
    constants: bool = True,
    max_power: int = 3,
) -> Formula:
    """A random formula of nesting depth at most ``depth``."""
    if depth <= 0 or rng.random() < 0.2:
        if constants and rng.random() < 0.1:
            return Const(rng.randint(0, 1))
        return Var(rng.choice(list(names)))
    op = rng.choice(list(ops))
    if op in _UNARY:
        return _UNARY[op](random_formula(rng, depth - 1, names, ops, constants, max_power))
    if op == "pow":
        return Power(random_formula(rng, depth - 1, names, ops, constants, max_power), rng.randint(1, max_power))
    left = random_formula(rng, depth - 1, names, ops, constants, max_power)
    right = random_formula(rng, depth - 1, names, ops, constants, max_power)
    return _BINARY[op](left, right)


def random_model(
    rng: random.Random,
    n: int,
    k: int,
    names: Sequence[str] = ("p", "q"),
    edge_probability: float = 0.4,
) -> KripkeModel:
    """A random model with ``k`` worlds and values in the chain of step ``1/n``."""
    worlds = tuple(f"w{i}" for i in range(k))
    relation = frozenset((u, v) for u in worlds for v in worlds if rng.random() < edge_probability)
    table = {p: {w: Fraction(rng.randint(0, n), n) for w in worlds} for p in names}
    return KripkeModel.from_table(worlds, relation, table)


def random_nframe(rng: random.Random, n: int, k: int, edge_probability: float = 0.4) -> NFrame:
    """A random valid n+1-frame.

    Levels are drawn at random, then the relation is restricted so that a
    world only sees worlds whose level divides its own, which is exactly the
    successor-closure law.
    """
    worlds = tuple(f"a{i}" for i in range(k))
    divs = divisors(n)
    levels = {w: rng.choice(divs) for w in worlds}
    relation = frozenset(
        (u, v) for u in worlds for v in worlds
        if levels[u] % levels[v] == 0 and rng.random() < edge_probability
    )
    return NFrame.from_levels(n, worlds, relation, levels)


def random_pi_morphism(
    rng: random.Random,
    target: NFrame,
    max_extra: int = 1,
) -> tuple[NFrame, dict[str, str]]:
    """A source n+1-frame together with a surjective pi-morphism onto ``target``.

    Every target world gets one or more copies.  The first copy keeps the
    image's level; further copies may take any level that is a multiple of it
    (class preservation).  A copy of ``u`` is related to a non-empty set of
    copies of each successor of ``u``, chosen among the copies whose level
    divides its own (so the closure law holds), and to nothing else.
    """
    levels = target.levels()
    copies: dict[str, list[str]] = {}
    source_levels: dict[str, int] = {}
    f: dict[str, str] = {}
    extra = max_extra
    for g in target.worlds:
        count = 1
        if extra and rng.random() < 0.5:
            count, extra = 2, extra - 1
        copies[g] = []
        for i in range(count):
            s = f"{g}.{i}"
            copies[g].append(s)
            f[s] = g
            if i == 0:
                source_levels[s] = levels[g]
            else:
                source_levels[s] = rng.choice([d for d in divisors(target.n) if d % levels[g] == 0])
    relation = set()
    for s, g in f.items():
        for g2 in target.successors(g):
            options = [c for c in copies[g2] if source_levels[s] % source_levels[c] == 0]
            if not options:  # pragma: no cover - the first copy always qualifies
                raise AssertionError("no admissible copy")
            chosen = [c for c in options if rng.random() < 0.6] or [rng.choice(options)]
            relation.update((s, c) for c in chosen)
    source = NFrame.from_levels(target.n, tuple(f), frozenset(relation), source_levels)
    return source, f


def rng_for(seed: Optional[int] = None) -> random.Random:
    return random.Random(DEFAULT_SEED if seed is None else seed)
