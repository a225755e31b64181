"""Bounded counter-model search.

Enumerates every model with at most ``max_worlds`` worlds, every relation on
those worlds and every valuation into the chain of step ``1/n``, in a fixed
order, and reports the first model of the premises in which the candidate
formula fails.  A clean run only says that no counter-model exists up to the
bound; it is never a proof of theoremhood.
"""

from __future__ import annotations

import enum
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import engine
from .mvcore import ONE, Step, UnaryTerm, synthesize_tau
from .semantics import KripkeModel, evaluate, is_model_of, model_to_dict
from .syntax import (
    MVN_BASE, Box, Formula, Iff, Odot, Oplus, Var, core_axioms, instantiate_axiom,
    parse, to_text, variables,
)


class Verdict(str, enum.Enum):
    REFUTED = "REFUTED"
    NO_COUNTERMODEL_UP_TO_BOUND = "NO_COUNTERMODEL_UP_TO_BOUND"


@dataclass(frozen=True)
class SearchBudget:
    n: int
    max_worlds: int
    max_models: Optional[int] = None
    premises: tuple[Formula, ...] = ()
    prune_isomorphic: bool = False
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be at least 1")
        if self.max_models is not None and self.max_models < 0:
            raise ValueError("max_models must be non-negative")
        object.__setattr__(self, "premises", tuple(self.premises))


@dataclass(frozen=True)
class Witness:
    model: KripkeModel
    world: str
    value: Fraction


@dataclass(frozen=True)
class Statistics:
    models_examined: int
    elapsed: float = field(compare=False)
    budget_exhausted: bool = False

    @property
    def status(self) -> str:
        return "BUDGET_EXHAUSTED" if self.budget_exhausted else "COMPLETE"


@dataclass(frozen=True)
class CounterModelReport:
    formula: Formula
    budget: SearchBudget
    verdict: Verdict
    witness: Optional[Witness]
    statistics: Statistics

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED

    @property
    def partial(self) -> bool:
        return self.statistics.budget_exhausted

    def to_dict(self, timing: bool = False) -> dict:
        stats = {
            "models_examined": self.statistics.models_examined,
            "status": self.statistics.status,
            "partial": self.partial,
        }
        if timing:
            stats["elapsed_seconds"] = round(self.statistics.elapsed, 6)
        witness = None
        if self.witness is not None:
            witness = {
                "world": self.witness.world,
                "value": str(self.witness.value),
                "model": model_to_dict(self.witness.model, self.budget.n),
            }
        return {
            "formula": to_text(self.formula),
            "n": self.budget.n,
            "max_worlds": self.budget.max_worlds,
            "premises": [to_text(g) for g in self.budget.premises],
            "verdict": self.verdict.value,
            "witness": witness,
            "statistics": stats,
        }

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2)


def world_names(k: int) -> tuple[str, ...]:
    width = len(str(k - 1))
    return tuple(f"w{i:0{width}d}" for i in range(k))


def relation_pairs(k: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(k) for j in range(k)]


def relation_from_index(k: int, index: int) -> list[tuple[int, int]]:
    """Bit ``b`` of ``index`` selects the ``b``-th pair in row-major order."""
    return [pair for b, pair in enumerate(relation_pairs(k)) if index >> b & 1]


@lru_cache(maxsize=None)
def canonical_relations(k: int) -> tuple[int, ...]:
    """Relation indices that are minimal in their orbit under world permutations."""
    pairs = relation_pairs(k)
    bit = {pair: b for b, pair in enumerate(pairs)}
    perms = list(itertools.permutations(range(k)))
    out = []
    for index in range(1 << (k * k)):
        rel = relation_from_index(k, index)
        if all(
            sum(1 << bit[(pi[u], pi[v])] for u, v in rel) >= index
            for pi in perms
        ):
            out.append(index)
    return tuple(out)


def relation_indices(k: int, prune: bool) -> Sequence[int]:
    return canonical_relations(k) if prune else range(1 << (k * k))


# One scan row per (relation, valuation); blocks group relations of one world
# count so parallel workers receive coarse tasks.
_BLOCK = 64


def _scan_block(phi, premises, n, names, k, rels, limit):
    space = engine.ValuationSpace.uniform(names, k, n)
    scanner = engine.Scanner(phi, premises, space)
    results = []
    used = 0
    for rel in rels:
        remaining = None if limit is None else limit - used
        succ = engine.successor_lists(k, relation_from_index(k, rel))
        res = scanner.scan(succ, remaining)
        results.append((k, rel, res.examined, res.row, res.world, res.exhausted))
        used += res.examined
        if res.row is not None or res.exhausted:
            break
    return results


def find_countermodel(phi: Formula, budget: SearchBudget) -> CounterModelReport:
    """Search for a model of the premises falsifying ``phi`` at some world."""
    start = time.perf_counter()
    premises = budget.premises
    names = tuple(sorted(variables(phi).union(*(variables(g) for g in premises))))
    limit = budget.max_models
    blocks = []
    for k in range(1, budget.max_worlds + 1):
        rels = list(relation_indices(k, budget.prune_isomorphic))
        for i in range(0, len(rels), _BLOCK):
            blocks.append((k, rels[i:i + _BLOCK]))

    def outcomes():
        if budget.jobs > 1 and len(blocks) > 1:
            with ProcessPoolExecutor(max_workers=budget.jobs) as pool:
                futures = [
                    pool.submit(_scan_block, phi, premises, budget.n, names, k, rels, limit)
                    for k, rels in blocks
                ]
                for fut in futures:
                    yield from fut.result()
        else:
            used = 0
            for k, rels in blocks:
                remaining = None if limit is None else limit - used
                for item in _scan_block(phi, premises, budget.n, names, k, rels, remaining):
                    used += item[2]
                    yield item

    # replay results in enumeration order so the parallel and sequential
    # paths agree on the witness and on the count of examined models
    examined = 0
    for k, rel, count, row, world, exhausted in outcomes():
        if row is not None and (limit is None or examined + count <= limit):
            examined += count
            witness = _build_witness(phi, premises, budget.n, names, k, rel, row, world)
            return CounterModelReport(phi, budget, Verdict.REFUTED, witness,
                                      Statistics(examined, time.perf_counter() - start))
        if exhausted or row is not None or (limit is not None and examined + count > limit):
            return CounterModelReport(phi, budget, Verdict.NO_COUNTERMODEL_UP_TO_BOUND, None,
                                      Statistics(limit, time.perf_counter() - start, True))
        examined += count
    return CounterModelReport(phi, budget, Verdict.NO_COUNTERMODEL_UP_TO_BOUND, None,
                              Statistics(examined, time.perf_counter() - start))


class SearchInconsistency(AssertionError):
    """The exact evaluator disagrees with the batch engine about a witness."""


def _build_witness(phi, premises, n, names, k, rel, row, world) -> Witness:
    worlds = world_names(k)
    space = engine.ValuationSpace.uniform(names, k, n)
    valuation = {(p, worlds[w]): x for (p, w), x in space.decode_one(row).items()}
    relation = frozenset((worlds[u], worlds[v]) for u, v in relation_from_index(k, rel))
    model = KripkeModel(worlds, relation, valuation, frozenset(names))
    value = evaluate(model, phi, worlds[world])
    if value >= ONE or not is_model_of(model, premises):
        raise SearchInconsistency(f"witness for {to_text(phi)} does not re-check")
    return Witness(model, worlds[world], value)


# --- batteries ---------------------------------------------------------------

THEOREMS: tuple[tuple[str, str], ...] = (
    ("box-imp-dia", "[](p -> q) -> (<>p -> <>q)"),
    ("dia-oplus", "<>(p + q) -> (<>p + <>q)"),
    ("box-and-dia", "([]p & <>q) -> <>(p & q)"),
    ("box-and-split", "[](p & q) -> ([]p & []q)"),
    ("odot-box", "([]p * []q) -> [](p * q)"),
    ("box-and-iff", "[](p & q) <-> ([]p & []q)"),
)

NON_THEOREM = ("box-odot-split", "[](p * q) -> ([]p * []q)")


def theorem_battery(n: int, max_m: int = 3) -> list[tuple[str, Formula]]:
    rows = [(label, parse(text)) for label, text in THEOREMS]
    rows += [(str(a), instantiate_axiom(a)) for a in core_axioms(max_m)]
    rows.append((str(MVN_BASE(n)), instantiate_axiom(MVN_BASE(n))))
    return rows


@dataclass(frozen=True)
class CertificationRow:
    label: str
    formula: Formula
    report: CounterModelReport

    @property
    def verdict(self) -> Verdict:
        return self.report.verdict


def certify_theorem_list(
    n: int,
    max_worlds: int,
    extra: Sequence[tuple[str, Formula]] = (),
    jobs: int = 1,
    prune_isomorphic: bool = False,
) -> list[CertificationRow]:
    budget = SearchBudget(n, max_worlds, jobs=jobs, prune_isomorphic=prune_isomorphic)
    rows = []
    for label, phi in [*theorem_battery(n), *extra]:
        rows.append(CertificationRow(label, phi, find_countermodel(phi, budget)))
    return rows


def apply_term(t: UnaryTerm, phi: Formula) -> Formula:
    """Substitute ``phi`` into the doubling term ``t`` (subtrees are shared)."""
    for s in t.steps:
        phi = Oplus(phi, phi) if s is Step.DOUBLE_PLUS else Odot(phi, phi)
    return phi


def box_tau_formula(r) -> Formula:
    t = synthesize_tau(r)
    p = Var("p")
    return Iff(Box(apply_term(t, p)), apply_term(t, Box(p)))


def check_box_tau_commutation(r, n: int, max_worlds: int, jobs: int = 1) -> CounterModelReport:
    return find_countermodel(box_tau_formula(r), SearchBudget(n, max_worlds, jobs=jobs))


__all__ = [
    "Verdict", "SearchBudget", "Witness", "Statistics", "CounterModelReport",
    "find_countermodel", "certify_theorem_list", "check_box_tau_commutation",
    "apply_term", "box_tau_formula", "theorem_battery", "THEOREMS", "NON_THEOREM",
    "world_names", "relation_from_index", "canonical_relations", "SearchInconsistency",
]
