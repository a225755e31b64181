"""Batch evaluation of formulas over many valuations at once.

Every model enumerated by the frame and search modules takes its values in a
grid ``{0, 1/n, ..., 1}``.  Scaling by ``n`` turns the whole Łukasiewicz
algebra into integer arithmetic on ``0..n``, which is exact, so a batch of
valuations can be evaluated as integer numpy arrays of shape
``(rows, worlds)``.

Valuations of a fixed frame are enumerated in a fixed mixed-radix order: one
slot per ``(world, variable)`` pair, worlds in frame order and variables
sorted, the last slot varying fastest (the order of ``itertools.product``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .syntax import (
    And, Box, Const, Diamond, Formula, Iff, Implies, Neg, Odot, Oplus, Or,
    Power, Var,
)

DTYPE = np.int64
DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class Program:
    """A formula DAG flattened into instructions in evaluation order.

    Each instruction is ``(op, args, param)`` where ``args`` index earlier
    instructions.  ``outputs`` index the roots, one per compiled formula.
    """

    instructions: tuple[tuple[str, tuple[int, ...], object], ...]
    outputs: tuple[int, ...]
    last_use: tuple[int, ...]


_OPS = {
    Neg: "neg", Box: "box", Diamond: "dia", Oplus: "oplus", Implies: "imp",
    Odot: "odot", Or: "max", And: "min", Iff: "iff",
}


def compile_formulas(formulas: Sequence[Formula]) -> Program:
    instructions: list[tuple[str, tuple[int, ...], object]] = []
    index: dict[tuple, int] = {}
    memo: dict[int, int] = {}

    def emit(key: tuple) -> int:
        slot = index.get(key)
        if slot is None:
            slot = index[key] = len(instructions)
            instructions.append(key)
        return slot

    def visit(phi: Formula) -> int:
        # identity memo first: syntactic terms built by repeated doubling
        # share subtrees, and hashing them structurally would be exponential
        hit = memo.get(id(phi))
        if hit is not None:
            return hit
        if isinstance(phi, Var):
            slot = emit(("var", (), phi.name))
        elif isinstance(phi, Const):
            slot = emit(("const", (), phi.value))
        elif isinstance(phi, Power):
            slot = emit(("pow", (visit(phi.arg),), phi.m))
        else:
            slot = emit((_OPS[type(phi)], tuple(visit(c) for c in phi.children()), None))
        memo[id(phi)] = slot
        return slot

    keep = []  # hold references so ids in memo stay valid
    outputs = []
    for phi in formulas:
        keep.append(phi)
        outputs.append(visit(phi))
    last_use = list(range(len(instructions)))
    for i, (_, args, _) in enumerate(instructions):
        for a in args:
            last_use[a] = max(last_use[a], i)
    for o in outputs:
        last_use[o] = len(instructions)
    return Program(tuple(instructions), tuple(outputs), tuple(last_use))


def run(
    program: Program,
    variables: dict[str, np.ndarray],
    successors: Sequence[Sequence[int]],
    n: int,
) -> list[np.ndarray]:
    """Evaluate ``program``; ``variables`` map names to ``(rows, worlds)`` arrays."""
    rows, k = next(iter(variables.values())).shape if variables else (1, len(successors))
    regs: list[Optional[np.ndarray]] = [None] * len(program.instructions)
    for i, (op, args, param) in enumerate(program.instructions):
        a = regs[args[0]] if args else None
        b = regs[args[1]] if len(args) > 1 else None
        if op == "var":
            out = variables[param]
        elif op == "const":
            out = np.full((rows, k), n if param else 0, dtype=DTYPE)
        elif op == "neg":
            out = n - a
        elif op == "oplus":
            out = np.minimum(a + b, n)
        elif op == "imp":
            out = np.minimum(n - a + b, n)
        elif op == "odot":
            out = np.maximum(a + b - n, 0)
        elif op == "max":
            out = np.maximum(a, b)
        elif op == "min":
            out = np.minimum(a, b)
        elif op == "iff":
            out = n - np.abs(a - b)
        elif op == "pow":
            out = np.maximum(param * a - (param - 1) * n, 0)
        elif op in ("box", "dia"):
            out = np.empty_like(a)
            empty = n if op == "box" else 0
            reduce = np.min if op == "box" else np.max
            for w, succ in enumerate(successors):
                if not succ:
                    out[:, w] = empty
                elif len(succ) == 1:
                    out[:, w] = a[:, succ[0]]
                else:
                    out[:, w] = reduce(a[:, list(succ)], axis=1)
        else:  # pragma: no cover
            raise AssertionError(op)
        regs[i] = out
        for j in args:
            if program.last_use[j] == i:
                regs[j] = None
    return [regs[o] for o in program.outputs]


@dataclass(frozen=True)
class ValuationSpace:
    """All valuations of ``names`` on ``k`` worlds, world ``w`` restricted to
    the multiples of ``steps[w]`` in ``0..n``."""

    names: tuple[str, ...]
    k: int
    n: int
    steps: tuple[int, ...]

    @classmethod
    def uniform(cls, names, k: int, n: int) -> "ValuationSpace":
        return cls(tuple(sorted(names)), k, n, (1,) * k)

    @property
    def bases(self) -> tuple[int, ...]:
        return tuple(self.n // self.steps[w] + 1 for w in range(self.k) for _ in self.names)

    @property
    def size(self) -> int:
        total = 1
        for b in self.bases:
            total *= b
        return total

    def _strides(self) -> list[int]:
        strides, acc = [], 1
        for b in reversed(self.bases):
            strides.append(acc)
            acc *= b
        return strides[::-1]

    def decode(self, start: int, stop: int) -> dict[str, np.ndarray]:
        idx = np.arange(start, stop, dtype=DTYPE)
        out = {p: np.empty((stop - start, self.k), dtype=DTYPE) for p in self.names}
        strides, bases = self._strides(), self.bases
        s = 0
        for w in range(self.k):
            for p in self.names:
                out[p][:, w] = (idx // strides[s]) % bases[s] * self.steps[w]
                s += 1
        return out

    def decode_one(self, row: int) -> dict[tuple[str, int], Fraction]:
        """Valuation of a single row as exact truth values keyed by ``(var, world)``."""
        strides, bases = self._strides(), self.bases
        out = {}
        s = 0
        for w in range(self.k):
            for p in self.names:
                digit = (row // strides[s]) % bases[s]
                out[(p, w)] = Fraction(digit * self.steps[w], self.n)
                s += 1
        return out


@dataclass
class ScanResult:
    row: Optional[int]
    world: Optional[int]
    examined: int
    exhausted: bool


class Scanner:
    """Find the first valuation making all premises globally true while the
    target fails somewhere.  The valuation decode is cached across relations
    because the search reuses one space for every relation on ``k`` worlds."""

    def __init__(self, target: Formula, premises: Sequence[Formula], space: ValuationSpace,
                 chunk: int = DEFAULT_CHUNK, cache_rows: int = 1 << 18):
        self.program = compile_formulas([target, *premises])
        self.space = space
        self.chunk = chunk
        self._cache: Optional[dict[int, dict[str, np.ndarray]]] = {} if space.size <= cache_rows else None

    def _chunk(self, start: int, stop: int) -> dict[str, np.ndarray]:
        if self._cache is None:
            return self.space.decode(start, stop)
        hit = self._cache.get(start)
        if hit is None:
            hit = self._cache[start] = self.space.decode(start, stop)
        return hit

    def scan(self, successors: Sequence[Sequence[int]], limit: Optional[int] = None) -> ScanResult:
        total = self.space.size
        n = self.space.n
        examined = 0
        for start in range(0, total, self.chunk):
            stop = min(start + self.chunk, total)
            if limit is not None and examined + (stop - start) > limit:
                stop = start + (limit - examined)
            if stop <= start:
                return ScanResult(None, None, examined, True)
            if self.space.names:
                values = self._chunk(start, stop)
            else:
                values = {}
            target, *premises = run(self.program, values, successors, n)
            if not self.space.names:
                target = np.broadcast_to(target, (stop - start, self.space.k))
                premises = [np.broadcast_to(p, (stop - start, self.space.k)) for p in premises]
            bad = (target < n).any(axis=1)
            for p in premises:
                bad &= (p == n).all(axis=1)
            hits = np.flatnonzero(bad)
            if hits.size:
                r = int(hits[0])
                world = int(np.flatnonzero(target[r] < n)[0])
                return ScanResult(start + r, world, examined + r + 1, False)
            examined += stop - start
        exhausted = limit is not None and examined < total
        return ScanResult(None, None, examined, exhausted)


def successor_lists(k: int, pairs) -> list[list[int]]:
    succ: list[list[int]] = [[] for _ in range(k)]
    for u, v in sorted(pairs):
        succ[u].append(v)
    return succ
