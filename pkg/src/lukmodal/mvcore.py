"""Exact Łukasiewicz arithmetic on [0, 1] and threshold terms.

Truth values are :class:`fractions.Fraction` instances restricted to the unit
interval.  Fractions are always stored in lowest terms, so two truth values
are equal exactly when their numerators and denominators agree.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

TruthValue = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

RationalLike = Union[Fraction, int, str]


def truth_value(x: RationalLike) -> Fraction:
    """Coerce ``x`` to a truth value, rejecting anything outside [0, 1].

    Strings of the form ``"p/q"``, ``"0"`` and ``"1"`` are accepted.  Floats
    are refused on purpose: ``0.1`` has no exact binary representation.
    """
    if isinstance(x, float):
        raise TypeError("floats are not accepted as truth values; use Fraction or 'p/q'")
    if isinstance(x, bool):
        x = int(x)
    try:
        value = Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {x!r}") from exc
    if not ZERO <= value <= ONE:
        raise ValueError(f"truth value out of [0, 1]: {value}")
    return value


def neg(x: Fraction) -> Fraction:
    return ONE - x


def implies(x: Fraction, y: Fraction) -> Fraction:
    return min(ONE, ONE - x + y)


def oplus(x: Fraction, y: Fraction) -> Fraction:
    return min(x + y, ONE)


def odot(x: Fraction, y: Fraction) -> Fraction:
    return max(ZERO, x + y - ONE)


def join(x: Fraction, y: Fraction) -> Fraction:
    return max(x, y)


def meet(x: Fraction, y: Fraction) -> Fraction:
    return min(x, y)


def iff(x: Fraction, y: Fraction) -> Fraction:
    """Strong biconditional ``(x -> y) * (y -> x)``, equal to ``1 - |x - y|``."""
    return odot(implies(x, y), implies(y, x))


def power(x: Fraction, m: int) -> Fraction:
    """``x * x * ... * x`` with ``m`` factors (``m >= 1``)."""
    if m < 1:
        raise ValueError("power exponent must be >= 1")
    return max(ZERO, m * x - (m - 1))


def grid(n: int) -> list[Fraction]:
    """The finite chain ``{0, 1/n, ..., 1}`` in ascending order."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"grid index must be a positive integer, got {n!r}")
    return [Fraction(k, n) for k in range(n + 1)]


def in_grid(x: Fraction, n: int) -> bool:
    return n % Fraction(x).denominator == 0


def is_dyadic(r: Fraction) -> bool:
    d = Fraction(r).denominator
    return d & (d - 1) == 0


class Step(enum.Enum):
    DOUBLE_PLUS = "+"
    DOUBLE_TIMES = "*"

    def __call__(self, x: Fraction) -> Fraction:
        if self is Step.DOUBLE_PLUS:
            return oplus(x, x)
        return odot(x, x)


DOUBLE_PLUS = Step.DOUBLE_PLUS
DOUBLE_TIMES = Step.DOUBLE_TIMES


@dataclass(frozen=True)
class UnaryTerm:
    """A composition of the doubling maps ``x + x`` and ``x * x``.

    ``steps`` are applied left to right: ``UnaryTerm((DOUBLE_TIMES,
    DOUBLE_PLUS))`` is ``(x*x) + (x*x)``.
    """

    steps: tuple[Step, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(Step(s) for s in self.steps))

    def __call__(self, x: Fraction) -> Fraction:
        return eval_term(self, x)

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        if not self.steps:
            return "identity"
        names = {Step.DOUBLE_PLUS: "⊕-double", Step.DOUBLE_TIMES: "⊙-double"}
        return " ; ".join(names[s] for s in self.steps)

    def threshold(self) -> Fraction:
        """The least x with value 1, computed by running the steps backwards.

        ``x + x`` maps threshold ``t`` to ``t/2`` and ``x * x`` maps it to
        ``(t+1)/2``.
        """
        t = ONE
        for s in reversed(self.steps):
            t = t / 2 if s is Step.DOUBLE_PLUS else (t + 1) / 2
        return t


IDENTITY = UnaryTerm()


def eval_term(t: UnaryTerm, x: Fraction) -> Fraction:
    for s in t.steps:
        x = s(x)
    return x


def synthesize_tau(r: RationalLike) -> UnaryTerm:
    """Build a term that equals 1 exactly on ``[r, 1]``.

    ``r`` must be a dyadic rational in ``(0, 1]``.  The term is found by
    halving: below 1/2 we prepend ``x + x`` and double the threshold, above 1/2
    we prepend ``x * x`` and move the threshold to ``2r - 1``.
    """
    r = truth_value(r)
    if r == ZERO:
        raise ValueError("no doubling term has threshold 0")
    if not is_dyadic(r):
        raise ValueError(f"threshold {r} is not dyadic; use synthesize_tau_for_grid")
    steps: list[Step] = []
    while r != ONE:
        if r <= Fraction(1, 2):
            steps.append(Step.DOUBLE_PLUS)
            r = 2 * r
        else:
            steps.append(Step.DOUBLE_TIMES)
            r = 2 * r - 1
    return UnaryTerm(tuple(steps))


def dyadic_surrogate(r: RationalLike, n: int) -> Fraction:
    """A dyadic ``r'`` that splits the chain of step ``1/n`` exactly where ``r`` does.

    The admissible window is ``((k-1)/n, r]`` with ``k/n`` the least grid point
    at or above ``r``.  We truncate the binary expansion of ``r``, starting at
    precision ``1/2**b`` with ``2**b >= 2n`` and refining until the truncation
    falls inside the window.
    """
    r = truth_value(r)
    if r == ZERO:
        raise ValueError("threshold must be positive")
    if n < 1:
        raise ValueError("grid index must be positive")
    k = math.ceil(r * n)
    lower = Fraction(k - 1, n)
    bits = max(1, (2 * n - 1).bit_length())
    while True:
        scale = 1 << bits
        candidate = Fraction(math.floor(r * scale), scale)
        if candidate > lower:
            return candidate
        bits += 1


def synthesize_tau_for_grid(r: RationalLike, n: int) -> UnaryTerm:
    """Like :func:`synthesize_tau` but only exact on the points ``k/n``."""
    return synthesize_tau(dyadic_surrogate(r, n))


def threshold_table(t: UnaryTerm, points: Iterable[Fraction]) -> list[tuple[Fraction, Fraction]]:
    return [(x, eval_term(t, x)) for x in points]
