"""Formulas of the modal Łukasiewicz language.

The primitive constructors are :class:`Var`, :class:`Const`, :class:`Neg`,
:class:`Oplus` and :class:`Box`.  Everything else (implication, strong
conjunction, lattice connectives, diamond, powers, biconditional) is sugar:
it is kept as its own node by the parser and printer, and only rewritten into
primitives by :func:`normalize`.

Concrete syntax (ASCII, loosest binding first)::

    <->   biconditional, left-associative
    ->    implication, right-associative
    +     strong disjunction
    |     weak disjunction (max)
    &     weak conjunction (min)
    *     strong conjunction
    ~ [] <>  prefix negation, box, diamond;  atom ^ k  is a power
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Optional, Union


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class MissingMetavariable(KeyError):
    pass


class Formula:
    """Base class of all formula nodes.  Nodes are immutable and hashable."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def rebuild(self, children: tuple["Formula", ...]) -> "Formula":
        return self

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@dataclass(frozen=True)
class Const(Formula):
    """The constants 0 (falsum) and 1 (verum)."""

    value: int

    def __post_init__(self) -> None:
        if self.value not in (0, 1):
            raise ValueError("only the constants 0 and 1 exist")


@dataclass(frozen=True)
class _Unary(Formula):
    arg: Formula

    def children(self) -> tuple[Formula, ...]:
        return (self.arg,)

    def rebuild(self, children: tuple[Formula, ...]) -> Formula:
        return type(self)(children[0])


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)

    def rebuild(self, children: tuple[Formula, ...]) -> Formula:
        return type(self)(children[0], children[1])


class Neg(_Unary):
    pass


class Box(_Unary):
    pass


class Oplus(_Binary):
    pass


# derived connectives


class Diamond(_Unary):
    pass


class Implies(_Binary):
    pass


class Odot(_Binary):
    pass


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Iff(_Binary):
    pass


@dataclass(frozen=True)
class Power(Formula):
    arg: Formula
    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError("power exponent must be a positive integer")

    def children(self) -> tuple[Formula, ...]:
        return (self.arg,)

    def rebuild(self, children: tuple[Formula, ...]) -> Formula:
        return Power(children[0], self.m)


PRIMITIVE = (Var, Const, Neg, Oplus, Box)
TOP = Const(1)
BOTTOM = Const(0)


def var(name: str) -> Var:
    return Var(name)


def walk(phi: Formula) -> Iterator[Formula]:
    """Pre-order traversal over every node."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def size(phi: Formula) -> int:
    return sum(1 for _ in walk(phi))


def variables(phi: Formula) -> frozenset[str]:
    return frozenset(node.name for node in walk(phi) if isinstance(node, Var))


def modal_degree(phi: Formula) -> int:
    inner = max((modal_degree(c) for c in phi.children()), default=0)
    return inner + 1 if isinstance(phi, (Box, Diamond)) else inner


def transform(phi: Formula, f: Callable[[Formula], Formula]) -> Formula:
    """Rebuild ``phi`` bottom-up, applying ``f`` to every rebuilt node."""
    kids = phi.children()
    if kids:
        phi = phi.rebuild(tuple(transform(c, f) for c in kids))
    return f(phi)


def substitute(phi: Formula, sigma: Mapping[str, Formula]) -> Formula:
    """Simultaneous substitution of formulas for variables."""
    if isinstance(phi, Var):
        return sigma.get(phi.name, phi)
    kids = phi.children()
    if not kids:
        return phi
    return phi.rebuild(tuple(substitute(c, sigma) for c in kids))


def multiple(phi: Formula, k: int) -> Formula:
    """``phi + phi + ... + phi`` with ``k`` summands, left-associated."""
    if k < 1:
        raise ValueError("multiple needs k >= 1")
    out = phi
    for _ in range(k - 1):
        out = Oplus(out, phi)
    return out


def power(phi: Formula, m: int) -> Formula:
    """``phi ^ m``, collapsing ``m == 1`` to ``phi`` itself."""
    return phi if m == 1 else Power(phi, m)


# --- expansion of sugar -------------------------------------------------


def _expand_node(phi: Formula) -> Formula:
    # children are already primitive here
    if isinstance(phi, Implies):
        return Oplus(phi.right, Neg(phi.left))
    if isinstance(phi, Odot):
        return Neg(Oplus(Neg(phi.left), Neg(phi.right)))
    if isinstance(phi, Or):
        a, b = phi.left, phi.right
        return _expand_node(Implies(_expand_node(Implies(a, b)), b))
    if isinstance(phi, And):
        return Neg(_expand_node(Or(Neg(phi.left), Neg(phi.right))))
    if isinstance(phi, Diamond):
        return Neg(Box(Neg(phi.arg)))
    if isinstance(phi, Iff):
        a, b = phi.left, phi.right
        return _expand_node(Odot(_expand_node(Implies(a, b)), _expand_node(Implies(b, a))))
    if isinstance(phi, Power):
        out = phi.arg
        for _ in range(phi.m - 1):
            out = _expand_node(Odot(out, phi.arg))
        return out
    return phi


def normalize(phi: Formula) -> Formula:
    """Rewrite every derived connective into ``~``, ``+`` and ``[]``."""
    return transform(phi, _expand_node)


def is_primitive(phi: Formula) -> bool:
    return all(isinstance(node, PRIMITIVE) for node in walk(phi))


# --- printing ------------------------------------------------------------

_IFF, _IMPL, _PLUS, _OR, _AND, _TIMES, _UNARY, _ATOM = range(1, 9)

_BINARY_OPS: dict[type, tuple[str, int]] = {
    Iff: ("<->", _IFF),
    Implies: ("->", _IMPL),
    Oplus: ("+", _PLUS),
    Or: ("|", _OR),
    And: ("&", _AND),
    Odot: ("*", _TIMES),
}
_PREFIX_OPS: dict[type, str] = {Neg: "~", Box: "[]", Diamond: "<>"}


def _prec(phi: Formula) -> int:
    if isinstance(phi, (Var, Const)):
        return _ATOM
    if isinstance(phi, _Binary):
        return _BINARY_OPS[type(phi)][1]
    return _UNARY


def to_text(phi: Formula) -> str:
    """Render ``phi`` with the fewest parentheses that parse back to ``phi``."""
    return _render(phi, 0)


def _render(phi: Formula, context: int) -> str:
    text = _render_bare(phi)
    return f"({text})" if _prec(phi) < context else text


def _render_bare(phi: Formula) -> str:
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, Const):
        return str(phi.value)
    if isinstance(phi, Power):
        return f"{_render(phi.arg, _ATOM)}^{phi.m}"
    if isinstance(phi, _Unary):
        return _PREFIX_OPS[type(phi)] + _render(phi.arg, _UNARY)
    symbol, level = _BINARY_OPS[type(phi)]
    if isinstance(phi, Implies):
        left, right = _render(phi.left, level + 1), _render(phi.right, level)
    else:
        left, right = _render(phi.left, level), _render(phi.right, level + 1)
    return f"{left} {symbol} {right}"


# --- parsing -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><->|->|<>|\[\s*\]|[+*&|~^()]|[¬⊕⊙∧∨→↔□◇])
  | (?P<ident>[a-z][a-zA-Z0-9_]*)
  | (?P<num>[0-9]+)
    """,
    re.VERBOSE,
)

_UNICODE_OPS = {
    "¬": "~", "⊕": "+", "⊙": "*", "∧": "&", "∨": "|",
    "→": "->", "↔": "<->", "□": "[]", "◇": "<>",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if m is None:
            raise FormulaSyntaxError(f"unknown token {text[pos]!r}", line, column)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "op":
            lexeme = _UNICODE_OPS.get(lexeme, lexeme)
            if lexeme.startswith("["):
                lexeme = "[]"
        if kind != "ws":
            tokens.append(_Token(kind, lexeme, line, column))
        for i, ch in enumerate(lexeme if kind == "ws" else ""):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    # (symbol, constructor) per level, loosest first; all left-associative
    _SUM_LEVELS = [("+", Oplus), ("|", Or), ("&", And), ("*", Odot)]

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            self.i += 1
            return True
        return False

    def fail(self, message: str) -> FormulaSyntaxError:
        tok = self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return FormulaSyntaxError(f"{message}, found {found}", tok.line, tok.column)

    def parse(self) -> Formula:
        phi = self.iff()
        if self.peek().kind != "eof":
            raise self.fail("expected end of formula")
        return phi

    def iff(self) -> Formula:
        phi = self.impl()
        while self.accept("<->"):
            phi = Iff(phi, self.impl())
        return phi

    def impl(self) -> Formula:
        phi = self.sum(0)
        if self.accept("->"):
            return Implies(phi, self.impl())
        return phi

    def sum(self, level: int) -> Formula:
        if level == len(self._SUM_LEVELS):
            return self.unary()
        symbol, ctor = self._SUM_LEVELS[level]
        phi = self.sum(level + 1)
        while self.accept(symbol):
            phi = ctor(phi, self.sum(level + 1))
        return phi

    def unary(self) -> Formula:
        for symbol, ctor in (("~", Neg), ("[]", Box), ("<>", Diamond)):
            if self.accept(symbol):
                return ctor(self.unary())
        phi = self.atom()
        if self.accept("^"):
            tok = self.peek()
            if tok.kind != "num" or int(tok.text) < 1:
                raise self.fail("expected a positive exponent")
            self.i += 1
            return Power(phi, int(tok.text))
        return phi

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "ident":
            self.i += 1
            return Var(tok.text)
        if tok.kind == "num":
            if tok.text not in ("0", "1"):
                raise self.fail("only the constants 0 and 1 are allowed")
            self.i += 1
            return Const(int(tok.text))
        if self.accept("("):
            phi = self.iff()
            if not self.accept(")"):
                raise self.fail("expected ')'")
            return phi
        raise self.fail("expected a formula")


def parse(text: str) -> Formula:
    """Parse concrete syntax into a formula tree (sugar nodes preserved)."""
    return _Parser(text).parse()


# --- axiom schemas ---------------------------------------------------------


@dataclass(frozen=True)
class AxiomId:
    name: str
    param: Optional[int] = None

    def __str__(self) -> str:
        return self.name if self.param is None else f"{self.name}({self.param})"


LUK1 = AxiomId("LUK1")
LUK2 = AxiomId("LUK2")
LUK3 = AxiomId("LUK3")
LUK4 = AxiomId("LUK4")
K = AxiomId("K")
BOX_OPLUS = AxiomId("BOX_OPLUS")
BOX_ODOT = AxiomId("BOX_ODOT")


def BOX_IDEMPOTENT(m: int) -> AxiomId:  # noqa: N802
    if m < 1:
        raise ValueError("m must be a positive integer")
    return AxiomId("BOX_IDEMPOTENT", m)


def MVN_BASE(n: int) -> AxiomId:  # noqa: N802
    if n < 1:
        raise ValueError("n must be a positive integer")
    return AxiomId("MVN_BASE", n)


_p, _q, _r = Var("p"), Var("q"), Var("r")


def _mvn_base(n: int) -> Formula:
    # n.p = (n+1).p bounds chains to n+1 elements; the (j p^(j-1))^n = n.p^j
    # equations for 1 < j < n, j not dividing n, drop the chains of length j+1.
    phi: Formula = Iff(multiple(_p, n), multiple(_p, n + 1))
    for j in range(2, n):
        if n % j:
            phi = And(phi, Iff(power(multiple(power(_p, j - 1), j), n), multiple(power(_p, j), n)))
    return phi


def axiom_schema(axiom: AxiomId) -> Formula:
    """The schema formula, with metavariables ``p``, ``q`` and ``r``."""
    name, m = axiom.name, axiom.param
    if name == "LUK1":
        return Implies(_p, Implies(_q, _p))
    if name == "LUK2":
        return Implies(Implies(_p, _q), Implies(Implies(_q, _r), Implies(_p, _r)))
    if name == "LUK3":
        return Implies(Implies(Implies(_p, _q), _q), Implies(Implies(_q, _p), _p))
    if name == "LUK4":
        return Implies(Implies(Neg(_p), Neg(_q)), Implies(_q, _p))
    if name == "K":
        return Implies(Box(Implies(_p, _q)), Implies(Box(_p), Box(_q)))
    if name == "BOX_OPLUS":
        return Iff(Box(Oplus(_p, _p)), Oplus(Box(_p), Box(_p)))
    if name == "BOX_ODOT":
        return Iff(Box(Odot(_p, _p)), Odot(Box(_p), Box(_p)))
    if name == "BOX_IDEMPOTENT" and m is not None:
        return Iff(Box(Oplus(_p, power(_p, m))), Oplus(Box(_p), power(Box(_p), m)))
    if name == "MVN_BASE" and m is not None:
        return _mvn_base(m)
    raise ValueError(f"unknown axiom schema {axiom}")


def metavariables(axiom: AxiomId) -> frozenset[str]:
    return variables(axiom_schema(axiom))


def instantiate_axiom(axiom: AxiomId, sigma: Optional[Mapping[str, Union[Formula, str]]] = None) -> Formula:
    """Instantiate a schema.  ``sigma`` must cover every metavariable; omit it
    to get the schema itself.  String values are parsed."""
    schema = axiom_schema(axiom)
    if sigma is None:
        return schema
    needed = metavariables(axiom)
    missing = needed - set(sigma)
    if missing:
        raise MissingMetavariable(f"{axiom} needs a substitution for {sorted(missing)}")
    extra = set(sigma) - needed
    if extra:
        raise ValueError(f"{axiom} has no metavariables {sorted(extra)}")
    resolved = {k: parse(v) if isinstance(v, str) else v for k, v in sigma.items()}
    return substitute(schema, resolved)


def core_axioms(max_m: int = 3) -> list[AxiomId]:
    """Every schema of the minimal modal many-valued logic, the idempotent
    family truncated at ``max_m``."""
    return [LUK1, LUK2, LUK3, LUK4, K, BOX_OPLUS, BOX_ODOT] + [
        BOX_IDEMPOTENT(m) for m in range(1, max_m + 1)
    ]
