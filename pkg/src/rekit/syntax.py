"""Regular expression trees: parsing, printing, measures and rewriting.

Nodes are immutable and hashable; structural equality is the equality used
for set membership everywhere else in the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple


class RegexError(ValueError):
    """Base class for surface-syntax errors."""


class LexError(RegexError):
    def __init__(self, text: str, pos: int):
        super().__init__(f"unknown token at offset {pos}: {text[pos:pos + 8]!r}")
        self.pos = pos


class ParseError(RegexError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


class AlphabetError(RegexError):
    def __init__(self, symbol: str, pos: int):
        super().__init__(f"symbol {symbol!r} at offset {pos} is not in the alphabet")
        self.symbol = symbol
        self.pos = pos


class Regex:
    """Base class of all syntax-tree nodes."""

    __slots__ = ()
    nullable: bool
    # True iff the denoted language is empty
    empty: bool

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Regex({render(self)!r})"

    # Convenience builders, mostly for tests and interactive use.
    def __add__(self, other: Regex) -> Regex:
        return Union(self, other)

    def __matmul__(self, other: Regex) -> Regex:
        return Concat(self, other)

    def star(self) -> Regex:
        return Star(self)


def _init(node, nullable: bool, empty: bool, key) -> None:
    object.__setattr__(node, "nullable", nullable)
    object.__setattr__(node, "empty", empty)
    object.__setattr__(node, "_hash", hash(key))


_NODE = dict(frozen=True, repr=False)


@dataclass(**_NODE)
class Empty(Regex):
    nullable: bool = field(init=False, compare=False)
    empty: bool = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        _init(self, False, True, "@0")

    def __hash__(self):
        return self._hash


@dataclass(**_NODE)
class Epsilon(Regex):
    nullable: bool = field(init=False, compare=False)
    empty: bool = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        _init(self, True, False, "@e")

    def __hash__(self):
        return self._hash


@dataclass(**_NODE)
class Letter(Regex):
    symbol: str
    nullable: bool = field(init=False, compare=False)
    empty: bool = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        _init(self, False, False, ("L", self.symbol))

    def __hash__(self):
        return self._hash


@dataclass(**_NODE)
class Position(Regex):
    """A marked letter: ``symbol`` occurring at position ``index`` (1-based)."""

    symbol: str
    index: int
    nullable: bool = field(init=False, compare=False)
    empty: bool = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        _init(self, False, False, ("P", self.symbol, self.index))

    def __hash__(self):
        return self._hash


@dataclass(**_NODE)
class Union(Regex):
    left: Regex
    right: Regex
    nullable: bool = field(init=False, compare=False)
    empty: bool = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        l, r = self.left, self.right
        _init(self, l.nullable or r.nullable, l.empty and r.empty, ("+", l._hash, r._hash))

    def __hash__(self):
        return self._hash


@dataclass(**_NODE)
class Concat(Regex):
    left: Regex
    right: Regex
    nullable: bool = field(init=False, compare=False)
    empty: bool = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        l, r = self.left, self.right
        _init(self, l.nullable and r.nullable, l.empty or r.empty, (".", l._hash, r._hash))

    def __hash__(self):
        return self._hash


@dataclass(**_NODE)
class Star(Regex):
    child: Regex
    nullable: bool = field(init=False, compare=False)
    empty: bool = field(init=False, compare=False)
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        _init(self, True, False, ("*", self.child._hash))

    def __hash__(self):
        return self._hash


EMPTY = Empty()
EPSILON = Epsilon()

# Marked expressions reuse the node classes with Position leaves.
MarkedRegex = Regex


class Measures(NamedTuple):
    size: int
    alph: int
    rpn: int


# ---------------------------------------------------------------------------
# Surface syntax

_TOKEN = re.compile(r"\s*(?:(a_\d+)|([a-z])|(@e)|(@0)|([+*()]))")


def tokenize(text: str) -> Iterator[tuple[str, str, int]]:
    """Yield ``(kind, value, offset)`` triples; kind is 'sym', 'eps', 'empty' or the operator."""
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            return
        m = _TOKEN.match(text, pos)
        if m is None:
            raise LexError(text, pos)
        start = m.start(m.lastindex)
        if m.group(1) or m.group(2):
            yield "sym", m.group(m.lastindex), start
        elif m.group(3):
            yield "eps", "@e", start
        elif m.group(4):
            yield "empty", "@0", start
        else:
            op = m.group(5)
            yield op, op, start
        pos = m.end()


class _Parser:
    def __init__(self, text: str, alphabet):
        self.text = text
        self.tokens = list(tokenize(text))
        self.i = 0
        self.alphabet = None if alphabet is None else frozenset(alphabet)

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("end", "", len(self.text))

    def advance(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Regex:
        r = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos)
        return r

    def expr(self) -> Regex:
        r = self.term()
        while self.peek()[0] == "+":
            self.advance()
            r = Union(r, self.term())
        return r

    def term(self) -> Regex:
        r = self.factor()
        while self.peek()[0] in ("sym", "eps", "empty", "("):
            r = Concat(r, self.factor())
        return r

    def factor(self) -> Regex:
        r = self.atom()
        while self.peek()[0] == "*":
            self.advance()
            r = Star(r)
        return r

    def atom(self) -> Regex:
        kind, value, pos = self.advance()
        if kind == "sym":
            if self.alphabet is not None and value not in self.alphabet:
                raise AlphabetError(value, pos)
            return Letter(value)
        if kind == "eps":
            return EPSILON
        if kind == "empty":
            return EMPTY
        if kind == "(":
            r = self.expr()
            kind, value, pos = self.advance()
            if kind != ")":
                raise ParseError("expected ')'" + (f", got {value!r}" if value else ""), pos)
            return r
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {value!r}", pos)


def parse(text: str, alphabet: Iterable[str] | None = None) -> Regex:
    """Parse the surface syntax: ``+`` binds loosest, juxtaposition next, ``*`` tightest.

    ``@e`` and ``@0`` denote the empty word and the empty set. When
    ``alphabet`` is given every symbol must belong to it.
    """
    return _Parser(text, alphabet).parse()


# precedence levels for printing
_UNION, _CONCAT, _STAR = 0, 1, 2


def _prec(r: Regex) -> int:
    if isinstance(r, Union):
        return _UNION
    if isinstance(r, Concat):
        return _CONCAT
    return _STAR


def _tokens(r: Regex) -> Iterator[str]:
    # Explicit stack: generated expressions nest deeper than the recursion limit allows.
    stack: list = [r]
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            yield node
            continue
        match node:
            case Empty():
                yield "@0"
            case Epsilon():
                yield "@e"
            case Letter(symbol=s):
                yield s
            case Position(symbol=s, index=i):
                yield f"{s}{str(i).translate(_SUBSCRIPT)}"
            case Union(left=a, right=b):
                # unions parse left-associatively, so a union on the right needs parens
                stack += _group(b, _prec(b) <= _UNION)
                stack.append("+")
                stack += _group(a, False)
            case Concat(left=a, right=b):
                stack += _group(b, _prec(b) <= _CONCAT)
                stack += _group(a, _prec(a) < _CONCAT)
            case Star(child=c):
                stack.append("*")
                stack += _group(c, _prec(c) < _STAR)
            case _:
                raise TypeError(f"not a regex node: {node!r}")


_SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _group(r: Regex, paren: bool) -> list:
    # items come back in stack order (last one is printed first)
    return [")", r, "("] if paren else [r]


def render(r: Regex) -> str:
    """Print with the fewest parentheses that still parse back to ``r``."""
    return "".join(_tokens(r))


def nodes(r: Regex) -> Iterator[Regex]:
    """All nodes of ``r`` in pre-order."""
    stack = [r]
    while stack:
        node = stack.pop()
        yield node
        match node:
            case Union(left=a, right=b) | Concat(left=a, right=b):
                stack.append(b)
                stack.append(a)
            case Star(child=c):
                stack.append(c)


def measures(r: Regex) -> Measures:
    size = sum(1 for _ in _tokens(r))
    alph = rpn = 0
    for node in nodes(r):
        rpn += 1
        if isinstance(node, (Letter, Position)):
            alph += 1
    return Measures(size, alph, rpn)


def alph(r: Regex) -> int:
    return sum(1 for node in nodes(r) if isinstance(node, (Letter, Position)))


def letters(r: Regex) -> frozenset[str]:
    """The set of symbols occurring in ``r``."""
    return frozenset(n.symbol for n in nodes(r) if isinstance(n, (Letter, Position)))


def nullable(r: Regex) -> bool:
    """True iff the empty word belongs to L(r)."""
    return r.nullable


def _postorder(r: Regex, leaf, union, concat, star):
    """Fold ``r`` bottom-up without recursion."""
    out: list = []
    stack: list = [(r, False)]
    while stack:
        node, done = stack.pop()
        match node:
            case Union(left=a, right=b) | Concat(left=a, right=b):
                if done:
                    y = out.pop()
                    x = out.pop()
                    out.append((union if isinstance(node, Union) else concat)(node, x, y))
                else:
                    stack += [(node, True), (b, False), (a, False)]
            case Star(child=c):
                if done:
                    out.append(star(node, out.pop()))
                else:
                    stack += [(node, True), (c, False)]
            case _:
                out.append(leaf(node))
    return out[0]


# ---------------------------------------------------------------------------
# Reduction rules


def _reduce_union(node, a, b):
    if isinstance(a, Empty):
        return b
    if isinstance(b, Empty):
        return a
    if isinstance(a, Epsilon) and b.nullable:
        return b
    if isinstance(b, Epsilon) and a.nullable:
        return a
    if a is node.left and b is node.right:
        return node
    return Union(a, b)


def _reduce_concat(node, a, b):
    if isinstance(a, Empty) or isinstance(b, Empty):
        return EMPTY
    if isinstance(a, Epsilon):
        return b
    if isinstance(b, Epsilon):
        return a
    if a is node.left and b is node.right:
        return node
    return Concat(a, b)


def _reduce_star(node, c):
    if isinstance(c, (Empty, Epsilon)):
        return EPSILON
    if isinstance(c, Star):
        return c
    return node if c is node.child else Star(c)


def reduce(r: Regex) -> Regex:
    """Normalise ``r`` w.r.t. the ε/∅ absorption, ``ε + α`` and double-star rules.

    One post-order pass; every rewrite returns an already-reduced subtree, so
    the result is a fixed point.
    """
    return _postorder(r, lambda leaf: leaf, _reduce_union, _reduce_concat, _reduce_star)


def is_reduced(r: Regex) -> bool:
    return reduce(r) == r


# ---------------------------------------------------------------------------
# Star normal form


def is_snf(r: Regex) -> bool:
    """True iff every ``β*`` in ``r`` has β non-nullable and no last→first follow edge."""
    from .build import positional_sets

    ok = True

    def check(beta, first, last, follow):
        nonlocal ok
        if beta.nullable or any(follow.get(x, frozenset()) & first for x in last):
            ok = False

    positional_sets(mark(r), on_star=check)
    return ok


def to_snf(r: Regex) -> Regex:
    """Brüggemann-Klein's star normal form transformation.

    The result denotes the same language, has the same letters in the same
    order, and yields an isomorphic position automaton. It may contain ∅
    where an ε was stripped from under a star, e.g. ``(@e+a)*`` becomes
    ``(@0+a)*``.
    """
    # bullet(x) and circle(x) for every subtree, computed bottom-up together
    def leaf(node):
        if isinstance(node, Epsilon):
            return node, EMPTY
        return node, node

    def union(node, x, y):
        return _join(node, Union, x[0], y[0]), Union(x[1], y[1])

    def concat(node, x, y):
        bullet = _join(node, Concat, x[0], y[0])
        circle = bullet if not node.nullable else Union(x[1], y[1])
        return bullet, circle

    def star(node, x):
        circle = x[1]
        bullet = node if circle is node.child else Star(circle)
        return bullet, circle

    return _postorder(r, leaf, union, concat, star)[0]


def _join(node, cls, a, b):
    if a is node.left and b is node.right:
        return node
    return cls(a, b)


# ---------------------------------------------------------------------------
# Marking


def mark(r: Regex) -> MarkedRegex:
    """Replace the i-th letter (left to right) by ``Position(symbol, i)``."""
    counter = 0

    def leaf(node):
        nonlocal counter
        if isinstance(node, (Letter, Position)):
            counter += 1
            return Position(node.symbol, counter)
        return node

    return _postorder(
        r,
        leaf,
        lambda n, a, b: Union(a, b),
        lambda n, a, b: Concat(a, b),
        lambda n, c: Star(c),
    )


def unmark(m: MarkedRegex) -> Regex:
    def leaf(node):
        return Letter(node.symbol) if isinstance(node, Position) else node

    return _postorder(
        m,
        leaf,
        lambda n, a, b: _join(n, Union, a, b),
        lambda n, a, b: _join(n, Concat, a, b),
        lambda n, c: n if c is n.child else Star(c),
    )
