"""Regular expression to ε-free NFA constructions.

Three constructions are provided: the position automaton, the follow
automaton (as a quotient of the position automaton) and the partial
derivative automaton.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .automata import Nfa, Partition, quotient
from .syntax import (
    EPSILON, Concat, Empty, Epsilon, Letter, MarkedRegex, Position, Regex, Star,
    Union, _postorder, letters, mark, to_snf,
)

_NONE: frozenset = frozenset()


@dataclass(frozen=True)
class FollowTable:
    first: frozenset
    last: frozenset
    # position -> positions that may follow it; position 0 maps to ``first``
    follow: Mapping[int, frozenset]

    def __getitem__(self, i: int) -> frozenset:
        return self.follow.get(i, _NONE)


def positional_sets(m: MarkedRegex,
                    on_star: Callable | None = None) -> tuple[frozenset, frozenset, dict]:
    """first, last and follow of a marked expression by structural induction.

    Subexpressions denoting the empty language contribute nothing, so the
    sets agree with their definition through the marked language even when
    ∅ occurs inside ``m``. ``on_star(beta, first, last, follow)`` is called
    for every starred subexpression with the sets of its body, before the
    star's own last-to-first edges are added.
    """
    # follow sets are shared and mutated in place: each position belongs to one subtree
    def leaf(node):
        if isinstance(node, Position):
            s = frozenset([node.index])
            return s, s, {}
        if isinstance(node, Letter):
            raise TypeError("positional_sets expects a marked expression")
        return _NONE, _NONE, {}

    def union(node, x, y):
        follow = x[2]
        follow.update(y[2])
        return x[0] | y[0], x[1] | y[1], follow

    def concat(node, x, y):
        if node.empty:
            return _NONE, _NONE, {}
        first = x[0] | y[0] if node.left.nullable else x[0]
        last = x[1] | y[1] if node.right.nullable else y[1]
        follow = x[2]
        follow.update(y[2])
        for p in x[1]:
            follow[p] = follow.get(p, _NONE) | y[0]
        return first, last, follow

    def star(node, x):
        first, last, follow = x
        if on_star is not None:
            on_star(node.child, first, last, follow)
        for p in last:
            follow[p] = follow.get(p, _NONE) | first
        return first, last, follow

    return _postorder(m, leaf, union, concat, star)


def follow_table(m: MarkedRegex) -> FollowTable:
    first, last, follow = positional_sets(m)
    table = {i: s for i, s in follow.items() if s}
    if first:
        table[0] = first
    return FollowTable(first, last, table)


def _position_symbols(m: MarkedRegex) -> dict[int, str]:
    from .syntax import nodes
    return {n.index: n.symbol for n in nodes(m) if isinstance(n, Position)}


def position_automaton(r: Regex, alphabet: Iterable[str] | None = None) -> Nfa:
    """Glushkov / McNaughton-Yamada automaton: states are 0 and the positions of ``r``."""
    m = mark(r)
    table = follow_table(m)
    symbol = _position_symbols(m)
    trans = [(i, symbol[j], j) for i, js in table.follow.items() for j in js]
    finals = set(table.last)
    if r.nullable:
        finals.add(0)
    sigma = letters(r) if alphabet is None else frozenset(alphabet)
    return Nfa(len(symbol) + 1, sigma, trans, [0], finals)


def position_automaton_snf(r: Regex, alphabet: Iterable[str] | None = None) -> Nfa:
    """Position automaton computed from the star normal form of ``r``."""
    return position_automaton(to_snf(r), letters(r) if alphabet is None else alphabet)


def follow_equivalence(r: Regex) -> Partition:
    """Positions are equivalent when they agree on finality and have equal follow sets.

    Finality means membership in the final states of the position automaton,
    which includes 0 when ``r`` is nullable.
    """
    m = mark(r)
    table = follow_table(m)
    n = len(_position_symbols(m)) + 1
    finals = set(table.last) | ({0} if r.nullable else set())
    return Partition.by_key(n, lambda q: (q in finals, table[q]))


def follow_automaton(r: Regex, alphabet: Iterable[str] | None = None) -> Nfa:
    return quotient(position_automaton(r, alphabet), follow_equivalence(r))


# ---------------------------------------------------------------------------
# Partial derivatives


def _cat(t: Regex, beta: Regex) -> Regex:
    # one element of S ⊙ β, writing ε·β as β
    return beta if isinstance(t, Epsilon) else Concat(t, beta)


def sigma_derivative(r: Regex, a: str) -> frozenset:
    """Antimirov's partial derivatives of ``r`` by the letter ``a``."""
    match r:
        case Empty() | Epsilon():
            return _NONE
        case Letter(symbol=s) | Position(symbol=s):
            return frozenset([EPSILON]) if s == a else _NONE
        case Union(left=x, right=y):
            return sigma_derivative(x, a) | sigma_derivative(y, a)
        case Concat(left=x, right=y):
            out = _NONE
            if not isinstance(y, Empty):
                out = frozenset(_cat(t, y) for t in sigma_derivative(x, a))
            return out | sigma_derivative(y, a) if x.nullable else out
        case Star(child=x):
            return frozenset(_cat(t, r) for t in sigma_derivative(x, a))
    raise TypeError(f"not a regex node: {r!r}")


def word_derivative(r: Regex, word: Iterable[str]) -> frozenset:
    current = frozenset([r])
    for a in word:
        current = frozenset().union(*(sigma_derivative(t, a) for t in current))
    return current


LinearForm = tuple  # of (head letter, tail regex) pairs, duplicates removed, traversal order


def linear_form(r: Regex) -> LinearForm:
    """All pairs ``(a, t)`` with ``t`` a partial derivative of ``r`` by ``a``, in one pass."""
    def leaf(node):
        if isinstance(node, (Letter, Position)):
            return {(node.symbol, EPSILON): None}
        return {}

    def union(node, x, y):
        x.update(y)
        return x

    def concat(node, x, y):
        beta = node.right
        out = {} if isinstance(beta, Empty) else {(a, _cat(t, beta)): None for a, t in x}
        if node.left.nullable:
            out.update(y)
        return out

    def star(node, x):
        return {(a, _cat(t, node)): None for a, t in x}

    return tuple(_postorder(r, leaf, union, concat, star))


def _explore(r: Regex) -> tuple[list[Regex], list]:
    index = {r: 0}
    order = [r]
    trans = []
    stack = [r]
    while stack:
        pd = stack.pop()
        i = index[pd]
        for head, tail in linear_form(pd):
            j = index.get(tail)
            if j is None:
                j = index[tail] = len(order)
                order.append(tail)
                stack.append(tail)
            trans.append((i, head, j))
    return order, trans


def pd_automaton(r: Regex, alphabet: Iterable[str] | None = None) -> Nfa:
    """Partial derivative automaton, explored with a stack of unexpanded derivatives.

    State 0 is ``r``; further states are numbered in discovery order.
    """
    order, trans = _explore(r)
    finals = [i for i, q in enumerate(order) if q.nullable]
    sigma = letters(r) if alphabet is None else frozenset(alphabet)
    return Nfa(len(order), sigma, trans, [0], finals)


def pd_states(r: Regex) -> list[Regex]:
    """The partial derivatives labelling the states of ``pd_automaton(r)``, by state id."""
    return _explore(r)[0]


CONSTRUCTIONS = {
    "pos": position_automaton,
    "psnf": position_automaton_snf,
    "follow": follow_automaton,
    "pd": pd_automaton,
}
