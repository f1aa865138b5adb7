"""Bounded ground truth: language enumeration and brute-force equivalences.

Nothing here reuses the constructions it is meant to check. Words are
tuples of symbols.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .automata import Nfa, Partition, is_right_invariant
from .syntax import Concat, Empty, Epsilon, Letter, Position, Regex, Star, Union, letters, \
    _postorder

Word = tuple


class _Codec:
    """Maps symbols to single characters so words can be plain strings internally."""

    def __init__(self, symbols: Iterable[str]):
        symbols = sorted(set(symbols))
        if all(len(s) == 1 for s in symbols):
            self.enc = {s: s for s in symbols}
        else:
            self.enc = {s: chr(0xE000 + i) for i, s in enumerate(symbols)}
        self.dec = {c: s for s, c in self.enc.items()}

    def decode(self, word: str) -> Word:
        return tuple(self.dec[c] for c in word)


def _re_strings(r: Regex, max_len: int, codec: _Codec) -> set[str]:
    # lang[k] holds the words of length exactly k
    def leaf(node):
        lang = [set() for _ in range(max_len + 1)]
        match node:
            case Epsilon():
                lang[0].add("")
            case Letter(symbol=s) | Position(symbol=s):
                if max_len >= 1:
                    lang[1].add(codec.enc[s])
        return lang

    def union(node, x, y):
        return [u | v for u, v in zip(x, y)]

    def concat(node, x, y):
        lang = [set() for _ in range(max_len + 1)]
        for i, us in enumerate(x):
            if not us:
                continue
            for j in range(max_len + 1 - i):
                vs = y[j]
                if vs:
                    lang[i + j].update(u + v for u in us for v in vs)
        return lang

    def star(node, x):
        lang = [set() for _ in range(max_len + 1)]
        lang[0].add("")
        for k in range(1, max_len + 1):
            for i in range(1, k + 1):
                if x[i] and lang[k - i]:
                    lang[k].update(u + v for u in x[i] for v in lang[k - i])
        return lang

    return set().union(*_postorder(r, leaf, union, concat, star))


def _nfa_strings(a: Nfa, max_len: int, codec: _Codec) -> set[str]:
    out = set()
    frontier = {"": frozenset(a.initials)} if a.initials else {}
    sigma = sorted(a.alphabet)
    for length in range(max_len + 1):
        nxt = {}
        for w, current in frontier.items():
            if current & a.finals:
                out.add(w)
            if length == max_len:
                continue
            for s in sigma:
                reached = a.step(current, s)
                if reached:
                    nxt[w + codec.enc[s]] = reached
        frontier = nxt
    return out


def _symbols(x) -> frozenset:
    return x.alphabet if isinstance(x, Nfa) else letters(x)


def _strings(x, max_len: int, codec: _Codec) -> set[str]:
    if isinstance(x, Nfa):
        return _nfa_strings(x, max_len, codec)
    return _re_strings(x, max_len, codec)


def enumerate_re(r: Regex, max_len: int) -> frozenset:
    """All words of L(r) of length at most ``max_len``, from the inductive semantics."""
    codec = _Codec(letters(r))
    return frozenset(codec.decode(w) for w in _re_strings(r, max_len, codec))


def enumerate_nfa(a: Nfa, max_len: int) -> frozenset:
    codec = _Codec(a.alphabet)
    return frozenset(codec.decode(w) for w in _nfa_strings(a, max_len, codec))


def equivalent_up_to(x: Regex | Nfa, y: Regex | Nfa, max_len: int) -> bool:
    codec = _Codec(_symbols(x) | _symbols(y))
    return _strings(x, max_len, codec) == _strings(y, max_len, codec)


def difference_up_to(x: Regex | Nfa, y: Regex | Nfa, max_len: int) -> tuple[set, set]:
    """Words accepted by x but not y, and by y but not x."""
    codec = _Codec(_symbols(x) | _symbols(y))
    wx, wy = _strings(x, max_len, codec), _strings(y, max_len, codec)
    return ({codec.decode(w) for w in wx - wy}, {codec.decode(w) for w in wy - wx})


# ---------------------------------------------------------------------------
# Brute-force coarsest right-invariant equivalence

BRUTE_FORCE_LIMIT = 8


def set_partitions(items: list) -> Iterator[list[list]]:
    """Every partition of ``items`` into nonempty blocks."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[head]] + part
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]


def brute_coarsest_right_invariant(a: Nfa) -> Partition:
    """Try every partition that separates finals from non-finals; keep the coarsest valid one."""
    n = a.states
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{n} states exceed the brute-force budget of {BRUTE_FORCE_LIMIT}")
    finals = sorted(a.finals)
    others = sorted(set(range(n)) - a.finals)
    valid = []
    for pf in set_partitions(finals):
        for po in set_partitions(others):
            e = Partition(n, pf + po)
            if is_right_invariant(a, e):
                valid.append(e)
    best = min(valid, key=len)
    # the join of right-invariant equivalences is right-invariant, so the coarsest is unique
    assert all(e.finer_than(best) for e in valid)
    return best


# ---------------------------------------------------------------------------
# Brute-force grammar derivations


def grammar_derivations(g, n: int, letters=None) -> list[tuple]:
    """The word of every leftmost derivation of length ``n`` in ``g``, one entry per derivation.

    Explores sentential forms directly, without any count table. Every item
    derives at least one terminal, so forms longer than n are pruned. The
    grammar must not have unit-rule cycles.
    """
    from .regen import LETTER, Terminal, alphabet_for

    letters = alphabet_for(g.k) if letters is None else letters
    out = []
    stack = [((), (g.start,))]
    while stack:
        prefix, form = stack.pop()
        if len(prefix) + len(form) > n:
            continue
        i = 0
        while i < len(form) and not isinstance(form[i], str):
            i += 1
        # expand terminals before the leftmost nonterminal
        heads = [()]
        for item in form[:i]:
            if isinstance(item, Terminal):
                heads = [h + (item.text,) for h in heads]
            else:
                heads = [h + (s,) for h in heads for s in letters]
        if i == len(form):
            if len(prefix) + i == n:
                out.extend(prefix + h for h in heads)
            continue
        rest = form[i + 1:]
        for h in heads:
            for alt in g.productions[form[i]]:
                stack.append((prefix + h, alt + rest))
    return out
