"""Finite automata over dense integer states, plus the generic algebra on them."""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class Nfa:
    """An NFA with states ``0..states-1``; several initial states are allowed."""

    states: int
    alphabet: frozenset
    transitions: frozenset
    initials: frozenset
    finals: frozenset

    def __init__(self, states: int, alphabet: Iterable[str], transitions: Iterable,
                 initials: Iterable[int] = (0,), finals: Iterable[int] = ()):
        trans = frozenset((int(p), a, int(q)) for p, a, q in transitions)
        sigma = frozenset(alphabet) | {a for _, a, _ in trans}
        object.__setattr__(self, "states", int(states))
        object.__setattr__(self, "alphabet", sigma)
        object.__setattr__(self, "transitions", trans)
        object.__setattr__(self, "initials", frozenset(initials))
        object.__setattr__(self, "finals", frozenset(finals))
        self._validate()

    def _validate(self):
        n = self.states
        if n < 0:
            raise AutomatonError("negative state count")
        for p, _, q in self.transitions:
            if not (0 <= p < n and 0 <= q < n):
                raise AutomatonError(f"transition ({p}, {q}) uses an undeclared state")
        for q in self.initials | self.finals:
            if not 0 <= q < n:
                raise AutomatonError(f"state {q} is not declared")

    @property
    def size(self) -> int:
        return self.states + len(self.transitions)

    @cached_property
    def delta(self) -> Mapping[int, Mapping[str, frozenset]]:
        """``delta[p][a]`` is the set of a-successors of p (missing keys mean none)."""
        d: dict = defaultdict(lambda: defaultdict(set))
        for p, a, q in self.transitions:
            d[p][a].add(q)
        return {p: {a: frozenset(qs) for a, qs in row.items()} for p, row in d.items()}

    def successors(self, p: int, a: str) -> frozenset:
        return self.delta.get(p, {}).get(a, frozenset())

    def step(self, current: Iterable[int], a: str) -> frozenset:
        out: set = set()
        for p in current:
            out |= self.successors(p, a)
        return frozenset(out)

    def accepts(self, word: Iterable[str]) -> bool:
        current = self.initials
        for a in word:
            current = self.step(current, a)
            if not current:
                return False
        return bool(current & self.finals)

    def __str__(self):
        return (f"Nfa(states={self.states}, initials={sorted(self.initials)}, "
                f"finals={sorted(self.finals)}, transitions={len(self.transitions)})")

    # serialisation -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "states": self.states,
            "alphabet": sorted(self.alphabet),
            "initials": sorted(self.initials),
            "finals": sorted(self.finals),
            "transitions": [list(t) for t in sorted(self.transitions)],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Nfa":
        try:
            return cls(data["states"], data.get("alphabet", ()),
                       [tuple(t) for t in data["transitions"]],
                       data["initials"], data["finals"])
        except (KeyError, TypeError) as exc:
            raise AutomatonError(f"malformed automaton: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Nfa":
        return cls.from_dict(json.loads(text))

    def to_dot(self, name: str = "A") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
        for q in range(self.states):
            shape = "doublecircle" if q in self.finals else "circle"
            lines.append(f'  {q} [shape={shape}];')
        for i, q in enumerate(sorted(self.initials)):
            lines.append(f'  _init{i} [shape=point]; _init{i} -> {q};')
        labels: dict = defaultdict(list)
        for p, a, q in sorted(self.transitions):
            labels[p, q].append(a)
        for (p, q), syms in sorted(labels.items()):
            lines.append(f'  {p} -> {q} [label="{",".join(syms)}"];')
        lines.append("}")
        return "\n".join(lines)


class Dfa(Nfa):
    """An Nfa with at most one initial state and at most one successor per (state, letter)."""

    def _validate(self):
        super()._validate()
        if not is_deterministic(self):
            raise AutomatonError("automaton is not deterministic")

    @property
    def initial(self) -> int | None:
        return next(iter(self.initials), None)

    @property
    def complete(self) -> bool:
        return len(self.transitions) == self.states * len(self.alphabet)

    def target(self, p: int, a: str) -> int | None:
        qs = self.successors(p, a)
        return next(iter(qs)) if qs else None


class Partition:
    """A set of disjoint blocks covering ``0..n-1``.

    Blocks are numbered by their smallest element, so equal partitions
    always get equal numbering.
    """

    __slots__ = ("blocks", "block_of")

    def __init__(self, n: int, blocks: Iterable[Iterable[int]]):
        ordered = sorted((frozenset(b) for b in blocks if b), key=min)
        block_of = [-1] * n
        for i, b in enumerate(ordered):
            for q in b:
                if not 0 <= q < n:
                    raise AutomatonError(f"state {q} out of range")
                if block_of[q] != -1:
                    raise AutomatonError(f"state {q} occurs in two blocks")
                block_of[q] = i
        if -1 in block_of:
            raise AutomatonError(f"partition does not cover state {block_of.index(-1)}")
        self.blocks: tuple[frozenset, ...] = tuple(ordered)
        self.block_of: tuple[int, ...] = tuple(block_of)

    @classmethod
    def by_key(cls, n: int, key) -> "Partition":
        groups: dict = defaultdict(set)
        for q in range(n):
            groups[key(q)].add(q)
        return cls(n, groups.values())

    @classmethod
    def identity(cls, n: int) -> "Partition":
        return cls(n, ([q] for q in range(n)))

    def __len__(self):
        return len(self.blocks)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return "Partition(" + ", ".join(str(sorted(b)) for b in self.blocks) + ")"

    def related(self, p: int, q: int) -> bool:
        return self.block_of[p] == self.block_of[q]

    def finer_than(self, other: "Partition") -> bool:
        """True iff every block of self lies inside a block of ``other``."""
        return all(len({other.block_of[q] for q in b}) == 1 for b in self.blocks)


# ---------------------------------------------------------------------------
# Predicates


def is_deterministic(a: Nfa) -> bool:
    if len(a.initials) > 1:
        return False
    seen = set()
    for p, s, _ in a.transitions:
        if (p, s) in seen:
            return False
        seen.add((p, s))
    return True


def is_homogeneous(a: Nfa) -> bool:
    """True iff all transitions entering a state carry the same letter."""
    label: dict = {}
    for _, s, q in a.transitions:
        if label.setdefault(q, s) != s:
            return False
    return True


def is_right_invariant(a: Nfa, e: Partition) -> bool:
    """Check the definition directly: finality respected, successor block sets agree."""
    for b in e.blocks:
        if len({q in a.finals for q in b}) > 1:
            return False
    for b in e.blocks:
        rep, *rest = sorted(b)
        for s in a.alphabet:
            target = {e.block_of[q] for q in a.successors(rep, s)}
            for p in rest:
                if {e.block_of[q] for q in a.successors(p, s)} != target:
                    return False
    return True


# ---------------------------------------------------------------------------
# Transformations


def reverse(a: Nfa) -> Nfa:
    return Nfa(a.states, a.alphabet, ((q, s, p) for p, s, q in a.transitions),
               a.finals, a.initials)


def quotient(a: Nfa, e: Partition) -> Nfa:
    """The automaton whose states are the blocks of ``e``.

    Language-preserving whenever ``e`` is right-invariant (or left-invariant);
    that is the caller's responsibility.
    """
    if len(e.block_of) != a.states:
        raise AutomatonError("partition does not cover the automaton's states")
    f = e.block_of
    return Nfa(len(e.blocks), a.alphabet,
               ((f[p], s, f[q]) for p, s, q in a.transitions),
               (f[q] for q in a.initials), (f[q] for q in a.finals))


def accessible(a: Nfa) -> frozenset:
    seen = set(a.initials)
    todo = deque(seen)
    while todo:
        p = todo.popleft()
        for qs in a.delta.get(p, {}).values():
            for q in qs:
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
    return frozenset(seen)


def coaccessible(a: Nfa) -> frozenset:
    return accessible(reverse(a))


def restrict(a: Nfa, keep: Iterable[int], cls=Nfa) -> Nfa:
    """Sub-automaton on ``keep``, renumbered in increasing state order."""
    order = sorted(keep)
    idx = {q: i for i, q in enumerate(order)}
    return cls(len(order), a.alphabet,
               ((idx[p], s, idx[q]) for p, s, q in a.transitions if p in idx and q in idx),
               (idx[q] for q in a.initials if q in idx),
               (idx[q] for q in a.finals if q in idx))


def trim(a: Nfa, cls=Nfa) -> Nfa:
    return restrict(a, accessible(a) & coaccessible(a), cls)


def determinize(a: Nfa) -> Dfa:
    """Accessible subset construction.

    No sink state is added, so the result is a partial DFA. Subsets are
    numbered in breadth-first discovery order, letters taken in sorted order.
    """
    sigma = sorted(a.alphabet)
    start = frozenset(a.initials)
    index = {start: 0}
    order = [start]
    trans = []
    todo = deque([start])
    while todo:
        subset = todo.popleft()
        i = index[subset]
        for s in sigma:
            nxt = a.step(subset, s)
            if not nxt:
                continue
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(order)
                order.append(nxt)
                todo.append(nxt)
            trans.append((i, s, j))
    finals = [i for i, subset in enumerate(order) if subset & a.finals]
    return Dfa(len(order), sigma, trans, [0], finals)


def minimize(d: Nfa) -> Dfa:
    """Minimal trimmed DFA by Hopcroft's partition refinement.

    Unreachable and dead states are removed, so the minimal DFA of the empty
    language has no states at all. States are renumbered breadth-first from
    the initial state.
    """
    if not is_deterministic(d):
        raise AutomatonError("minimize expects a deterministic automaton")
    t = trim(d)
    n = t.states
    if n == 0:
        return Dfa(0, d.alphabet, (), (), ())
    sigma = sorted(t.alphabet)
    sink = n
    # complete the automaton with a sink so refinement sees every (q, a)
    delta = [[sink] * len(sigma) for _ in range(n + 1)]
    for p, s, q in t.transitions:
        delta[p][sigma.index(s)] = q
    inverse = [[[] for _ in range(n + 1)] for _ in sigma]
    for p in range(n + 1):
        for k in range(len(sigma)):
            inverse[k][delta[p][k]].append(p)

    finals = set(t.finals)
    others = set(range(n + 1)) - finals
    blocks = [b for b in (finals, others) if b]
    where = [0] * (n + 1)
    for i, b in enumerate(blocks):
        for q in b:
            where[q] = i
    waiting = deque((i, k) for i in range(len(blocks)) for k in range(len(sigma)))
    in_waiting = set(waiting)
    while waiting:
        splitter, k = waiting.popleft()
        in_waiting.discard((splitter, k))
        pre = set()
        for q in blocks[splitter]:
            pre.update(inverse[k][q])
        touched: dict = defaultdict(set)
        for p in pre:
            touched[where[p]].add(p)
        for i, inside in touched.items():
            if len(inside) == len(blocks[i]):
                continue
            outside = blocks[i] - inside
            blocks[i] = inside
            j = len(blocks)
            blocks.append(outside)
            for q in outside:
                where[q] = j
            for kk in range(len(sigma)):
                if (i, kk) in in_waiting:
                    waiting.append((j, kk))
                    in_waiting.add((j, kk))
                else:
                    small = i if len(inside) <= len(outside) else j
                    waiting.append((small, kk))
                    in_waiting.add((small, kk))

    # renumber reachable blocks breadth-first, dropping the sink's block
    dead = where[sink]
    start = where[t.initial if isinstance(t, Dfa) else next(iter(t.initials))]
    number = {start: 0}
    todo = deque([start])
    trans = []
    while todo:
        b = todo.popleft()
        rep = next(iter(blocks[b]))
        for k, s in enumerate(sigma):
            c = where[delta[rep][k]]
            if c == dead:
                continue
            if c not in number:
                number[c] = len(number)
                todo.append(c)
            trans.append((number[b], s, number[c]))
    finals_out = [number[b] for b in number if blocks[b] & finals]
    return Dfa(len(number), d.alphabet, trans, [0], finals_out)


def state_transition_counts(a: Nfa) -> tuple[int, int]:
    """(sc, tc) of the trimmed minimal DFA equivalent to ``a``."""
    m = minimize(determinize(a))
    return m.states, len(m.transitions)


# ---------------------------------------------------------------------------
# Isomorphism


def isomorphic(a: Nfa, b: Nfa) -> bool:
    """True iff a state bijection preserves initials, finals and labelled transitions.

    Colour refinement proposes candidate images; ties are settled by
    backtracking with incremental edge checks.
    """
    if (a.states, len(a.transitions), len(a.initials), len(a.finals)) != \
            (b.states, len(b.transitions), len(b.initials), len(b.finals)):
        return False
    if {s for _, s, _ in a.transitions} != {s for _, s, _ in b.transitions}:
        return False
    ca, cb = _stable_colours(a, b)
    if sorted(ca) != sorted(cb):
        return False

    a_out = {q: defaultdict(set) for q in range(a.states)}
    b_out = {q: defaultdict(set) for q in range(b.states)}
    for p, s, q in a.transitions:
        a_out[p][q].add(s)
    for p, s, q in b.transitions:
        b_out[p][q].add(s)
    a_nbrs = defaultdict(set)
    for p, _, q in a.transitions:
        a_nbrs[p].add(q)
        a_nbrs[q].add(p)

    # visit order: breadth-first over the underlying graph so neighbours get mapped early
    order: list = []
    seen = set()
    for root in sorted(range(a.states), key=lambda q: (q not in a.initials, q)):
        if root in seen:
            continue
        seen.add(root)
        todo = deque([root])
        while todo:
            p = todo.popleft()
            order.append(p)
            for q in sorted(a_nbrs[p]):
                if q not in seen:
                    seen.add(q)
                    todo.append(q)

    by_colour = defaultdict(list)
    for q in range(b.states):
        by_colour[cb[q]].append(q)

    fwd: dict = {}
    used = set()

    def labels(out, p, q):
        return out[p].get(q, set())

    def consistent(p, img):
        for x, y in fwd.items():
            if labels(a_out, p, x) != labels(b_out, img, y):
                return False
            if labels(a_out, x, p) != labels(b_out, y, img):
                return False
        return labels(a_out, p, p) == labels(b_out, img, img)

    def extend(i):
        if i == len(order):
            return True
        p = order[i]
        for img in by_colour[ca[p]]:
            if img in used or not consistent(p, img):
                continue
            fwd[p] = img
            used.add(img)
            if extend(i + 1):
                return True
            del fwd[p]
            used.discard(img)
        return False

    return extend(0)


def _stable_colours(a: Nfa, b: Nfa) -> tuple[list, list]:
    """Joint colour refinement so colours are comparable across the two automata."""
    n = a.states
    union = Nfa(n + b.states, a.alphabet | b.alphabet,
                list(a.transitions) + [(p + n, s, q + n) for p, s, q in b.transitions],
                list(a.initials) + [q + n for q in b.initials],
                list(a.finals) + [q + n for q in b.finals])
    colour = _refine(union)
    return colour[:n], colour[n:]


def _refine(a: Nfa) -> list:
    out_edges = defaultdict(list)
    in_edges = defaultdict(list)
    for p, s, q in a.transitions:
        out_edges[p].append((s, q))
        in_edges[q].append((s, p))
    colour = _canon([(q in a.initials, q in a.finals) for q in range(a.states)])
    while True:
        sig = [
            (colour[q],
             tuple(sorted((s, colour[r]) for s, r in out_edges[q])),
             tuple(sorted((s, colour[r]) for s, r in in_edges[q])))
            for q in range(a.states)
        ]
        new = _canon(sig)
        if len(set(new)) == len(set(colour)):
            return new
        colour = new


def _canon(keys: list) -> list:
    names = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [names[k] for k in keys]
