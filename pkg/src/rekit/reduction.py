"""NFA reduction by the coarsest right- and left-invariant equivalences."""

from __future__ import annotations

from .automata import Nfa, Partition, quotient, reverse


def autobisimulation(a: Nfa) -> Partition:
    """The coarsest right-invariant equivalence, by naive saturation.

    Starts from the pairs that disagree on finality and keeps marking a pair
    ``(x, y)`` as distinct whenever some σ-successor of x is distinct from
    every σ-successor of y, sweeping all pairs row by row until a sweep adds
    nothing. Rows of the distinctness relation are kept as bitmasks.
    """
    n = a.states
    full = (1 << n) - 1
    fmask = 0
    for q in a.finals:
        fmask |= 1 << q
    distinct = [(full & ~fmask) if (fmask >> x) & 1 else fmask for x in range(n)]

    sigma = sorted(a.alphabet)
    succ = [[0] * len(sigma) for _ in range(n)]
    col = {s: k for k, s in enumerate(sigma)}
    for p, s, q in a.transitions:
        succ[p][col[s]] |= 1 << q
    out = [[(k, [z for z in range(n) if (m >> z) & 1]) for k, m in enumerate(row) if m]
           for row in succ]

    changed = True
    while changed:
        changed = False
        for x in range(n):
            for y in range(n):
                if (distinct[x] >> y) & 1:
                    continue
                sy = succ[y]
                if any(sy[k] & ~distinct[z] == 0 for k, zs in out[x] for z in zs):
                    distinct[x] |= 1 << y
                    distinct[y] |= 1 << x
                    changed = True
    return Partition.by_key(n, lambda q: full & ~distinct[q])


def left_equivalence(a: Nfa) -> Partition:
    """The coarsest left-invariant equivalence: ≡_R of the reversed automaton."""
    return autobisimulation(reverse(a))


def r_equiv(a: Nfa) -> Nfa:
    return quotient(a, autobisimulation(a))


def l_equiv(a: Nfa) -> Nfa:
    return quotient(a, left_equivalence(a))


def lr_equiv(a: Nfa) -> Nfa:
    return r_equiv(l_equiv(a))


REDUCTIONS = {
    "none": lambda a: a,
    "r": r_equiv,
    "l": l_equiv,
    "lr": lr_equiv,
}
