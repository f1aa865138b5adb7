import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rekit.regen import RegexSampler, derive_rng
from rekit.syntax import EMPTY, EPSILON, Concat, Letter, Star, Union, measures

settings.register_profile(
    "default", max_examples=150, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def regexes(symbols="ab", max_leaves=12):
    """Arbitrary trees, ∅ and ε included anywhere (so mostly not reduced)."""
    leaves = st.sampled_from([EMPTY, EPSILON] + [Letter(s) for s in symbols])
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(Union, kids, kids),
            st.builds(Concat, kids, kids),
            st.builds(Star, kids),
        ),
        max_leaves=max_leaves,
    ).filter(lambda r: measures(r).rpn <= 25)


def letter_regexes(symbols="ab", max_leaves=12):
    """Trees over letters and operators only (no ∅, no ε)."""
    leaves = st.sampled_from([Letter(s) for s in symbols])
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(Union, kids, kids),
            st.builds(Concat, kids, kids),
            st.builds(Star, kids),
        ),
        max_leaves=max_leaves,
    )


@pytest.fixture(scope="session")
def sampler2():
    return RegexSampler(2)


def uniform_sample(sampler, size, count, seed):
    return [sampler.sample(size, derive_rng(seed, "test", size, i)) for i in range(count)]


def random_nfa(rng, n, symbols="ab", density=None):
    """A random NFA on n states with a single initial state 0."""
    from rekit.automata import Nfa
    density = rng.random() if density is None else density
    trans = [(p, s, q) for p in range(n) for s in symbols for q in range(n)
             if rng.random() < density]
    finals = [q for q in range(n) if rng.random() < 0.5]
    return Nfa(n, symbols, trans, [0], finals)


def all_nfas(n, symbols="ab"):
    """Every NFA on n states over ``symbols`` with initial state 0."""
    from itertools import product
    from rekit.automata import Nfa
    slots = [(p, s, q) for p in range(n) for s in symbols for q in range(n)]
    for tmask in range(1 << len(slots)):
        trans = [t for i, t in enumerate(slots) if tmask >> i & 1]
        for fbits in product((False, True), repeat=n):
            yield Nfa(n, symbols, trans, [0], [q for q in range(n) if fbits[q]])
