import random

import pytest
from hypothesis import given

from rekit.automata import (
    Nfa, Partition, determinize, is_right_invariant, isomorphic, minimize, reverse,
)
from rekit.build import follow_automaton, pd_automaton, position_automaton
from rekit.oracle import brute_coarsest_right_invariant, equivalent_up_to
from rekit.reduction import (
    REDUCTIONS, autobisimulation, l_equiv, left_equivalence, lr_equiv, r_equiv,
)
from rekit.syntax import parse

from conftest import all_nfas, random_nfa, regexes, uniform_sample


def test_finals_without_transitions_merge():
    a = Nfa(3, "a", [(0, "a", 1), (0, "a", 2)], [0], [1, 2])
    assert autobisimulation(a) == Partition(3, [[0], [1, 2]])
    b = r_equiv(a)
    assert (b.states, b.transitions, b.finals) == (2, {(0, "a", 1)}, {1})


def test_finality_separates():
    a = Nfa(2, "a", [(0, "a", 0), (1, "a", 1)], [0], [1])
    assert autobisimulation(a) == Partition.identity(2)


def test_minimal_dfa_is_irreducible():
    d = minimize(determinize(position_automaton(parse("(a+b)*a"))))
    assert autobisimulation(d) == Partition.identity(d.states)
    assert isomorphic(r_equiv(d), d)


def test_r_equiv_merges_pd_example():
    # two copies of the same suffix behind different letters
    a = Nfa(5, "ab", [(0, "a", 1), (0, "b", 2), (1, "a", 3), (2, "a", 4)], [0], [3, 4])
    assert autobisimulation(a) == Partition(5, [[0], [1, 2], [3, 4]])


def test_left_equivalence_twins():
    # 1 and 2 are reached by the same words from the initial state
    a = Nfa(4, "ab", [(0, "a", 1), (0, "a", 2), (1, "a", 3), (2, "b", 3)], [0], [3])
    assert left_equivalence(a) == Partition(4, [[0], [1, 2], [3]])
    b = l_equiv(a)
    assert b.states == 3 and equivalent_up_to(a, b, 6)


def test_left_equivalence_of_single_word():
    d = minimize(determinize(position_automaton(parse("abc"))))
    assert left_equivalence(d) == Partition.identity(d.states)
    assert isomorphic(l_equiv(d), d)


def test_empty_automaton():
    a = Nfa(1, "a", [], [0], [])
    assert autobisimulation(a) == Partition.identity(1)


@pytest.mark.parametrize("n", [1, 2])
def test_exhaustive_against_brute_force(n):
    for a in all_nfas(n):
        assert autobisimulation(a) == brute_coarsest_right_invariant(a)


def test_random_against_brute_force():
    rng = random.Random(11)
    for _ in range(300):
        a = random_nfa(rng, rng.randint(3, 5))
        assert autobisimulation(a) == brute_coarsest_right_invariant(a)


def test_right_invariance_on_random():
    rng = random.Random(5)
    for _ in range(200):
        a = random_nfa(rng, rng.randint(1, 9), "abc")
        assert is_right_invariant(a, autobisimulation(a))
        assert is_right_invariant(reverse(a), left_equivalence(a))


@given(regexes())
def test_reductions_preserve_language_and_shrink(r):
    for a in (position_automaton(r), follow_automaton(r), pd_automaton(r)):
        sizes = {}
        for name, red in REDUCTIONS.items():
            b = red(a)
            assert equivalent_up_to(a, b, 7)
            sizes[name] = b.size
        assert sizes["r"] <= sizes["none"]
        assert sizes["lr"] <= sizes["l"] <= sizes["none"]


@given(regexes())
def test_reductions_are_idempotent(r):
    a = pd_automaton(r)
    for red in (r_equiv, l_equiv):
        once = red(a)
        assert isomorphic(red(once), once)


def test_uniform_sample_reductions(sampler2):
    for r in uniform_sample(sampler2, 25, 40, seed=9):
        a = pd_automaton(r)
        b = lr_equiv(a)
        assert b.size <= a.size
        assert equivalent_up_to(a, b, 6)
        assert is_right_invariant(a, autobisimulation(a))
