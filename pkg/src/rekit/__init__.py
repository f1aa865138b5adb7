"""Small ε-free NFAs from regular expressions, and the experiments around them."""

from .automata import (
    Dfa, Nfa, Partition, determinize, is_deterministic, is_homogeneous, isomorphic, minimize,
    quotient, reverse,
)
from .build import (
    follow_automaton, follow_equivalence, follow_table, linear_form, pd_automaton,
    position_automaton, position_automaton_snf, sigma_derivative, word_derivative,
)
from .reduction import autobisimulation, l_equiv, lr_equiv, r_equiv
from .regen import count_words, emit_dataset, re_grammar, sample_uniform
from .syntax import (
    Regex, is_reduced, is_snf, mark, measures, nullable, parse, reduce, render, to_snf, unmark,
)

__version__ = "0.1.0"
