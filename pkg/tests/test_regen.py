import io
import math
import random
from collections import Counter

import pytest

from rekit.oracle import grammar_derivations
from rekit.regen import (
    LETTER, CountTable, EmptyLanguageError, GrammarError, RegexSampler, SampleRecord, Terminal,
    alphabet_for, check_record, count_words, derive_rng, emit_dataset, parse_grammar,
    re_grammar, read_dataset, sample_uniform, unrank, write_dataset,
)
from rekit.syntax import Concat, Empty, Star, measures, nodes, parse, render


def test_parse_grammar():
    g = parse_grammar('S := "a" S | SIGMA ; # tail\nT := S S ;', k=3)
    assert g.start == "S" and g.k == 3
    assert g.productions["S"] == ((Terminal("a"), "S"), (LETTER,))
    assert g.productions["T"] == (("S", "S"),)


@pytest.mark.parametrize("text", [
    'S := "a" | ;',
    'S := T ;',
    'S := "a"',
    ':= "a" ;',
    'S "a" ;',
    'S := "a" ; $',
    '',
])
def test_grammar_errors(text):
    with pytest.raises(GrammarError):
        parse_grammar(text)


def test_unit_cycle_rejected():
    g = parse_grammar('S := T | "a" ; T := S | "b" ;')
    with pytest.raises(GrammarError):
        count_words(g, 1)


def test_toy_counts():
    g = parse_grammar('S := "a" S | "b" ;')
    assert [count_words(g, n) for n in range(5)] == [0, 1, 1, 1, 1]
    g = parse_grammar('S := "a" S | "b" S | "a" | "b" ;')
    assert [count_words(g, n) for n in range(1, 6)] == [2, 4, 8, 16, 32]
    g = parse_grammar('S := SIGMA S | SIGMA ;', k=3)
    assert count_words(g, 4) == 81


def test_toy_uniformity():
    g = parse_grammar('S := "a" S | "b" S | "a" | "b" ;')
    rng = random.Random(1)
    table = CountTable(g)
    draws = Counter("".join(sample_uniform(g, 2, rng, table=table)) for _ in range(40000))
    assert set(draws) == {"aa", "ab", "ba", "bb"}
    for c in draws.values():
        assert abs(c / 40000 - 0.25) <= 0.01


def test_unrank_enumerates_every_word_once():
    g = re_grammar(2)
    table = CountTable(g)
    letters = alphabet_for(2)
    ws = ["".join(unrank(table, 5, i, letters)) for i in range(count_words(g, 5, table))]
    assert len(set(ws)) == len(ws) == 252
    with pytest.raises(IndexError):
        unrank(table, 5, 252, letters)


def test_re_grammar_counts():
    assert [count_words(re_grammar(1), n) for n in range(1, 12)] == \
        [3, 2, 5, 10, 24, 59, 151, 406, 1108, 3047, 8439]
    assert count_words(re_grammar(2), 9) == 46300


@pytest.mark.parametrize("k", [1, 2])
def test_counts_match_derivations(k):
    g = re_grammar(k)
    for n in range(1, 10):
        ds = grammar_derivations(g, n)
        assert len(ds) == len(set(ds)) == count_words(g, n)


def test_derivations_are_well_formed():
    for w in grammar_derivations(re_grammar(2), 8):
        text = "".join(w)
        r = parse(text)
        assert measures(r).size == 8
        assert render(r) == text
        assert not any(isinstance(x, Star) and isinstance(x.child, Star) for x in nodes(r))
        assert not any(isinstance(x, Concat) and (x.left.empty or x.right.empty)
                       for x in nodes(r))
        assert isinstance(r, Empty) or not r.empty


@pytest.mark.parametrize("k, n", [(1, 6), (2, 4), (1, 7)])
def test_sampler_uniformity(k, n):
    sampler = RegexSampler(k)
    support = {"".join(w) for w in grammar_derivations(sampler.grammar, n)}
    total = len(support)
    draws = 200 * total
    rng = random.Random(k * 100 + n)
    counts = Counter(sampler.text(n, rng) for _ in range(draws))
    assert set(counts) == support
    p = 1 / total
    se = math.sqrt(draws * p * (1 - p))
    assert all(abs(counts[w] - draws * p) <= 4 * se for w in support)


def test_alphabet_for():
    assert alphabet_for(3) == ["a", "b", "c"]
    assert alphabet_for(27)[0] == "a_1" and alphabet_for(27)[-1] == "a_27"


def test_large_alphabet_samples_parse():
    sampler = RegexSampler(30)
    r = sampler.sample(40, random.Random(2))
    assert measures(r).size == 40


def test_samples_respect_size_and_alphabet():
    sampler = RegexSampler(10)
    for rec in emit_dataset(10, 50, 30, seed=4, sampler=sampler):
        r = parse(rec.text, alphabet=alphabet_for(10))
        s = measures(r)
        assert s.size == 50 and s.alph <= 50
        assert check_record(rec)


def test_derive_rng_streams():
    assert derive_rng(1, "x").random() == derive_rng(1, "x").random()
    assert derive_rng(1, "x").random() != derive_rng(2, "x").random()
    assert derive_rng(1, "x", 0).random() != derive_rng(1, "x", 1).random()


def test_dataset_determinism_and_roundtrip():
    a = list(emit_dataset(3, 20, 15, seed=7))
    b = list(emit_dataset(3, 20, 15, seed=7))
    assert a == b
    assert a != list(emit_dataset(3, 20, 15, seed=8))
    # a prefix of a larger dataset is the smaller dataset
    assert list(emit_dataset(3, 20, 5, seed=7)) == a[:5]
    buf = io.StringIO()
    write_dataset(a, buf, seed=7)
    back = read_dataset(io.StringIO(buf.getvalue()))
    assert back == a and all(r.seed == 7 for r in back)
    assert SampleRecord.from_line(a[0].to_line()) == a[0]


def test_dataset_edge_cases():
    assert list(emit_dataset(2, 10, 0, seed=1)) == []
    with pytest.raises(EmptyLanguageError):
        list(emit_dataset(2, 0, 3, seed=1))
    with pytest.raises(EmptyLanguageError):
        sample_uniform(parse_grammar('S := "a" "b" ;'), 1, random.Random(0))
