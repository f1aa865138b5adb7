import pytest
from hypothesis import given

from rekit.build import position_automaton
from rekit.automata import isomorphic
from rekit.oracle import equivalent_up_to
from rekit.syntax import (
    EMPTY, EPSILON, AlphabetError, Concat, LexError, Letter, ParseError, Position, Star, Union,
    is_reduced, is_snf, mark, measures, nodes, nullable, parse, reduce, render, to_snf, unmark,
)

from conftest import regexes

a, b, c = Letter("a"), Letter("b"), Letter("c")


@pytest.mark.parametrize("text, tree", [
    ("(a+b)*a", Concat(Star(Union(a, b)), a)),
    ("@e", EPSILON),
    ("@0", EMPTY),
    ("a(b+@e)", Concat(a, Union(b, EPSILON))),
    ("a+b+c", Union(Union(a, b), c)),
    ("abc", Concat(Concat(a, b), c)),
    ("a**", Star(Star(a))),
    (" ( a + b ) * ", Star(Union(a, b))),
    ("a_12a_3", Concat(Letter("a_12"), Letter("a_3"))),
])
def test_parse(text, tree):
    assert parse(text) == tree


@pytest.mark.parametrize("text, exc", [
    ("a&b", LexError),
    ("A", LexError),
    ("(a+b", ParseError),
    ("a+", ParseError),
    ("*a", ParseError),
    ("a)", ParseError),
    ("", ParseError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse(text)


def test_parse_error_reports_offset():
    with pytest.raises(ParseError) as info:
        parse("ab+)")
    assert info.value.pos == 3


def test_alphabet_is_enforced():
    assert parse("ab", alphabet="ab") == Concat(a, b)
    with pytest.raises(AlphabetError):
        parse("abc", alphabet="ab")


@pytest.mark.parametrize("tree, text", [
    (Concat(Star(Union(a, b)), a), "(a+b)*a"),
    (EPSILON, "@e"),
    (Star(Star(a)), "a**"),
    (Union(a, Union(b, c)), "a+(b+c)"),
    (Concat(a, Concat(b, c)), "a(bc)"),
    (Star(Concat(a, b)), "(ab)*"),
    (Concat(Union(a, b), c), "(a+b)c"),
])
def test_render(tree, text):
    assert render(tree) == text


@given(regexes("abc"))
def test_render_round_trip(r):
    assert parse(render(r)) == r


@pytest.mark.parametrize("text, size, alph, rpn", [
    ("(a+b)*a", 7, 3, 6),
    ("@e", 1, 0, 1),
    ("a*", 2, 1, 2),
    ("a+(b+c)", 7, 3, 5),
])
def test_measures(text, size, alph, rpn):
    assert measures(parse(text)) == (size, alph, rpn)


@given(regexes())
def test_measure_inequalities(r):
    # rpn <= size fails whenever concatenations outnumber parentheses ("ab": 3 > 2)
    m = measures(r)
    assert m.alph <= m.rpn
    assert m.alph <= m.size
    assert m.rpn == sum(1 for _ in nodes(r))


@pytest.mark.parametrize("text, expected", [
    ("(a+b)*a", False), ("a*", True), ("@e+a", True), ("@0", False), ("@0*", True),
])
def test_nullable(text, expected):
    assert nullable(parse(text)) is expected


@given(regexes())
def test_nullable_matches_language(r):
    assert nullable(r) == equivalent_up_to(Union(r, EPSILON), r, 4)


@pytest.mark.parametrize("tree, expected", [
    (Concat(EPSILON, a), a),
    (Concat(a, EPSILON), a),
    (Concat(a, EMPTY), EMPTY),
    (Union(EMPTY, Star(a)), Star(a)),
    (Union(EPSILON, Star(a)), Star(a)),
    (Union(Star(a), EPSILON), Star(a)),
    (Union(EPSILON, a), Union(EPSILON, a)),
    (Star(Star(a)), Star(a)),
    (Star(EMPTY), EPSILON),
    (Star(EPSILON), EPSILON),
    (Star(Union(EPSILON, Star(a))), Star(a)),
])
def test_reduce_rules(tree, expected):
    assert reduce(tree) == expected


@pytest.mark.parametrize("tree, expected", [
    (parse("(a+b)*a"), True),
    (Concat(EPSILON, a), False),
    (Union(EPSILON, a), True),
])
def test_is_reduced(tree, expected):
    assert is_reduced(tree) is expected


@given(regexes())
def test_reduce_preserves_language(r):
    assert equivalent_up_to(r, reduce(r), 8)


@given(regexes())
def test_reduce_is_idempotent_and_shrinks(r):
    once = reduce(r)
    assert reduce(once) == once
    assert is_reduced(once)
    m, m1 = measures(r), measures(once)
    assert m1.alph <= m.alph and m1.rpn <= m.rpn


@pytest.mark.parametrize("text, expected", [
    ("(a*b*)*", False), ("(a+b)*", True), ("ab", True), ("(@e+a)*", False),
    ("(a*b)*", True), ("((ab)*c)*", True), ("(a(ba)*)*", True), ("(a+b*)*", False),
])
def test_is_snf(text, expected):
    assert is_snf(parse(text)) is expected


@pytest.mark.parametrize("text, expected", [
    ("(a*b*)*", "(a+b)*"),
    ("a*", "a*"),
    ("(a+b)*a", "(a+b)*a"),
    ("(@e+a)*", "(@0+a)*"),
    ("a**", "a*"),
])
def test_to_snf(text, expected):
    assert render(to_snf(parse(text))) == expected


@given(regexes())
def test_to_snf_properties(r):
    s = to_snf(reduce(r))
    assert is_snf(s)
    assert equivalent_up_to(s, r, 8)
    assert measures(s).alph == measures(reduce(r)).alph
    assert isomorphic(position_automaton(reduce(r)), position_automaton(s))


def test_to_snf_keeps_letter_order():
    r = parse("(a*b*c)*(b+a*)*")
    assert unmark(mark(to_snf(r))) == to_snf(r)
    assert [n.symbol for n in _positions(mark(to_snf(r)))] == ["a", "b", "c", "b", "a"]


def _positions(m):
    from rekit.syntax import nodes
    return sorted((n for n in nodes(m) if isinstance(n, Position)), key=lambda p: p.index)


@pytest.mark.parametrize("text, marked", [
    ("(a+b)*a", Concat(Star(Union(Position("a", 1), Position("b", 2))), Position("a", 3))),
    ("@e", EPSILON),
    ("aa", Concat(Position("a", 1), Position("a", 2))),
])
def test_mark(text, marked):
    assert mark(parse(text)) == marked


@given(regexes("abc"))
def test_mark_round_trip(r):
    m = mark(r)
    assert unmark(m) == r
    assert [p.index for p in _positions(m)] == list(range(1, measures(r).alph + 1))
    assert mark(unmark(m)) == m


def test_deep_expressions_do_not_hit_the_recursion_limit():
    text = "a" * 5000
    r = parse(text)
    assert measures(r) == (5000, 5000, 9999)
    assert render(r) == text
    assert reduce(r) is r
