"""Uniform random generation of fixed-length words of an unambiguous grammar.

Counts of derivable words per (nonterminal, length) are tabulated with
arbitrary-precision integers; a uniform index below the total count is then
unranked into a word. For an unambiguous grammar this picks every word of
the requested length with equal probability.
"""

from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

from .syntax import measures, parse


class GrammarError(ValueError):
    pass


class Terminal(NamedTuple):
    text: str


class _LetterClass:
    """The terminal standing for any one letter of the alphabet."""

    def __repr__(self):
        return "SIGMA"


LETTER = _LetterClass()

Item = str | Terminal | _LetterClass  # a str item is a nonterminal name


@dataclass
class Grammar:
    start: str
    productions: dict[str, tuple[tuple[Item, ...], ...]]
    k: int = 1  # multiplicity of the letter class

    def __post_init__(self):
        for nt, alts in self.productions.items():
            if not alts:
                raise GrammarError(f"{nt} has no alternatives")
            for alt in alts:
                if not alt:
                    raise GrammarError(f"{nt} has an empty alternative")
                for item in alt:
                    if isinstance(item, str) and item not in self.productions:
                        raise GrammarError(f"{nt} refers to undeclared nonterminal {item}")
        if self.start not in self.productions:
            raise GrammarError(f"start symbol {self.start} is not declared")
        if self.k < 1:
            raise GrammarError("letter class multiplicity must be positive")


_DSL_TOKEN = re.compile(r'\s*(?:(:=)|(\|)|(;)|"((?:[^"\\]|\\.)*)"|([A-Za-z_][A-Za-z0-9_]*))')


def parse_grammar(text: str, k: int = 1, start: str | None = None) -> Grammar:
    """Read ``NT := alt | alt ;`` rules. Terminals are double-quoted, ``SIGMA`` is the
    letter class, other identifiers are nonterminals. The first rule's head is
    the default start symbol.
    """
    text = re.sub(r"#[^\n]*", "", text)
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _DSL_TOKEN.match(text, pos)
        if m is None:
            raise GrammarError(f"bad grammar syntax at offset {pos}")
        tokens.append(m)
        pos = m.end()

    rules: dict[str, list] = {}
    i = 0
    while i < len(tokens):
        head = tokens[i].group(5)
        if head is None or head == "SIGMA" or i + 1 >= len(tokens) or not tokens[i + 1].group(1):
            raise GrammarError(f"expected 'NAME :=' at offset {tokens[i].start()}")
        i += 2
        alts: list = [[]]
        while True:
            if i >= len(tokens):
                raise GrammarError(f"rule for {head} is not terminated by ';'")
            t = tokens[i]
            i += 1
            if t.group(3):
                break
            if t.group(2):
                alts.append([])
            elif t.group(4) is not None:
                alts[-1].append(Terminal(bytes(t.group(4), "utf-8").decode("unicode_escape")))
            elif t.group(5) == "SIGMA":
                alts[-1].append(LETTER)
            elif t.group(5):
                alts[-1].append(t.group(5))
            else:
                raise GrammarError(f"unexpected ':=' at offset {t.start()}")
        rules.setdefault(head, []).extend(tuple(a) for a in alts)
    if not rules:
        raise GrammarError("empty grammar")
    return Grammar(start or next(iter(rules)), {h: tuple(a) for h, a in rules.items()}, k)


# Almost-reduced regular expressions (Lee and Shallit), start symbol S.
RE_GRAMMAR = """
S := A | C | E | SIGMA | "@e" | "@0" ;
C := C R | R R ;
R := "(" A ")" | E | SIGMA ;
E := "(" A ")" "*" | "(" C ")" "*" | SIGMA "*" ;
A := "@e" "+" X | Y "+" Z ;
X := T | T "+" X ;
T := C | SIGMA ;
Y := Z | Y "+" Z ;
Z := C | E | SIGMA ;
"""


def re_grammar(k: int) -> Grammar:
    return parse_grammar(RE_GRAMMAR, k=k, start="S")


def alphabet_for(k: int) -> list[str]:
    """``a``, ``b``, ... for up to 26 letters, ``a_1 .. a_k`` beyond that."""
    if k <= 26:
        return [chr(ord("a") + i) for i in range(k)]
    return [f"a_{i}" for i in range(1, k + 1)]


# ---------------------------------------------------------------------------
# Counting


class CountTable:
    """Number of words of each length derivable from each nonterminal.

    Levels are filled in increasing length on demand. Every item derives
    words of length at least one, so a sequence's count at length n only
    needs item counts at lengths up to n, and unit rules are resolved within
    a level by recursion (unit cycles are rejected).
    """

    def __init__(self, grammar: Grammar):
        self.grammar = grammar
        self.table: dict[str, list[int]] = {nt: [0] for nt in grammar.productions}
        self._seq: dict = {}
        self.filled = 0

    def count(self, item: Item, n: int) -> int:
        if isinstance(item, Terminal):
            return 1 if n == 1 else 0
        if item is LETTER:
            return self.grammar.k if n == 1 else 0
        if n < 0:
            return 0
        self.fill(n)
        return self.table[item][n]

    def seq(self, alt: tuple, pos: int, n: int) -> int:
        """Words of length n derivable from ``alt[pos:]``."""
        if pos == len(alt):
            return 1 if n == 0 else 0
        rest = len(alt) - pos - 1
        if n < rest + 1:
            return 0
        key = (alt, pos, n)
        hit = self._seq.get(key)
        if hit is not None:
            return hit
        if rest == 0:
            total = self.count(alt[pos], n)
        else:
            total = 0
            for j in range(1, n - rest + 1):
                c = self.count(alt[pos], j)
                if c:
                    total += c * self.seq(alt, pos + 1, n - j)
        self._seq[key] = total
        return total

    def fill(self, n: int) -> None:
        while self.filled < n:
            level = self.filled + 1
            done: dict[str, int] = {}
            for nt in self.grammar.productions:
                self._level(nt, level, done, set())
            for nt, c in done.items():
                self.table[nt].append(c)
            self.filled = level

    def _level(self, nt: str, n: int, done: dict, active: set) -> int:
        if nt in done:
            return done[nt]
        if nt in active:
            raise GrammarError(f"unit-rule cycle through {nt}")
        active.add(nt)
        total = 0
        for alt in self.grammar.productions[nt]:
            if len(alt) == 1 and isinstance(alt[0], str):
                total += self._level(alt[0], n, done, active)
            else:
                total += self.seq(alt, 0, n)
        active.discard(nt)
        done[nt] = total
        return total


def count_words(g: Grammar, n: int, table: CountTable | None = None) -> int:
    if n < 0:
        raise ValueError("length must be nonnegative")
    if n == 0:
        return 0  # no alternative derives the empty word
    return (table or CountTable(g)).count(g.start, n)


# ---------------------------------------------------------------------------
# Sampling


class EmptyLanguageError(ValueError):
    pass


def unrank(table: CountTable, n: int, index: int, letters: Sequence[str],
           symbol: str | None = None) -> list[str]:
    """The ``index``-th word of length n (0-based) in derivation order."""
    g = table.grammar
    symbol = symbol or g.start
    total = table.count(symbol, n)
    if not 0 <= index < total:
        raise IndexError(f"index {index} out of range for {total} words")
    out: list[str] = []
    stack: list = [(symbol, n, index)]
    while stack:
        item, length, idx = stack.pop()
        if isinstance(item, Terminal):
            out.append(item.text)
            continue
        if item is LETTER:
            out.append(letters[idx])
            continue
        for alt in g.productions[item]:
            c = table.seq(alt, 0, length)
            if idx < c:
                break
            idx -= c
        parts = []
        rem = length
        for pos, sub in enumerate(alt):
            if pos == len(alt) - 1:
                parts.append((sub, rem, idx))
                break
            rest_min = len(alt) - pos - 1
            for j in range(1, rem - rest_min + 1):
                here = table.count(sub, j)
                tail = table.seq(alt, pos + 1, rem - j)
                w = here * tail
                if idx < w:
                    break
                idx -= w
            parts.append((sub, j, idx // tail))
            idx %= tail
            rem -= j
        stack.extend(reversed(parts))
    return out


def sample_uniform(g: Grammar, n: int, rng: random.Random, letters: Sequence[str] | None = None,
                   table: CountTable | None = None) -> list[str]:
    """One word of length n drawn uniformly among the words of ``g`` (terminal list)."""
    table = table or CountTable(g)
    total = count_words(g, n, table)
    if total == 0:
        raise EmptyLanguageError(f"no word of length {n}")
    letters = letters if letters is not None else alphabet_for(g.k)
    return unrank(table, n, rng.randrange(total), letters)


def derive_rng(seed: int, *keys) -> random.Random:
    """An independent generator for the stream named by ``(seed, *keys)``."""
    material = repr((int(seed),) + tuple(keys)).encode()
    return random.Random(int.from_bytes(hashlib.sha256(material).digest(), "big"))


# ---------------------------------------------------------------------------
# Datasets


@dataclass(frozen=True)
class SampleRecord:
    index: int
    size: int
    k: int
    text: str
    seed: int = field(default=0, compare=False)

    def to_line(self) -> str:
        return f"{self.index}\t{self.size}\t{self.k}\t{self.text}"

    @classmethod
    def from_line(cls, line: str, seed: int = 0) -> "SampleRecord":
        index, size, k, text = line.rstrip("\n").split("\t")
        return cls(int(index), int(size), int(k), text, seed)


class RegexSampler:
    """Uniform sampler of regular expressions of a given size over k letters."""

    def __init__(self, k: int):
        self.k = k
        self.grammar = re_grammar(k)
        self.table = CountTable(self.grammar)
        self.letters = alphabet_for(k)

    def count(self, n: int) -> int:
        return count_words(self.grammar, n, self.table)

    def text(self, n: int, rng: random.Random) -> str:
        return "".join(sample_uniform(self.grammar, n, rng, self.letters, self.table))

    def sample(self, n: int, rng: random.Random):
        return parse(self.text(n, rng))


def emit_dataset(k: int, n: int, m: int, seed: int,
                 sampler: RegexSampler | None = None) -> Iterator[SampleRecord]:
    """``m`` records of size ``n``; record i uses the stream derived from (seed, k, n, i)."""
    sampler = sampler or RegexSampler(k)
    if sampler.count(n) == 0:
        raise EmptyLanguageError(f"no regular expression of size {n}")
    for i in range(m):
        text = sampler.text(n, derive_rng(seed, "gen", k, n, i))
        yield SampleRecord(i, n, k, text, seed)


def write_dataset(records, out, seed: int | None = None) -> None:
    if seed is not None:
        out.write(f"# seed={seed}\n")
    for rec in records:
        out.write(rec.to_line() + "\n")


def read_dataset(lines) -> list[SampleRecord]:
    seed = 0
    records = []
    for line in lines:
        if line.startswith("#"):
            m = re.search(r"seed=(-?\d+)", line)
            if m:
                seed = int(m.group(1))
            continue
        if line.strip():
            records.append(SampleRecord.from_line(line, seed))
    return records


def check_record(rec: SampleRecord) -> bool:
    return measures(parse(rec.text)).size == rec.size
