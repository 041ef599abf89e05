"""Pi-terms (omega-terms): syntax, parsing and interpretation.

A pi-term is built from letters ``a``..``z`` by concatenation and the unary
pi-power, written ``^w`` (or ``^pi``) in the surface syntax::

    term   := factor+
    factor := letter | '(' term ')' | factor '^w' | factor '^pi'

Finite words are plain ``str`` values over the same letters.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Callable, TypeVar, Union

from .errors import ParseError, ResourceLimitError

LETTERS = frozenset("abcdefghijklmnopqrstuvwxyz")

#: default bound on the length of words produced by :func:`finite_instance`
MAX_WORD_LENGTH = 1_000_000

V = TypeVar("V")


@dataclass(frozen=True)
class Leaf:
    letter: str

    def __post_init__(self):
        if self.letter not in LETTERS:
            raise ValueError(f"not a letter: {self.letter!r}")

    def __str__(self):
        return render_term(self)


@dataclass(frozen=True)
class Concat:
    parts: tuple

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("Concat needs at least two parts")
        if any(isinstance(p, Concat) for p in self.parts):
            raise ValueError("Concat parts must be flattened; use concat()")

    def __str__(self):
        return render_term(self)


@dataclass(frozen=True)
class PiPower:
    inner: "PiTerm"

    def __str__(self):
        return render_term(self)


PiTerm = Union[Leaf, Concat, PiPower]


def concat(*terms: PiTerm) -> PiTerm:
    """Concatenate terms, flattening nested concatenations."""
    parts = []
    for t in terms:
        if isinstance(t, Concat):
            parts.extend(t.parts)
        else:
            parts.append(t)
    if not parts:
        raise ValueError("the empty term does not exist")
    if len(parts) == 1:
        return parts[0]
    return Concat(tuple(parts))


def pi(t: PiTerm) -> PiTerm:
    return PiPower(t)


def word_term(word: str) -> PiTerm:
    """The term spelling out a nonempty finite word."""
    return concat(*(Leaf(c) for c in word))


# -- parsing -----------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def term(self):
        factors = []
        while True:
            c = self.peek()
            if c in LETTERS or c == "(":
                factors.append(self.factor())
            else:
                break
        if not factors:
            what = repr(self.peek()) if self.peek() else "end of input"
            raise ParseError(f"expected a letter or '(' but found {what}", self.pos, self.text)
        return concat(*factors)

    def factor(self):
        c = self.peek()
        if c == "(":
            self.pos += 1
            inner = self.term()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos, self.text)
            self.pos += 1
            f = inner
        else:
            self.pos += 1
            f = Leaf(c)
        while self.peek() == "^":
            start = self.pos
            self.pos += 1
            if self.text.startswith("pi", self.pos):
                self.pos += 2
            elif self.text.startswith("w", self.pos):
                self.pos += 1
            else:
                raise ParseError("expected 'w' or 'pi' after '^'", start, self.text)
            f = PiPower(f)
        return f


def parse_term(text: str) -> PiTerm:
    """Parse the surface syntax, e.g. ``"(abc)^w b (abc)^w"``."""
    p = _Parser(text)
    if not p.peek():
        raise ParseError("empty term", p.pos, text)
    t = p.term()
    if p.peek():
        raise ParseError(f"unexpected {p.peek()!r}", p.pos, text)
    return t


def render_term(t: PiTerm) -> str:
    if isinstance(t, Leaf):
        return t.letter
    if isinstance(t, Concat):
        return "".join(render_term(p) for p in t.parts)
    inner = t.inner
    body = render_term(inner)
    if isinstance(inner, Concat):
        body = f"({body})"
    return body + "^w"


# -- generic interpretation --------------------------------------------------

def fold_term(t: PiTerm, leaf_map: Callable[[str], V], concat: Callable[[V, V], V],
              pi: Callable[[V], V]) -> V:
    """Evaluate ``t`` in a pi-algebra given by ``concat`` and ``pi``.

    This is the unique morphism from the free pi-algebra extending
    ``leaf_map``. ``concat`` must be associative on the values it meets.
    """
    if isinstance(t, Leaf):
        return leaf_map(t.letter)
    if isinstance(t, Concat):
        return reduce(concat, (fold_term(p, leaf_map, concat, pi) for p in t.parts))
    return pi(fold_term(t.inner, leaf_map, concat, pi))


def letters(t: PiTerm) -> frozenset:
    return fold_term(t, lambda a: frozenset(a), frozenset.union, lambda s: s)


def term_size(t: PiTerm) -> int:
    """Number of leaves plus pi-nodes (concatenation is n-ary and free)."""
    return fold_term(t, lambda a: 1, lambda x, y: x + y, lambda n: n + 1)


def pi_depth(t: PiTerm) -> int:
    return fold_term(t, lambda a: 0, max, lambda n: n + 1)


def instance_length(t: PiTerm, m: int) -> int:
    return fold_term(t, lambda a: 1, lambda x, y: x + y, lambda n: m * n)


def finite_instance(t: PiTerm, m: int, max_length: int = MAX_WORD_LENGTH) -> str:
    """The finite word obtained by reading every pi-power as the m-th power."""
    if m < 1:
        raise ValueError("m must be positive")
    n = instance_length(t, m)
    if n > max_length:
        raise ResourceLimitError(f"instance of length {n} exceeds bound {max_length}")
    return fold_term(t, lambda a: a, lambda x, y: x + y, lambda w: w * m)
