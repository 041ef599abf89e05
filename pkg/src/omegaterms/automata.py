"""Regular languages: DFAs, minimization, transition and syntactic monoids."""
from __future__ import annotations

import json
from functools import lru_cache
from collections import deque
from dataclasses import dataclass, field

from .errors import ParseError, ResourceLimitError, ValidationError
from .monoids import FiniteMonoid, eval_word

MAX_MONOID_SIZE = 5000


@dataclass(frozen=True, eq=False)
class Dfa:
    alphabet: tuple
    states: tuple
    initial: str
    finals: frozenset
    delta: dict = field(repr=False)

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValidationError(f"initial state {self.initial!r} is not a state")
        if not self.finals <= set(self.states):
            raise ValidationError("final states must be states")
        for q in self.states:
            row = self.delta.get(q)
            if row is None:
                raise ValidationError(f"no transitions for state {q!r}")
            for a in self.alphabet:
                if row.get(a) not in self.states:
                    raise ValidationError(f"transition ({q!r}, {a!r}) missing or invalid")

    @classmethod
    def build(cls, alphabet, states, initial, finals, delta):
        return cls(tuple(sorted(alphabet)), tuple(states), initial, frozenset(finals),
                   {q: dict(delta[q]) for q in states})

    def step(self, q, a):
        return self.delta[q][a]

    def run(self, word, q=None):
        q = self.initial if q is None else q
        for a in word:
            if a not in self.delta[q]:
                raise ValueError(f"letter {a!r} is not in the alphabet")
            q = self.delta[q][a]
        return q


def accepts(D: Dfa, word: str) -> bool:
    return D.run(word) in D.finals


def reachable(D: Dfa) -> list:
    order, seen = [D.initial], {D.initial}
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for a in D.alphabet:
            r = D.delta[q][a]
            if r not in seen:
                seen.add(r)
                order.append(r)
                queue.append(r)
    return order


def minimize(D: Dfa) -> Dfa:
    """Minimal equivalent DFA (Moore refinement). States are renamed q0, q1, ... in BFS order."""
    states = reachable(D)
    block = {q: int(q in D.finals) for q in states}
    while True:
        sig = {q: (block[q],) + tuple(block[D.delta[q][a]] for a in D.alphabet) for q in states}
        ids = {}
        new = {q: ids.setdefault(sig[q], len(ids)) for q in states}
        if len(ids) == len(set(block.values())):
            break
        block = new
    # rename blocks by BFS order from the initial block
    names = {}
    queue = deque([D.initial])
    rep = {}
    while queue:
        q = queue.popleft()
        b = block[q]
        if b in names:
            continue
        names[b] = f"q{len(names)}"
        rep[b] = q
        for a in D.alphabet:
            if block[D.delta[q][a]] not in names:
                queue.append(D.delta[q][a])
    delta = {names[b]: {a: names[block[D.delta[q][a]]] for a in D.alphabet} for b, q in rep.items()}
    finals = {names[b] for b, q in rep.items() if q in D.finals}
    return Dfa(D.alphabet, tuple(names.values()), names[block[D.initial]], frozenset(finals), delta)


@dataclass(frozen=True)
class MonoidMorphism:
    """Letter images in a finite monoid; extends to words by multiplication."""
    alphabet: tuple
    target: FiniteMonoid
    letter_image: dict = field(hash=False)

    def __call__(self, word: str) -> int:
        return eval_word(self.target, word, self.letter_image)


def transition_monoid(D: Dfa, max_size: int = MAX_MONOID_SIZE):
    """Monoid of state transformations generated by the letters.

    Elements are named by their shortlex-least word (identity is ``"1"``).
    """
    idx = {q: i for i, q in enumerate(D.states)}
    gens = {a: tuple(idx[D.delta[q][a]] for q in D.states) for a in D.alphabet}
    ident = tuple(range(len(D.states)))
    elems, names = [ident], ["1"]
    where = {ident: 0}
    queue = deque([(ident, "")])
    while queue:
        f, w = queue.popleft()
        for a in D.alphabet:
            g = tuple(gens[a][f[i]] for i in ident)        # read w then a
            if g not in where:
                if len(elems) >= max_size:
                    raise ResourceLimitError(f"transition monoid exceeds {max_size} elements")
                where[g] = len(elems)
                elems.append(g)
                names.append(w + a)
                queue.append((g, w + a))
    table = tuple(
        tuple(where[tuple(g[f[i]] for i in ident)] for g in elems)
        for f in elems
    )
    M = FiniteMonoid(tuple(names), 0, table)
    h = MonoidMorphism(D.alphabet, M, {a: where[gens[a]] for a in D.alphabet})
    return M, h


def syntactic_monoid(D: Dfa, max_size: int = MAX_MONOID_SIZE):
    return transition_monoid(minimize(D), max_size)


def syntactic_equivalent(D: Dfa, u: str, v: str) -> bool:
    _, h = syntactic_monoid(D)
    return h(u) == h(v)


# -- JSON --------------------------------------------------------------------

def dfa_from_json_dict(data: dict) -> Dfa:
    try:
        return Dfa.build(data["alphabet"], data["states"], data["initial"],
                         data["finals"], data["delta"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed DFA description: {exc}") from None


def dfa_to_json_dict(D: Dfa) -> dict:
    return {"alphabet": list(D.alphabet), "states": list(D.states), "initial": D.initial,
            "finals": sorted(D.finals), "delta": D.delta}


def load_dfa(path) -> Dfa:
    with open(path) as f:
        return dfa_from_json_dict(json.load(f))


# -- regular expressions -----------------------------------------------------
# AST: ("sym", a) | ("eps",) | ("empty",) | ("cat", l, r) | ("alt", l, r) | ("star", e)

class _RegexParser:
    def __init__(self, text):
        self.text = "".join(text.split())
        self.pos = 0

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def alt(self):
        e = self.cat()
        while self.peek() == "|":
            self.pos += 1
            e = ("alt", e, self.cat())
        return e

    def cat(self):
        e = None
        while self.peek() and self.peek() not in "|)":
            f = self.star()
            e = f if e is None else ("cat", e, f)
        if e is None:
            raise ParseError("empty regular expression operand", self.pos, self.text)
        return e

    def star(self):
        e = self.atom()
        while self.peek() == "*":
            self.pos += 1
            e = ("star", e)
        return e

    def atom(self):
        c = self.peek()
        self.pos += 1
        if c == "(":
            e = self.alt()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos, self.text)
            self.pos += 1
            return e
        if c == "0":
            return ("empty",)
        if c == "1":
            return ("eps",)
        if c.isascii() and c.islower():
            return ("sym", c)
        raise ParseError(f"unexpected {c!r}" if c else "unexpected end of pattern",
                         self.pos - 1, self.text)


def parse_regex(pattern: str):
    p = _RegexParser(pattern)
    e = p.alt()
    if p.peek():
        raise ParseError(f"unexpected {p.peek()!r}", p.pos, p.text)
    return e


def _regex_letters(e):
    if e[0] == "sym":
        return {e[1]}
    return set().union(*(_regex_letters(x) for x in e[1:] if isinstance(x, tuple)))


def _thompson(e, nfa):
    """Append states for ``e`` to ``nfa`` (list of (eps-targets, {letter: targets})); return (start, end)."""
    def new():
        nfa.append(([], {}))
        return len(nfa) - 1
    s, t = new(), new()
    kind = e[0]
    if kind == "sym":
        nfa[s][1].setdefault(e[1], []).append(t)
    elif kind == "eps":
        nfa[s][0].append(t)
    elif kind == "cat":
        s1, t1 = _thompson(e[1], nfa)
        s2, t2 = _thompson(e[2], nfa)
        nfa[s][0].append(s1)
        nfa[t1][0].append(s2)
        nfa[t2][0].append(t)
    elif kind == "alt":
        for sub in e[1:]:
            s1, t1 = _thompson(sub, nfa)
            nfa[s][0].append(s1)
            nfa[t1][0].append(t)
    elif kind == "star":
        s1, t1 = _thompson(e[1], nfa)
        nfa[s][0].extend([s1, t])
        nfa[t1][0].extend([s1, t])
    return s, t


def regex_to_dfa(pattern: str, alphabet=None) -> Dfa:
    """DFA for a pattern over letters, '|', '*', parentheses, '0' (empty set) and '1' (empty word).

    The alphabet defaults to the letters of the pattern, or ``{'a'}`` if it has none.
    """
    ast = parse_regex(pattern)
    sigma = sorted(set(alphabet) if alphabet else (_regex_letters(ast) or {"a"}))
    nfa = []
    start, end = _thompson(ast, nfa)

    def closure(qs):
        stack, seen = list(qs), set(qs)
        while stack:
            for r in nfa[stack.pop()][0]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    init = closure({start})
    names = {init: "d0"}
    delta = {}
    queue = deque([init])
    while queue:
        S = queue.popleft()
        delta[names[S]] = {}
        for a in sigma:
            T = closure({r for q in S for r in nfa[q][1].get(a, ())})
            if T not in names:
                names[T] = f"d{len(names)}"
                queue.append(T)
            delta[names[S]][a] = names[T]
    finals = {n for S, n in names.items() if end in S}
    return Dfa.build(sigma, list(names.values()), "d0", finals, delta)


def regex_matches(pattern_ast, word: str) -> bool:
    """Direct membership test by recursion on the pattern (independent of the DFA route)."""
    @lru_cache(maxsize=None)
    def m(e, i, j):
        kind = e[0]
        if kind == "empty":
            return False
        if kind == "eps":
            return i == j
        if kind == "sym":
            return j == i + 1 and word[i] == e[1]
        if kind == "alt":
            return m(e[1], i, j) or m(e[2], i, j)
        if kind == "cat":
            return any(m(e[1], i, k) and m(e[2], k, j) for k in range(i, j + 1))
        # star: empty, or a nonempty first chunk followed by the rest
        return i == j or any(m(e[1], i, k) and m(e, k, j) for k in range(i + 1, j + 1))

    return m(pattern_ast, 0, len(word))


#: languages whose syntactic monoids ship as fixtures: (fixture name, regex, alphabet)
SYNTACTIC_FIXTURES = (
    ("syn-contains-a", "(a|b)*a(a|b)*", "ab"),
    ("syn-a-star-b-star", "a*b*", "ab"),
    ("syn-abc-star", "(abc)*", "abc"),
    ("syn-ab-star", "(ab)*", "ab"),
)


def build_syntactic_fixtures() -> list:
    out = []
    for name, pattern, sigma in SYNTACTIC_FIXTURES:
        M, _ = syntactic_monoid(regex_to_dfa(pattern, sigma))
        out.append(FiniteMonoid(M.elements, M.identity, M.table, name))
    return out
