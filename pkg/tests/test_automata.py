import itertools
import json
import random

import pytest

from omegaterms.automata import (Dfa, accepts, dfa_to_json_dict, load_dfa, minimize,
                                 parse_regex, regex_matches, regex_to_dfa, syntactic_equivalent,
                                 syntactic_monoid, transition_monoid)
from omegaterms.errors import ParseError, ResourceLimitError, ValidationError
from omegaterms.monoids import identity_holds, in_DA, is_aperiodic, validate


def words(alphabet, max_len):
    for n in range(max_len + 1):
        for w in itertools.product(alphabet, repeat=n):
            yield "".join(w)


def syntactic_classes(pattern, alphabet, max_len=4, ctx_len=3):
    """Number of syntactic classes among words of length <= max_len, via contexts."""
    ast = parse_regex(pattern)
    contexts = [(x, y) for x in words(alphabet, ctx_len) for y in words(alphabet, ctx_len)]
    sigs = {tuple(regex_matches(ast, x + w + y) for x, y in contexts)
            for w in words(alphabet, max_len)}
    return len(sigs)


@pytest.mark.parametrize("pattern, sigma", [
    ("(ab)*", "ab"), ("(abc)*", "abc"), ("(a|b)*a(a|b)*", "ab"), ("a*b*", "ab"),
    ("(a|b)*abb", "ab"), ("1", "a"), ("0", "ab"), ("(aa)*", "a"), ("a(b|c)*|c", "abc"),
])
def test_regex_to_dfa_matches_recursive_matcher(pattern, sigma):
    D = regex_to_dfa(pattern, sigma)
    ast = parse_regex(pattern)
    for w in words(sigma, 6 if len(sigma) < 3 else 4):
        assert accepts(D, w) == regex_matches(ast, w), w


@pytest.mark.parametrize("pattern, sigma, order", [
    ("(ab)*", "ab", 6), ("(a|b)*a(a|b)*", "ab", 2), ("1", "a", 2), ("(abc)*", "abc", 11),
    ("a*b*", "ab", 5),
])
def test_syntactic_monoid_orders(pattern, sigma, order):
    M, h = syntactic_monoid(regex_to_dfa(pattern, sigma))
    validate(M)
    assert M.size == order
    assert syntactic_classes(pattern, sigma) == order


def test_syntactic_flags():
    Mab, _ = syntactic_monoid(regex_to_dfa("(ab)*"))
    assert is_aperiodic(Mab) and not in_DA(Mab)
    Ma, _ = syntactic_monoid(regex_to_dfa("(a|b)*a(a|b)*"))
    assert is_aperiodic(Ma) and in_DA(Ma)
    Maa, _ = syntactic_monoid(regex_to_dfa("(aa)*"))
    assert not is_aperiodic(Maa)


def test_morphism_recognizes_language():
    D = regex_to_dfa("(ab)*")
    M, h = syntactic_monoid(D)
    accepting = {h(w) for w in words("ab", 6) if accepts(D, w)}
    for w in words("ab", 7):
        assert (h(w) in accepting) == accepts(D, w)
    assert h("abab") == h("ab") and h("aa") == h("bb")
    assert syntactic_equivalent(D, "aba", "a") and not syntactic_equivalent(D, "ab", "ba")


def random_dfa(rnd, n, sigma="ab"):
    states = [f"s{i}" for i in range(n)]
    finals = [q for q in states if rnd.random() < 0.4]
    delta = {q: {a: rnd.choice(states) for a in sigma} for q in states}
    return Dfa.build(sigma, states, "s0", finals, delta)


def test_minimize_preserves_language_and_is_minimal():
    rnd = random.Random(7)
    for _ in range(60):
        D = random_dfa(rnd, rnd.randint(1, 6))
        m = minimize(D)
        for w in words("ab", 6):
            assert accepts(D, w) == accepts(m, w)
        # Myhill-Nerode: states of the minimal DFA = distinct residuals (probed to length 6)
        residuals = {tuple(accepts(D, u + w) for w in words("ab", 6)) for u in words("ab", 6)}
        assert len(m.states) == len(residuals)


def test_transition_monoid_is_a_monoid():
    rnd = random.Random(3)
    for _ in range(20):
        M, h = transition_monoid(random_dfa(rnd, rnd.randint(1, 4)))
        validate(M)
        assert M.elements[M.identity] == "1"
        # every element is named by a word that maps to it
        for i, name in enumerate(M.elements):
            assert h("" if name == "1" else name) == i


def test_transition_monoid_budget():
    with pytest.raises(ResourceLimitError):
        transition_monoid(regex_to_dfa("(a|b)*a(a|b)(a|b)(a|b)"), max_size=10)


def test_dfa_validation_and_json(tmp_path):
    with pytest.raises(ValidationError):
        Dfa.build("a", ["p"], "q", [], {"p": {"a": "p"}})
    with pytest.raises(ValidationError):
        Dfa.build("ab", ["p"], "p", [], {"p": {"a": "p"}})
    D = regex_to_dfa("a*b")
    path = tmp_path / "d.json"
    path.write_text(json.dumps(dfa_to_json_dict(D)))
    E = load_dfa(path)
    assert all(accepts(D, w) == accepts(E, w) for w in words("ab", 5))
    with pytest.raises(ValueError):
        D.run("c")


@pytest.mark.parametrize("bad", ["(ab", "a|", "*a", "aB", ")"])
def test_regex_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_regex(bad)


def test_abc_star_is_aperiodic_but_not_da():
    M, h = syntactic_monoid(regex_to_dfa("(abc)*"))
    check = identity_holds(M, "(abc)^wb(abc)^w", "(abc)^w")
    assert not check.holds
    assert is_aperiodic(M)


def test_stored_fixtures_match_regeneration():
    from omegaterms.automata import build_syntactic_fixtures
    from omegaterms.monoids import fixture, to_json_dict
    for M in build_syntactic_fixtures():
        assert to_json_dict(fixture(M.name)) == to_json_dict(M)


def test_minimize_on_random_long_words():
    rnd = random.Random(8)
    for _ in range(20):
        D = random_dfa(rnd, rnd.randint(2, 7))
        m = minimize(D)
        for _ in range(1000):
            w = "".join(rnd.choice("ab") for _ in range(rnd.randint(0, 20)))
            assert accepts(D, w) == accepts(m, w)


def test_syntactic_equivalence_respects_contexts():
    rnd = random.Random(9)
    rw = lambda k: "".join(rnd.choice("ab") for _ in range(rnd.randint(0, k)))
    for pattern in ("(ab)*", "(a|b)*a(a|b)*", "a*b*", "(a|b)*abb"):
        D = regex_to_dfa(pattern, "ab")
        for _ in range(30):
            u, v = rw(4), rw(4)
            if syntactic_equivalent(D, u, v):
                for _ in range(200):
                    x, y = rw(4), rw(4)
                    assert accepts(D, x + u + y) == accepts(D, x + v + y)


def test_syntactic_order_bound():
    rnd = random.Random(10)
    for _ in range(30):
        m = minimize(random_dfa(rnd, rnd.randint(1, 5)))
        M, _ = syntactic_monoid(m)
        n = len(m.states)
        assert M.size <= n ** n


def test_regex_examples_long_words():
    D = regex_to_dfa("a(a|b)*", "ab")
    assert not accepts(D, "") and not accepts(D, "b") and not accepts(D, "bab")
    ast = parse_regex("(a|b)*a(a|b)")
    D = regex_to_dfa("(a|b)*a(a|b)")
    for w in words("ab", 8):
        assert accepts(D, w) == regex_matches(ast, w)
