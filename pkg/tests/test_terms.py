import pytest
from hypothesis import given, strategies as st

from omegaterms.errors import ParseError, ResourceLimitError
from omegaterms.monoids import FiniteMonoid, eval_term
from omegaterms.terms import (Concat, Leaf, PiPower, concat, finite_instance, fold_term,
                              instance_length, letters, parse_term, pi, pi_depth, render_term,
                              term_size)

a, b, c = Leaf("a"), Leaf("b"), Leaf("c")


def terms(max_leaves=12):
    leaf = st.sampled_from("abc").map(Leaf)
    return st.recursive(
        leaf,
        lambda inner: st.one_of(inner.map(pi), st.lists(inner, min_size=2, max_size=3)
                                .map(lambda ps: concat(*ps))),
        max_leaves=max_leaves)


def test_parse_examples():
    assert parse_term("a") == a
    abc = Concat((a, b, c))
    assert parse_term("(abc)^w b (abc)^w") == Concat((PiPower(abc), b, PiPower(abc)))
    assert parse_term("a^w^w") == PiPower(PiPower(a))
    assert parse_term("a^pi") == parse_term("a^w")


def test_power_binds_tighter_than_concatenation():
    assert parse_term("ab^w") == Concat((a, PiPower(b)))


def test_redundant_parentheses_flatten():
    assert parse_term("((a)(bc))") == Concat((a, b, c))


def test_render_examples():
    assert render_term(a) == "a"
    assert render_term(PiPower(Concat((a, b)))) == "(ab)^w"
    assert render_term(Concat((PiPower(a), a))) == "a^wa"


@pytest.mark.parametrize("text, pos", [("", 0), ("a^", 1), ("(ab", 3), ("a)", 1), ("aB", 1)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_term(text)
    assert info.value.pos == pos


def test_concat_invariants():
    with pytest.raises(ValueError):
        Concat((a,))
    with pytest.raises(ValueError):
        Concat((Concat((a, b)), c))
    with pytest.raises(ValueError):
        concat()
    assert concat(concat(a, b), c) == concat(a, concat(b, c))


def test_letters():
    assert letters(parse_term("a^wa")) == {"a"}
    assert letters(parse_term("(abc)^w b (abc)^w")) == {"a", "b", "c"}
    assert letters(parse_term("(ab)^w a")) == {"a", "b"}


def test_finite_instance_examples():
    assert finite_instance(parse_term("a^wa"), 3) == "aaaa"
    assert finite_instance(parse_term("(ab)^w"), 2) == "abab"
    w = finite_instance(parse_term("(abc)^w b (abc)^w"), 7)
    assert w == "abc" * 7 + "b" + "abc" * 7
    assert len(w) == 43


def test_finite_instance_bounds():
    with pytest.raises(ValueError):
        finite_instance(a, 0)
    with pytest.raises(ResourceLimitError):
        finite_instance(parse_term("a^w^w^w"), 100, max_length=1000)


def test_fold_instances():
    t = parse_term("(ab)^w c")
    cube = fold_term(t, lambda x: x, lambda x, y: x + y, lambda w: w * 3)
    assert cube == finite_instance(t, 3)
    assert fold_term(t, lambda x: 1, lambda x, y: x + y, lambda n: n + 1) == term_size(t) == 4
    # U1 = {1, 0}: a -> 0, b -> 1 gives 0 * 1 = 0, an idempotent
    U1 = FiniteMonoid.from_table([[0, 1], [1, 1]], elements=("1", "0"))
    assert eval_term(U1, parse_term("(ab)^w"), {"a": 1, "b": 0}) == 1


def test_depth():
    assert pi_depth(parse_term("((ab)^w a)^w b")) == 2
    assert pi_depth(a) == 0


@given(terms())
def test_round_trip(t):
    assert parse_term(render_term(t)) == t


@given(terms(), st.integers(1, 8))
def test_length_law(t, m):
    def length(u):
        if isinstance(u, Leaf):
            return 1
        if isinstance(u, Concat):
            return sum(length(p) for p in u.parts)
        return m * length(u.inner)
    assert len(finite_instance(t, m)) == length(t) == instance_length(t, m)


@given(terms(6), terms(6), st.integers(1, 4))
def test_homomorphism_law(s, t, m):
    assert finite_instance(concat(s, t), m) == finite_instance(s, m) + finite_instance(t, m)
