import itertools
import random

import pytest

from omegaterms.errors import ParseError, UnboundVariableError, ValidationError
from omegaterms.logic import (BOT, EMPTY, TOP, And, Eq, Exists, Forall, FragmentSpec, Lab, Le, Lt,
                              Max, Min, Not, Or, Suc, Valuation, fragment_member, free_vars,
                              literals, models, parse_formula, parse_fragment, qd, render_formula,
                              variables)

F = parse_formula


def test_qd_examples():
    assert qd(F("lab(x)=a")) == 0
    assert qd(F("E x. E y. x<y & lab(x)=a & lab(y)=b")) == 2
    assert qd(F("(E x. lab(x)=a) | A y. lab(y)=b")) == 1


def test_free_vars_examples():
    assert free_vars(F("lab(x)=a")) == {"x"}
    assert free_vars(F("E x. lab(x)=a")) == set()
    assert free_vars(F("E x. x<y")) == {"y"}


def test_models_examples():
    assert models(Valuation("ab", {"x": 1}), F("lab(x)=a"))
    assert models(Valuation(""), EMPTY)
    assert models(Valuation("ab", {"x": 1, "y": 2}), F("suc(x,y)"))
    assert not models(Valuation("ab", {"x": 2, "y": 1}), F("suc(x,y)"))
    assert models("ab", F("E x. min(x) & lab(x)=a"))
    assert models("ab", F("A x. max(x) | E y. x<y"))


def test_models_requires_bound_variables():
    with pytest.raises(UnboundVariableError):
        models(Valuation("ab"), F("lab(x)=a"))


def test_valuation_positions_checked():
    with pytest.raises(ValidationError):
        Valuation("ab", {"x": 3})
    v = Valuation("ab", {"x": 1}).repl("y", 2)
    assert v.env == {"x": 1, "y": 2} and v.restrict({"y"}).env == {"y": 2}


def test_parse_examples():
    assert F("E x. lab(x)=a") == Exists("x", Lab("x", "a"))
    assert F("A x. E y. x<y") == Forall("x", Exists("y", Lt("x", "y")))
    assert F("~E x. T") == Not(Exists("x", TOP))
    assert F("x<=y & x=y | suc(x,y) & min(x) & max(y) | F | empty") == Or((
        And((Le("x", "y"), Eq("x", "y"))),
        And((Suc("x", "y"), Min("x"), Max("y"))), BOT, EMPTY))


@pytest.mark.parametrize("bad", ["", "E x lab(x)=a", "lab(x)=ab", "x <", "E T. T", "(T", "T T", "x # y"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_formula(bad)


# -- random formulas and an independent evaluator ------------------------------------

def random_formula(rnd, depth, xs=("x", "y"), letters="ab"):
    if depth == 0 or rnd.random() < 0.25:
        x, y = rnd.choice(xs), rnd.choice(xs)
        return rnd.choice([TOP, BOT, EMPTY, Eq(x, y), Lt(x, y), Le(x, y), Suc(x, y), Min(x),
                           Max(x), Lab(x, rnd.choice(letters))])
    r = rnd.random()
    if r < 0.2:
        return Not(random_formula(rnd, depth, xs, letters))
    if r < 0.45:
        cls = And if rnd.random() < 0.5 else Or
        return cls((random_formula(rnd, depth - 1, xs, letters),
                    random_formula(rnd, depth - 1, xs, letters)))
    q = Exists if rnd.random() < 0.5 else Forall
    return q(rnd.choice(xs), random_formula(rnd, depth - 1, xs, letters))


def satisfying(word, phi, xs):
    """All total assignments of ``xs`` (positions 1..n) satisfying phi, as a set of tuples."""
    n = len(word)
    every = set(itertools.product(range(1, n + 1), repeat=len(xs)))
    idx = {x: i for i, x in enumerate(xs)}

    def go(f):
        if isinstance(f, Not):
            return every - go(f.body)
        if isinstance(f, And):
            return set.intersection(*(go(p) for p in f.parts))
        if isinstance(f, Or):
            return set.union(*(go(p) for p in f.parts))
        if isinstance(f, (Exists, Forall)):
            inner = go(f.body)
            i = idx[f.var]
            out = set()
            for t in every:
                images = [t[:i] + (p,) + t[i + 1:] in inner for p in range(1, n + 1)]
                if (any if isinstance(f, Exists) else all)(images):
                    out.add(t)
            return out
        def atom(t):
            pos = lambda v: t[idx[v]]
            if f == TOP:
                return True
            if f == BOT:
                return False
            if f == EMPTY:
                return n == 0
            if isinstance(f, Lab):
                return word[pos(f.x) - 1] == f.a
            if isinstance(f, Min):
                return pos(f.x) == 1
            if isinstance(f, Max):
                return pos(f.x) == n
            p, q = pos(f.x), pos(f.y)
            return {Eq: p == q, Lt: p < q, Le: p <= q, Suc: q == p + 1}[type(f)]
        return {t for t in every if atom(t)}

    return go(phi)


def test_models_agrees_with_relational_evaluator():
    rnd = random.Random(1)
    xs = ("x", "y")
    for _ in range(400):
        phi = random_formula(rnd, 2)
        for n in range(0, 6):
            word = "".join(rnd.choice("ab") for _ in range(n))
            sat = satisfying(word, phi, xs)
            for t in itertools.product(range(1, n + 1), repeat=2):
                assert models(Valuation(word, dict(zip(xs, t))), phi) == (t in sat)


def test_sentence_truth_ignores_bookkeeping():
    rnd = random.Random(2)
    for _ in range(200):
        phi = Exists("x", Forall("y", random_formula(rnd, 1)))
        word = "".join(rnd.choice("ab") for _ in range(rnd.randint(0, 4)))
        base = models(word, phi)
        if word:
            assert models(Valuation(word, {"x": 1, "y": len(word)}), phi) == base


def test_render_round_trip():
    rnd = random.Random(3)
    for _ in range(500):
        phi = random_formula(rnd, 3)
        assert parse_formula(render_formula(phi)) == phi


# -- fragments ---------------------------------------------------------------------

def test_fragment_closure_conditions():
    with pytest.raises(ValidationError):
        FragmentSpec(2, {"suc"})
    with pytest.raises(ValidationError):
        FragmentSpec(2, {"min"})
    with pytest.raises(ValidationError):
        FragmentSpec(2, {"<"}, order_stable=True)
    with pytest.raises(ValidationError):
        FragmentSpec(2, {"<"}, negation_closed=True, quantifiers={"E", "A"})
    FragmentSpec(2, {"suc", "=", "min", "max", "empty"})
    FragmentSpec(2, {"<", "<="}, order_stable=True)


def test_parse_fragment():
    f = parse_fragment("FO[<,lab]:depth=2")
    assert (f.depth, f.var_budget, f.predicates, f.negation_closed) == (2, None, {"<", "lab"}, True)
    g = parse_fragment("FO2[<,<=,lab,=]:depth=3")
    assert g.var_budget == 2 and g.predicates == {"<", "<=", "lab", "="}
    h = parse_fragment("FO[<]:depth=1:neg=no")
    assert h.quantifiers == {"E", "A"} and not h.negation_closed
    assert parse_fragment(str(h)) == h and parse_fragment(str(g)) == g
    for bad in ["FO[<]", "FO[suc]:depth=1", "XO[<]:depth=1", "FO[<]:depth=1:foo=2", "FO[#]:depth=1"]:
        with pytest.raises(ParseError):
            parse_fragment(bad)


def test_fragment_member_examples():
    fo2 = parse_fragment("FO[<,lab]:depth=2")
    assert fragment_member(fo2, F("E x. E y. x<y & lab(x)=a & lab(y)=b"))
    assert not fragment_member(fo2, F("E x. E y. suc(x,y)"))
    two_vars = parse_fragment("FO2[<,<=,lab]:depth=3")
    phi = F("E x1. E x2. x1<x2 & E x1. x2<=x1")
    assert fragment_member(two_vars, phi)
    assert not fragment_member(two_vars, F("E x. E y. E z. x<y & y<z"))
    assert not fragment_member(fo2, F("E x. E y. E z. x<y & y<z"))


def test_fragment_member_negation_rules():
    pos = parse_fragment("FO[<]:depth=2:neg=no")
    assert fragment_member(pos, F("E x. ~lab(x)=a"))
    assert not fragment_member(pos, F("~E x. lab(x)=a"))
    assert not fragment_member(pos, F("E x. ~(lab(x)=a & T)"))
    neg = parse_fragment("FO[<]:depth=2")
    assert fragment_member(neg, F("~E x. ~(lab(x)=a & T)"))


def test_fragment_member_monotone_in_depth():
    rnd = random.Random(4)
    for _ in range(300):
        phi = random_formula(rnd, 3)
        for d in range(4):
            f = FragmentSpec(d, {"<", "<=", "suc", "=", "min", "max", "empty"})
            if fragment_member(f, phi):
                assert fragment_member(f.with_depth(d + 1), phi)


def test_literals_examples():
    spec = FragmentSpec(1, {"<"}, negation_closed=False, quantifiers={"E", "A"})
    assert literals(spec, {"x"}, {"a"}) == [TOP, BOT, Lab("x", "a"), Lt("x", "x")]
    neg = FragmentSpec(1, {"<"})
    assert Not(Lab("x", "a")) in literals(neg, {"x"}, {"a"})
    succ = FragmentSpec(1, {"suc", "=", "min", "max", "empty"}, negation_closed=False,
                        quantifiers={"E"})
    assert literals(succ, set(), set()) == [TOP, BOT, EMPTY]


def test_literals_are_quantifier_free_members():
    for spec in [parse_fragment("FO[<,suc,=,min,max,empty]:depth=1"),
                 parse_fragment("FO2[<,<=]:depth=1:neg=no")]:
        lits = literals(spec, {"x", "y"}, {"a", "b"})
        assert all(qd(l) == 0 and fragment_member(spec, l) for l in lits)
        assert all(free_vars(l) <= {"x", "y"} for l in lits)
        if spec.negation_closed:
            texts = {render_formula(l) for l in lits}
            assert all(render_formula(Not(l)) in texts for l in lits
                       if l not in (TOP, BOT) and not isinstance(l, Not))
        assert all(variables(l) <= {"x", "y"} for l in lits)
