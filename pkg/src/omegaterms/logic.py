"""First-order logic over finite words.

Positions of a word of length n are 1..n. Atoms::

    T  F  empty  x=y  x<y  x<=y  suc(x,y)  min(x)  max(x)  lab(x)=a

combined with ``~``, ``&``, ``|`` and the quantifiers ``E x.`` / ``A x.``
(whose scope extends as far right as possible).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Union

from .errors import ParseError, UnboundVariableError, ValidationError


# -- syntax ----------------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class Lt:
    x: str
    y: str


@dataclass(frozen=True)
class Le:
    x: str
    y: str


@dataclass(frozen=True)
class Suc:
    x: str
    y: str


@dataclass(frozen=True)
class Min:
    x: str


@dataclass(frozen=True)
class Max:
    x: str


@dataclass(frozen=True)
class Lab:
    x: str
    a: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Atom = Union[Top, Bot, Empty, Eq, Lt, Le, Suc, Min, Max, Lab]
Formula = Union[Atom, Not, And, Or, Exists, Forall]

TOP, BOT, EMPTY = Top(), Bot(), Empty()
ATOMS = (Top, Bot, Empty, Eq, Lt, Le, Suc, Min, Max, Lab)

#: predicate name of each atom class (T and F belong to every fragment)
PREDICATE = {Empty: "empty", Eq: "=", Lt: "<", Le: "<=", Suc: "suc",
             Min: "min", Max: "max", Lab: "lab"}
ALL_PREDICATES = frozenset(PREDICATE.values())
QUANTIFIERS = ("E", "A", "~E", "~A")


def conj(*parts: Formula) -> Formula:
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, And) else (p,))
    if not flat:
        return TOP
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Or) else (p,))
    if not flat:
        return BOT
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def is_literal(phi: Formula) -> bool:
    return isinstance(phi, ATOMS) or (isinstance(phi, Not) and isinstance(phi.body, ATOMS))


def _atom_vars(phi):
    return tuple(getattr(phi, f) for f in ("x", "y") if hasattr(phi, f))


def qd(phi: Formula) -> int:
    """Quantifier depth."""
    if isinstance(phi, (Exists, Forall)):
        return 1 + qd(phi.body)
    if isinstance(phi, Not):
        return qd(phi.body)
    if isinstance(phi, (And, Or)):
        return max((qd(p) for p in phi.parts), default=0)
    return 0


def free_vars(phi: Formula) -> frozenset:
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or)):
        return frozenset().union(*(free_vars(p) for p in phi.parts))
    return frozenset(_atom_vars(phi))


def variables(phi: Formula) -> frozenset:
    """All variable names occurring in ``phi``, bound or free."""
    if isinstance(phi, (Exists, Forall)):
        return variables(phi.body) | {phi.var}
    if isinstance(phi, Not):
        return variables(phi.body)
    if isinstance(phi, (And, Or)):
        return frozenset().union(*(variables(p) for p in phi.parts))
    return frozenset(_atom_vars(phi))


# -- semantics --------------------------------------------------------------------

@dataclass(frozen=True)
class Valuation:
    """A word with a partial map from variables to its positions (1-based)."""
    word: str
    assignment: tuple = ()

    def __post_init__(self):
        items = self.assignment.items() if isinstance(self.assignment, dict) else self.assignment
        items = tuple(sorted(dict(items).items()))
        for x, p in items:
            if not 1 <= p <= len(self.word):
                raise ValidationError(f"position {p} of {x!r} outside 1..{len(self.word)}")
        object.__setattr__(self, "assignment", items)

    @property
    def env(self) -> dict:
        return dict(self.assignment)

    @property
    def domain(self) -> frozenset:
        return frozenset(x for x, _ in self.assignment)

    def repl(self, x: str, p: int) -> "Valuation":
        """The valuation with ``x`` (re)mapped to ``p``."""
        return Valuation(self.word, {**self.env, x: p})

    def restrict(self, xs) -> "Valuation":
        return Valuation(self.word, {x: p for x, p in self.assignment if x in xs})


def _eval_atom(phi, word, env):
    def pos(x):
        try:
            return env[x]
        except KeyError:
            raise UnboundVariableError(f"variable {x!r} is unbound") from None
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Empty):
        return not word
    if isinstance(phi, Lab):
        return word[pos(phi.x) - 1] == phi.a
    if isinstance(phi, Min):
        return pos(phi.x) == 1
    if isinstance(phi, Max):
        return pos(phi.x) == len(word)
    p, q = pos(phi.x), pos(phi.y)
    if isinstance(phi, Eq):
        return p == q
    if isinstance(phi, Lt):
        return p < q
    if isinstance(phi, Le):
        return p <= q
    return q == p + 1


def holds_in(word: str, env: dict, phi: Formula) -> bool:
    if isinstance(phi, Not):
        return not holds_in(word, env, phi.body)
    if isinstance(phi, And):
        return all(holds_in(word, env, p) for p in phi.parts)
    if isinstance(phi, Or):
        return any(holds_in(word, env, p) for p in phi.parts)
    if isinstance(phi, Exists):
        return any(holds_in(word, {**env, phi.var: p}, phi.body) for p in range(1, len(word) + 1))
    if isinstance(phi, Forall):
        return all(holds_in(word, {**env, phi.var: p}, phi.body) for p in range(1, len(word) + 1))
    return _eval_atom(phi, word, env)


def models(v, phi: Formula) -> bool:
    """``v |= phi``; ``v`` is a :class:`Valuation` or a bare word (empty valuation)."""
    if isinstance(v, str):
        v = Valuation(v)
    missing = free_vars(phi) - v.domain
    if missing:
        raise UnboundVariableError(f"free variables {sorted(missing)} are unbound")
    return holds_in(v.word, v.env, phi)


# -- fragments --------------------------------------------------------------------

@dataclass(frozen=True)
class FragmentSpec:
    """A fragment: depth bound, variable budget, predicates and quantifier moves.

    ``var_budget`` is ``None`` (unbounded) or the number of variable names
    available; the label predicate, T and F are always included.
    """
    depth: int
    predicates: frozenset = ALL_PREDICATES
    var_budget: int | None = None
    negation_closed: bool = True
    quantifiers: frozenset = frozenset(QUANTIFIERS)
    order_stable: bool = False

    def __post_init__(self):
        object.__setattr__(self, "predicates", frozenset(self.predicates) | {"lab"})
        object.__setattr__(self, "quantifiers", frozenset(self.quantifiers))
        P, Q = self.predicates, self.quantifiers
        if self.depth < 0:
            raise ValidationError("depth must be nonnegative")
        if self.var_budget is not None and self.var_budget < 1:
            raise ValidationError("variable budget must be positive")
        if not P <= ALL_PREDICATES:
            raise ValidationError(f"unknown predicates {sorted(P - ALL_PREDICATES)}")
        if not Q <= set(QUANTIFIERS):
            raise ValidationError(f"unknown quantifiers {sorted(Q - set(QUANTIFIERS))}")
        if "suc" in P and not {"=", "min", "max", "empty"} <= P:
            raise ValidationError("suc requires =, min, max and empty")
        if P & {"min", "max"} and "empty" not in P:
            raise ValidationError("min and max require empty")
        if self.order_stable and ("<" in P) != ("<=" in P):
            raise ValidationError("an order-stable fragment has both < and <= or neither")
        if self.negation_closed and not {"~E", "~A"} <= Q:
            raise ValidationError("a negation-closed fragment needs ~E and ~A")

    def with_depth(self, depth: int) -> "FragmentSpec":
        return FragmentSpec(depth, self.predicates, self.var_budget, self.negation_closed,
                            self.quantifiers, self.order_stable)

    def variable_pool(self) -> tuple:
        """Variable names used by the game and in certificates."""
        n = self.var_budget if self.var_budget is not None else max(self.depth, 1)
        base = ("x", "y", "z")
        return base[:n] if n <= 3 else base + tuple(f"x{i}" for i in range(4, n + 1))

    def __str__(self):
        order = ("<", "<=", "suc", "min", "max", "empty", "=", "lab")
        head = "FO" if self.var_budget is None else f"FO{self.var_budget}"
        text = f"{head}[{','.join(p for p in order if p in self.predicates)}]:depth={self.depth}"
        if not self.negation_closed:
            text += ":neg=no"
        if self.quantifiers != frozenset(QUANTIFIERS):
            text += ":quant=" + ",".join(q for q in QUANTIFIERS if q in self.quantifiers)
        if self.order_stable:
            text += ":stable"
        return text


FULL_PREDICATES = ALL_PREDICATES


def parse_fragment(text: str) -> FragmentSpec:
    """Parse e.g. ``"FO[<,lab]:depth=2"`` or ``"FO2[<,<=,lab,=]:depth=3:neg=no"``.

    Options after the predicate list: ``depth=N`` (required), ``neg=yes|no``,
    ``quant=E,A,~E,~A`` and ``stable``. Without ``neg=no`` the fragment is
    negation closed; with it the default quantifiers are ``E,A``.
    """
    m = re.fullmatch(r"\s*FO(\d*)\[([^\]]*)\]((?::[^:]+)*)\s*", text)
    if not m:
        raise ParseError("expected FO[...]:depth=N or FOk[...]:depth=N", 0, text)
    budget = int(m.group(1)) if m.group(1) else None
    preds = [p.strip() for p in m.group(2).split(",") if p.strip()]
    opts = {}
    for part in m.group(3).split(":")[1:]:
        key, _, value = part.partition("=")
        opts[key.strip()] = value.strip()
    if "depth" not in opts or not opts["depth"].isdigit():
        raise ParseError("missing depth=N", m.start(3), text)
    unknown = set(opts) - {"depth", "neg", "quant", "stable"}
    if unknown:
        raise ParseError(f"unknown option {sorted(unknown)[0]!r}", m.start(3), text)
    if opts.get("neg", "yes") not in ("yes", "no"):
        raise ParseError("neg must be yes or no", m.start(3), text)
    negation = opts.get("neg", "yes") == "yes"
    if "quant" in opts:
        quants = frozenset(q.strip() for q in opts["quant"].split(","))
    else:
        quants = frozenset(QUANTIFIERS if negation else ("E", "A"))
    try:
        return FragmentSpec(int(opts["depth"]), frozenset(preds), budget, negation, quants,
                            "stable" in opts)
    except ValidationError as exc:
        raise ParseError(str(exc), 0, text) from None


def fragment_member(F: FragmentSpec, phi: Formula) -> bool:
    if qd(phi) > F.depth:
        return False
    if F.var_budget is not None and len(variables(phi)) > F.var_budget:
        return False

    def ok(f):
        if isinstance(f, ATOMS):
            return type(f) not in PREDICATE or PREDICATE[type(f)] in F.predicates
        if isinstance(f, (And, Or)):
            return all(ok(p) for p in f.parts)
        if isinstance(f, Exists):
            return "E" in F.quantifiers and ok(f.body)
        if isinstance(f, Forall):
            return "A" in F.quantifiers and ok(f.body)
        body = f.body
        if isinstance(body, Exists) and "~E" in F.quantifiers:
            return ok(body.body)
        if isinstance(body, Forall) and "~A" in F.quantifiers:
            return ok(body.body)
        if isinstance(body, ATOMS) or F.negation_closed:
            return ok(body)
        return False

    return ok(phi)


def literals(F: FragmentSpec, vars, alphabet) -> list:
    """Atoms of ``F`` over the given variables and letters (and their negations
    when ``F`` is negation closed), starting with T and F."""
    xs = sorted(vars)
    P = F.predicates
    atoms = [TOP, BOT]
    if "empty" in P:
        atoms.append(EMPTY)
    atoms += [Lab(x, a) for x in xs for a in sorted(alphabet)]
    for name, cls in (("min", Min), ("max", Max)):
        if name in P:
            atoms += [cls(x) for x in xs]
    for name, cls in (("<", Lt), ("<=", Le), ("suc", Suc), ("=", Eq)):
        if name in P:
            atoms += [cls(x, y) for x, y in itertools.product(xs, repeat=2)]
    if F.negation_closed:
        atoms += [Not(a) for a in atoms if not isinstance(a, (Top, Bot))]
    return atoms


# -- surface syntax ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(<=|[<=()~&|.,]|[A-Za-z_][A-Za-z0-9_]*)")
_KEYWORDS = {"E", "A", "T", "F", "empty", "suc", "min", "max", "lab"}


def _tokenize(text):
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}",
                             len(text) - len(text[pos:].lstrip()), text)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _FormulaParser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else ""

    def where(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, tok=None):
        t = self.peek()
        if tok is not None and t != tok:
            raise ParseError(f"expected {tok!r} but found {t or 'end of input'!r}",
                             self.where(), self.text)
        if not t:
            raise ParseError("unexpected end of input", self.where(), self.text)
        self.i += 1
        return t

    def var(self):
        t = self.peek()
        if not re.fullmatch(r"[a-z_][A-Za-z0-9_]*", t or "-") or t in _KEYWORDS:
            raise ParseError(f"expected a variable but found {t or 'end of input'!r}",
                             self.where(), self.text)
        return self.take()

    def formula(self):
        parts = [self.conj()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        t = self.peek()
        if t == "~":
            self.take()
            return Not(self.unary())
        if t in ("E", "A"):
            self.take()
            x = self.var()
            self.take(".")
            body = self.formula()
            return Exists(x, body) if t == "E" else Forall(x, body)
        if t == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        return self.atom()

    def atom(self):
        t = self.peek()
        if t in ("T", "F", "empty"):
            self.take()
            return {"T": TOP, "F": BOT, "empty": EMPTY}[t]
        if t in ("suc", "min", "max", "lab"):
            self.take()
            self.take("(")
            x = self.var()
            if t == "suc":
                self.take(",")
                y = self.var()
                self.take(")")
                return Suc(x, y)
            self.take(")")
            if t == "lab":
                self.take("=")
                a = self.take()
                if not re.fullmatch(r"[a-z]", a):
                    raise ParseError(f"expected a letter but found {a!r}", self.where() - 1, self.text)
                return Lab(x, a)
            return Min(x) if t == "min" else Max(x)
        x = self.var()
        op = self.peek()
        if op not in ("<", "<=", "="):
            raise ParseError(f"expected <, <= or = but found {op or 'end of input'!r}",
                             self.where(), self.text)
        self.take()
        y = self.var()
        return {"<": Lt, "<=": Le, "=": Eq}[op](x, y)


def parse_formula(text: str) -> Formula:
    p = _FormulaParser(text)
    f = p.formula()
    if p.peek():
        raise ParseError(f"unexpected {p.peek()!r}", p.where(), text)
    return f


def render_formula(phi: Formula) -> str:
    if isinstance(phi, Top):
        return "T"
    if isinstance(phi, Bot):
        return "F"
    if isinstance(phi, Empty):
        return "empty"
    if isinstance(phi, Lab):
        return f"lab({phi.x})={phi.a}"
    if isinstance(phi, (Min, Max)):
        return f"{'min' if isinstance(phi, Min) else 'max'}({phi.x})"
    if isinstance(phi, Suc):
        return f"suc({phi.x},{phi.y})"
    if isinstance(phi, (Eq, Lt, Le)):
        op = {Eq: "=", Lt: "<", Le: "<="}[type(phi)]
        return f"{phi.x}{op}{phi.y}"
    if isinstance(phi, Not):
        body = render_formula(phi.body)
        return "~" + (f"({body})" if isinstance(phi.body, (And, Or)) else body)
    if isinstance(phi, (Exists, Forall)):
        q = "E" if isinstance(phi, Exists) else "A"
        return f"{q} {phi.var}. {render_formula(phi.body)}"
    sep = " & " if isinstance(phi, And) else " | "

    def operand(p):
        text = render_formula(p)
        return text if is_literal(p) else f"({text})"
    return sep.join(operand(p) for p in phi.parts)
