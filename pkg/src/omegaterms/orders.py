"""Countable regular labeled linear orders and the aperiodic word problem.

An :class:`OrderExpr` denotes a countable word built from finite words by
concatenation, omega-power, omega*-power and dense shuffle. ``rho_expand``
translates a pi-term into such an expression by reading every pi-power as
the rho-power ``u^om . sh{u^om* . u^om} . u^om*``.

Isomorphism is decided by computing a canonical label for the denoted word.
The label is obtained by repeatedly condensing the word:

* the *finite condensation* groups positions with finitely many positions
  between them; every class is a finite, omega, omega* or zeta block and is
  eventually periodic at its infinite ends, so it has a canonical spelling;
* when no position has an immediate successor the word is dense, and the
  *shuffle condensation* groups positions lying in a common open interval
  in which every subinterval carries the same set of labels; such a class
  is the shuffle of that label set.

Both condensations are isomorphism invariant, a word is recovered from its
quotient by substituting the classes, and every class is named by a
canonical label. The process stops once a single point remains, whose
label is then a complete isomorphism invariant. The condensations are
computed by structural recursion over the expression, tracking how classes
touching the ends of a subexpression merge across concatenation seams.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ParseError, ResourceLimitError
from .terms import Concat, Leaf, PiPower, PiTerm, parse_term

#: bound on the tree size of expansions and on condensation rounds
MAX_NODES = 50_000_000
MAX_ROUNDS = 500


# -- expressions ---------------------------------------------------------------

@dataclass(frozen=True)
class Fin:
    word: str

    def __str__(self):
        return render_order(self)


@dataclass(frozen=True)
class Cat:
    parts: tuple

    def __str__(self):
        return render_order(self)


@dataclass(frozen=True)
class Om:
    inner: "OrderExpr"

    def __str__(self):
        return render_order(self)


@dataclass(frozen=True)
class OmStar:
    inner: "OrderExpr"

    def __str__(self):
        return render_order(self)


@dataclass(frozen=True)
class Shuf:
    members: tuple

    def __str__(self):
        return render_order(self)


OrderExpr = Union[Fin, Cat, Om, OmStar, Shuf]

EMPTY = Fin("")


def is_empty(e: OrderExpr) -> bool:
    return isinstance(e, Fin) and not e.word


def fin(word: str) -> OrderExpr:
    return Fin(word)


def cat(*parts: OrderExpr) -> OrderExpr:
    """Concatenation; drops empty words, flattens and fuses adjacent finite words."""
    out = []
    for p in parts:
        for q in (p.parts if isinstance(p, Cat) else (p,)):
            if is_empty(q):
                continue
            if isinstance(q, Fin) and out and isinstance(out[-1], Fin):
                out[-1] = Fin(out[-1].word + q.word)
            else:
                out.append(q)
    if not out:
        return EMPTY
    if len(out) == 1:
        return out[0]
    return Cat(tuple(out))


def om(e: OrderExpr) -> OrderExpr:
    return EMPTY if is_empty(e) else Om(e)


def omstar(e: OrderExpr) -> OrderExpr:
    return EMPTY if is_empty(e) else OmStar(e)


def shuf(*members: OrderExpr) -> OrderExpr:
    """Dense shuffle of a finite set of words; members are deduplicated and sorted."""
    keyed = {render_order(m): m for m in members if not is_empty(m)}
    if not keyed:
        return EMPTY
    return Shuf(tuple(keyed[k] for k in sorted(keyed)))


def render_order(e: OrderExpr) -> str:
    """Text form: words as strings, ' . ' for concatenation, ^om, ^om*, sh{...}."""
    if isinstance(e, Fin):
        return e.word or "1"
    if isinstance(e, Cat):
        return " . ".join(render_order(p) for p in e.parts)
    if isinstance(e, Shuf):
        return "sh{" + ", ".join(render_order(m) for m in e.members) + "}"
    body = render_order(e.inner)
    if isinstance(e.inner, Cat) or (isinstance(e.inner, Fin) and len(e.inner.word) > 1):
        body = f"({body})"
    return body + ("^om" if isinstance(e, Om) else "^om*")


def parse_order(text: str) -> OrderExpr:
    """Inverse of :func:`render_order`."""
    tokens = []
    for m in re.finditer(r"\s*(\^om\*|\^om|sh\{|[a-z]+|1|[.(){},])", text):
        tokens.append((m.group(1), m.start(1)))
    if "".join(t for t, _ in tokens) != "".join(text.split()):
        raise ParseError("unrecognized characters in order expression", None, text)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else ""

    def expect(tok):
        nonlocal pos
        if peek() != tok:
            at = tokens[pos][1] if pos < len(tokens) else len(text)
            raise ParseError(f"expected {tok!r}", at, text)
        pos += 1

    def seq():
        parts = [factor()]
        while peek() == ".":
            expect(".")
            parts.append(factor())
        return cat(*parts)

    def factor():
        nonlocal pos
        tok = peek()
        if tok == "(":
            expect("(")
            e = seq()
            expect(")")
        elif tok == "sh{":
            expect("sh{")
            members = [seq()]
            while peek() == ",":
                expect(",")
                members.append(seq())
            expect("}")
            e = shuf(*members)
        elif tok == "1":
            pos += 1
            e = EMPTY
        elif tok.isalpha():
            pos += 1
            e = Fin(tok)
        else:
            at = tokens[pos][1] if pos < len(tokens) else len(text)
            raise ParseError(f"unexpected {tok or 'end of input'!r}", at, text)
        while peek() in ("^om", "^om*"):
            e = om(e) if peek() == "^om" else omstar(e)
            pos += 1
        return e

    e = seq()
    if pos != len(tokens):
        raise ParseError(f"unexpected {peek()!r}", tokens[pos][1], text)
    return e


def expr_size(e: OrderExpr) -> int:
    """Number of tree nodes (shared subexpressions counted once per occurrence)."""
    memo = {}

    def size(x):
        k = id(x)
        if k not in memo:
            if isinstance(x, Fin):
                n = 1
            elif isinstance(x, Cat):
                n = 1 + sum(size(p) for p in x.parts)
            elif isinstance(x, Shuf):
                n = 1 + sum(size(m) for m in x.members)
            else:
                n = 1 + size(x.inner)
            memo[k] = (x, n)
        return memo[k][1]

    return size(e)


# -- rho expansion ---------------------------------------------------------------

def rho_power(e: OrderExpr) -> OrderExpr:
    """u^rho = u^om . sh{u^om* . u^om} . u^om*"""
    return cat(om(e), shuf(cat(omstar(e), om(e))), omstar(e))


def rho_expand(t: PiTerm, max_nodes: int = MAX_NODES) -> OrderExpr:
    if isinstance(t, str):
        t = parse_term(t)
    if _expansion_size(t) > max_nodes:
        raise ResourceLimitError(f"rho expansion exceeds {max_nodes} nodes")
    memo = {}

    def go(x):
        if x in memo:
            return memo[x]
        if isinstance(x, Leaf):
            r = Fin(x.letter)
        elif isinstance(x, Concat):
            r = cat(*(go(p) for p in x.parts))
        else:
            r = rho_power(go(x.inner))
        memo[x] = r
        return r

    return go(t)


def _expansion_size(t: PiTerm) -> int:
    if isinstance(t, Leaf):
        return 1
    if isinstance(t, Concat):
        return 1 + sum(_expansion_size(p) for p in t.parts)
    return 8 + 4 * _expansion_size(t.inner)


# -- invariants ------------------------------------------------------------------

@dataclass(frozen=True)
class IsoInvariants:
    alphabet: frozenset
    is_empty: bool
    is_finite: bool
    has_first: bool
    has_last: bool
    first_label: str | None
    last_label: str | None


def invariants_of(e: OrderExpr) -> IsoInvariants:
    if isinstance(e, Fin):
        w = e.word
        return IsoInvariants(frozenset(w), not w, True, bool(w), bool(w),
                             w[0] if w else None, w[-1] if w else None)
    if isinstance(e, Cat):
        parts = [invariants_of(p) for p in e.parts]
        nonempty = [p for p in parts if not p.is_empty]
        if not nonempty:
            return invariants_of(EMPTY)
        first, last = nonempty[0], nonempty[-1]
        return IsoInvariants(frozenset().union(*(p.alphabet for p in parts)), False,
                             all(p.is_finite for p in parts), first.has_first, last.has_last,
                             first.first_label, last.last_label)
    if isinstance(e, Shuf):
        members = [invariants_of(m) for m in e.members]
        if all(m.is_empty for m in members):
            return invariants_of(EMPTY)
        return IsoInvariants(frozenset().union(*(m.alphabet for m in members)), False, False,
                             False, False, None, None)
    inner = invariants_of(e.inner)
    if inner.is_empty:
        return inner
    if isinstance(e, Om):
        return IsoInvariants(inner.alphabet, False, False, inner.has_first, False,
                             inner.first_label, None)
    return IsoInvariants(inner.alphabet, False, False, False, inner.has_last,
                         None, inner.last_label)


# -- canonical labels for blocks ---------------------------------------------------
#
# Internal expressions are tuples over string labels:
#   ("f", labels) | ("c", parts) | ("o", e) | ("s", e) | ("h", members)
# Blocks (classes of the finite condensation) before naming:
#   ("fin", x) | ("om", x, y) = x y^om | ("oms", y, x) = y^om* x
#   ("zeta", y, x, z) = y^om* x z^om

def _primitive_root(y):
    n = len(y)
    for d in range(1, n + 1):
        if n % d == 0 and y[:d] * (n // d) == y:
            return y[:d]
    return y


def _min_rotation(y):
    return min(y[i:] + y[:i] for i in range(len(y)))


def _canon_omega(x, y):
    y = _primitive_root(y)
    while x and x[-1] == y[-1]:
        x, y = x[:-1], y[-1:] + y[:-1]
    return x, y


def _canon_omega_star(y, x):
    y = _primitive_root(y)
    while x and x[0] == y[0]:
        x, y = x[1:], y[1:] + y[:1]
    return y, x


def _canon_zeta(y, x, z):
    """Canonical (kind, parts) for the bi-infinite word y^om* x z^om.

    Aligns at the first position where the left tail stops being periodic;
    a word periodic throughout becomes ("P", least rotation of its root).
    """
    y, z = _primitive_root(y), _primitive_root(z)
    p = len(y)
    horizon = len(x) + p + len(z)

    def val(i):
        if i < 0:
            return y[i % p]
        if i < len(x):
            return x[i]
        return z[(i - len(x)) % len(z)]

    e = 0
    while e <= horizon and val(e) == val(e - p):
        e += 1
    if e > horizon:
        return "P", (_min_rotation(y),)
    left = tuple(val(i) for i in range(e - p, e))
    if e < len(x):
        rest_x, rest_z = x[e:], z
    else:
        k = (e - len(x)) % len(z)
        rest_x, rest_z = (), z[k:] + z[:k]
    rest_x, rest_z = _canon_omega(rest_x, rest_z)
    return "Z", (left, rest_x, rest_z)


class _Canonizer:
    """Per-call state: label decoding table and memo tables keyed by node identity."""

    def __init__(self):
        self.decode = {}

    # labels ---------------------------------------------------------------
    def letter(self, a):
        self.decode.setdefault(a, Fin(a))
        return a

    def _register(self, label, expr):
        self.decode.setdefault(label, expr)
        return label

    def _seq(self, labels):
        return cat(*(self.decode[l] for l in labels))

    def block_label(self, block):
        """Name a finite-condensation class; returns (label, is_singleton)."""
        kind = block[0]
        if kind == "fin":
            x = block[1]
            if len(x) == 1:
                return x[0], True
            return self._register("F(" + ",".join(x) + ")", self._seq(x)), False
        if kind == "om":
            x, y = _canon_omega(block[1], block[2])
            return self._register(f"W({','.join(x)};{','.join(y)})",
                                  cat(self._seq(x), om(self._seq(y)))), False
        if kind == "oms":
            y, x = _canon_omega_star(block[1], block[2])
            return self._register(f"V({','.join(y)};{','.join(x)})",
                                  cat(omstar(self._seq(y)), self._seq(x))), False
        shape, parts = _canon_zeta(*block[1:])
        if shape == "P":
            y = parts[0]
            return self._register(f"P({','.join(y)})",
                                  cat(omstar(self._seq(y)), om(self._seq(y)))), False
        y, x, z = parts
        return self._register(f"Z({','.join(y)};{','.join(x)};{','.join(z)})",
                              cat(omstar(self._seq(y)), self._seq(x), om(self._seq(z)))), False

    def shuffle_label(self, labels):
        ls = sorted(labels)
        return self._register("H{" + ",".join(ls) + "}", shuf(*(self.decode[l] for l in ls)))

    # conversion -------------------------------------------------------------
    def internal(self, e):
        memo = {}

        def go(x):
            k = id(x)
            if k in memo:
                return memo[k][1]
            if isinstance(x, Fin):
                r = ("f", tuple(self.letter(a) for a in x.word))
            elif isinstance(x, Cat):
                r = ("c", tuple(go(p) for p in x.parts))
            elif isinstance(x, Om):
                r = ("o", go(x.inner))
            elif isinstance(x, OmStar):
                r = ("s", go(x.inner))
            else:
                r = ("h", tuple(go(m) for m in x.members))
            memo[k] = (x, r)
            return r

        return go(e)

    # finite condensation -------------------------------------------------------
    def finite_condensation(self, node):
        """Quotient by the finite condensation; returns (quotient node, merged?)."""
        memo = {}
        merged = False

        def label(block):
            nonlocal merged
            lab, single = self.block_label(block)
            if not single:
                merged = True
            return lab

        def pt(block):
            return ("f", (label(block),))

        def merge(r, l):
            # r holds a last point (fin / oms), l a first point (fin / om)
            if r[0] == "fin":
                if l[0] == "fin":
                    return ("fin", r[1] + l[1])
                return ("om", r[1] + l[1], l[2])
            if l[0] == "fin":
                return ("oms", r[1], r[2] + l[1])
            return ("zeta", r[1], r[2] + l[1], l[2])

        def concat(a, b):
            if a[0] == "whole" and b[0] == "whole":
                return ("whole", a[1] + b[1])
            if a[0] == "whole":
                _, L, m, R = b
                first = ("fin", a[1])
                return ("gen", merge(first, L) if L else first, m, R)
            if b[0] == "whole":
                _, L, m, R = a
                last = ("fin", b[1])
                return ("gen", L, m, merge(R, last) if R else last)
            _, L1, m1, R1 = a
            _, L2, m2, R2 = b
            if R1 and L2:
                seam = [pt(merge(R1, L2))]
            else:
                seam = [pt(x) for x in (R1, L2) if x]
            return ("gen", L1, _cat_node([m1, *seam, m2]), R2)

        def omega(a):
            if a[0] == "whole":
                return ("gen", ("om", (), a[1]), None, None)
            _, L, m, R = a
            if L and R:
                return ("gen", L, _cat_node([m, ("o", _cat_node([pt(merge(R, L)), m]))]), None)
            if L:
                return ("gen", L, _cat_node([m, ("o", _cat_node([pt(L), m]))]), None)
            if R:
                return ("gen", None, ("o", _cat_node([m, pt(R)])), None)
            return ("gen", None, ("o", m), None)

        def omega_star(a):
            if a[0] == "whole":
                return ("gen", None, None, ("oms", a[1], ()))
            _, L, m, R = a
            if L and R:
                return ("gen", None, _cat_node([("s", _cat_node([m, pt(merge(R, L))])), m]), R)
            if R:
                return ("gen", None, _cat_node([("s", _cat_node([m, pt(R)])), m]), R)
            if L:
                return ("gen", None, ("s", _cat_node([pt(L), m])), None)
            return ("gen", None, ("s", m), None)

        def full(a):
            if a[0] == "whole":
                return pt(("fin", a[1]))
            _, L, m, R = a
            return _cat_node([pt(L) if L else None, m, pt(R) if R else None])

        def go(x):
            k = id(x)
            if k in memo:
                return memo[k][1]
            kind = x[0]
            if kind == "f":
                r = ("whole", x[1])
            elif kind == "c":
                parts = [go(p) for p in x[1]]
                r = parts[0]
                for p in parts[1:]:
                    r = concat(r, p)
            elif kind == "o":
                r = omega(go(x[1]))
            elif kind == "s":
                r = omega_star(go(x[1]))
            else:
                r = ("gen", None, ("h", tuple(full(go(m)) for m in x[1])), None)
            memo[k] = (x, r)
            return r

        quotient = full(go(node))
        return quotient, merged

    # shuffle condensation ------------------------------------------------------
    def shuffle_condensation(self, node):
        """Quotient of a dense word by its maximal homogeneous open intervals."""
        memo = {}

        def content(item):
            if item[0] == "pt":
                return frozenset((item[1],))
            return item[1] if item[0] == "cls" else item[2]

        def normalize(items):
            out = []
            for it in items:
                out.append(it)
                while True:
                    if (len(out) >= 2 and out[-1][0] == "cls" and out[-2][0] == "cls"
                            and out[-1][1] == out[-2][1]):
                        out.pop()
                    elif (len(out) >= 3 and out[-1][0] == "cls" and out[-3][0] == "cls"
                          and out[-2][0] == "pt" and out[-1][1] == out[-3][1]
                          and out[-2][1] in out[-1][1]):
                        del out[-2:]
                    else:
                        break
            return tuple(out)

        def expr(items):
            nodes = []
            for it in items:
                if it[0] == "pt":
                    nodes.append(("f", (it[1],)))
                elif it[0] == "cls":
                    nodes.append(("f", (self.shuffle_label(it[1]),)))
                else:
                    nodes.append(it[1])
            return _cat_node(nodes)

        def opaque(node, items):
            return ("op", node, frozenset().union(*(content(i) for i in items)))

        def ends(S):
            """Lead group, trail group and whether S is one class with optional end points."""
            if S[0][0] == "cls":
                lead = S[:1]
            elif len(S) > 1 and S[0][0] == "pt" and S[1][0] == "cls":
                lead = S[:2]
            else:
                lead = ()
            if S[-1][0] == "cls":
                trail = S[-1:]
            elif len(S) > 1 and S[-1][0] == "pt" and S[-2][0] == "cls":
                trail = S[-2:]
            else:
                trail = ()
            classes = [i for i in S if i[0] != "pt"]
            whole = (len(classes) == 1 and classes[0][0] == "cls"
                     and all(i[0] == "pt" for i in (S[:1] + S[-1:]) if i is not classes[0])
                     and len(S) <= 3 and (len(S) < 3 or S[1][0] == "cls"))
            return lead, trail, whole

        def seam_merges(lead, trail):
            if not lead or not trail:
                return None
            P, Q = lead[-1][1], trail[0][1]
            if P != Q:
                return None
            between = [i for i in (trail[1:] + lead[:-1]) if i[0] == "pt"]
            if len(between) > 1 or (between and between[0][1] not in P):
                return None
            return P

        def omega(S):
            lead, trail, whole = ends(S)
            P = seam_merges(lead, trail)
            if P is not None:
                if whole:
                    return normalize(S[:1] + (("cls", P),) if S[0][0] == "pt" else (("cls", P),))
                B = S[len(lead):len(S) - len(trail)]
                assert B, "seam merge without a middle part"
                hp = ("f", (self.shuffle_label(P),))
                body = _cat_node([expr(B), ("o", _cat_node([hp, expr(B)]))])
                return lead + (opaque(body, S),)
            body = _cat_node([expr(S[len(lead):]) if S[len(lead):] else None, ("o", expr(S))])
            return lead + (opaque(body, S),)

        def omega_star(S):
            lead, trail, whole = ends(S)
            P = seam_merges(lead, trail)
            if P is not None:
                if whole:
                    return (("cls", P),) + (S[-1:] if S[-1][0] == "pt" else ())
                B = S[len(lead):len(S) - len(trail)]
                assert B, "seam merge without a middle part"
                hp = ("f", (self.shuffle_label(P),))
                body = _cat_node([("s", _cat_node([expr(B), hp])), expr(B)])
                return (opaque(body, S),) + trail
            rest = S[:len(S) - len(trail)]
            body = _cat_node([("s", expr(S)), expr(rest) if rest else None])
            return (opaque(body, S),) + trail

        def shuffle(members):
            total = frozenset().union(*(content(i) for m in members for i in m))
            def homogeneous(m):
                if len(m) == 1 and m[0][0] == "pt":
                    return True
                _, _, whole = ends(m)
                return whole and [i for i in m if i[0] == "cls"][0][1] == total
            if all(homogeneous(m) for m in members):
                return (("cls", total),)
            node = ("h", tuple(expr(m) for m in members))
            return (("op", node, total),)

        def go(x):
            k = id(x)
            if k in memo:
                return memo[k][1]
            kind = x[0]
            if kind == "f":
                if len(x[1]) != 1:
                    raise AssertionError("shuffle condensation needs a dense word")
                r = (("pt", x[1][0]),)
            elif kind == "c":
                r = normalize([i for p in x[1] for i in go(p)])
            elif kind == "o":
                r = omega(go(x[1]))
            elif kind == "s":
                r = omega_star(go(x[1]))
            else:
                r = shuffle([go(m) for m in x[1]])
            memo[k] = (x, r)
            return r

        return expr(go(node))

    def label_of(self, node, max_rounds=MAX_ROUNDS):
        for _ in range(max_rounds):
            if node[0] == "f" and len(node[1]) == 1:
                return node[1][0]
            quotient, merged = self.finite_condensation(node)
            if merged:
                node = quotient
            else:
                node = self.shuffle_condensation(node)
        raise ResourceLimitError(f"canonicalization did not finish in {max_rounds} rounds")


def _cat_node(nodes):
    nodes = [n for n in nodes if n is not None]
    if not nodes:
        return None
    if len(nodes) == 1:
        return nodes[0]
    return ("c", tuple(nodes))


def canonical_label(e: OrderExpr) -> str:
    """A string that is equal for two expressions iff they denote isomorphic words."""
    if is_empty(e):
        return "1"
    c = _Canonizer()
    return c.label_of(c.internal(e))


def canonical_form(e: OrderExpr) -> OrderExpr:
    """Canonical representative of the isomorphism class of ``e``."""
    if is_empty(e):
        return EMPTY
    c = _Canonizer()
    return c.decode[c.label_of(c.internal(e))]


def iso(e1: OrderExpr, e2: OrderExpr) -> bool:
    return canonical_label(e1) == canonical_label(e2)


@dataclass(frozen=True)
class Decision:
    holds: bool
    left: OrderExpr
    right: OrderExpr

    def __bool__(self):
        return self.holds

    @property
    def verdict(self) -> str:
        return "holds" if self.holds else "fails"


def decide_aperiodic_identity(s, t, max_nodes: int = MAX_NODES) -> Decision:
    """Does ``s = t`` hold in every finite aperiodic monoid?

    Equivalent to isomorphism of the rho-expansions of both sides.
    """
    if isinstance(s, str):
        s = parse_term(s)
    if isinstance(t, str):
        t = parse_term(t)
    left = canonical_form(rho_expand(s, max_nodes))
    right = canonical_form(rho_expand(t, max_nodes))
    return Decision(render_order(left) == render_order(right), left, right)
