"""The fragment game on finite words.

A configuration pairs a fragment with two valuations over the same
variables. Spoiler wins outright if some literal of the fragment holds on
the left and fails on the right. Otherwise Spoiler picks a quantifier and a
variable, and the round runs per this table, with the fragment's depth
dropping by one:

    move   quest (Spoiler)   reply (Duplicator)   next configuration
    E      left word         right word           (left+q, right+r)
    A      right word        left word            (left+r, right+q)
    ~E     right word        left word            (right+q, left+r)
    ~A     left word         right word           (right+r, left+q)

If Spoiler quests and there is no position to reply with, Spoiler wins.
Duplicator wins when Spoiler runs out of moves. The solver explores the
game exhaustively, memoizing configurations. When Spoiler wins, the winning
strategy turns into a formula of the fragment that separates the two sides.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ResourceLimitError, ValidationError
from .logic import (BOT, TOP, Eq, Exists, Forall, FragmentSpec, Formula, Lab, Le, Lt, Max,
                    Min, Not, Suc, Top, Valuation, Empty, conj, disj, literals, render_formula)

MAX_NODES = 20_000_000

SPOILER = "spoiler"
DUPLICATOR = "duplicator"


@dataclass(frozen=True)
class Configuration:
    fragment: FragmentSpec
    left: Valuation
    right: Valuation

    def __post_init__(self):
        if self.left.domain != self.right.domain:
            raise ValidationError("both valuations must map the same variables")
        budget = self.fragment.var_budget
        if budget is not None and not self.left.domain <= set(self.fragment.variable_pool()):
            raise ValidationError(
                f"with {budget} variables the valuations may only use {self.fragment.variable_pool()}")


@dataclass(frozen=True)
class GameOutcome:
    winner: str
    certificate: Formula | None = None

    @property
    def spoiler_wins(self) -> bool:
        return self.winner == SPOILER


def reduct(F: FragmentSpec, Q: str) -> FragmentSpec | None:
    """Formulas phi with ``Q x. phi`` in F: None at depth 0, otherwise one level shallower."""
    if Q not in F.quantifiers:
        raise ValueError(f"quantifier {Q!r} is not available in {F}")
    return None if F.depth == 0 else F.with_depth(F.depth - 1)


def apply_morphism(w: str, h) -> str:
    return "".join(h[a] for a in w)


def _fresh_names():
    yield from ("x", "y", "z")
    for i in itertools.count(4):
        yield f"x{i}"


def _compile(lit):
    """Literal -> function(word, env) -> bool."""
    neg = isinstance(lit, Not)
    a = lit.body if neg else lit
    if isinstance(a, Top):
        f = lambda w, e: True
    elif a == BOT:
        f = lambda w, e: False
    elif isinstance(a, Empty):
        f = lambda w, e: not w
    elif isinstance(a, Lab):
        f = lambda w, e, x=a.x, c=a.a: w[e[x] - 1] == c
    elif isinstance(a, Min):
        f = lambda w, e, x=a.x: e[x] == 1
    elif isinstance(a, Max):
        f = lambda w, e, x=a.x: e[x] == len(w)
    elif isinstance(a, Eq):
        f = lambda w, e, x=a.x, y=a.y: e[x] == e[y]
    elif isinstance(a, Lt):
        f = lambda w, e, x=a.x, y=a.y: e[x] < e[y]
    elif isinstance(a, Le):
        f = lambda w, e, x=a.x, y=a.y: e[x] <= e[y]
    else:
        assert isinstance(a, Suc)
        f = lambda w, e, x=a.x, y=a.y: e[y] == e[x] + 1
    return (lambda w, e: not f(w, e)) if neg else f


class _Solver:
    """Exhaustive solver for one pair of words; memo tables live with the instance."""

    def __init__(self, F: FragmentSpec, u: str, v: str, max_nodes: int = MAX_NODES):
        self.F = F
        self.words = (u, v)
        self.alphabet = frozenset(u) | frozenset(v)
        self.max_nodes = max_nodes
        self.nodes = 0
        self._lits = {}
        self._masks = {}
        self._memo = {}
        self.order = [q for q in ("E", "A", "~E", "~A") if q in F.quantifiers]

    # literals ---------------------------------------------------------------
    def lits(self, xs):
        key = frozenset(xs)
        if key not in self._lits:
            ls = literals(self.F, key, self.alphabet)
            self._lits[key] = (ls, [_compile(l) for l in ls])
        return self._lits[key]

    def mask(self, word, env):
        _, fs = self.lits(env)
        m = 0
        for i, f in enumerate(fs):
            if f(word, env):
                m |= 1 << i
        return m

    def position_masks(self, wi, env_items, x):
        """Literal masks of env+{x: p} for every position p of word ``wi`` (index p-1)."""
        key = (wi, env_items, x)
        got = self._masks.get(key)
        if got is not None:
            return got
        word = self.words[wi]
        env = dict(env_items)
        env.pop(x, None)
        others = sorted(env.items())
        n = len(word)
        by_type, out = {}, []
        for p in range(1, n + 1):
            t = (word[p - 1], p == 1, p == n,
                 tuple(max(-2, min(2, p - py)) for _, py in others))
            m = by_type.get(t)
            if m is None:
                m = by_type[t] = self.mask(word, {**env, x: p})
            out.append(m)
        self._masks[key] = out
        return out

    def distinguished(self, s, A, B):
        left = self.mask(self.words[s], dict(A))
        right = self.mask(self.words[1 - s], dict(B))
        return left & ~right

    def literal_witness(self, s, A, B):
        bits = self.distinguished(s, A, B)
        ls, _ = self.lits(dict(A))
        return ls[(bits & -bits).bit_length() - 1]

    # moves -----------------------------------------------------------------
    def variables(self, A):
        used = {x for x, _ in A}
        if self.F.var_budget is None:
            return [next(x for x in _fresh_names() if x not in used)]
        pool = self.F.variable_pool()
        free = [x for x in pool if x not in used]
        return free[:1] or list(pool)

    @staticmethod
    def _set(items, x, p):
        d = dict(items)
        d[x] = p
        return tuple(sorted(d.items()))

    def move_sides(self, Q, s, A, B):
        """(quest word index, quest valuation, reply word index, reply valuation, child orientation)."""
        if Q in ("E", "~A"):
            return s, A, 1 - s, B
        return 1 - s, B, s, A

    def child(self, Q, s, A, B, x, q, r):
        if Q == "E":
            return s, self._set(A, x, q), self._set(B, x, r)
        if Q == "A":
            return s, self._set(A, x, r), self._set(B, x, q)
        if Q == "~E":
            return 1 - s, self._set(B, x, q), self._set(A, x, r)
        return 1 - s, self._set(B, x, r), self._set(A, x, q)

    def winning_move(self, d, s, A, B):
        """A Spoiler move (Q, x, q) that wins from a non-distinguished configuration, or None."""
        key = (d, s, A, B)
        if key in self._memo:
            return self._memo[key]
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ResourceLimitError(f"game search exceeded {self.max_nodes} nodes")
        found = None
        for Q in self.order:
            for x in self.variables(A):
                found = self._try_move(d, Q, s, A, B, x)
                if found is not None:
                    found = (Q, x, found)
                    break
            if found is not None:
                break
        self._memo[key] = found
        return found

    def _try_move(self, d, Q, s, A, B, x):
        qi, QV, ri, RV = self.move_sides(Q, s, A, B)
        nq, nr = len(self.words[qi]), len(self.words[ri])
        if nq == 0:
            return None
        if nr == 0:
            return 1
        qmasks = self.position_masks(qi, QV, x)
        rmasks = self.position_masks(ri, RV, x)
        quest_left = Q in ("E", "~E")

        def survives(mq, mr):
            # the child is not decided by a literal
            return (mq & ~mr) == 0 if quest_left else (mr & ~mq) == 0

        if d == 1:
            rset = set(rmasks)
            for q in range(1, nq + 1):
                mq = qmasks[q - 1]
                if not any(survives(mq, mr) for mr in rset):
                    return q
            return None
        for q in range(1, nq + 1):
            mq = qmasks[q - 1]
            replies = [r for r in range(1, nr + 1) if survives(mq, rmasks[r - 1])]
            replies.sort(key=lambda r: (min(abs(q - r), abs((nq - q) - (nr - r))), r))
            if all(self.wins(d - 1, *self.child(Q, s, A, B, x, q, r)) for r in replies):
                return q
        return None

    def wins(self, d, s, A, B):
        if self.distinguished(s, A, B):
            return True
        if d == 0:
            return False
        return self.winning_move(d, s, A, B) is not None

    # certificates ------------------------------------------------------------
    def certificate(self, d, s, A, B) -> Formula:
        if self.distinguished(s, A, B):
            return self.literal_witness(s, A, B)
        Q, x, q = self.winning_move(d, s, A, B)
        qi, _, ri, _ = self.move_sides(Q, s, A, B)
        if not self.words[ri]:
            q = 1
        parts, seen = [], set()
        for r in range(1, len(self.words[ri]) + 1):
            psi = self.certificate(d - 1, *self.child(Q, s, A, B, x, q, r))
            text = render_formula(psi)
            if text not in seen:
                seen.add(text)
                parts.append(psi)
        if Q == "E":
            return Exists(x, conj(*parts))
        if Q == "A":
            return Forall(x, disj(*parts))
        if Q == "~E":
            return Not(Exists(x, conj(*parts)))
        return Not(Forall(x, disj(*parts)))


def _start(S: Configuration):
    return 0, S.left.assignment, S.right.assignment


def solve(S: Configuration, certificate: bool = False, max_nodes: int = MAX_NODES) -> GameOutcome:
    solver = _Solver(S.fragment, S.left.word, S.right.word, max_nodes)
    start = _start(S)
    if not solver.wins(S.fragment.depth, *start):
        return GameOutcome(DUPLICATOR)
    cert = solver.certificate(S.fragment.depth, *start) if certificate else None
    return GameOutcome(SPOILER, cert)


def spoiler_wins(S: Configuration, max_nodes: int = MAX_NODES) -> bool:
    return solve(S, max_nodes=max_nodes).spoiler_wins


def _valuation(v):
    return Valuation(v) if isinstance(v, str) else v


def duplicator_preorder(F: FragmentSpec, left, right, max_nodes: int = MAX_NODES) -> bool:
    """Does Duplicator win from (left, right)? Words stand for empty valuations."""
    return not spoiler_wins(Configuration(F, _valuation(left), _valuation(right)), max_nodes)


def equivalent(F: FragmentSpec, u: str, v: str, max_nodes: int = MAX_NODES) -> bool:
    return (duplicator_preorder(F, u, v, max_nodes)
            and duplicator_preorder(F, v, u, max_nodes))


def distinguishing_formula(F: FragmentSpec, u: str, v: str,
                           max_nodes: int = MAX_NODES) -> Formula | None:
    """A sentence of F true in ``u`` and false in ``v``, or None if Duplicator wins."""
    return solve(Configuration(F, Valuation(u), Valuation(v)), True, max_nodes).certificate
