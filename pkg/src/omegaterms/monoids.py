"""Finite monoids as idempotency algebras.

Elements are addressed by index; ``table[x][y]`` is the product ``x*y``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from typing import Iterator

from .errors import ResourceLimitError, UnassignedLetterError, ValidationError
from .terms import PiTerm, finite_instance, fold_term, letters, parse_term

#: enumeration is exhaustive up to this order unless the caller raises it
DEFAULT_MAX_ORDER = 4
HARD_MAX_ORDER = 5
#: bound on |M| ** |letters| for identity checks
MAX_ASSIGNMENTS = 2_000_000


@dataclass(frozen=True)
class FiniteMonoid:
    elements: tuple
    identity: int
    table: tuple
    name: str = ""

    def __post_init__(self):
        n = len(self.elements)
        if n < 1:
            raise ValidationError("a monoid has at least one element")
        if len(set(self.elements)) != n:
            raise ValidationError("element names must be distinct")
        if not 0 <= self.identity < n:
            raise ValidationError("identity index out of range")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValidationError(f"table must be {n}x{n}")
        if any(not 0 <= v < n for row in self.table for v in row):
            raise ValidationError("table entry out of range")

    @classmethod
    def from_table(cls, table, identity=0, elements=None, name=""):
        table = tuple(tuple(row) for row in table)
        if elements is None:
            elements = tuple(str(i) for i in range(len(table)))
        return cls(tuple(elements), identity, table, name)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def index(self, name: str) -> int:
        return self.elements.index(name)

    def power(self, x: int, k: int) -> int:
        r = self.identity
        for _ in range(k):
            r = self.table[r][x]
        return r

    @cached_property
    def _cycles(self):
        # (index, period) of the sequence x, x^2, x^3, ... for every x
        out = []
        for x in range(self.size):
            seen = {}
            p, k = x, 1
            while p not in seen:
                seen[p] = k
                p, k = self.table[p][x], k + 1
            start = seen[p]
            out.append((start, k - start))
        return tuple(out)

    def __str__(self):
        return self.name or f"monoid of order {self.size}"


def validate(M: FiniteMonoid) -> None:
    """Check identity and associativity laws exhaustively; raise on the first violation."""
    e, t, n = M.identity, M.table, M.size
    for x in range(n):
        if t[e][x] != x or t[x][e] != x:
            raise ValidationError(f"identity law fails for element {M.elements[x]!r}")
    for x, y, z in itertools.product(range(n), repeat=3):
        if t[t[x][y]][z] != t[x][t[y][z]]:
            names = tuple(M.elements[i] for i in (x, y, z))
            raise ValidationError(f"associativity fails for triple {names}")


def _exponent_for(index, period):
    k = period
    while k < index:
        k += period
    return k


def idempotency_exponent(M: FiniteMonoid) -> int:
    """Least k >= 1 with u^k idempotent for every element u."""
    period = math.lcm(*(p for _, p in M._cycles))
    return _exponent_for(max(i for i, _ in M._cycles), period)


def pi_power(M: FiniteMonoid, u: int) -> int:
    """The unique idempotent among u, u^2, u^3, ..."""
    return M.power(u, _exponent_for(*M._cycles[u]))


def is_idempotent(M: FiniteMonoid, u: int) -> bool:
    return M.table[u][u] == u


def eval_term(M: FiniteMonoid, t: PiTerm, h: dict) -> int:
    """Image of ``t`` under the morphism extending the letter assignment ``h``."""
    def leaf(a):
        try:
            return h[a]
        except KeyError:
            raise UnassignedLetterError(f"letter {a!r} is not assigned") from None
    return fold_term(t, leaf, M.mul, lambda u: pi_power(M, u))


def eval_word(M: FiniteMonoid, word: str, h: dict) -> int:
    r = M.identity
    for a in word:
        r = M.table[r][h[a]]
    return r


@dataclass(frozen=True)
class IdentityCheck:
    holds: bool
    witness: dict | None = None

    def __bool__(self):
        return self.holds


def _as_term(t):
    return parse_term(t) if isinstance(t, str) else t


def identity_holds(M: FiniteMonoid, s, t, max_assignments: int = MAX_ASSIGNMENTS) -> IdentityCheck:
    """Check ``s = t`` under every assignment of the letters into ``M``.

    On failure the returned witness maps letters to element names.
    """
    s, t = _as_term(s), _as_term(t)
    alphabet = sorted(letters(s) | letters(t))
    if M.size ** len(alphabet) > max_assignments:
        raise ResourceLimitError(
            f"{M.size}^{len(alphabet)} assignments exceed bound {max_assignments}")
    for values in itertools.product(range(M.size), repeat=len(alphabet)):
        h = dict(zip(alphabet, values))
        if eval_term(M, s, h) != eval_term(M, t, h):
            return IdentityCheck(False, {a: M.elements[v] for a, v in h.items()})
    return IdentityCheck(True)


APERIODIC = (parse_term("a^wa"), parse_term("a^w"))
DA = (parse_term("(abc)^wb(abc)^w"), parse_term("(abc)^w"))


def is_aperiodic(M: FiniteMonoid) -> bool:
    return identity_holds(M, *APERIODIC).holds


def in_DA(M: FiniteMonoid) -> bool:
    return identity_holds(M, *DA).holds


def has_nontrivial_group(M: FiniteMonoid) -> bool:
    """True iff some power sequence u, u^2, ... ends in a cycle longer than 1."""
    return any(p > 1 for _, p in M._cycles)


def coincides_with_power_algebra(M: FiniteMonoid, t: PiTerm, h: dict) -> bool:
    """eval_term agrees with evaluating the k-th power instance for k = exponent."""
    w = finite_instance(t, idempotency_exponent(M))
    return eval_term(M, t, h) == eval_word(M, w, h)


# -- enumeration ---------------------------------------------------------------

def _canonical_table(table, n):
    best = None
    for perm in itertools.permutations(range(1, n)):
        p = (0,) + perm                       # p[old] = new
        inv = [0] * n
        for old, new in enumerate(p):
            inv[new] = old
        cand = tuple(tuple(p[table[inv[i]][inv[j]]] for j in range(n)) for i in range(n))
        if best is None or cand < best:
            best = cand
    return best


def _associative_tables(n):
    """All associative n x n tables with identity 0, in lexicographic order."""
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    t = [[None] * n for _ in range(n)]
    for i in range(n):
        t[0][i] = i
        t[i][0] = i

    def consistent():
        r = range(n)
        for x in r:
            for y in r:
                xy = t[x][y]
                if xy is None:
                    continue
                for z in r:
                    yz = t[y][z]
                    if yz is None:
                        continue
                    a, b = t[xy][z], t[x][yz]
                    if a is not None and b is not None and a != b:
                        return False
        return True

    def fill(k):
        if k == len(cells):
            yield tuple(tuple(row) for row in t)
            return
        i, j = cells[k]
        for v in range(n):
            t[i][j] = v
            if consistent():
                yield from fill(k + 1)
        t[i][j] = None

    yield from fill(0)


def enumerate_monoids(order: int, aperiodic_only: bool = False, up_to_iso: bool = True,
                      max_order: int = DEFAULT_MAX_ORDER) -> Iterator[FiniteMonoid]:
    """Yield every monoid of the given order with identity 0, deterministically.

    With ``up_to_iso`` one canonical representative per isomorphism class is
    produced, in order of first discovery.
    """
    if order < 1:
        raise ValueError("order must be positive")
    if order > min(max_order, HARD_MAX_ORDER):
        raise ResourceLimitError(f"enumeration of order {order} exceeds bound {max_order}")
    seen = set()
    count = 0
    for table in _associative_tables(order):
        if up_to_iso:
            table = _canonical_table(table, order)
            if table in seen:
                continue
            seen.add(table)
        M = FiniteMonoid.from_table(table, name=f"M{order}.{count}")
        if aperiodic_only and has_nontrivial_group(M):
            continue
        count += 1
        yield M


# -- serialization and fixtures -------------------------------------------------

def to_json_dict(M: FiniteMonoid) -> dict:
    names = M.elements
    return {
        "name": M.name,
        "elements": list(names),
        "identity": names[M.identity],
        "table": [[names[v] for v in row] for row in M.table],
    }


def from_json_dict(data: dict) -> FiniteMonoid:
    try:
        elements = tuple(data["elements"])
        idx = {name: i for i, name in enumerate(elements)}
        table = tuple(tuple(idx[v] for v in row) for row in data["table"])
        M = FiniteMonoid(elements, idx[data["identity"]], table, data.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed monoid description: {exc}") from None
    validate(M)
    return M


def load_monoid(path) -> FiniteMonoid:
    with open(path) as f:
        return from_json_dict(json.load(f))


def dump_monoid(M: FiniteMonoid, path) -> None:
    with open(path, "w") as f:
        json.dump(to_json_dict(M), f, indent=1)
        f.write("\n")


FIXTURE_FILES = (
    "U1.json", "Z2.json", "flip-flop.json", "syn-contains-a.json",
    "syn-a-star-b-star.json", "syn-abc-star.json", "syn-ab-star.json",
)


def fixture_monoids() -> list:
    """The shipped fixture monoids, in the order counterexample search visits them."""
    pkg = resources.files("omegaterms") / "data"
    return [from_json_dict(json.loads((pkg / f).read_text())) for f in FIXTURE_FILES]


def fixture(name: str) -> FiniteMonoid:
    for M in fixture_monoids():
        if M.name == name:
            return M
    raise KeyError(name)


def find_counterexample(s, t, max_order: int = DEFAULT_MAX_ORDER, fixtures=None):
    """Search for an aperiodic monoid refuting ``s = t``.

    Visits ``fixtures`` (default: the shipped fixture set) and then every
    aperiodic monoid of order <= ``max_order``. In each monoid the assignment
    sending every letter to the element of the same name is tried before the
    exhaustive search. Returns ``(M, witness)`` or None; None is not a proof
    that the identity holds.
    """
    s, t = _as_term(s), _as_term(t)
    if fixtures is None:
        fixtures = fixture_monoids()
    candidates = itertools.chain(
        (M for M in fixtures if is_aperiodic(M)),
        itertools.chain.from_iterable(
            enumerate_monoids(n, aperiodic_only=True, max_order=max_order)
            for n in range(1, max_order + 1)),
    )
    alphabet = sorted(letters(s) | letters(t))
    for M in candidates:
        # a syntactic monoid names the image of a letter after the letter: try that first
        if all(a in M.elements for a in alphabet):
            h = {a: M.index(a) for a in alphabet}
            if eval_term(M, s, h) != eval_term(M, t, h):
                return M, {a: a for a in alphabet}
        check = identity_holds(M, s, t)
        if not check.holds:
            return M, check.witness
    return None
