"""Regenerate the fixture monoid files under src/omegaterms/data."""
from pathlib import Path

from omegaterms.automata import build_syntactic_fixtures
from omegaterms.monoids import FiniteMonoid, dump_monoid

DATA = Path(__file__).resolve().parent.parent / "src" / "omegaterms" / "data"

BASIC = [
    FiniteMonoid(("1", "0"), 0, ((0, 1), (1, 1)), "U1"),
    FiniteMonoid(("e", "a"), 0, ((0, 1), (1, 0)), "Z2"),
    # x*y = y for x, y non-identity
    FiniteMonoid(("1", "a", "b"), 0, ((0, 1, 2), (1, 1, 2), (2, 1, 2)), "flip-flop"),
]

if __name__ == "__main__":
    for M in BASIC + build_syntactic_fixtures():
        dump_monoid(M, DATA / f"{M.name}.json")
        print(M.name, M.size)
