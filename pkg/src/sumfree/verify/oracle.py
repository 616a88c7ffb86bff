"""Brute-force reference for sf_k, independent of the bitset search.

Works on coordinate tuples with plain Python sets.  Every subset of the
group is accounted for: the enumeration only skips supersets of sets that
already contain a Schur triple, and those are never sum-free.
"""

from __future__ import annotations

import itertools

from ..errors import SpaceTooLarge
from ..sets import GroupSet
from ..solve import SearchOutcome
from ..space import Space

ORACLE_MAX_ORDER = 25

Point = tuple[int, ...]


def all_sum_free_sets(s: Space) -> list[frozenset[Point]]:
    """Every sum-free subset of F_p^n (the empty set included)."""
    if s.order > ORACLE_MAX_ORDER:
        raise SpaceTooLarge(f"oracle is limited to p^n <= {ORACLE_MAX_ORDER}, got {s.order}")
    p = s.p
    points = [pt for pt in itertools.product(range(p), repeat=s.n) if any(pt)]

    def add(x: Point, y: Point) -> Point:
        return tuple((a + b) % p for a, b in zip(x, y))

    out: list[frozenset[Point]] = []

    def grow(start: int, chosen: list[Point], members: set[Point]) -> None:
        out.append(frozenset(members))
        for j in range(start, len(points)):
            z = points[j]
            if add(z, z) in members or add(z, z) == z:
                continue
            bad = False
            for a in chosen:
                za = add(z, a)
                if za in members or za == z:
                    bad = True
                    break
            if not bad:
                for a, b in itertools.combinations_with_replacement(chosen, 2):
                    if add(a, b) == z:
                        bad = True
                        break
            if bad:
                continue
            chosen.append(z)
            members.add(z)
            grow(j + 1, chosen, members)
            members.remove(z)
            chosen.pop()

    grow(0, [], set())
    return out


def _as_groupsets(s: Space, sets) -> list[GroupSet]:
    gs = [GroupSet.from_coords(s, sorted(x)) for x in sets]
    return sorted(gs, key=lambda g: g.to_hex())


def oracle_hierarchy(s: Space, k: int) -> list[SearchOutcome]:
    """sf_0 .. sf_k straight from the recursive definition."""
    current = all_sum_free_sets(s)
    levels = []
    for _ in range(k + 1):
        value = max((len(x) for x in current), default=0)
        extremal = [x for x in current if len(x) == value] if current else []
        levels.append(
            SearchOutcome(value, _as_groupsets(s, extremal), "proved", len(current), "none")
        )
        current = [x for x in current if not any(x <= b for b in extremal)]
    return levels


def oracle_max_sum_free(s: Space) -> SearchOutcome:
    return oracle_hierarchy(s, 0)[0]
