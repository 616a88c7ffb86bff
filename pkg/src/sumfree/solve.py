"""Exact maximum sum-free search, coverage tests and the sf_k hierarchy."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Literal

from .build import (
    StructuredWitness,
    cuboid_images,
    rs_images,
    six_m_minus_one,
    structured,
)
from .errors import BadPrime, GroupTooLarge, UnsupportedPrime
from .sets import GroupSet, apply_auto, basis_of, dilate, iter_bits, span, sumset, symmetry_group
from .space import DEFAULT_AUT_CAP, LinearAuto, Space, gl_order, make_space

log = logging.getLogger(__name__)

SOLVER_VERSION = "1"

Dedup = Literal["none", "anchored", "dilation", "gl"]


@dataclass(frozen=True)
class Budget:
    max_nodes: int = 50_000_000
    deterministic: bool = True

    def __post_init__(self) -> None:
        if self.max_nodes <= 0:
            raise ValueError("max_nodes must be positive")


@dataclass
class SearchOutcome:
    value: int
    witnesses: list[GroupSet]
    status: str  # "proved" or "indeterminate"
    nodes: int
    dedup: str = "none"

    @property
    def proved(self) -> bool:
        return self.status == "proved"

    def certificate(self, k: int) -> dict:
        s = self.witnesses[0].space if self.witnesses else None
        return {
            "k": k,
            "value": self.value,
            "status": self.status,
            "witnesses": [w.to_hex() for w in self.witnesses],
            "dedup": self.dedup,
            "nodes": self.nodes,
            **({"p": s.p, "n": s.n} if s else {}),
        }


class NotCovered:
    """Filter accepting the sets contained in no member of ``family``.

    The predicate is upward closed, which lets the search discard a subtree
    as soon as the union of the partial set and its candidates is covered.
    """

    def __init__(self, space: Space, family: Iterable[int]):
        self.space = space
        self.family = tuple(sorted(set(family)))
        self._holes = tuple(space.full ^ w for w in self.family)

    def covered(self, bits: int) -> bool:
        for h in self._holes:
            if not bits & h:
                return True
        return False

    def __call__(self, a: GroupSet) -> bool:
        return not self.covered(a.bits)


class _BudgetExhausted(Exception):
    pass


def _sort_sets(sets: Iterable[GroupSet]) -> list[GroupSet]:
    return sorted(sets, key=lambda g: g.to_hex())


def max_sum_free(
    s: Space,
    filter: Callable[[GroupSet], bool] | None = None,
    budget: Budget | None = None,
    *,
    anchor: int | None = None,
    collect: bool = True,
) -> SearchOutcome:
    """Largest sum-free sets passing ``filter``, with every optimal set.

    Branch and bound over elements in index order.  Including x forbids
    x + A', x - A', A' - x and x/2 (A' = A with x); the remaining candidates
    are exactly the elements that keep A' sum-free.  With ``anchor`` only
    sets containing that element are explored, which loses nothing when the
    filter is invariant under automorphisms.
    """
    budget = budget or Budget()
    tr = s.translate
    neg = s._neg
    half = s._half
    full = s.full
    max_nodes = budget.max_nodes
    covered = getattr(filter, "covered", None)
    accept = filter or (lambda a: True)

    best = 0
    found: list[int] = []
    nodes = 0

    def include(a: int, na: int, cand: int, x: int) -> tuple[int, int, int]:
        bx = 1 << x
        a |= bx
        na |= 1 << neg[x]
        forb = tr(a, x) | tr(na, x) | tr(a, neg[x]) | bx
        if half is not None:
            forb |= 1 << half[x]
        return a, na, cand & ~forb

    def rec(a: int, na: int, cand: int, size: int) -> None:
        nonlocal best, found, nodes
        nodes += 1
        if nodes > max_nodes:
            raise _BudgetExhausted
        while True:
            if size + cand.bit_count() < best:
                return
            if not cand:
                if size and accept(GroupSet(s, a)):
                    if size > best:
                        best = size
                        found = [a]
                    elif collect:
                        found.append(a)
                return
            if covered is not None and covered(a | cand):
                return
            low = cand & -cand
            x = low.bit_length() - 1
            a2, na2, cand2 = include(a, na, cand ^ low, x)
            rec(a2, na2, cand2, size + 1)
            # exclude x and continue in place
            cand ^= low
            nodes += 1
            if nodes > max_nodes:
                raise _BudgetExhausted

    start = full ^ 1
    status = "proved"
    try:
        if anchor is None:
            rec(0, 0, start, 0)
        else:
            if not 0 < anchor < s.order:
                raise ValueError("anchor must be a nonzero element")
            a, na, cand = include(0, 0, start, anchor)
            rec(a, na, cand, 1)
    except _BudgetExhausted:
        status = "indeterminate"
    witnesses = _sort_sets(GroupSet(s, b) for b in found)
    if not collect:
        witnesses = witnesses[:1]
    return SearchOutcome(best, witnesses, status, nodes, "anchored" if anchor is not None else "none")


# -- coverage ---------------------------------------------------------------


def is_cuboid_covered(a: GroupSet) -> bool:
    """True iff A lies in an automorphic image of the cuboid.

    Equivalently some nonzero linear form maps A into the middle interval.
    For p = 3 the role of the cuboid is played by the fiber {lam = 1}.
    """
    s = a.space
    if s.p % 3 == 1:
        raise UnsupportedPrime(f"p = {s.p} is 1 mod 3; use covered_by_family")
    bits = a.bits
    return any(not bits & ~w for w in cuboid_images(s))


def _form_values_of(s: Space, form, bits: int) -> set[int]:
    return {k for k, f in enumerate(s.fibers(form)) if f & bits}


def covered_by_family(
    a: GroupSet,
    family: Iterable[GroupSet],
    auts: Literal["gl", "dilation", "none"] = "gl",
    cap: int = DEFAULT_AUT_CAP,
) -> bool:
    """True iff A is contained in phi(B) for a family member B and automorphism phi.

    Members that are unions of fibers of a linear form are handled through
    forms; the rest need GL(n, p) enumeration, guarded by ``cap``.
    """
    s = a.space
    family = list(family)
    for b in family:
        a._check(b)
        if not a.bits & ~b.bits:
            return True
    if auts == "none":
        return False
    if auts == "dilation" or s.n == 1:
        return any(
            not dilate(a, c).bits & ~b.bits for b in family for c in range(2, s.p)
        )
    pending = []
    for b in family:
        if not b:
            continue
        k = symmetry_group(b)
        if len(k) == s.order:
            return True  # b is the whole group
        if len(k) * s.p == s.order:
            base = next(f for f in s.linear_forms() if not any(f(s, v) for v in basis_of(k)))
            allowed = _form_values_of(s, base, b.bits)
            for form in s.linear_forms():
                vals = _form_values_of(s, form, a.bits)
                for c in range(1, s.p):
                    if all(c * v % s.p in allowed for v in vals):
                        return True
        else:
            pending.append(b)
    if not pending:
        return False
    for auto in s.automorphisms(cap):
        img = apply_auto(a, auto).bits
        if any(not img & ~b.bits for b in pending):
            return True
    return False


# -- the hierarchy ------------------------------------------------------------


def _closed_form_sf0_family(s: Space) -> list[int] | None:
    if s.p % 3 == 2 or s.p == 3:
        return cuboid_images(s)
    if s.n == 1:
        return rs_images(s)
    return None


def _dilation_orbit(g: GroupSet) -> set[int]:
    return {dilate(g, c).bits for c in range(1, g.space.p)}


def _gl_orbits(sets: list[GroupSet], cap: int) -> list[GroupSet]:
    s = sets[0].space
    perms = [auto.permutation(s) for auto in s.automorphisms(cap)]
    remaining = {g.bits for g in sets}
    reps = []
    for bits in sorted(remaining):
        if bits not in remaining:
            continue
        orbit = {s.map_bits(bits, perm) for perm in perms}
        remaining -= orbit
        reps.append(GroupSet(s, min(orbit)))
    return _sort_sets(reps)


def dedup_sets(sets: list[GroupSet], mode: Dedup, cap: int = DEFAULT_AUT_CAP) -> list[GroupSet]:
    """Orbit representatives (least bit mask) under dilations or GL(n, p)."""
    if mode == "none" or not sets:
        return _sort_sets(sets)
    if mode == "gl" and sets[0].space.n > 1:
        return _gl_orbits(sets, cap)
    if mode in ("gl", "dilation"):
        reps = {min(_dilation_orbit(g)) for g in sets}
        return _sort_sets(GroupSet(sets[0].space, b) for b in reps)
    raise ValueError(f"unknown dedup mode {mode!r}")


def _level(
    s: Space,
    filt: NotCovered | None,
    budget: Budget,
    want_family: bool,
    dedup: Dedup,
    cap: int,
) -> tuple[SearchOutcome, list[int] | None]:
    """Search one level anchored at element 1, then complete the witness family."""
    out = max_sum_free(s, filt, budget, anchor=1)
    if not out.proved or not out.value:
        return SearchOutcome(out.value, out.witnesses, out.status, out.nodes, dedup), (
            [] if out.proved else None
        )
    nodes = out.nodes
    family: list[GroupSet] | None = None
    if want_family or dedup in ("none", "dilation", "gl"):
        if s.n == 1:
            bits = set()
            for w in out.witnesses:
                bits |= _dilation_orbit(w)
            family = _sort_sets(GroupSet(s, b) for b in bits)
        else:
            full = max_sum_free(s, filt, budget)
            nodes += full.nodes
            if not full.proved:
                return SearchOutcome(out.value, out.witnesses, "indeterminate", nodes, dedup), None
            family = full.witnesses
    if dedup == "anchored":
        shown = out.witnesses
    else:
        shown = dedup_sets(family, dedup, cap)
    result = SearchOutcome(out.value, shown, "proved", nodes, dedup)
    return result, [g.bits for g in family] if family is not None else None


def sf_hierarchy(
    s: Space,
    k: int,
    budget: Budget | None = None,
    *,
    dedup: Dedup = "none",
    cap: int = DEFAULT_AUT_CAP,
) -> list[SearchOutcome]:
    """sf_0, ..., sf_k with their extremal families.

    Level j keeps the sum-free sets covered by no extremal set of any earlier
    level.  An empty level has value 0 and no witnesses, and so do all levels
    after it.  Once a level is indeterminate the later ones are reported as
    indeterminate with the trivial lower bound 0.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    budget = budget or Budget()
    levels: list[SearchOutcome] = []
    covered_by: list[int] = []
    for j in range(k + 1):
        if levels and not levels[-1].proved:
            levels.append(SearchOutcome(0, [], "indeterminate", 0, dedup))
            continue
        if levels and levels[-1].value == 0:
            levels.append(SearchOutcome(0, [], "proved", 0, dedup))
            continue
        filt = NotCovered(s, covered_by) if j else None
        want_family = j < k
        closed = _closed_form_sf0_family(s) if j == 0 else None
        outcome, family = _level(
            s, filt, budget, want_family and closed is None, dedup, cap
        )
        log.info("sf_%d(F_%d^%d) = %d [%s, %d nodes]", j, s.p, s.n, outcome.value, outcome.status, outcome.nodes)
        levels.append(outcome)
        if want_family and outcome.proved:
            covered_by.extend(closed if closed is not None else family or [])
    return levels


# -- structured sets ---------------------------------------------------------


def verify_structured_witness(a: GroupSet, w: StructuredWitness) -> bool:
    return a == structured(a.space, w)


def recognize_structured(a: GroupSet, cap: int = DEFAULT_AUT_CAP) -> StructuredWitness | None:
    """Find (ell, auto, P) with A = auto(VS(P) x F_p^(n-ell)), or return None.

    A structured set is invariant exactly under K = Sym(A), of dimension
    n - ell, and its quotient is very structured along some form vanishing
    on K.  Trying every such form and scalar, rebuilding the candidate and
    comparing with A decides the question without enumerating GL(n, p).
    ``cap`` bounds the number of (form, scalar) pairs examined.
    """
    s = a.space
    p, n = s.p, s.n
    m = six_m_minus_one(p)
    width = p ** (n - 1)
    if len(a) != (2 * m - 1) * width:
        return None
    k = symmetry_group(a)
    ksize = len(k)
    if ksize == s.order:
        return None
    kbasis = basis_of(k)
    ell = n - len(kbasis)
    forms = [f for f in s.linear_forms() if not any(f(s, v) for v in kbasis)]
    if len(forms) * (p - 1) > cap:
        raise GroupTooLarge(f"{len(forms) * (p - 1)} form/scalar pairs exceed cap {cap}")
    full_fibers = range(2 * m + 1, 4 * m - 2)
    empty = set(range(p)) - set(range(2 * m - 1, 4 * m))
    for form in forms:
        fib = s.fibers(form)
        sizes = [(a.bits & f).bit_count() for f in fib]
        for c in range(1, p):
            # fiber of c*form at t is the fiber of form at t/c
            cinv = pow(c, -1, p)

            def at(t: int) -> int:
                return sizes[t * cinv % p]

            if (
                at(2 * m - 1) != ksize
                or at(4 * m - 2) != width - ksize
                or at(2 * m) + at(4 * m - 1) != width
                or any(at(t) != width for t in full_fibers)
                or any(at(t) for t in empty)
            ):
                continue
            w = _witness_along(a, form, c, m, kbasis, ell)
            if w is not None:
                return w
    return None


def _witness_along(a: GroupSet, form, c: int, m: int, kbasis: list[int], ell: int) -> StructuredWitness | None:
    s = a.space
    p, n = s.p, s.n
    cinv = pow(c, -1, p)
    fib = s.fibers(form)
    q = next(iter_bits(a.bits & fib[(2 * m - 1) * cinv % p]))
    u = s.scale(pow(2 * m - 1, -1, p), q)
    # complement of K inside ker(form), greedily by index
    spanned = _span_bits(s, kbasis)
    wbasis: list[int] = []
    for v in iter_bits(fib[0]):
        if len(wbasis) == ell - 1:
            break
        if not spanned >> v & 1:
            wbasis.append(v)
            spanned = _span_bits(s, kbasis + wbasis)
    cols = [s.to_coords(v) for v in [u] + wbasis + kbasis]
    auto = LinearAuto(tuple(tuple(col[i] for col in cols) for i in range(n)))
    if ell == 1:
        P = None
    else:
        rest = make_space(p, ell - 1)
        top = 4 * m - 1
        members = []
        for widx in range(rest.order):
            y = (top,) + rest.to_coords(widx) + (0,) * (n - ell)
            if auto.apply(s, s.from_coords(y)) in a:
                members.append(widx)
        P = GroupSet.of(rest, members)
        if P and _zero_in_double(P):
            return None
    w = StructuredWitness(ell, auto, P)
    try:
        return w if structured(s, w) == a else None
    except (BadPrime, ValueError):
        return None


def _span_bits(s: Space, vectors: list[int]) -> int:
    return span(s, vectors).bits


def _zero_in_double(P: GroupSet) -> bool:
    return bool(sumset(P, P).bits & 1)


__all__ = [
    "Budget",
    "NotCovered",
    "SearchOutcome",
    "SOLVER_VERSION",
    "covered_by_family",
    "dedup_sets",
    "gl_order",
    "is_cuboid_covered",
    "max_sum_free",
    "recognize_structured",
    "sf_hierarchy",
    "verify_structured_witness",
]
