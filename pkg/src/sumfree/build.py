"""Constructors for the explicit extremal families.

Every constructor builds its canonical representative on the first
coordinate; isomorphic copies come from composing with a LinearAuto.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .errors import BadP, BadPrime, NotSubspace, WrongResidueClass, ZeroDirection
from .sets import GroupSet, apply_auto, dilate, is_subgroup, sumset
from .space import LinearAuto, Space, make_space


def six_m_minus_one(p: int) -> int:
    """Return m for a prime p = 6m - 1 >= 11, else raise BadPrime."""
    if p % 6 != 5 or p < 11:
        raise BadPrime(f"need a prime p = 6m-1 >= 11, got {p}")
    return (p + 1) // 6


def three_m_plus_one(p: int) -> int:
    if p % 3 != 1:
        raise BadPrime(f"need a prime p = 3m+1, got {p}")
    return (p - 1) // 3


def middle_interval(p: int) -> range:
    """The interval [(p+1)/3, (2p-1)/3] for p = 2 mod 3, and {1} for p = 3."""
    if p == 3:
        return range(1, 2)
    if p % 3 != 2:
        raise WrongResidueClass(f"p = {p} is not 2 mod 3")
    return range((p + 1) // 3, (2 * p - 1) // 3 + 1)


def _rest(s: Space) -> Space | None:
    return make_space(s.p, s.n - 1) if s.n > 1 else None


def _slab(s: Space, ks, rest_bits: int) -> int:
    """Bits of {k} x R for k in ks, with R given as a mask on F_p^(n-1)."""
    w = s.p ** (s.n - 1)
    out = 0
    for k in ks:
        out |= rest_bits << ((k % s.p) * w)
    return out


def _rest_full(s: Space) -> int:
    return (1 << s.p ** (s.n - 1)) - 1


def _rest_bits(s: Space, sub: GroupSet | None, what: str) -> int:
    if s.n == 1:
        if sub is not None and sub.bits not in (0, 1):
            raise ValueError(f"{what} must be None or a subset of the one-point space when n = 1")
        return 0 if sub is None else sub.bits
    if sub is None:
        return 0
    if sub.space != _rest(s):
        raise ValueError(f"{what} must live in F_{s.p}^{s.n - 1}")
    return sub.bits


def cuboid(s: Space) -> GroupSet:
    """[(p+1)/3, (2p-1)/3] x F_p^(n-1)."""
    if s.p % 3 != 2:
        raise WrongResidueClass(f"cuboid needs p = 2 mod 3, got {s.p}")
    return GroupSet(s, _slab(s, middle_interval(s.p), _rest_full(s)))


def check_P(P: GroupSet | None) -> None:
    if P is not None and P and sumset(P, P).bits & 1:
        raise BadP("0 lies in P+P")


def very_structured(s: Space, P: GroupSet | None = None) -> GroupSet:
    """The five-part set built from P on the first coordinate.

    {(2m-1,0)} + {2m}x(F\\P) + [2m+1,4m-3]xF + {4m-2}x(F\\{0}) + {4m-1}xP,
    with F = F_p^(n-1) and all unions disjoint.  P must satisfy 0 not in P+P;
    at n = 1 it must be empty (pass None).
    """
    m = six_m_minus_one(s.p)
    if s.n == 1:
        if P is not None and P.bits:
            raise BadP("P must be empty when n = 1")
        return GroupSet.of(s, range(2 * m - 1, 4 * m - 2))
    pb = _rest_bits(s, P, "P")
    check_P(P)
    full = _rest_full(s)
    bits = (
        _slab(s, [2 * m - 1], 1)
        | _slab(s, [2 * m], full ^ pb)
        | _slab(s, range(2 * m + 1, 4 * m - 2), full)
        | _slab(s, [4 * m - 2], full ^ 1)
        | _slab(s, [4 * m - 1], pb)
    )
    return GroupSet(s, bits)


@dataclass(frozen=True)
class StructuredWitness:
    """Data exhibiting a structured set: auto(VS(P) x F_p^(n-ell))."""

    ell: int
    auto: LinearAuto
    P: GroupSet | None = None

    def validate(self, s: Space) -> None:
        if not 1 <= self.ell <= s.n:
            raise ValueError(f"ell must lie in [1, {s.n}], got {self.ell}")
        if self.auto.n != s.n or not self.auto.is_invertible(s.p):
            raise ValueError("auto must be an invertible n x n matrix")
        if self.ell == 1:
            if self.P is not None and self.P.bits:
                raise BadP("P must be empty when ell = 1")
        elif self.P is not None and self.P.space != make_space(s.p, self.ell - 1):
            raise ValueError("P must live in F_p^(ell-1)")
        check_P(self.P)


def structured(s: Space, w: StructuredWitness) -> GroupSet:
    w.validate(s)
    base = very_structured(make_space(s.p, w.ell), w.P if w.ell > 1 else None)
    width = s.p ** (s.n - w.ell)
    block = (1 << width) - 1
    bits = 0
    for b in base:
        bits |= block << (b * width)
    return apply_auto(GroupSet(s, bits), w.auto)


def witness_sf2_2mod3(s: Space, x: int | None = None) -> GroupSet:
    """A sum-free set one element short of the structured sets, not covered by them.

    n = 1 (p >= 17): [2m-2, 4m-5].  n >= 2: {(2m-1,0),(2m-1,x)} +
    [2m,4m-3] x F + {4m-2} x (F \\ {0,x,2x}) for a nonzero x in F = F_p^(n-1).
    """
    m = six_m_minus_one(s.p)
    if s.n == 1:
        if s.p < 17:
            raise BadPrime("sf_2(F_11) = 0; no witness exists for p = 11")
        return GroupSet.of(s, range(2 * m - 2, 4 * m - 4))
    rest = _rest(s)
    if x is None or not x:
        raise ZeroDirection("x must be a nonzero element of F_p^(n-1)")
    x2 = rest.add(x, x)
    full = _rest_full(s)
    bits = (
        _slab(s, [2 * m - 1], 1 | 1 << x)
        | _slab(s, range(2 * m, 4 * m - 2), full)
        | _slab(s, [4 * m - 2], full & ~(1 | 1 << x | 1 << x2))
    )
    return GroupSet(s, bits)


Variant = Literal["low", "high", "split"]


def rs_family(s: Space, variant: Variant, K: GroupSet | None = None) -> GroupSet:
    """The three maximum sum-free families for p = 3m+1.

    low:   {m} x K + [m+1, 2m-1] x F + {2m} x (F \\ K)
    high:  [m+1, 2m] x F
    split: {m, 2m+1} x K + {m+1, 2m} x (F \\ K) + [m+2, 2m-1] x F
    At n = 1 these are [m, 2m-1], [m+1, 2m] and [m, 2m+1] \\ {m+1, 2m}.
    """
    m = three_m_plus_one(s.p)
    full = _rest_full(s)
    if s.n == 1:
        kb = 1
    else:
        if variant != "high":
            if K is None or not is_subgroup(K) or K.space != _rest(s):
                raise NotSubspace("K must be a subspace of F_p^(n-1)")
        kb = K.bits if K is not None else 0
    if variant == "low":
        bits = _slab(s, [m], kb) | _slab(s, range(m + 1, 2 * m), full) | _slab(s, [2 * m], full ^ kb)
    elif variant == "high":
        bits = _slab(s, range(m + 1, 2 * m + 1), full)
    elif variant == "split":
        bits = (
            _slab(s, [m, 2 * m + 1], kb)
            | _slab(s, [m + 1, 2 * m], full ^ kb)
            | _slab(s, range(m + 2, 2 * m), full)
        )
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return GroupSet(s, bits)


def witness_sf1_1mod3(s: Space, x: int | None = None) -> GroupSet:
    """Sum-free set of size m p^(n-1) - 1 covered by no maximum one, p = 3m+1.

    n = 1 (p >= 13): [m-1, 2m-3].  n >= 2: {(m,0),(m,x)} + [m+1,2m-1] x F +
    {2m} x (F \\ {0,x,2x}).
    """
    m = three_m_plus_one(s.p)
    if s.n == 1:
        if s.p < 13:
            raise BadPrime("sf_1(F_7) = 0; no witness exists for p = 7")
        return GroupSet.of(s, range(m - 1, 2 * m - 2))
    rest = _rest(s)
    if x is None or not x:
        raise ZeroDirection("x must be a nonzero element of F_p^(n-1)")
    x2 = rest.add(x, x)
    full = _rest_full(s)
    bits = (
        _slab(s, [m], 1 | 1 << x)
        | _slab(s, range(m + 1, 2 * m), full)
        | _slab(s, [2 * m], full & ~(1 | 1 << x | 1 << x2))
    )
    return GroupSet(s, bits)


def cuboid_images(s: Space) -> list[int]:
    """Bit masks of all sets {x : c*lam(x) in I}, lam a normalized form, c != 0.

    These are exactly the automorphic images of the cuboid (of the fiber
    {lam = 1} when p = 3).  Sorted, without repeats.
    """
    cache = s.__dict__.get("_cuboid_images")
    if cache is not None:
        return cache
    interval = middle_interval(s.p)
    out = set()
    for form in s.linear_forms():
        fib = s.fibers(form)
        for c in range(1, s.p):
            bits = 0
            for k in range(s.p):
                if c * k % s.p in interval:
                    bits |= fib[k]
            out.add(bits)
    s.__dict__["_cuboid_images"] = result = sorted(out)
    return result


def rs_images(s: Space) -> list[int]:
    """All dilates of the three Rhemtulla-Street sets (complete SF~_0 at n = 1)."""
    if s.n != 1:
        raise ValueError("closed-form family only available for n = 1")
    out = set()
    for variant in ("low", "high", "split"):
        base = rs_family(s, variant)
        out.update(dilate(base, c).bits for c in range(1, s.p))
    return sorted(out)
