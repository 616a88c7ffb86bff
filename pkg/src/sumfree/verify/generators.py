"""Seeded instance generators for the randomized law checks.

Uniform sampling almost never meets the extremal hypotheses of the lemmas,
so triples are assembled fibre by fibre around near-tight star sets and
single sets are grown from structured, cuboid or near-structured seeds.
"""

from __future__ import annotations

import random

from ..build import (
    StructuredWitness,
    check_P,
    cuboid_images,
    six_m_minus_one,
    structured,
    witness_sf2_2mod3,
)
from ..errors import BadP
from ..sets import GroupSet, apply_auto, diffset, iter_bits, sumset
from ..space import LinearAuto, Space, make_space


def random_subset(s: Space, rng: random.Random, density: float | None = None) -> GroupSet:
    d = rng.random() if density is None else density
    bits = 0
    for i in range(s.order):
        if rng.random() < d:
            bits |= 1 << i
    return GroupSet(s, bits)


def random_nonempty(s: Space, rng: random.Random) -> GroupSet:
    while True:
        g = random_subset(s, rng)
        if g:
            return g


def random_ap(s: Space, rng: random.Random, length: int, d: int | None = None) -> GroupSet:
    """Arithmetic progression in F_p (n = 1)."""
    p = s.p
    d = d or rng.randrange(1, p)
    a = rng.randrange(p)
    return GroupSet.of(s, {(a + i * d) % p for i in range(length)})


def _fiber_set(s: Space, star: list[int], rng: random.Random, holes: int) -> GroupSet:
    """Union of {i} x F_p^(n-1) over star, minus ``holes`` random points."""
    w = s.p ** (s.n - 1)
    block = (1 << w) - 1
    bits = 0
    for i in star:
        bits |= block << (i * w)
    members = list(iter_bits(bits))
    for x in rng.sample(members, min(holes, len(members) - 1)):
        bits &= ~(1 << x)
    return GroupSet(s, bits)


def _holes(rng: random.Random, s: Space) -> int:
    if s.n == 1:
        return 0
    return min(int(rng.expovariate(0.4)), s.p ** (s.n - 1))


def near_tight_triple(s: Space, rng: random.Random) -> tuple[GroupSet, GroupSet, GroupSet]:
    """(A, B, C) with (A+B) disjoint from C and |A|+|B|+|C| near (p+1)p^(n-1)."""
    p = s.p
    if rng.random() < 0.15:
        while True:
            a = random_subset(s, rng, rng.random() * 0.2)
            b = random_subset(s, rng, rng.random() * 0.2)
            comp = sumset(a, b).complement()
            if a and b and comp:
                break
        c = GroupSet(s, comp.bits & random_subset(s, rng).bits)
        return a, b, c if c else comp
    d = rng.randrange(1, p)
    alpha = rng.randint(1, p - 1)
    beta = rng.randint(1, p - alpha)
    a0, b0 = rng.randrange(p), rng.randrange(p)
    a_star = [(a0 + i * d) % p for i in range(alpha)]
    b_star = [(b0 + i * d) % p for i in range(beta)]
    used = {(a0 + b0 + i * d) % p for i in range(alpha + beta - 1)}
    free = [t for t in range(p) if t not in used]
    short = rng.choice((0, 0, 0, 1, 2))
    c_star = free if len(free) <= short else free[: len(free) - short]
    if not c_star:
        c_star = free[:1] or [next(t for t in range(p) if t not in used)]
    rng.shuffle(c_star)
    return _assemble(s, rng, a_star, b_star, c_star)


def lemma_abcd_triple(s: Space, rng: random.Random) -> tuple[GroupSet, GroupSet, GroupSet]:
    """Triples aimed at |B| + p^(n-1) > |A - C| with B filling F_p \\ (C - A)."""
    p = s.p
    d = rng.randrange(1, p)
    budget = (p + 1) // 2
    alpha = rng.randint(1, budget - 1)
    gamma = rng.randint(1, budget - alpha)
    a0, c0 = rng.randrange(p), rng.randrange(p)
    a_star = [(a0 + i * d) % p for i in range(alpha)]
    c_star = [(c0 + i * d) % p for i in range(gamma)]
    c_minus_a = {(c - a) % p for c in c_star for a in a_star}
    b_star = [t for t in range(p) if t not in c_minus_a]
    return _assemble(s, rng, a_star, b_star, c_star)


def _assemble(s: Space, rng: random.Random, a_star, b_star, c_star):
    sets = tuple(_fiber_set(s, star, rng, _holes(rng, s)) for star in (a_star, b_star, c_star))
    if s.n > 1 and rng.random() < 0.5:
        auto = s.random_automorphism(rng)
        sets = tuple(apply_auto(x, auto) for x in sets)
    return sets


# -- large sum-free sets -------------------------------------------------------


def random_P(rest: Space, rng: random.Random) -> GroupSet:
    """Random P with 0 not in P+P: at most one of x, -x for each nonzero x."""
    seen = set()
    members = []
    density = rng.random()
    for x in range(1, rest.order):
        if x in seen:
            continue
        y = rest.neg(x)
        seen.update((x, y))
        if rng.random() < density:
            members.append(rng.choice((x, y)))
    P = GroupSet.of(rest, members)
    check_P(P)
    return P


def random_witness(s: Space, rng: random.Random, auto: LinearAuto | None = None) -> StructuredWitness:
    ell = rng.randint(1, s.n)
    P = random_P(make_space(s.p, ell - 1), rng) if ell > 1 else None
    return StructuredWitness(ell, auto or s.random_automorphism(rng), P)


def slab_automorphism(s: Space, rng: random.Random, scale_first: bool) -> LinearAuto:
    """Automorphism (x0, x') -> (c x0, x0 y + M x'), c = 1 unless ``scale_first``."""
    n, p = s.n, s.p
    c = rng.randrange(1, p) if scale_first else 1
    while True:
        m = [[rng.randrange(p) for _ in range(n - 1)] for _ in range(n - 1)]
        if n == 1:
            break
        cand = LinearAuto(tuple(tuple(r) for r in m))
        if cand.is_invertible(p):
            break
    y = [rng.randrange(p) for _ in range(n - 1)]
    rows = [(c,) + (0,) * (n - 1)]
    for i in range(n - 1):
        rows.append((y[i],) + tuple(m[i]))
    return LinearAuto(tuple(rows))


def forbidden(s: Space, bits: int) -> int:
    """Elements that cannot join the sum-free set ``bits``: A+A, A-A, A/2 and 0."""
    a = GroupSet(s, bits)
    out = sumset(a, a).bits | diffset(a, a).bits | 1
    if s._half is not None:
        for x in iter_bits(bits):
            out |= 1 << s._half[x]
    return out


def greedy_extend(s: Space, bits: int, rng: random.Random, allowed: int | None = None) -> int:
    """Add random admissible elements until the set is maximal inside ``allowed``."""
    allowed = s.full if allowed is None else allowed
    forb = forbidden(s, bits)
    neg, half, tr = s._neg, s._half, s.translate
    na = s.map_bits(bits, neg)
    while True:
        cand = allowed & ~forb & ~bits
        if not cand:
            return bits
        pool = list(iter_bits(cand))
        x = rng.choice(pool)
        bits |= 1 << x
        na |= 1 << neg[x]
        forb |= tr(bits, x) | tr(na, x) | tr(bits, neg[x])
        if half is not None:
            forb |= 1 << half[x]


def perturb(s: Space, a: GroupSet, rng: random.Random, allowed: int | None = None) -> GroupSet:
    members = list(a)
    bits = a.bits
    for x in rng.sample(members, min(len(members), rng.randint(1, 4))):
        bits &= ~(1 << x)
    return GroupSet(s, greedy_extend(s, bits, rng, allowed))


def slab_mask(s: Space, first_values) -> int:
    w = s.p ** (s.n - 1)
    block = (1 << w) - 1
    out = 0
    for k in first_values:
        out |= block << (k * w)
    return out


def large_sum_free(s: Space, rng: random.Random, shape: str = "any") -> GroupSet:
    """A sum-free set near the structured size, from a mix of seeds.

    shape "slab": stays inside [2m-1, 4m-1] x F_p^(n-1) (first coordinate fixed);
    shape "fibred": first coordinate preserved up to a scalar;
    shape "any": arbitrary automorphic position.
    """
    m = six_m_minus_one(s.p)
    if shape == "slab":
        auto = slab_automorphism(s, rng, scale_first=False)
    elif shape == "fibred":
        auto = slab_automorphism(s, rng, scale_first=True)
    else:
        auto = s.random_automorphism(rng)
    roll = rng.random()
    if roll < 0.5 or shape == "slab":
        seed = structured(s, random_witness(s, rng, auto))
    elif roll < 0.75:
        cub = cuboid_images(s)
        seed = GroupSet(s, rng.choice(cub)) if shape == "any" else apply_auto(
            GroupSet(s, slab_mask(s, range(2 * m, 4 * m))), auto
        )
        drop = rng.sample(list(seed), rng.randint(0, s.p ** (s.n - 1)))
        for x in drop:
            seed = GroupSet(s, seed.bits & ~(1 << x))
    else:
        x = rng.randrange(1, s.p ** (s.n - 1)) if s.n > 1 else None
        try:
            seed = apply_auto(witness_sf2_2mod3(s, x), auto)
        except Exception:
            seed = structured(s, random_witness(s, rng, auto))
    if rng.random() < 0.5:
        allowed = apply_auto(GroupSet(s, slab_mask(s, range(2 * m - 1, 4 * m))), auto).bits if shape == "slab" else None
        seed = perturb(s, seed, rng, allowed)
    return seed


__all__ = [
    "BadP",
    "forbidden",
    "greedy_extend",
    "large_sum_free",
    "lemma_abcd_triple",
    "near_tight_triple",
    "perturb",
    "random_P",
    "random_ap",
    "random_nonempty",
    "random_subset",
    "random_witness",
    "slab_automorphism",
    "slab_mask",
]
