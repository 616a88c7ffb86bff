"""Subsets of F_p^n as Python-int bitsets, plus the additive operations on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import EmptyInput, HypothesisViolated, SpaceMismatch, ZeroDilation
from .space import LinearAuto, Space, make_space


def iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class GroupSet:
    """A subset of ``space``; bit i of ``bits`` is set iff element i is a member."""

    space: Space
    bits: int = 0

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.space.order:
            raise ValueError("bit mask does not fit the space")

    @classmethod
    def of(cls, space: Space, elements: Iterable[int]) -> GroupSet:
        bits = 0
        for x in elements:
            if not 0 <= x < space.order:
                raise ValueError(f"element {x} outside {space}")
            bits |= 1 << x
        return cls(space, bits)

    @classmethod
    def from_coords(cls, space: Space, points: Iterable[Sequence[int]]) -> GroupSet:
        return cls.of(space, (space.from_coords(pt) for pt in points))

    @classmethod
    def full(cls, space: Space) -> GroupSet:
        return cls(space, space.full)

    @classmethod
    def from_hex(cls, p: int, n: int, text: str) -> GroupSet:
        space = make_space(p, n)
        raw = bytes.fromhex(text)
        if len(raw) != (space.order + 7) // 8:
            raise ValueError(f"hex payload has {len(raw)} bytes, expected {(space.order + 7) // 8}")
        return cls(space, int.from_bytes(raw, "little"))

    def to_hex(self) -> str:
        """Lowercase hex of the bit array, least significant byte first."""
        return self.bits.to_bytes((self.space.order + 7) // 8, "little").hex()

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> x & 1)

    def __bool__(self) -> bool:
        return bool(self.bits)

    def __repr__(self) -> str:
        return f"GroupSet({self.space.p}^{self.space.n}, {sorted(self)})"

    def coords(self) -> list[tuple[int, ...]]:
        return [self.space.to_coords(x) for x in self]

    def _check(self, other: GroupSet) -> None:
        if other.space != self.space:
            raise SpaceMismatch(f"{self.space} vs {other.space}")

    def __or__(self, other: GroupSet) -> GroupSet:
        self._check(other)
        return GroupSet(self.space, self.bits | other.bits)

    def __and__(self, other: GroupSet) -> GroupSet:
        self._check(other)
        return GroupSet(self.space, self.bits & other.bits)

    def __sub__(self, other: GroupSet) -> GroupSet:
        self._check(other)
        return GroupSet(self.space, self.bits & ~other.bits)

    def complement(self) -> GroupSet:
        return GroupSet(self.space, self.space.full ^ self.bits)

    def issubset(self, other: GroupSet) -> bool:
        self._check(other)
        return not self.bits & ~other.bits

    def isdisjoint(self, other: GroupSet) -> bool:
        self._check(other)
        return not self.bits & other.bits

    def __le__(self, other: GroupSet) -> bool:
        return self.issubset(other)

    def shift(self, x: int) -> GroupSet:
        """The translate ``self + x``."""
        return GroupSet(self.space, self.space.translate(self.bits, x))


def sumset(a: GroupSet, b: GroupSet) -> GroupSet:
    """Exact sumset A + B, iterating over the smaller operand."""
    a._check(b)
    if len(a) > len(b):
        a, b = b, a
    tr = a.space.translate
    out = 0
    for x in a:
        out |= tr(b.bits, x)
    return GroupSet(a.space, out)


def negate(a: GroupSet) -> GroupSet:
    return GroupSet(a.space, a.space.map_bits(a.bits, a.space._neg))


def diffset(a: GroupSet, b: GroupSet) -> GroupSet:
    """A - B."""
    return sumset(a, negate(b))


def dilate(a: GroupSet, c: int) -> GroupSet:
    s = a.space
    c %= s.p
    if not c:
        raise ZeroDilation("dilation factor must be nonzero mod p")
    if c == 1:
        return a
    return GroupSet(s, s.map_bits(a.bits, _scalar_perm(s, c)))


def _scalar_perm(s: Space, c: int) -> list[int]:
    cache = s.__dict__.setdefault("_scalar_perm_cache", {})
    perm = cache.get(c)
    if perm is None:
        perm = cache[c] = [int(v) for v in s.indices_of(c * s.coord_array)]
    return perm


def apply_auto(a: GroupSet, auto: LinearAuto) -> GroupSet:
    s = a.space
    return GroupSet(s, s.map_bits(a.bits, auto.permutation(s)))


def is_sum_free(a: GroupSet) -> bool:
    """True iff x + y = z has no solution in A (x = y allowed)."""
    s = a.space
    tr = s.translate
    bits = a.bits
    for x in a:
        if tr(bits, x) & bits:
            return False
    return True


def symmetry_group(x: GroupSet) -> GroupSet:
    """Sym(X) = {g : g + X = X}, computed as the intersection of X - x over x in X."""
    if not x:
        raise EmptyInput("symmetry group of the empty set is undefined here")
    s = x.space
    tr = s.translate
    neg = s._neg
    out = s.full
    for e in x:
        out &= tr(x.bits, neg[e])
        if out == 1:
            break
    return GroupSet(s, out)


def span(space: Space, vectors: Iterable[int]) -> GroupSet:
    """The linear span of the given elements."""
    bits = 1
    for v in vectors:
        if bits >> v & 1:
            continue
        layer = bits
        for c in range(1, space.p):
            bits |= space.translate(layer, space.scale(c, v))
    return GroupSet(space, bits)


def basis_of(k: GroupSet) -> list[int]:
    """A basis (element indices) of the subgroup ``k``, greedy by index."""
    s = k.space
    basis: list[int] = []
    spanned = 1
    for v in k:
        if not spanned >> v & 1:
            basis.append(v)
            spanned = span(s, basis).bits
    return basis


def is_subgroup(k: GroupSet) -> bool:
    return bool(k.bits & 1) and sumset(k, k) == k


@dataclass(frozen=True)
class KneserDecomposition:
    K: GroupSet
    L: GroupSet
    A_star: GroupSet
    B_star: GroupSet
    C_star: GroupSet


def kneser_decompose(a: GroupSet, b: GroupSet, c: GroupSet) -> KneserDecomposition:
    """Split F_p^n = K + L around K = Sym(A+B) for a near-extremal triple.

    Requires A, B, C nonempty, (A+B) disjoint from C and
    |A|+|B|+|C| > (p^2+1) p^(n-2).  The complement line L is spanned by the
    first standard basis vector outside K.
    """
    a._check(b)
    a._check(c)
    s = a.space
    p, n = s.p, s.n
    if not (a and b and c):
        raise HypothesisViolated("A, B, C must be nonempty")
    ab = sumset(a, b)
    if not ab.isdisjoint(c):
        raise HypothesisViolated("A+B meets C")
    total = len(a) + len(b) + len(c)
    # total > (p^2+1) p^(n-2), scaled by p^2 to stay integral for n = 1
    if total * p * p <= (p * p + 1) * p**n:
        raise HypothesisViolated(f"|A|+|B|+|C| = {total} is not above (p^2+1)p^(n-2)")
    k = symmetry_group(ab)
    basis_vectors = [s.from_coords([int(i == j) for j in range(n)]) for i in range(n)]
    e = next(v for v in basis_vectors if v not in k)
    line = span(s, [e])
    line_elems = sorted(line)

    def star(x: GroupSet) -> GroupSet:
        # X_star: points t of L whose coset t + K meets X
        xk = sumset(x, k)
        return GroupSet.of(s, (t for t in line_elems if t in xk))

    return KneserDecomposition(k, line, star(a), star(b), star(c))
