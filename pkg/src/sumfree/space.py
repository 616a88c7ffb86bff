"""Arithmetic of F_p^n: element codec, linear forms and the group GL(n, p).

Elements are plain integers in ``[0, p**n)``.  The index is the base-p digit
string ``(x_0, ..., x_{n-1})`` read most significant digit first, so ``x_0``
(the slicing coordinate) selects a contiguous block of ``p**(n-1)`` indices.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import CompositeModulus, DimensionTooLarge, GroupTooLarge

MAX_ORDER = 1 << 16
DEFAULT_AUT_CAP = 10**6


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def gl_order(n: int, p: int) -> int:
    """Return |GL(n, p)|."""
    q = p**n
    return math.prod(q - p**i for i in range(n))


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] % p), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] % p:
                f = m[r][col]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class Space:
    """The group F_p^n."""

    p: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if not is_prime(self.p):
            raise CompositeModulus(f"{self.p} is not prime")
        if self.p**self.n > MAX_ORDER:
            raise DimensionTooLarge(f"{self.p}^{self.n} exceeds the cap {MAX_ORDER}")

    def __repr__(self) -> str:
        return f"Space(p={self.p}, n={self.n})"

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def full(self) -> int:
        """Bit mask of the whole group."""
        return (1 << self.order) - 1

    # -- codec -------------------------------------------------------------

    def to_coords(self, i: int) -> tuple[int, ...]:
        return self._coords[i]

    def from_coords(self, xs: Sequence[int]) -> int:
        if len(xs) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(xs)}")
        i = 0
        for x in xs:
            i = i * self.p + x % self.p
        return i

    @cached_property
    def _coords(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(self.p), repeat=self.n))

    @cached_property
    def coord_array(self) -> np.ndarray:
        """``order x n`` integer array of coordinates."""
        return np.array(self._coords, dtype=np.int64).reshape(self.order, self.n)

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.n - 1, -1, -1, dtype=np.int64)

    def indices_of(self, coords: np.ndarray) -> np.ndarray:
        """Vectorised inverse of ``coord_array`` (coordinates reduced mod p)."""
        return (np.asarray(coords) % self.p) @ self._weights

    # -- arithmetic --------------------------------------------------------

    def combine(self, c1: int, x: int, c2: int, y: int) -> int:
        """Return ``c1*x + c2*y``."""
        p = self.p
        cx, cy = self._coords[x], self._coords[y]
        return self.from_coords([(c1 * a + c2 * b) % p for a, b in zip(cx, cy)])

    def add(self, x: int, y: int) -> int:
        return self.combine(1, x, 1, y)

    def neg(self, x: int) -> int:
        return self._neg[x]

    def scale(self, c: int, x: int) -> int:
        return self.combine(c, x, 0, x)

    @cached_property
    def _neg(self) -> list[int]:
        return [int(v) for v in self.indices_of(-self.coord_array)]

    @cached_property
    def _half(self) -> list[int] | None:
        # y with 2y = x; undefined for p = 2
        if self.p == 2:
            return None
        h = (self.p + 1) // 2
        return [int(v) for v in self.indices_of(h * self.coord_array)]

    @cached_property
    def _digit_masks(self) -> list[list[tuple[int, int, int]]]:
        # [d][c] -> (low mask, up shift, down shift) for adding c to digit d
        p, n = self.p, self.n
        digits = self.coord_array
        out = []
        for d in range(n):
            w = p ** (n - 1 - d)
            row = [(0, 0, 0)]
            for c in range(1, p):
                low = 0
                for i in np.flatnonzero(digits[:, d] < p - c):
                    low |= 1 << int(i)
                row.append((low, c * w, (p - c) * w))
            out.append(row)
        return out

    def translate(self, bits: int, x: int) -> int:
        """Return the bit mask of ``S + x`` where ``bits`` encodes S."""
        if not x:
            return bits
        full = self.full
        masks = self._digit_masks
        for d, c in enumerate(self._coords[x]):
            if c:
                low, up, down = masks[d][c]
                bits = ((bits & low) << up) | ((bits & (full ^ low)) >> down)
        return bits

    def map_bits(self, bits: int, perm: Sequence[int]) -> int:
        out = 0
        while bits:
            low = bits & -bits
            out |= 1 << perm[low.bit_length() - 1]
            bits ^= low
        return out

    # -- forms and automorphisms ------------------------------------------

    def linear_forms(self) -> list[LinearForm]:
        return list(self._forms)

    @cached_property
    def _forms(self) -> tuple[LinearForm, ...]:
        forms = []
        for coeffs in itertools.product(range(self.p), repeat=self.n):
            first = next((c for c in coeffs if c), 0)
            if first == 1:
                forms.append(LinearForm(coeffs))
        return tuple(forms)

    def form_values(self, form: LinearForm) -> np.ndarray:
        """Value of ``form`` at every element, as an int array."""
        return (self.coord_array @ np.array(form.coeffs, dtype=np.int64)) % self.p

    def fibers(self, form: LinearForm) -> tuple[int, ...]:
        """Bit masks of the p fibers ``form^-1(k)``."""
        cache = self.__dict__.setdefault("_fiber_cache", {})
        hit = cache.get(form.coeffs)
        if hit is None:
            vals = self.form_values(form)
            hit = tuple(
                sum(1 << int(i) for i in np.flatnonzero(vals == k)) for k in range(self.p)
            )
            cache[form.coeffs] = hit
        return hit

    def automorphisms(self, cap: int = DEFAULT_AUT_CAP) -> Iterator[LinearAuto]:
        """Every element of GL(n, p), built row by row.

        Raises GroupTooLarge before yielding anything if |GL(n,p)| > cap.
        """
        size = gl_order(self.n, self.p)
        if size > cap:
            raise GroupTooLarge(f"|GL({self.n},{self.p})| = {size} exceeds cap {cap}")
        return self._gl_stream()

    def _gl_stream(self) -> Iterator[LinearAuto]:
        p, n = self.p, self.n
        vectors = list(itertools.product(range(p), repeat=n))

        def span(rows: list[tuple[int, ...]]) -> set[tuple[int, ...]]:
            out = {tuple([0] * n)}
            for r in rows:
                out = {tuple((a + c * b) % p for a, b in zip(v, r)) for v in out for c in range(p)}
            return out

        def extend(rows: list[tuple[int, ...]]) -> Iterator[LinearAuto]:
            if len(rows) == n:
                yield LinearAuto(tuple(rows))
                return
            taken = span(rows)
            for v in vectors:
                if v not in taken:
                    yield from extend(rows + [v])

        yield from extend([])

    def random_automorphism(self, rng: random.Random) -> LinearAuto:
        while True:
            rows = tuple(tuple(rng.randrange(self.p) for _ in range(self.n)) for _ in range(self.n))
            if rank_mod_p(rows, self.p) == self.n:
                return LinearAuto(rows)


@functools.lru_cache(maxsize=None)
def make_space(p: int, n: int) -> Space:
    """Validated, shared Space instance (its lookup tables are built once)."""
    return Space(p, n)


@dataclass(frozen=True)
class LinearForm:
    """A nonzero linear map F_p^n -> F_p, first nonzero coefficient 1."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not any(self.coeffs):
            raise ValueError("a linear form must have a nonzero coefficient")

    def __call__(self, space: Space, x: int) -> int:
        return sum(a * b for a, b in zip(self.coeffs, space.to_coords(x))) % space.p

    @classmethod
    def normalized(cls, coeffs: Sequence[int], p: int) -> LinearForm:
        first = next(c % p for c in coeffs if c % p)
        inv = pow(first, -1, p)
        return cls(tuple(c * inv % p for c in coeffs))


@dataclass(frozen=True)
class LinearAuto:
    """An invertible n x n matrix acting on column vectors: x -> M x."""

    matrix: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, n: int) -> LinearAuto:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def dilation(cls, n: int, c: int) -> LinearAuto:
        return cls(tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n)))

    def is_invertible(self, p: int) -> bool:
        return rank_mod_p(self.matrix, p) == self.n

    def compose(self, other: LinearAuto, p: int) -> LinearAuto:
        """Return ``self o other``."""
        a = np.array(self.matrix, dtype=np.int64)
        b = np.array(other.matrix, dtype=np.int64)
        return LinearAuto(tuple(tuple(int(v) for v in row) for row in (a @ b) % p))

    def inverse(self, p: int) -> LinearAuto:
        n = self.n
        m = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(self.matrix)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] % p), None)
            if pivot is None:
                raise ValueError("matrix is singular mod p")
            m[col], m[pivot] = m[pivot], m[col]
            inv = pow(m[col][col], -1, p)
            m[col] = [v * inv % p for v in m[col]]
            for r in range(n):
                if r != col and m[r][col] % p:
                    f = m[r][col]
                    m[r] = [(a - f * b) % p for a, b in zip(m[r], m[col])]
        return LinearAuto(tuple(tuple(row[n:]) for row in m))

    def permutation(self, space: Space) -> list[int]:
        """Image index of every element of ``space``."""
        m = np.array(self.matrix, dtype=np.int64)
        return [int(v) for v in space.indices_of(space.coord_array @ m.T)]

    def apply(self, space: Space, x: int) -> int:
        cx = space.to_coords(x)
        return space.from_coords([sum(a * b for a, b in zip(row, cx)) for row in self.matrix])
