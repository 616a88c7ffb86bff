"""Character sums over F_p^n and the slice statistics of a set along a form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import EmptyInput, NotSumFree, WrongSpace
from .sets import GroupSet, is_sum_free
from .space import LinearForm, Space

TOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """values[y] = sum over x in A of exp(-2 pi i <x, y> / p), y in index order."""

    values: np.ndarray
    set_size: int


@dataclass(frozen=True)
class SliceProfile:
    form: LinearForm
    sizes: tuple[int, ...]


def _dft_matrix(p: int) -> np.ndarray:
    k = np.arange(p)
    return np.exp(-2j * np.pi * np.outer(k, k) / p)


def spectrum(a: GroupSet) -> Spectrum:
    """Fourier transform of the indicator of A by n passes of a p-point DFT."""
    s = a.space
    p, n = s.p, s.n
    f = np.zeros(s.order, dtype=complex)
    f[list(a)] = 1.0
    f = f.reshape((p,) * n)
    mat = _dft_matrix(p)
    for axis in range(n):
        f = np.moveaxis(np.tensordot(mat, f, axes=([1], [axis])), 0, axis)
    return Spectrum(f.reshape(s.order), len(a))


def naive_spectrum(a: GroupSet) -> np.ndarray:
    """Direct double sum over elements and characters (reference)."""
    s = a.space
    xs = s.coord_array[list(a)]
    if not len(xs):
        return np.zeros(s.order, dtype=complex)
    phase = (s.coord_array @ xs.T) % s.p
    return np.exp(-2j * np.pi * phase / s.p).sum(axis=1)


def sum_free_bound_check(a: GroupSet) -> tuple[float, float, bool]:
    """(min over nontrivial y of Re A^(y), -|A|^2/(|G|-|A|), whether min <= bound)."""
    s = a.space
    if not a:
        raise EmptyInput("A must be nonempty")
    if not is_sum_free(a):
        raise NotSumFree("A is not sum-free")
    size = len(a)
    if size == s.order:
        raise NotSumFree("the whole group is not sum-free")
    vals = spectrum(a).values
    min_real = float(vals[1:].real.min())
    bound = -(size**2) / (s.order - size)
    return min_real, bound, min_real <= bound + TOL


def first_coordinate_form(s: Space) -> LinearForm:
    return LinearForm((1,) + (0,) * (s.n - 1))


def slice_profile(a: GroupSet, form: LinearForm | None = None) -> SliceProfile:
    s = a.space
    form = form or first_coordinate_form(s)
    sizes = tuple((a.bits & f).bit_count() for f in s.fibers(form))
    return SliceProfile(form, sizes)


def slice_l1_deviation(profile: SliceProfile) -> tuple[int, int]:
    """(U, sum_k |sizes[k] - U|) with U the lower median, an L1 minimiser."""
    ordered = sorted(profile.sizes)
    u = ordered[(len(ordered) - 1) // 2]
    return u, sum(abs(v - u) for v in ordered)


Prop24 = tuple[Literal["notApplicable", "holds", "violated"], dict]


def prop24_check(a: GroupSet) -> Prop24:
    """Cosine-weighted slice inequality for large sum-free sets in F_11^n, n >= 2.

    Applies when A is sum-free, |A| >= 3*11^(n-1) and at most two first
    coordinate slices are empty; then sum_{k=1..10} (1 - cos(2 pi k/11)) |A_k|
    must stay below 11|A|/8.  The detail dict records both sides.
    """
    s = a.space
    if s.p != 11 or s.n < 2:
        raise WrongSpace("the check is stated for F_11^n with n >= 2")
    sizes = slice_profile(a).sizes
    size = len(a)
    detail = {"sizes": list(sizes), "size": size}
    if size < 3 * 11 ** (s.n - 1) or sum(v == 0 for v in sizes) > 2 or not is_sum_free(a):
        return "notApplicable", detail
    lhs = sum((1 - math.cos(2 * k * math.pi / 11)) * sizes[k] for k in range(1, 11))
    rhs = 11 * size / 8
    detail.update(lhs=lhs, rhs=rhs)
    return ("holds" if lhs < rhs + TOL else "violated"), detail
