from __future__ import annotations

import random

import numpy as np
import pytest

from sumfree.errors import CompositeModulus, DimensionTooLarge, GroupTooLarge
from sumfree.space import LinearAuto, LinearForm, Space, gl_order, is_prime, make_space, rank_mod_p


def test_is_prime_small():
    assert [q for q in range(30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize(
    "p,n,exc",
    [(4, 1, CompositeModulus), (1, 1, CompositeModulus), (5, 0, ValueError), (2, 17, DimensionTooLarge)],
)
def test_space_rejects_bad_parameters(p, n, exc):
    with pytest.raises(exc):
        Space(p, n)


def test_coordinates_roundtrip():
    s = make_space(5, 3)
    for i in range(s.order):
        assert s.from_coords(s.to_coords(i)) == i
    assert s.to_coords(1) == (0, 0, 1)
    assert s.to_coords(25) == (1, 0, 0)


def test_group_law_matches_coordinates():
    s = make_space(3, 3)
    rng = random.Random(0)
    for _ in range(200):
        x, y = rng.randrange(s.order), rng.randrange(s.order)
        want = tuple((a + b) % 3 for a, b in zip(s.to_coords(x), s.to_coords(y)))
        assert s.to_coords(s.add(x, y)) == want
        assert s.add(x, s.neg(x)) == 0
        assert s.scale(2, x) == s.add(x, x)


@pytest.mark.parametrize("p,n", [(2, 4), (3, 2), (5, 2), (11, 1), (7, 2)])
def test_translate_agrees_with_add(p, n):
    s = make_space(p, n)
    rng = random.Random(p * 10 + n)
    for _ in range(30):
        bits = rng.getrandbits(s.order)
        x = rng.randrange(s.order)
        want = 0
        for i in range(s.order):
            if bits >> i & 1:
                want |= 1 << s.add(i, x)
        assert s.translate(bits, x) == want


def test_half_inverts_doubling():
    s = make_space(5, 2)
    assert all(s.add(s._half[x], s._half[x]) == x for x in range(s.order))
    assert make_space(2, 3)._half is None


def test_gl_order_values():
    assert gl_order(1, 11) == 10
    assert gl_order(2, 2) == 6
    assert gl_order(2, 3) == 48
    assert gl_order(3, 2) == 168


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3)])
def test_automorphisms_enumerates_group(p, n):
    s = make_space(p, n)
    autos = list(s.automorphisms())
    assert len(autos) == gl_order(n, p)
    assert len({a.matrix for a in autos}) == len(autos)
    assert all(a.is_invertible(p) for a in autos)


def test_automorphisms_cap():
    with pytest.raises(GroupTooLarge):
        make_space(11, 3).automorphisms(cap=1000)


def test_linear_forms_are_projective_points():
    s = make_space(3, 3)
    forms = s.linear_forms()
    assert len(forms) == (27 - 1) // 2
    for f in forms:
        fib = s.fibers(f)
        assert sum(b.bit_count() for b in fib) == s.order
        assert all(b.bit_count() == 9 for b in fib)


def test_form_values_vectorised():
    s = make_space(5, 2)
    f = LinearForm((2, 3))
    vals = s.form_values(f)
    assert all(vals[x] == f(s, x) for x in range(s.order))


def test_auto_permutation_apply_inverse():
    s = make_space(5, 2)
    rng = random.Random(1)
    for _ in range(20):
        a = s.random_automorphism(rng)
        inv = a.inverse(5)
        perm = a.permutation(s)
        assert sorted(perm) == list(range(s.order))
        for x in range(s.order):
            assert inv.apply(s, a.apply(s, x)) == x
        assert a.compose(inv, 5) == LinearAuto.identity(2)


def test_dilation_and_rank():
    s = make_space(7, 1)
    d = LinearAuto.dilation(1, 3)
    assert [d.apply(s, x) for x in range(7)] == [3 * x % 7 for x in range(7)]
    assert rank_mod_p([[1, 2], [2, 4]], 7) == 1
    assert rank_mod_p([[1, 2], [0, 1]], 7) == 2


def test_coord_array_shape():
    s = make_space(3, 2)
    arr = s.coord_array
    assert arr.shape == (9, 2)
    assert np.array_equal(s.indices_of(arr), np.arange(9))
