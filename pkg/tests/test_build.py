from __future__ import annotations

import random

import pytest

from sumfree.build import (
    StructuredWitness,
    cuboid,
    cuboid_images,
    middle_interval,
    rs_family,
    rs_images,
    structured,
    very_structured,
    witness_sf1_1mod3,
    witness_sf2_2mod3,
)
from sumfree.errors import BadP, BadPrime, NotSubspace, WrongResidueClass, ZeroDirection
from sumfree.fourier import slice_profile
from sumfree.sets import GroupSet, dilate, is_sum_free, span
from sumfree.solve import is_cuboid_covered
from sumfree.space import LinearAuto, make_space
from sumfree.verify.generators import random_P


def test_cuboid_examples():
    assert set(cuboid(make_space(11, 1))) == {4, 5, 6, 7}
    assert set(cuboid(make_space(5, 1))) == {2, 3}
    assert set(cuboid(make_space(2, 3))) == {4, 5, 6, 7}
    with pytest.raises(WrongResidueClass):
        cuboid(make_space(7, 1))
    assert list(middle_interval(3)) == [1]


@pytest.mark.parametrize("p,n", [(2, 4), (5, 2), (11, 2), (17, 1), (23, 1)])
def test_cuboid_size_and_sum_free(p, n):
    q = cuboid(make_space(p, n))
    assert len(q) == (p + 1) * p ** (n - 1) // 3
    assert is_sum_free(q)


def test_very_structured_examples():
    assert set(very_structured(make_space(11, 1))) == {3, 4, 5}
    assert set(very_structured(make_space(17, 1))) == {5, 6, 7, 8, 9}
    s = make_space(11, 2)
    line = make_space(11, 1)
    v = very_structured(s, GroupSet.of(line, [1]))
    want = {(3, 0)} | {(4, j) for j in range(11) if j != 1} | {(5, j) for j in range(11)}
    want |= {(6, j) for j in range(1, 11)} | {(7, 1)}
    assert set(v.coords()) == want
    assert len(v) == 33
    with pytest.raises(BadP):
        very_structured(s, GroupSet.of(line, [0]))
    with pytest.raises(BadPrime):
        very_structured(make_space(5, 1))


def test_very_structured_slices_empty_off_middle():
    s = make_space(11, 3)
    v = very_structured(s, GroupSet.of(make_space(11, 2), [1, 13]))
    sizes = slice_profile(v).sizes
    assert [k for k in range(11) if sizes[k]] == list(range(3, 8))


def test_structured_examples():
    s2 = make_space(11, 2)
    flat = structured(s2, StructuredWitness(1, LinearAuto.identity(2)))
    assert set(flat.coords()) == {(i, j) for i in range(3, 6) for j in range(11)}
    s1 = make_space(11, 1)
    assert set(structured(s1, StructuredWitness(1, LinearAuto.dilation(1, 2)))) == {6, 8, 10}
    P = GroupSet.of(make_space(11, 1), [1])
    assert structured(s2, StructuredWitness(2, LinearAuto.identity(2), P)) == very_structured(s2, P)


@pytest.mark.parametrize("p", [11, 17])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_random_structured_sets(p, n):
    s = make_space(p, n)
    m = (p + 1) // 6
    rng = random.Random(p * 100 + n)
    for _ in range(10):
        ell = rng.randint(1, n)
        P = random_P(make_space(p, ell - 1), rng) if ell > 1 else None
        a = structured(s, StructuredWitness(ell, s.random_automorphism(rng), P))
        assert len(a) == (2 * m - 1) * p ** (n - 1)
        assert is_sum_free(a)
        assert not is_cuboid_covered(a)


def test_witness_sf2():
    assert set(witness_sf2_2mod3(make_space(17, 1))) == {4, 5, 6, 7}
    a = witness_sf2_2mod3(make_space(11, 2), 1)
    assert len(a) == 32 and is_sum_free(a)
    with pytest.raises(BadPrime):
        witness_sf2_2mod3(make_space(11, 1))
    with pytest.raises(ZeroDirection):
        witness_sf2_2mod3(make_space(11, 2), 0)


def test_rs_family_examples():
    assert set(rs_family(make_space(7, 1), "split")) == {2, 5}
    assert set(rs_family(make_space(13, 1), "low")) == {4, 5, 6, 7}
    assert set(rs_family(make_space(7, 1), "high")) == {3, 4}


@pytest.mark.parametrize("p,n", [(7, 2), (13, 2), (7, 3)])
def test_rs_family_higher_dimension(p, n):
    s = make_space(p, n)
    rest = make_space(p, n - 1)
    m = (p - 1) // 3
    K = span(rest, [1])
    for variant in ("low", "high", "split"):
        a = rs_family(s, variant, K)
        assert len(a) == m * p ** (n - 1)
        assert is_sum_free(a)
    with pytest.raises(NotSubspace):
        rs_family(s, "low", GroupSet.of(rest, [1]))


def test_witness_sf1():
    assert set(witness_sf1_1mod3(make_space(13, 1))) == {3, 4, 5}
    a = witness_sf1_1mod3(make_space(13, 2), 1)
    assert len(a) == 51 and is_sum_free(a)
    with pytest.raises(BadPrime):
        witness_sf1_1mod3(make_space(7, 1))


@pytest.mark.parametrize("p,n,count", [(11, 2, 60), (2, 5, 31), (3, 3, 26), (5, 2, 12), (11, 1, 5)])
def test_cuboid_images_count(p, n, count):
    s = make_space(p, n)
    imgs = cuboid_images(s)
    assert len(imgs) == count
    if p != 3:
        assert cuboid(s).bits in imgs


def test_rs_images_are_dilates():
    s = make_space(13, 1)
    imgs = rs_images(s)
    low = rs_family(s, "low")
    assert {dilate(low, c).bits for c in range(1, 13)} <= set(imgs)
    assert all(is_sum_free(GroupSet(s, b)) for b in imgs)
