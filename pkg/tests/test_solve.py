from __future__ import annotations

import random

import pytest

from sumfree.build import StructuredWitness, cuboid, rs_family, structured, very_structured
from sumfree.errors import BadPrime, GroupTooLarge, UnsupportedPrime
from sumfree.sets import GroupSet, apply_auto, dilate, is_sum_free
from sumfree.solve import (
    Budget,
    NotCovered,
    covered_by_family,
    dedup_sets,
    is_cuboid_covered,
    max_sum_free,
    recognize_structured,
    sf_hierarchy,
    verify_structured_witness,
)
from sumfree.space import LinearAuto, make_space
from sumfree.verify.generators import random_witness

F11 = make_space(11, 1)


def test_max_sum_free_f11():
    out = max_sum_free(F11)
    assert out.proved and out.value == 4
    q = GroupSet.of(F11, range(4, 8))
    assert {w.bits for w in out.witnesses} == {dilate(q, c).bits for c in range(1, 11)}
    assert len(out.witnesses) == 5


@pytest.mark.parametrize("p,n,value", [(7, 1, 2), (2, 4, 8), (5, 1, 2), (3, 2, 3), (13, 1, 4)])
def test_max_sum_free_values(p, n, value):
    assert max_sum_free(make_space(p, n)).value == value


def test_max_sum_free_with_filter():
    filt = NotCovered(F11, [dilate(GroupSet.of(F11, range(4, 8)), c).bits for c in range(1, 11)])
    out = max_sum_free(F11, filt)
    assert out.value == 3
    assert all(not is_cuboid_covered(w) for w in out.witnesses)


def test_anchor_loses_no_values():
    s = make_space(2, 4)
    full = max_sum_free(s)
    anchored = max_sum_free(s, anchor=1)
    assert anchored.value == full.value
    assert all(1 in w for w in anchored.witnesses)
    assert {w.bits for w in anchored.witnesses} <= {w.bits for w in full.witnesses}


def test_budget_indeterminate_is_sound():
    s = make_space(3, 3)
    out = max_sum_free(s, budget=Budget(max_nodes=50))
    assert out.status == "indeterminate"
    assert out.witnesses
    for w in out.witnesses:
        assert len(w) == out.value and is_sum_free(w)
    with pytest.raises(ValueError):
        Budget(max_nodes=0)


def test_is_cuboid_covered_examples():
    assert not is_cuboid_covered(GroupSet.of(F11, [3, 4, 5]))
    assert is_cuboid_covered(GroupSet.of(F11, [4, 5]))
    assert is_cuboid_covered(GroupSet.of(F11, [1, 4, 7, 10]))
    with pytest.raises(UnsupportedPrime):
        is_cuboid_covered(GroupSet.of(make_space(7, 1), [1]))


def test_covered_by_family_examples():
    f7 = make_space(7, 1)
    fam = [rs_family(f7, v) for v in ("low", "high", "split")]
    assert covered_by_family(GroupSet.of(f7, [1]), fam, "dilation")
    assert not covered_by_family(GroupSet.of(F11, [3, 4, 5]), [cuboid(F11)])
    a = GroupSet.of(F11, [2, 9])
    assert covered_by_family(a, [GroupSet.full(F11)], "none")


def test_covered_by_family_gl_agrees_with_forms():
    s = make_space(5, 2)
    rng = random.Random(3)
    q = cuboid(s)
    for _ in range(40):
        a = GroupSet(s, rng.getrandbits(25) & rng.getrandbits(25) & rng.getrandbits(25))
        assert covered_by_family(a, [q]) == is_cuboid_covered(a)


def test_covered_by_family_non_fibred_member():
    s = make_space(3, 2)
    b = GroupSet.from_coords(s, [(1, 0), (0, 1)])
    a = apply_auto(GroupSet.from_coords(s, [(1, 0)]), LinearAuto(((1, 1), (0, 1))))
    assert covered_by_family(a, [b])
    assert not covered_by_family(GroupSet.from_coords(s, [(1, 0), (2, 0)]), [b])


@pytest.mark.parametrize(
    "p,n,k,values",
    [
        (11, 1, 2, [4, 3, 0]),
        (17, 1, 2, [6, 5, 4]),
        (13, 1, 1, [4, 3]),
        (2, 4, 1, [8, 5]),
        (7, 1, 1, [2, 0]),
        (5, 2, 1, [10, 5]),
    ],
)
def test_sf_hierarchy_values(p, n, k, values):
    levels = sf_hierarchy(make_space(p, n), k)
    assert [lv.value for lv in levels] == values
    assert all(lv.proved for lv in levels)


def test_sf_hierarchy_monotone_and_strict():
    levels = sf_hierarchy(make_space(23, 1), 2)
    vals = [lv.value for lv in levels]
    assert vals == sorted(vals, reverse=True)
    assert len(set(vals)) == len(vals)


def test_sf_hierarchy_empty_level_propagates():
    levels = sf_hierarchy(F11, 4)
    assert [lv.value for lv in levels] == [4, 3, 0, 0, 0]
    assert levels[3].witnesses == []


def test_sf_hierarchy_indeterminate_propagates():
    levels = sf_hierarchy(make_space(3, 3), 2, Budget(max_nodes=20))
    assert levels[0].status == "indeterminate"
    assert [lv.status for lv in levels[1:]] == ["indeterminate", "indeterminate"]


def test_dedup_expansion_recovers_family():
    levels = sf_hierarchy(F11, 1, dedup="dilation")
    reps = levels[1].witnesses
    assert len(reps) == 1
    expanded = {dilate(r, c).bits for r in reps for c in range(1, 11)}
    full = sf_hierarchy(F11, 1)[1].witnesses
    assert expanded == {w.bits for w in full}
    assert dedup_sets(full, "gl") == reps


def test_dedup_gl_plane():
    s = make_space(2, 4)
    fam = sf_hierarchy(s, 0)[0].witnesses
    assert len(fam) == 15
    assert len(dedup_sets(fam, "gl")) == 1


def test_certificate_shape():
    out = sf_hierarchy(F11, 0)[0]
    cert = out.certificate(0)
    assert cert["p"] == 11 and cert["n"] == 1 and cert["value"] == 4
    assert all(GroupSet.from_hex(11, 1, h).bits for h in cert["witnesses"])


def test_verify_structured_witness_examples():
    ident = LinearAuto.identity(1)
    assert verify_structured_witness(GroupSet.of(F11, [3, 4, 5]), StructuredWitness(1, ident))
    assert not verify_structured_witness(GroupSet.of(F11, [6, 8, 10]), StructuredWitness(1, ident))
    assert not verify_structured_witness(cuboid(F11), StructuredWitness(1, ident))


def test_recognize_structured_examples():
    w = recognize_structured(GroupSet.of(F11, [3, 4, 5]))
    assert w is not None and w.ell == 1
    w = recognize_structured(GroupSet.of(F11, [6, 8, 10]))
    assert w is not None and structured(F11, w) == GroupSet.of(F11, [6, 8, 10])
    assert recognize_structured(cuboid(F11)) is None
    with pytest.raises(BadPrime):
        recognize_structured(GroupSet.of(make_space(5, 1), [2]))


@pytest.mark.parametrize("p,n", [(11, 2), (11, 3), (17, 2)])
def test_recognize_random_structured(p, n):
    s = make_space(p, n)
    rng = random.Random(p + n)
    for _ in range(15):
        w = random_witness(s, rng)
        a = structured(s, w)
        found = recognize_structured(a)
        assert found is not None and verify_structured_witness(a, found)
        assert found.ell == w.ell


def test_recognize_rejects_near_misses():
    s = make_space(11, 2)
    v = very_structured(s, GroupSet.of(make_space(11, 1), [1, 2]))
    x = next(iter(v))
    y = next(i for i in range(s.order) if i not in v and i)
    assert recognize_structured(GroupSet(s, v.bits ^ (1 << x) ^ (1 << y))) is None


def test_recognize_cap():
    with pytest.raises(GroupTooLarge):
        recognize_structured(very_structured(make_space(11, 2)), cap=5)
