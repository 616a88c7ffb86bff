"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Tolerances are pinned below; values are exact integers unless stated.
"""

from __future__ import annotations

import os
import random
import time

import numpy as np
import pytest

from sumfree.build import (
    six_m_minus_one,
    structured,
    three_m_plus_one,
    witness_sf1_1mod3,
    witness_sf2_2mod3,
)
from sumfree.fourier import naive_spectrum, spectrum, sum_free_bound_check
from sumfree.sets import GroupSet, dilate, is_sum_free
from sumfree.solve import Budget, is_cuboid_covered, max_sum_free, sf_hierarchy
from sumfree.space import make_space
from sumfree.verify.generators import greedy_extend, random_witness
from sumfree.verify.laws import check_law
from sumfree.verify.oracle import oracle_hierarchy, oracle_max_sum_free

PARSEVAL_REL_TOL = 1e-6
BOUND_SLACK = 1e-9
NAIVE_ABS_TOL = 1e-9
SLOW_LEVEL_SECONDS = 300
RANDOM_TRIALS = 10_000
FOURIER_SETS = 1000
CONSTRUCTOR_TRIALS = 50


@pytest.fixture
def report(capsys):
    def emit(criterion: int, ok: bool, title: str, detail: str = "") -> None:
        with capsys.disabled():
            tag = "PASS" if ok else "FAIL"
            print(f"\n{tag}  criterion {criterion:>2}  {title}" + (f"  [{detail}]" if detail else ""))

    return emit


def _levels(p: int, n: int, k: int):
    dedup = "none" if n == 1 else "anchored"
    t0 = time.perf_counter()
    levels = sf_hierarchy(make_space(p, n), k, dedup=dedup)
    return levels, time.perf_counter() - t0


def _table_check(cases, k):
    rows, ok = [], True
    for (p, n), want in cases.items():
        levels, secs = _levels(p, n, k)
        lv = levels[k]
        good = lv.proved and lv.value == want and secs <= SLOW_LEVEL_SECONDS
        ok &= good
        rows.append(f"F_{p}^{n}={lv.value}{'' if good else '!'}({secs:.1f}s)")
    return ok, " ".join(rows)


def test_criterion_01_sf0_values(report):
    cases = {(5, 1): 2, (11, 1): 4, (17, 1): 6, (23, 1): 8, (7, 1): 2, (13, 1): 4, (2, 4): 8, (3, 2): 3}
    ok, detail = _table_check(cases, 0)
    report(1, ok, "sf_0 values proved", detail)
    assert ok


def test_criterion_02_sf1_values(report):
    cases = {
        (11, 1): 3, (17, 1): 5, (23, 1): 7, (7, 1): 0, (13, 1): 3,
        (2, 4): 5, (2, 5): 10, (3, 3): 5, (5, 2): 5,
    }
    ok, detail = _table_check(cases, 1)
    report(2, ok, "sf_1 values proved", detail)
    assert ok


def test_criterion_03_sf2_values(report):
    cases = {(11, 1): 0, (17, 1): 4, (23, 1): 6}
    ok, detail = _table_check(cases, 2)
    report(3, ok, "sf_2 values proved", detail)
    assert ok


def test_criterion_04_f11_classification(report):
    s = make_space(11, 1)
    levels = sf_hierarchy(s, 1)
    oracle = oracle_hierarchy(s, 1)
    cub = {dilate(GroupSet.of(s, range(4, 8)), c).bits for c in range(1, 11)}
    vs = {dilate(GroupSet.of(s, [3, 4, 5]), c).bits for c in range(1, 11)}
    got0 = {w.bits for w in levels[0].witnesses}
    got1 = {w.bits for w in levels[1].witnesses}
    ok = (
        got0 == cub and len(cub) == 5
        and got1 == vs and len(vs) == 10
        and len(oracle[0].witnesses) == 5 and len(oracle[1].witnesses) == 10
        and {w.bits for w in oracle[1].witnesses} == got1
    )
    report(4, ok, "F_11 extremal families", f"level0={len(got0)} level1={len(got1)} oracle={len(oracle[0].witnesses)}/{len(oracle[1].witnesses)}")
    assert ok


def test_criterion_05_constructors(report):
    failures = []
    checked = 0
    rng = random.Random(20240501)
    for p in (11, 17):
        m = six_m_minus_one(p)
        for n in (1, 2, 3):
            s = make_space(p, n)
            width = p ** (n - 1)
            for _ in range(CONSTRUCTOR_TRIALS):
                a = structured(s, random_witness(s, rng))
                checked += 1
                if len(a) != (2 * m - 1) * width or not is_sum_free(a) or is_cuboid_covered(a):
                    failures.append(("structured", p, n, a.to_hex()))
            if n == 1 and p < 17:
                continue
            for _ in range(5 if n > 1 else 1):
                x = rng.randrange(1, width) if n > 1 else None
                w = witness_sf2_2mod3(s, x)
                checked += 1
                if len(w) != (2 * m - 1) * width - 1 or not is_sum_free(w):
                    failures.append(("sf2 witness", p, n, x))
    for p, ns in ((13, (1, 2, 3)), (7, (2, 3))):
        mm = three_m_plus_one(p)
        for n in ns:
            s = make_space(p, n)
            width = p ** (n - 1)
            x = 1 if n > 1 else None
            w = witness_sf1_1mod3(s, x)
            checked += 1
            if len(w) != mm * width - 1 or not is_sum_free(w):
                failures.append(("sf1 witness", p, n, x))
    ok = not failures
    report(5, ok, "constructor property suite", f"{checked} sets, {len(failures)} failures")
    assert ok, failures[:5]


def test_criterion_06_exhaustive_laws(report):
    runs = [
        ("cauchy_davenport", 5, 1), ("cauchy_davenport", 7, 1),
        ("kneser", 5, 1), ("kneser", 7, 1), ("kneser", 3, 2),
        ("vosper", 7, 1), ("vosper", 11, 1), ("vosper", 13, 1),
        ("bdumm", 2, 1), ("bdumm", 3, 1), ("bdumm", 5, 1), ("bdumm", 7, 1),
        ("bdumm", 2, 2), ("bdumm", 2, 3), ("bdumm", 3, 2),
        ("lem6_classification", 11, 1), ("lem6_classification", 17, 1),
    ]
    bad, parts = [], []
    for law, p, n in runs:
        r = check_law(law, make_space(p, n), "exhaustive")
        parts.append(f"{law}@{p}^{n}:{r.verdict}/{r.applicable}")
        if r.verdict != "pass":
            bad.append(r.to_json())
    lem6_trials = {
        p: check_law("lem6_classification", make_space(p, 1)).trials for p in (11, 17)
    }
    ok = not bad and lem6_trials == {11: 165, 17: 6188}
    report(6, ok, "exhaustive law harness", "; ".join(parts))
    assert ok, bad


def test_criterion_07_random_laws(report):
    s = make_space(11, 2)
    bad, parts = [], []
    for law in ("lem42", "lemABCD", "prop21", "prop22", "prop23", "prop24"):
        r = check_law(law, s, "random", RANDOM_TRIALS, seed=1)
        parts.append(f"{law}:{r.verdict} {r.applicable}/{r.trials}")
        allowed = ("pass",) if law in ("lem42", "lemABCD") else ("pass", "vacuous")
        if r.verdict not in allowed:
            bad.append(r.to_json())
    ok = not bad
    report(7, ok, "randomized law harness on F_11^2", "; ".join(parts))
    assert ok, bad


def _random_sum_free(s, rng):
    bits = greedy_extend(s, 0, rng)
    # thin out some sets so that sizes vary
    if rng.random() < 0.5:
        keep = 0
        for x in range(s.order):
            if bits >> x & 1 and rng.random() < 0.7:
                keep |= 1 << x
        bits = keep or bits
    return GroupSet(s, bits)


def test_criterion_08_fourier(report):
    rng = random.Random(8)
    worst_parseval, worst_naive, bound_fail = 0.0, 0.0, 0
    for p, n in ((11, 1), (5, 2), (11, 2)):
        s = make_space(p, n)
        for _ in range(FOURIER_SETS):
            a = _random_sum_free(s, rng)
            v = spectrum(a).values
            energy = float(np.sum(np.abs(v) ** 2))
            worst_parseval = max(worst_parseval, abs(energy - s.order * len(a)) / (s.order * len(a)))
            min_real, bound, ok = sum_free_bound_check(a)
            if not (ok and min_real <= bound + BOUND_SLACK):
                bound_fail += 1
            if s.order <= 25:
                worst_naive = max(worst_naive, float(np.abs(v - naive_spectrum(a)).max()))
    ok = worst_parseval <= PARSEVAL_REL_TOL and worst_naive <= NAIVE_ABS_TOL and bound_fail == 0
    report(8, ok, "Fourier suite", f"parseval_rel={worst_parseval:.1e} naive_abs={worst_naive:.1e} bound_failures={bound_fail}")
    assert ok


def test_criterion_09_oracle_equivalence(report):
    full = [(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (2, 2), (2, 3), (2, 4), (3, 2)]
    values_only = [(17, 1), (19, 1), (23, 1), (5, 2)]
    bad = []
    for p, n in full:
        s = make_space(p, n)
        o, m = oracle_max_sum_free(s), max_sum_free(s)
        if not m.proved or m.value != o.value or [w.bits for w in m.witnesses] != [w.bits for w in o.witnesses]:
            bad.append((p, n))
    for p, n in values_only:
        s = make_space(p, n)
        o, m = oracle_max_sum_free(s), max_sum_free(s)
        if not m.proved or m.value != o.value:
            bad.append((p, n))
    ok = not bad
    report(9, ok, "solver equals oracle", f"{len(full)} spaces with witness sets, {len(values_only)} by value; mismatches={bad}")
    assert ok


def test_criterion_10_documented_limits(report):
    # sf_1 for p >= 11, n >= 2 is out of reach; a bounded run must say so
    # instead of claiming a proof, and whatever it reports must be genuine.
    s = make_space(11, 2)
    out = max_sum_free(s, budget=Budget(max_nodes=20_000), anchor=1)
    genuine = all(len(w) == out.value and is_sum_free(w) for w in out.witnesses)
    ok = out.status == "indeterminate" and genuine
    report(
        10, ok, "not reproducible at desk scale (documented)",
        f"F_11^2 bounded run: {out.status}, best {out.value}; sf_1(F_5^3)=28 stretch run needs SUMFREE_LONG_RUN=1; "
        "sf_2(F_2^5) and n>=2 classification covered by criteria 5 and 7 only",
    )
    assert ok


@pytest.mark.skipif(not os.environ.get("SUMFREE_LONG_RUN"), reason="stretch run; set SUMFREE_LONG_RUN=1")
def test_criterion_10_stretch_sf1_f5_cubed(report):
    levels = sf_hierarchy(make_space(5, 3), 1, dedup="anchored")
    ok = levels[1].proved and levels[1].value == 28
    report(10, ok, "stretch: sf_1(F_5^3) = 28", f"{levels[1].value} {levels[1].status}")
    assert ok
