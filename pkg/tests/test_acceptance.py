"""Acceptance suite: one test per criterion, each printing a PASS line.

Criteria that need the full level-8960/44800 eigenvalue dataset run only
when a directory containing all four level files is supplied via
APFIVE_DATA_DIR (the fetch subcommand produces one); otherwise those
sub-checks are skipped with the reason stated and the bundled 70/350
fixtures drive the fallback criterion instead.
"""

import math
import os
import random
import time
from importlib import resources
from pathlib import Path

import pytest

from apfive.config import RunConfig
from apfive.curves import EllipticCurveFp, ap_trace, count_points, discriminant
from apfive.elimination import run_pipeline
from apfive.frey import kraus_trace_set, sieve_triples
from apfive.newforms import load_store, validate_store
from apfive.oracle import identity_fuzz, search_solutions, three_divides_ab_check
from apfive.rings import IntPoly, NumberField, PrimeField, nf_norm, nth_power_residues
from apfive.smallcases import (
    back_substitute,
    n2_curve_map_identity,
    n2_local_obstructions,
    n3_ellie_map_identity,
    n3_kappa2_systems,
    n3_parity_eliminate,
    n3_picard_point_check,
    n5_factor_check,
    n5_known_points_check,
)

BUNDLED_DIR = Path(str(resources.files("apfive").joinpath("data", "newforms")))
ALL_LEVELS = (70, 350, 8960, 44800)


def full_data_dir() -> Path | None:
    env = os.environ.get("APFIVE_DATA_DIR")
    if not env:
        return None
    base = Path(env)
    if all((base / f"level_{lvl}.json").exists() for lvl in ALL_LEVELS):
        return base
    return None


def _passed(name: str, detail: str = ""):
    print(f"ACCEPTANCE {name}: PASS {detail}".rstrip())


SKIP_FULL = (
    "full 8960/44800 eigenvalue data not available in this environment "
    "(no APFIVE_DATA_DIR); covered by the fallback criterion 8"
)


# criterion 1 -- class counts


def test_criterion_1_class_counts_bundled_levels():
    store = load_store(BUNDLED_DIR)
    report = validate_store(store, {70: 1, 350: 8})
    assert report.ok, report.to_dict()
    _passed("1 (levels 70, 350)", "- counts 1 and 8 match")


def test_criterion_1_class_counts_full():
    data = full_data_dir()
    if data is None:
        pytest.skip(SKIP_FULL)
    t0 = time.monotonic()
    store = load_store(data)
    report = validate_store(store, {70: 1, 350: 8, 8960: 64, 44800: 196})
    assert report.ok, report.to_dict()
    assert time.monotonic() - t0 <= 600
    _passed("1 (all levels)", "- counts 1, 8, 64, 196 match")


# criterion 2 -- exponent bound


def test_criterion_2_exponent_bound_16547():
    data = full_data_dir()
    if data is None:
        pytest.skip(SKIP_FULL)
    store = load_store(data)
    report = run_pipeline(store, RunConfig(levels=ALL_LEVELS))
    assert report.max_exponent == 16547
    _passed("2", "- max surviving exponent 16547")


# criterion 3 -- stage-2 survivor counts


def test_criterion_3_stage2_survivors_bundled_levels():
    store = load_store(BUNDLED_DIR)
    report = run_pipeline(store, RunConfig(levels=(70, 350)))
    counts = report.to_dict()["stage2"]["survivor_counts"]
    # the level-350 component of the full table: 2 pairs at n = 7, nothing
    # at level 70 for any exponent
    assert counts == {"n=7,level=350": 2}, counts
    _passed("3 (levels 70, 350)", "- 2 pairs at n=7 level 350, none at level 70")


def test_criterion_3_stage2_survivors_full():
    data = full_data_dir()
    if data is None:
        pytest.skip(SKIP_FULL)
    store = load_store(data)
    report = run_pipeline(store, RunConfig(levels=ALL_LEVELS))
    counts = report.to_dict()["stage2"]["survivor_counts"]
    expected = {
        "n=7,level=350": 2,
        "n=7,level=8960": 4,
        "n=7,level=44800": 30,
        "n=11,level=44800": 12,
        "n=13,level=8960": 4,
        "n=13,level=44800": 8,
    }
    assert counts == expected, counts
    _passed("3 (all levels)", "- 36/12/12 pairs at n = 7/11/13")


# criterion 4 -- stage 3 empties the survivor set


def test_criterion_4_final_survivors_empty_bundled_levels():
    t0 = time.monotonic()
    store = load_store(BUNDLED_DIR)
    report = run_pipeline(store, RunConfig(levels=(70, 350)))
    elapsed = time.monotonic() - t0
    assert report.final_survivors == []
    assert elapsed <= 600, f"pipeline took {elapsed:.1f}s"
    _passed("4 (levels 70, 350)", f"- empty survivor set in {elapsed:.1f}s")


def test_criterion_4_full_pipeline_and_p23_step():
    data = full_data_dir()
    if data is None:
        pytest.skip(SKIP_FULL)
    from apfive.elimination import CandidatePair, kraus_eliminate

    t0 = time.monotonic()
    store = load_store(data)
    report = run_pipeline(store, RunConfig(levels=ALL_LEVELS))
    elapsed = time.monotonic() - t0
    assert report.final_survivors == []
    assert elapsed <= 600, f"pipeline took {elapsed:.1f}s"
    # the intermediate n = 11, p = 23 step eliminates exactly 8 of the 12
    pairs = [
        CandidatePair(form, 11)
        for entry in report.stage2_survivors
        if entry["n"] == 11
        for form in store.classes(entry["level"])
        if form.label == entry["label"]
    ]
    assert len(pairs) == 12
    eliminated = [p for p in pairs if kraus_eliminate(p, 23).eliminated]
    assert len(eliminated) == 8
    _passed("4 (all levels)", f"- empty survivors, n=11 p=23 kills 8/12, {elapsed:.0f}s")


# criterion 5 -- Kraus micro-fixtures


def test_criterion_5a_power_residues_mod_89():
    t0 = time.monotonic()
    mu = nth_power_residues(11, PrimeField(89))
    assert mu == frozenset({1, 88, 12, 77, 34, 55, 37, 52})
    assert time.monotonic() - t0 < 1.0
    _passed("5a", "- mu_11(F_89) = {+-1, +-12, +-34, +-37}")


def test_criterion_5b_trace_set_at_89():
    """Asserts the recorded trace set {-4, 12, 14} verbatim.

    Exhaustive enumeration of the twelve sieve curves (three independent
    point-counting implementations agree) yields {-4, 14, 16}: the (+-12, T)
    classes have trace 16, not 12. The recorded value appears to carry an
    arithmetic slip; the sieve's conclusion is unaffected because both sets
    exclude 0 mod 11 while the four surviving forms have a_89 = 0 mod n.
    This check is therefore expected to fail; see the decisions ledger.
    """
    t0 = time.monotonic()
    result = kraus_trace_set(1, 11, PrimeField(89))
    assert time.monotonic() - t0 < 1.0
    assert result.traces == frozenset({-4, 12, 14}), (
        f"enumerated traces are {sorted(result.traces)}; the recorded set "
        "{-4, 12, 14} fails independent recounts (see decisions ledger)"
    )
    _passed("5b", "- kraus_trace_set(1, 11, 89) = {-4, 12, 14}")


def test_criterion_5c_trace_set_at_23_empty():
    t0 = time.monotonic()
    result = kraus_trace_set(1, 11, PrimeField(23))
    assert result.traces == frozenset()
    assert result.singular == ()
    assert time.monotonic() - t0 < 1.0
    _passed("5c", "- kraus_trace_set(1, 11, 23) is empty")


def test_criterion_5d_bT_classes_mod_89():
    t0 = time.monotonic()
    by_b = {}
    for tr in sieve_triples(1, 11, PrimeField(89)):
        by_b.setdefault(tr.b, set()).add(tr.T)
    expected = {
        1: {28, 61},
        88: {27, 62},
        12: {32, 57},
        77: {20, 69},
        37: {29, 60},
        52: {7, 82},
    }
    assert by_b == expected
    assert time.monotonic() - t0 < 1.0
    _passed("5d", "- the six (b, T) classes mod 89 match")


# criterion 6 -- small-exponent suite


def test_criterion_6_small_exponent_suite():
    t0 = time.monotonic()
    assert n2_local_obstructions()["forced_kappa"] == [10]
    assert n2_curve_map_identity()
    for kappa in (1, 2, 5, 10):
        assert n3_ellie_map_identity(kappa)
    n3_kappa2_systems(0)
    n3_kappa2_systems(1)
    assert n3_parity_eliminate()
    assert n3_picard_point_check()
    assert n5_factor_check()
    assert n5_known_points_check()
    assert {r.family for r in back_substitute(30)} == {(1, 2, 3, 5)}
    assert back_substitute(-6) == set()
    elapsed = time.monotonic() - t0
    assert elapsed <= 60, f"suite took {elapsed:.1f}s"
    _passed("6", f"- all small-exponent checks in {elapsed:.1f}s")


# criterion 7 -- oracle


def test_criterion_7_oracle():
    t0 = time.monotonic()
    records = search_solutions(200, 200, 13)
    families = {r.family for r in records}
    assert families == {(0, 1, 0, 2), (1, 2, 3, 5)}, families
    assert three_divides_ab_check()
    assert identity_fuzz(10**4, seed=20260810)
    elapsed = time.monotonic() - t0
    assert elapsed <= 60, f"oracle checks took {elapsed:.1f}s"
    _passed("7", f"- search box 200, 3|ab, 10^4 fuzz trials in {elapsed:.1f}s")


# criterion 8 -- property fallback on the bundled fixtures


def test_criterion_8_fallback_pipeline_and_properties():
    store = load_store(BUNDLED_DIR)
    report = run_pipeline(store, RunConfig(levels=(70, 350)))
    d = report.to_dict()
    # stage-1 survivors at level 70 are Hasse-bound-forced into {7}
    for key, ns in d["stage1"]["bounded"].items():
        if key.startswith("70."):
            assert set(ns) <= {7}
    assert d["final_survivor_count"] == 0

    # Hasse bound property
    from apfive.rings import is_prime

    rng = random.Random(8)
    primes = [p for p in range(5, 500) if is_prime(p)]
    for _ in range(40):
        p = rng.choice(primes)
        E = EllipticCurveFp(PrimeField(p), 0, 0, 0, rng.randrange(p), rng.randrange(p))
        if discriminant(E) != 0:
            assert ap_trace(E) ** 2 <= 4 * p

    # norm multiplicativity property
    K = NumberField(IntPoly([3, 1, 0, 2, 0, 0, 0, 1]))
    for _ in range(20):
        a = K.elem([rng.randint(-5, 5) for _ in range(K.degree)])
        b = K.elem([rng.randint(-5, 5) for _ in range(K.degree)])
        assert nf_norm(a * b) == nf_norm(a) * nf_norm(b)

    # character-sum counting equals naive enumeration for p <= 100
    for p in [5, 7, 11, 13, 17, 97]:
        F = PrimeField(p)
        for _ in range(3):
            E = EllipticCurveFp(
                F, rng.randrange(2), rng.randrange(p), rng.randrange(2),
                rng.randrange(p), rng.randrange(p),
            )
            naive = 1
            for x in range(p):
                rhs = (x**3 + E.a2 * x * x + E.a4 * x + E.a6) % p
                for y in range(p):
                    if (y * y + E.a1 * x * y + E.a3 * y) % p == rhs:
                        naive += 1
            assert count_points(E) == naive
    _passed("8", "- fallback pipeline green on bundled 70/350 data")
