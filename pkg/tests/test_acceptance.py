"""Acceptance checks, one test per requirement.

A summary line per test (PASS / FAIL) is printed at the end of the pytest
run.  Requirements that cannot be met are strict xfails: the assertion is
the full requirement, and the test turns red if it ever starts passing.
"""

import os
import random
import time

import numpy as np
import pytest

from grssd import census as cz
from grssd import properties as pr
from grssd.cli import main
from grssd.evalsets import ConstructionParams
from grssd.gf import build_field
from grssd.grscodes import (generator_matrix, power_sums, read_matrix, synthesize, verify_mds,
                            write_matrix)

THREADS = min(8, os.cpu_count() or 1)
KNOWN = "unattainable as specified; analysis in the decisions ledger"


def _check_example(family, r, kw, length, budget=10.0):
    t0 = time.perf_counter()
    res = synthesize(ConstructionParams.create(family, r=r, **kw))
    elapsed = time.perf_counter() - t0
    spec = res.spec
    P = power_sums(spec)
    if spec.extended:
        P[-1] = spec.field.add(P[-1], 1)
    assert spec.n == length
    assert not P.any()
    assert res.verify.rank_ok and spec.k == spec.n // 2
    assert elapsed < budget, f"{elapsed:.1f}s"


# -- worked examples in GF(361) -------------------------------------------------

@pytest.mark.xfail(strict=True, reason=KNOWN)
def test_example_norm_fibers_with_h0_length_288():
    _check_example("thm3", 19, dict(l=18, s=0, l1=8, l2=6), 288)


def test_example_two_subgroups_length_310():
    _check_example("thm4", 19, dict(u=20, v=18, s=9, s_prime=10, t=2), 310)


def test_example_with_zero_length_124():
    _check_example("thm5", 19, dict(u=20, v=36, s=2, s_prime=4, t=7), 124)


# -- published-length discrepancy pin ------------------------------------------

def test_closed_form_length_230_with_note(capsys):
    code = main(["build", "cor1", "--r", "19", "--u", "20", "--v", "18", "--s", "2", "--s-prime", "10",
                 "--t", "1", "--emit", "summary"])
    kv = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert code == 0
    assert kv["code_length"] == "230" and kv["self_dual"] == "1"
    assert "314" in kv["note"]


# -- large field --------------------------------------------------------------

def test_large_field_length_8192():
    t0 = time.perf_counter()
    res = synthesize(ConstructionParams.create("cor3", r=151, u=152, v=2, w=20, s=11, t=1, f=2))
    spec = res.spec
    assert len(res.evalset) == 8191 and spec.n == 8192 and spec.extended
    P = power_sums(spec)
    assert P.size == 8191
    assert not P[:-1].any() and spec.field.add(P[-1], 1) == 0
    assert res.verify.self_dual
    assert time.perf_counter() - t0 < 120


# -- census ratios --------------------------------------------------------------

RATIOS = {151: 85.1, 163: 85.19, 167: 85.19, 179: 85.26}
_ratio_seconds = []


@pytest.mark.parametrize("r", sorted(RATIOS))
def test_census_ratio(r):
    t0 = time.perf_counter()
    census = cz.enumerate_lengths(r, threads=THREADS)
    rep = cz.ratio(census)
    _ratio_seconds.append(time.perf_counter() - t0)
    print(f"r={r} N={rep.N} ratio={rep.percent:.2f}% universe={rep.universe}")
    assert abs(rep.percent - RATIOS[r]) <= 1.0
    assert sum(_ratio_seconds) < 30 * 60


# -- census soundness -------------------------------------------------------------

def _sample_census(mode):
    t0 = time.perf_counter()
    failures = []
    for r in (19, 23):
        census = cz.enumerate_lengths(r, mode=mode)
        lengths = census.lengths.tolist()
        pick = random.Random(r).sample(lengths, min(100, len(lengths)))
        for L in pick:
            p = census.witness_params(L)
            try:
                res = synthesize(p, spot=4)
                ok = res.verify.self_dual and res.spec.n == L
            except Exception as exc:  # any failure to build or verify counts
                ok = False
            if not ok:
                failures.append((r, L, p.family, p.text()))
    assert time.perf_counter() - t0 < 300
    assert not failures, f"{len(failures)} failing witnesses, e.g. {failures[:3]}"


@pytest.mark.xfail(strict=True, reason=KNOWN)
def test_census_sampling_stated():
    _sample_census("stated")


def test_census_sampling_verified_mode():
    _sample_census("verified")


# -- property suites ------------------------------------------------------------

@pytest.mark.parametrize("q", [49, 361])
def test_delta_factorization_oracle(q):
    F = build_field(7 if q == 49 else 19)
    assert pr.check_union_delta(F, random.Random(q), count=100).ok
    res = pr.check_delta_factorization(F, random.Random(q), count=20 if q == 361 else 60)
    assert res.ok, res.detail


def test_multiset_identity_200_families(F49):
    assert pr.check_multiset_identity(F49, random.Random(0), count=200).ok


@pytest.mark.parametrize("q", [49, 361])
def test_coset_distinctness_exhaustive(q):
    res = pr.check_coset_distinctness(build_field(7 if q == 49 else 19))
    assert res.ok, res.detail


def test_fiber_field_intersections(F361):
    res = pr.check_fiber_field_intersection(F361)
    assert res.ok, res.detail


@pytest.mark.xfail(strict=True, reason=KNOWN)
def test_norm_fiber_characters_as_stated(F361):
    res = pr.check_norm_fiber_character(F361, as_stated=True)
    assert res.ok, res.detail


def test_intersection_cardinalities(F361):
    assert pr.check_pair_cardinality(F361, s=2, t=2).ok
    res = pr.check_triple_cardinality(F361, random.Random(0), count=50)
    assert res.ok and res.cases == 50, res.detail


def test_uniformity_criterion(F49, F361):
    res = pr.check_uniformity_criterion(F361, random.Random(1), per_family=20, random_count=0)
    assert res.ok, res.detail
    res = pr.check_uniformity_criterion(F49, random.Random(2), per_family=20, random_count=100)
    assert res.ok and "100 random" in res.detail, res.detail


def test_eta_minus_one_in_constructed_fields():
    for r in (7, 11, 19, 23, 151, 163, 167, 179):
        F = build_field(r)
        assert F.eta(F.neg(1)) == 1


# -- MDS brute force --------------------------------------------------------------

def test_mds_bruteforce_gf49_length_10():
    res = synthesize(ConstructionParams.create("thm2", r=7, l=6, s=0, l1=1, l2=0))
    t0 = time.perf_counter()
    ok, _ = verify_mds(res.spec)
    assert time.perf_counter() - t0 < 1.0
    assert res.spec.n == 10 and ok
    assert res.spec.n - res.spec.k + 1 == 6


# -- determinism and I/O ------------------------------------------------------------

def test_roundtrips_and_thread_independence(tmp_path):
    res = synthesize(ConstructionParams.create("thm4", r=19, u=20, v=18, s=9, s_prime=10, t=2))
    G = generator_matrix(res.spec)
    write_matrix(G, tmp_path / "g.txt")
    back = read_matrix(tmp_path / "g.txt")
    assert np.array_equal(back.rows, G.rows) and np.array_equal(back.spec.scaling, G.spec.scaling)

    a = cz.enumerate_lengths(151, threads=1)
    b = cz.enumerate_lengths(151, threads=THREADS if THREADS > 1 else 2)
    cz.export_census(a, tmp_path / "a.csv")
    cz.export_census(b, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    rows = cz.read_census(tmp_path / "a.csv", 151)
    assert [L for L, _, _ in rows] == a.lengths.tolist()
