import hashlib
import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grssd.evalsets import ConstructionParams, FAMILIES, build, iter_family_params
from grssd.grscodes import (CodeSpec, MatrixFileError, ScalingError, batched_nonsingular, generator_matrix,
                            matrix_text, power_sums, rank, read_matrix, structural_rank_ok, synthesize,
                            verify_mds, verify_self_dual, write_matrix)

from oracles import OracleField

EX2 = dict(u=20, v=18, s=9, s_prime=10, t=2)


@pytest.fixture(scope="module")
def ex2():
    return synthesize(ConstructionParams.create("thm4", r=19, **EX2))


@pytest.fixture(scope="module")
def small():
    return synthesize(ConstructionParams.create("thm2", r=7, l=6, s=0, l1=1, l2=0))


def test_gram_matrix_with_oracle_arithmetic(small):
    """G G^T = 0 recomputed entry by entry with the oracle field."""
    O = OracleField(7, 2)
    G = generator_matrix(small.spec).rows.tolist()
    for a, b in itertools.product(G, repeat=2):
        acc = 0
        for x, y in zip(a, b):
            acc = O.add(acc, O.mul(x, y))
        assert acc == 0


def test_generator_rows_are_monomial_evaluations(ex2):
    O = OracleField(19, 2)
    spec = ex2.spec
    G = generator_matrix(spec).rows
    for i in (0, 1, 7, spec.k - 1):
        for j in (0, 5, spec.n - 1):
            assert G[i, j] == O.mul(int(spec.scaling[j]), O.pow(int(spec.points[j]), i))


@pytest.mark.parametrize("family", [f for f in FAMILIES if f != "thm3"])
def test_every_small_family_synthesizes(family):
    for p in iter_family_params(family, 7):
        res = synthesize(p)
        assert res.verify.self_dual and res.spec.n == res.info.code_length
        assert res.verify.methods == {"power_sum": True, "matrix": True}


def test_norm_fiber_family_with_h0_synthesizes_only_without_fibers():
    for p in iter_family_params("thm3", 7):
        if p["l1"] == 0 and p["l2"] == 0:
            assert synthesize(p).verify.self_dual
        else:
            with pytest.raises(Exception):
                synthesize(p)


def test_scaling_constants(ex2, small):
    assert ex2.choice.constant == "mu" and ex2.choice.tried == ["mu"]
    assert small.choice.constant == "-1" and small.spec.extended


def test_corrupted_scaling_fails(ex2):
    F = ex2.spec.field
    sc = ex2.spec.scaling.copy()
    sc[3] = F.mul(sc[3], 2)
    rep = verify_self_dual(ex2.spec.with_scaling(sc), samples=2)
    assert not rep.self_orthogonal and rep.first_bad_t == 0
    assert rep.methods == {"power_sum": False, "matrix": False, "randomized": False}


def test_randomized_method_passes(ex2):
    rep = verify_self_dual(ex2.spec, matrix_method=False, samples=3, seed=1)
    assert rep.methods == {"power_sum": True, "randomized": True}


def test_power_sums_with_zero_point(small):
    spec = small.spec
    assert 0 in spec.points.tolist()
    P = power_sums(spec)
    assert P[:-1].tolist() == [0] * (len(P) - 1)
    assert spec.field.add(P[-1], 1) == 0


def test_rank_paths_agree(ex2):
    assert rank(ex2.spec.field, generator_matrix(ex2.spec).rows) == ex2.spec.k
    assert structural_rank_ok(ex2.spec)
    dup = CodeSpec(ex2.spec.field, 4, 2, False, np.array([1, 1, 2, 3]), np.array([1, 1, 1, 1]))
    assert not structural_rank_ok(dup)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 5))
def test_batched_determinants_match_rank(F49, seed, k):
    rng = np.random.default_rng(seed)
    mats = rng.integers(0, 49, size=(20, k, k))
    mats[::3, 0] = 0  # some singular ones
    got = batched_nonsingular(F49, mats)
    assert got.tolist() == [rank(F49, m) == k for m in mats]


def test_mds_check(small):
    ok, detail = verify_mds(small.spec)
    assert ok and detail.startswith("252")
    F = small.spec.field
    pts = small.spec.points.copy()
    pts[1] = pts[2]
    assert verify_mds(small.spec.__class__(F, 10, 5, True, pts, small.spec.scaling))[0] is False


def test_mds_skipped_for_long_codes(ex2):
    assert verify_mds(ex2.spec)[0] is None


def test_codespec_invariants(F49):
    with pytest.raises(ValueError):
        CodeSpec(F49, 3, 1, False, np.arange(3), np.ones(3))
    with pytest.raises(ValueError):
        CodeSpec(F49, 4, 2, False, np.arange(4), np.array([1, 0, 1, 1]))
    with pytest.raises(ValueError):
        CodeSpec(F49, 4, 2, True, np.arange(4), np.ones(4))


def test_matrix_roundtrip(ex2, tmp_path):
    G = generator_matrix(ex2.spec)
    path = tmp_path / "g.txt"
    write_matrix(G, path)
    back = read_matrix(path)
    assert np.array_equal(back.rows, G.rows)
    assert np.array_equal(back.spec.points, G.spec.points)
    assert matrix_text(back) == path.read_text()


def _rewrite(path, mutate):
    lines = path.read_text().splitlines()[:-1]
    lines = mutate(lines)
    body = "\n".join(lines) + "\n"
    path.write_text(body + f"sha256={hashlib.sha256(body.encode()).hexdigest()}\n")


def test_matrix_tamper_detection(small, tmp_path):
    path = tmp_path / "g.txt"
    write_matrix(generator_matrix(small.spec), path)
    text = path.read_text()

    flipped = text.splitlines()
    row = flipped[5].split()
    row[0] = str((int(row[0]) + 1) % 49)
    flipped[5] = " ".join(row)
    path.write_text("\n".join(flipped) + "\n")
    with pytest.raises(MatrixFileError, match="checksum"):
        read_matrix(path)

    path.write_text(text)
    _rewrite(path, lambda ls: ls[:5] + [" ".join(["1"] * 10)] + ls[6:])
    with pytest.raises(MatrixFileError, match="disagree"):
        read_matrix(path)

    path.write_text(text)
    _rewrite(path, lambda ls: [ls[0], ls[1].replace("modulus=3,1,1", "modulus=5,1,1")] + ls[2:])
    with pytest.raises(MatrixFileError, match="field mismatch"):
        read_matrix(path)

    path.write_text("garbage\n")
    with pytest.raises(MatrixFileError):
        read_matrix(path)


def test_scaling_error_on_non_uniform_set():
    from grssd.chartool import character_report
    from grssd.grscodes import solve_scaling
    p = ConstructionParams.create("thm3", r=7, l=6, s=0, l1=1, l2=0)
    S = build(p)
    rep = character_report(S)
    assert not rep.uniform
    with pytest.raises(ScalingError):
        solve_scaling(S, rep, extended=True)
