"""Algebraic property checks against brute-force oracles.

Each check returns a :class:`PropertyResult`; :func:`run_suite` runs them in
a fixed order over one field and stops at nothing, so a caller can report
every failure or just the first.  These back the ``self-test`` command and
the test suite.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import cosets as cs
from .chartool import delta_brute, delta_factored, uniformity_check
from .cosets import CosetSpec, CosetUnion
from .evalsets import (FAMILIES, ConstructionParams, SubsetFamily, combine, family_subsets,
                       iter_family_params, multiset_identity_check)
from .gf import GaloisField, build_field


@dataclass
class PropertyResult:
    name: str
    ok: bool
    cases: int
    detail: str = ""
    seconds: float = 0.0


def _divisors(x: int) -> list[int]:
    return [d for d in range(1, x + 1) if x % d == 0]


# -- random coset families -----------------------------------------------------

def random_coset_union(F: GaloisField, rng: random.Random, max_pieces: int = 3,
                       zero: bool | None = None) -> CosetUnion:
    """A union of pairwise disjoint cosets of one random subgroup."""
    steps = [d for d in _divisors(F.order) if 1 < d < F.order]
    step = rng.choice(steps)
    offs = rng.sample(range(step), min(step, rng.randint(1, max_pieces)))
    if zero is None:
        zero = rng.random() < 0.3
    return cs.cosets_union(F.order, offs, step, include_zero=zero)


def random_coset_family(F: GaloisField, rng: random.Random, n: int | None = None) -> SubsetFamily:
    n = n or rng.randint(2, 3)
    forms = []
    while len(forms) < n:
        # keep zero in at most one subset so that it is never dropped silently
        U = random_coset_union(F, rng, zero=(not any(f.include_zero for f in forms)) and rng.random() < 0.3)
        forms.append(U)
    return SubsetFamily.from_cosets(F, forms)


def family_from_params(params: ConstructionParams) -> SubsetFamily:
    F, forms = family_subsets(params)
    return SubsetFamily.from_cosets(F, [f for f in forms if f.size > 0])


# -- individual properties ---------------------------------------------------

def check_eta_minus_one(F: GaloisField, **_) -> PropertyResult:
    ok = F.eta(F.neg(1)) == 1
    return PropertyResult("eta-minus-one", ok, 1, "" if ok else "eta(-1) = -1")


def check_union_delta(F: GaloisField, rng: random.Random, count: int = 60, **_) -> PropertyResult:
    """Closed-form delta of a single coset union equals the pairwise product."""
    for i in range(count):
        U = random_coset_union(F, rng)
        elems = cs.materialize(F, U)
        if elems.size < 2:
            continue
        got = cs.union_delta(F, U, elems)
        want = delta_brute(elems, elems, F)
        if not np.array_equal(np.atleast_1d(got), np.atleast_1d(want)):
            return PropertyResult("coset-union-delta", False, i + 1, f"mismatch on {U}")
    return PropertyResult("coset-union-delta", True, count)


def check_delta_factorization(F: GaloisField, rng: random.Random, count: int = 20,
                              fault: int = 1, **_) -> PropertyResult:
    """Factored delta of combined coset families equals the brute-force product."""
    name = "delta-factorization"
    fams = [random_coset_family(F, rng) for _ in range(count)]
    for fam in families_of_field(F, rng, per_family=max(1, count // 8)):
        fams.append(fam)
    checked = 0
    for fam in fams:
        S = combine(fam)
        if len(S) < 2:
            continue
        got = delta_factored(S, fault=fault)
        want = delta_brute(S, S.elements)
        checked += 1
        if not np.array_equal(got, want):
            bad = int(S.elements[np.flatnonzero(got != want)[0]])
            return PropertyResult(name, False, checked, f"mismatch at element {bad}")
    return PropertyResult(name, True, checked)


def random_abstract_family(rng: random.Random, universe: int = 40) -> list[np.ndarray]:
    n = rng.choice((2, 3, 4))
    subs = []
    for _ in range(n):
        k = rng.randint(1, universe)
        subs.append(np.array(sorted(rng.sample(range(universe), k)), dtype=np.int64))
    return subs


def check_multiset_identity(F: GaloisField, rng: random.Random, count: int = 200, **_) -> PropertyResult:
    """Overlap bookkeeping of the combiner on random abstract families."""
    for i in range(count):
        subs = random_abstract_family(rng)
        fam = SubsetFamily(F, tuple(subs))
        if not multiset_identity_check(fam):
            return PropertyResult("multiset-identity", False, i + 1, f"family {[s.tolist() for s in subs]}")
    return PropertyResult("multiset-identity", True, count)


def check_coset_distinctness(F: GaloisField, **_) -> PropertyResult:
    """``beta^i M = beta^j M`` iff ``(r-1)/l`` divides ``i - j`` (exhaustive)."""
    r = F.r
    cases = 0
    for l in _divisors(r - 1):
        step = F.order // l
        idx = (r - 1) // l
        sets = [frozenset(cs.materialize(F, CosetSpec(i * (r + 1), step, F.order)).tolist())
                for i in range(r - 1)]
        for i in range(r - 1):
            for j in range(r - 1):
                cases += 1
                if (sets[i] == sets[j]) != ((i - j) % idx == 0):
                    return PropertyResult("coset-distinctness", False, cases, f"l={l} i={i} j={j}")
    return PropertyResult("coset-distinctness", True, cases)


def check_fiber_field_intersection(F: GaloisField, **_) -> PropertyResult:
    sub = set(F.subfield.tolist())
    cases = 0
    for l in [d for d in _divisors(F.r - 1) if d % 2 == 0]:
        for i in range(l):
            cases += 1
            want = sorted(set(cs.materialize(F, cs.norm_fiber(F, l, i)).tolist()) & sub)
            got = cs.fiber_field_intersection(F, l, i).tolist()
            if got != want:
                return PropertyResult("fiber-field-intersection", False, cases, f"l={l} i={i}")
    return PropertyResult("fiber-field-intersection", True, cases)


def _norm_fiber_cases(F: GaloisField):
    r = F.r
    for l in [d for d in _divisors(r - 1) if d % 2 == 0]:
        for s in range(0, (r - 1) // l, 2):
            H0 = set(cs.materialize(F, cs.h_coset(F, l, s, 0)).tolist())
            for i in range(l):
                fiber = cs.materialize(F, cs.norm_fiber(F, l, i))
                b = np.array([x for x in fiber.tolist() if x not in H0], dtype=np.int64)
                if b.size:
                    yield l, s, i, b


def check_norm_fiber_character(F: GaloisField, as_stated: bool = False, **_) -> PropertyResult:
    """Characters of ``pi_{H_0}`` and of ``prod_{k>=1} pi_{H_k}`` on norm fibers outside ``H_0``.

    ``eta(prod_{k=1..s} pi_{H_k}(b)) = +1`` always.  For ``pi_{H_0}(b)`` with
    ``b`` in fiber ``N_i`` the character is ``(-1)^i``; ``as_stated`` checks
    the stronger (false) claim that it is always +1.
    """
    name = "norm-fiber-character" + ("-as-stated" if as_stated else "")
    cases = 0
    for l, s, i, b in _norm_fiber_cases(F):
        cases += 1
        e0 = np.atleast_1d(F.eta(cs.union_pi(F, cs.h_coset(F, l, s, 0), b)))
        want0 = 1 if as_stated else (-1) ** i
        if (e0 != want0).any():
            bad = int(b[np.flatnonzero(e0 != want0)[0]])
            return PropertyResult(name, False, cases,
                                  f"l={l} s={s} fiber {i} element {bad}: eta(pi_H0) = {-want0}")
        prod = np.ones_like(b)
        for k in range(1, s + 1):
            prod = F.mul(prod, cs.union_pi(F, cs.h_coset(F, l, s, k), b))
        if (np.atleast_1d(F.eta(prod)) != 1).any():
            return PropertyResult(name, False, cases, f"l={l} s={s} fiber {i}: product character -1")
    return PropertyResult(name, True, cases)


def _coset_block(F, offsets_step, count, step):
    return cs.cosets_union(F.order, [offsets_step * i for i in range(count)], step)


def check_pair_cardinality(F: GaloisField, s: int = 2, t: int = 2, **_) -> PropertyResult:
    """``|A cap B|`` closed form for ``A = U_{i<s} beta^i<alpha>``, ``B = U_{j<t} alpha^j<beta>``."""
    cases = 0
    for u in _divisors(F.order):
        for v in _divisors(F.order):
            g = math.gcd(u, v)
            if s > u // g or t > v // g:
                continue
            A = cs.materialize(F, _coset_block(F, v, s, u))
            B = cs.materialize(F, _coset_block(F, u, t, v))
            cases += 1
            want = np.intersect1d(A, B).size
            got = cs.pair_intersection_card(F.q, u, v, s, t)
            if got != want:
                return PropertyResult("pair-intersection-size", False, cases,
                                      f"u={u} v={v}: formula {got}, actual {want}")
    return PropertyResult("pair-intersection-size", True, cases)


def admissible_triples(F: GaloisField):
    r = F.r
    divs = [d for d in _divisors(F.order) if d % 2 == 0]
    for u in divs:
        for v in divs:
            for w in divs:
                if ((r + 1) * v) % u or ((r + 1) * w) % u or ((r - 1) * u) % v or ((r - 1) * w) % v \
                        or ((r - 1) * u) % w or ((r - 1) * v) % w:
                    continue
                yield u, v, w


def check_triple_cardinality(F: GaloisField, rng: random.Random, count: int = 50, **_) -> PropertyResult:
    triples = list(admissible_triples(F))
    cases = 0
    for _ in range(count):
        if not triples:
            break
        u, v, w = rng.choice(triples)
        s = rng.randint(1, u // math.gcd(u, v))
        t = rng.randint(1, v // math.gcd(v, w))
        f = rng.randint(1, w // math.gcd(w, u))
        A = cs.materialize(F, _coset_block(F, v, s, u))
        B = cs.materialize(F, _coset_block(F, w, t, v))
        C = cs.materialize(F, _coset_block(F, u, f, w))
        got = cs.intersection_card3(F.q, u, v, w, s, t, f)
        want = (np.intersect1d(A, B).size, np.intersect1d(B, C).size, np.intersect1d(C, A).size,
                np.intersect1d(np.intersect1d(A, B), C).size)
        cases += 1
        if (got.AB, got.BC, got.CA, got.ABC) != want:
            return PropertyResult("triple-intersection-size", False, cases,
                                  f"u={u} v={v} w={w} s={s} t={t} f={f}: "
                                  f"formula {(got.AB, got.BC, got.CA, got.ABC)}, actual {want}")
    return PropertyResult("triple-intersection-size", True, cases)


def families_of_field(F: GaloisField, rng: random.Random, per_family: int = 20):
    """Coset families of every construction, sampled from the valid parameters."""
    for tag in FAMILIES:
        allp = _valid_params(tag, F.r)
        pick = allp if len(allp) <= per_family else rng.sample(allp, per_family)
        for p in pick:
            yield family_from_params(p)


@lru_cache(maxsize=None)
def _valid_params(tag: str, r: int) -> list[ConstructionParams]:
    return list(iter_family_params(tag, r))


def check_uniformity_criterion(F: GaloisField, rng: random.Random, per_family: int = 20,
                               random_count: int = 100, **_) -> PropertyResult:
    """The region hypothesis implies character uniformity of the combined set.

    Runs on sampled construction families and on random coset families,
    counting only the cases where the hypothesis holds.
    """
    name = "uniformity-criterion"
    cases = 0
    pool = list(families_of_field(F, rng, per_family))
    hits = 0
    tries = 0
    while hits < random_count and tries < 50 * random_count:
        tries += 1
        fam = random_coset_family(F, rng)
        res = [uniformity_check(fam, c) for c in (1, -1)]
        if any(x.hypothesis_holds for x in res):
            pool.append(fam)
            hits += 1
    for fam in pool:
        if len(combine(fam)) < 1:
            continue
        for c in (1, -1):
            res = uniformity_check(fam, c)
            if res.hypothesis_holds:
                cases += 1
                if not res.conclusion_holds:
                    return PropertyResult(name, False, cases, f"hypothesis holds for c={c} but the set is not uniform")
    return PropertyResult(name, True, cases, f"{hits} random families met the hypothesis")


# -- suites --------------------------------------------------------------------

SUITE: tuple[tuple[str, Callable[..., PropertyResult]], ...] = (
    ("eta-minus-one", check_eta_minus_one),
    ("delta-factorization", check_delta_factorization),
    ("coset-union-delta", check_union_delta),
    ("multiset-identity", check_multiset_identity),
    ("coset-distinctness", check_coset_distinctness),
    ("fiber-field-intersection", check_fiber_field_intersection),
    ("norm-fiber-character", check_norm_fiber_character),
    ("pair-intersection-size", check_pair_cardinality),
    ("triple-intersection-size", check_triple_cardinality),
    ("uniformity-criterion", check_uniformity_criterion),
)


def run_suite(F: GaloisField, seed: int = 0, fault: int = 1, as_stated: bool = False,
              light: bool = False) -> list[PropertyResult]:
    """Run every property over ``F``; ``light`` shrinks the sampled parts for large fields."""
    out = []
    for name, fn in SUITE:
        rng = random.Random(f"{seed}:{F.q}:{name}")
        kw = {"rng": rng, "fault": fault, "as_stated": as_stated}
        if light:
            kw.update(per_family=4, random_count=20)
        t0 = time.perf_counter()
        res = fn(F, **kw)
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out


def default_fields() -> list[GaloisField]:
    return [build_field(7), build_field(19)]
