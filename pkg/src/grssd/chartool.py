"""delta_S, pi_S and quadratic-character uniformity of evaluation sets.

``delta_S(e) = prod_{e' in S, e' != e} (e - e')`` is computed two ways:

* brute force, one difference per pair (the oracle);
* factored, from the coset structure of the subsets the set was combined
  from.  For a disjoint union the product splits piece by piece; for the
  odd-overlap combination the indicator identity

      1_S = sum_{J != {}} (-1)^(|J|+1) 2^(|J|-1) 1_{A_J},   A_J = cap_{j in J} A_j

  turns ``delta_S(e)`` into a signed product of per-intersection factors,
  each of which is a coset union with closed-form ``pi`` and ``delta``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import cosets as cs
from .cosets import CosetUnion
from .evalsets import EvalSet, SubsetFamily, combine, membership_masks
from .gf import GaloisField

BRUTE_BLOCK = 1 << 21  # pairwise differences per chunk


def _log_diff_sum(F: GaloisField, x: np.ndarray, pool: np.ndarray, skip_equal: bool) -> np.ndarray:
    """``sum_j log(x_i - pool_j)`` mod q-1 per ``x_i`` (equal pairs skipped when asked).

    Returns -1 where some difference is zero and not skipped.
    """
    out = np.zeros(x.size, dtype=np.int64)
    bad = np.zeros(x.size, dtype=bool)
    rows = max(1, BRUTE_BLOCK // max(pool.size, 1))
    for lo in range(0, x.size, rows):
        xb = x[lo:lo + rows]
        diff = F.sub(xb[:, None], pool[None, :])
        ld = F.log[diff]
        zero = ld < 0
        if skip_equal:
            zero &= xb[:, None] != pool[None, :]
            ld = np.where(xb[:, None] == pool[None, :], 0, ld)
        bad[lo:lo + rows] = zero.any(axis=1)
        out[lo:lo + rows] = np.where(zero, 0, ld).sum(axis=1) % F.order
    out[bad] = -1
    return out


def delta_brute(S, e, field: GaloisField | None = None):
    """Product of ``e - e'`` over all other ``e'`` in ``S`` (scalar or array ``e``)."""
    F, elems = _unpack(S, field)
    e_arr = np.atleast_1d(np.asarray(e, dtype=np.int64))
    if elems.size < 2:
        raise ValueError("need at least two elements")
    if not np.isin(e_arr, elems).all():
        raise ValueError("delta_brute: point not in the set")
    logs = _log_diff_sum(F, e_arr, elems, skip_equal=True)
    out = F.exp[logs]
    return int(out[0]) if np.ndim(e) == 0 else out


def pi_brute(S, x, field: GaloisField | None = None):
    """``prod_{e in S} (x - e)``."""
    F, elems = _unpack(S, field)
    x_arr = np.atleast_1d(np.asarray(x, dtype=np.int64))
    logs = _log_diff_sum(F, x_arr, elems, skip_equal=False)
    out = np.where(logs < 0, 0, F.exp[np.maximum(logs, 0)])
    return int(out[0]) if np.ndim(x) == 0 else out


def _unpack(S, field):
    if isinstance(S, EvalSet):
        return S.field, S.elements
    if field is None:
        raise ValueError("pass the field along with a raw element list")
    return field, np.unique(np.asarray(S, dtype=np.int64))


# -- factored path ----------------------------------------------------------

def _own_factor(F: GaloisField, U: CosetUnion, x: np.ndarray) -> np.ndarray:
    """``delta_U(x)`` where ``x`` is in ``U``, ``pi_U(x)`` elsewhere."""
    if not U.pieces and not U.include_zero:
        return np.ones_like(x)
    inside = cs.membership(F, U, x)
    out = np.ones_like(x)
    if inside.any():
        out[inside] = cs.union_delta(F, U, x[inside])
    if (~inside).any():
        out[~inside] = cs.union_pi(F, U, x[~inside])
    return out


def intersection_terms(forms: tuple[CosetUnion, ...]):
    """``(J, A_J, exponent)`` for every nonempty index set ``J``."""
    n = len(forms)
    for size in range(1, n + 1):
        coef = (-1) ** (size + 1) * 2 ** (size - 1)
        for J in itertools.combinations(range(n), size):
            U = forms[J[0]]
            for j in J[1:]:
                U = U.intersect(forms[j])
            yield J, U, coef


def delta_factored(S: EvalSet, e=None, fault: int = 1):
    """``delta_S`` from closed forms over the coset structure of ``S``.

    ``fault`` multiplies the result and exists only so tests can check that
    an injected error is caught; leave it at 1.
    """
    fam = S.family
    if fam is None or fam.coset_forms is None:
        raise ValueError("delta_factored needs a set combined from coset unions")
    F = S.field
    x = S.elements if e is None else np.atleast_1d(np.asarray(e, dtype=np.int64))
    if not np.isin(x, S.elements).all():
        raise ValueError("delta_factored: point not in the set")
    logs = np.zeros(x.size, dtype=np.int64)
    for _J, U, coef in intersection_terms(fam.coset_forms):
        if not U.pieces and not U.include_zero:
            continue
        f = _own_factor(F, U, x)
        lf = F.log[f]
        if (lf < 0).any():
            raise ArithmeticError("vanishing factor: coset pieces of a subset overlap")
        logs = (logs + coef * lf) % F.order
    out = F.mul(F.exp[logs], fault)
    out = np.atleast_1d(out)
    return int(out[0]) if (e is not None and np.ndim(e) == 0) else out


# -- reports ----------------------------------------------------------------

@dataclass
class CharacterReport:
    elements: np.ndarray
    deltas: np.ndarray
    etas: np.ndarray
    method: str
    spot_checked: int

    @property
    def uniform(self) -> bool:
        return bool(self.etas.size) and bool((self.etas == self.etas[0]).all())

    @property
    def common_value(self) -> int | None:
        return int(self.etas[0]) if self.uniform else None

    @property
    def negated_uniform(self) -> bool:
        # eta(-1) = +1 in GF(r^2), so eta(-delta) = eta(delta)
        return self.uniform and self.common_value == 1

    def counts(self) -> dict[int, int]:
        return {int(k): int(v) for k, v in zip(*np.unique(self.etas, return_counts=True))}

    def dump_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            for a, d, h in zip(self.elements.tolist(), self.deltas.tolist(), self.etas.tolist()):
                fh.write(json.dumps({"element": a, "delta": d, "eta": h}) + "\n")


def compute_deltas(S: EvalSet, method: str = "auto") -> tuple[np.ndarray, str]:
    if len(S) == 1:
        # empty product
        return np.ones(1, dtype=np.int64), "trivial"
    if method == "auto":
        method = "factored" if (S.family is not None and S.family.coset_forms is not None) else "brute"
    if method == "factored":
        return delta_factored(S), method
    if method == "brute":
        return np.atleast_1d(delta_brute(S, S.elements)), method
    raise ValueError(f"unknown delta method {method!r}")


def character_report(S: EvalSet, method: str = "auto", spot: int = 32, seed: int = 0) -> CharacterReport:
    """``eta(delta_S(e))`` for every ``e``; factored values are spot-checked by brute force."""
    if len(S) < 1:
        raise ValueError("empty evaluation set")
    deltas, used = compute_deltas(S, method)
    checked = 0
    if used == "factored" and spot:
        rng = np.random.default_rng(seed)
        pick = rng.choice(len(S), size=min(spot, len(S)), replace=False)
        brute = np.atleast_1d(delta_brute(S, S.elements[pick]))
        if not np.array_equal(brute, deltas[pick]):
            bad = int(S.elements[pick][np.flatnonzero(brute != deltas[pick])[0]])
            raise ArithmeticError(f"factored delta disagrees with brute force at element {bad}")
        checked = pick.size
    etas = np.atleast_1d(S.field.eta(deltas))
    rep = CharacterReport(S.elements, deltas, etas, used, checked)
    neg = np.atleast_1d(S.field.eta(S.field.neg(deltas)))
    assert rep.negated_uniform == bool((neg == 1).all())
    return rep


# -- the region criterion ----------------------------------------------------

@dataclass
class UniformityResult:
    hypothesis_holds: bool
    conclusion_holds: bool
    region_values: dict[tuple[int, ...], tuple[int, ...]]
    witnesses: dict[tuple[int, ...], int]

    @property
    def implication_holds(self) -> bool:
        return (not self.hypothesis_holds) or self.conclusion_holds


def _region_logs(F: GaloisField, fam: SubsetFamily, I, x: np.ndarray) -> np.ndarray:
    """log of ``prod_{i in I} delta_{A_i}(x) * prod_{j not in I} pi_{A_j}(x)``."""
    logs = np.zeros(x.size, dtype=np.int64)
    for i in range(fam.n):
        if fam.coset_forms is not None:
            f = _own_factor(F, fam.coset_forms[i], x)
        elif i in I:
            f = np.atleast_1d(delta_brute(fam.subsets[i], x, F))
        else:
            f = np.atleast_1d(pi_brute(fam.subsets[i], x, F))
        logs = (logs + F.log[f]) % F.order
    return logs


def region_characters(fam: SubsetFamily) -> dict[tuple[int, ...], np.ndarray]:
    """For each odd region, the character of the region product at each of its elements."""
    F = fam.field
    S = combine(fam)
    out = {}
    for I, elems in S.pieces:
        if fam.coset_forms is None and any(fam.subsets[i].size < 2 for i in I):
            # delta of a singleton is the empty product
            pass
        out[I] = 1 - 2 * (_region_logs(F, fam, I, elems) & 1)
    return out


def uniformity_check(fam: SubsetFamily, c: int) -> UniformityResult:
    """Region hypothesis and the uniformity conclusion of the odd-overlap set.

    Hypothesis: in every odd region ``I`` and at every point ``a`` of it, the
    character of ``prod_{i in I} delta_{A_i}(a) prod_{j not in I} pi_{A_j}(a)``
    equals ``c``.  Conclusion: ``eta(delta_S(e)) = c`` for all ``e`` in ``S``.
    """
    if c not in (1, -1):
        raise ValueError("c must be +1 or -1")
    regions = region_characters(fam)
    hyp = all((v == c).all() for v in regions.values())
    S = combine(fam)
    conc = False
    if len(S) >= 1:
        etas = np.atleast_1d(fam.field.eta(compute_deltas(S)[0]))
        conc = bool((etas == c).all())
    witnesses = {}
    for I, v in regions.items():
        bad = np.flatnonzero(v != c)
        if bad.size:
            witnesses[I] = int(dict(S.pieces)[I][bad[0]])
    values = {I: tuple(sorted(set(v.tolist()))) for I, v in regions.items()}
    return UniformityResult(hyp, conc, values, witnesses)


# -- formal derivative -------------------------------------------------------

def vanishing_poly(F: GaloisField, elems) -> list[int]:
    """Coefficients (low first) of ``prod (x - e)``."""
    coeffs = [1]
    for e in np.asarray(elems, dtype=np.int64).tolist():
        ne = F.neg(e)
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] = F.add(nxt[i + 1], c)
            nxt[i] = F.add(nxt[i], F.mul(c, ne))
        coeffs = nxt
    return coeffs


def derivative_at(F: GaloisField, coeffs: list[int], x: int) -> int:
    acc = 0
    for i in range(len(coeffs) - 1, 0, -1):
        acc = F.add(F.mul(acc, x), F.mul(F.scalar(i), coeffs[i]))
    return acc
