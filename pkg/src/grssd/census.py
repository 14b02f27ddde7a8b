"""Census of self-dual code lengths reachable by the eight families over GF(r^2).

Every family has a closed-form length in terms of small integers, so the
census never touches field tables.  For each family the parameter space is
walked block by block (one block per divisor choice and leading parameter);
inside a block the remaining parameters form a numpy grid.

Witnesses are the first parameter tuple in canonical order (divisors
ascending, then parameters in the family's order, lexicographically) that
reaches a length.  Blocks are processed, or merged, in canonical order,
which makes the result independent of how many workers were used.

Two census modes exist:

``stated``
    the families exactly as stated, including the norm-fiber family with
    ``H_0`` added (class 2);
``verified``
    class 2 restricted to the parameters whose sets pass the build check
    and the character test (``l1 = l2 = 0``); the other classes are
    unchanged.  See the README for why.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from sympy import divisors

from .evalsets import CLASS_OF, FAMILIES, FAMILY_OF, ConstructionParams
from .gf import FieldParams

log = logging.getLogger(__name__)

ALL_CLASSES = tuple(range(1, 9))
BUDGET = 10 ** 9
MODES = ("stated", "verified")
THM5_VARIANTS = ("theorem", "table")


class BudgetExceeded(RuntimeError):
    pass


def _check_r(r: int) -> FieldParams:
    fp = FieldParams.from_r(r)
    if r % 4 != 3:
        raise ValueError(f"r = {r} is not 3 mod 4; every family needs r = 3 (mod 4)")
    return fp


# -- blocks -----------------------------------------------------------------
#
# A block is (class_id, key) where key is a tuple of ints; processing a block
# returns {length: witness_tuple} with the first witness per length.

def _even_divs(x: int) -> list[int]:
    return [d for d in divisors(x) if d % 2 == 0]


def blocks_for(r: int, classes: Iterable[int], mode: str = "stated", thm5_variant: str = "theorem"):
    """Blocks in canonical order: class id, then divisor tuple."""
    q = r * r
    out = []
    classes = sorted(set(classes))
    for cid in classes:
        if cid in (1, 2):
            for l in _even_divs(r - 1):
                out.append((cid, (l,)))
        elif cid in (3, 4, 5):
            if cid == 5 and thm5_variant == "table":
                continue  # 4 | v and 4 does not divide v cannot both hold
            for u in _even_divs(q - 1):
                for v in _even_divs(q - 1):
                    if u == v or ((r + 1) * v) % (2 * u) or ((r - 1) * u) % v:
                        continue
                    if cid in (3, 4) and v % 4 == 0:
                        continue
                    if cid == 5:
                        ell = (v & -v).bit_length() - 1
                        if ell < 2 or u % (1 << ell):
                            continue
                    out.append((cid, (u, v)))
        else:
            ed = _even_divs(q - 1)
            for u in ed:
                for v in ed:
                    if ((r + 1) * v) % u or ((r - 1) * u) % v:
                        continue
                    for w in ed:
                        if ((r + 1) * w) % u or ((r - 1) * w) % v or ((r - 1) * u) % w or ((r - 1) * v) % w:
                            continue
                        out.append((cid, (u, v, w)))
    return out


def block_size(r: int, block) -> int:
    """Number of parameter tuples the block walks (for the budget guard)."""
    cid, key = block
    if cid in (1, 2):
        (l,) = key
        return ((r - 1) // l + 1) // 2 * (l // 2 + 1) ** 2
    if cid in (3, 4, 5):
        u, v = key
        g = math.gcd(u, v)
        return (u // g + 1) ** 2 * (v // g + 1)
    u, v, w = key
    return (u // math.gcd(u, v) + 1) * (v // math.gcd(v, w) + 1) * (w // math.gcd(w, u) + 1)


def _first_witnesses(lengths: np.ndarray, valid: np.ndarray, coords: Sequence[np.ndarray], q: int,
                     found: dict, prefix: tuple) -> None:
    """Record the first (in flat C order) parameter tuple for each new even length."""
    ok = valid & (lengths >= 2) & (lengths <= q + 1) & (lengths % 2 == 0)
    if not ok.any():
        return
    flat = lengths[ok]
    idx = np.flatnonzero(ok.ravel())
    uniq, first = np.unique(flat, return_index=True)
    for L, fi in zip(uniq.tolist(), first.tolist()):
        if L in found:
            continue
        pos = np.unravel_index(idx[fi], lengths.shape)
        found[L] = prefix + tuple(int(c[pos]) for c in coords)


def _run_norm_block(r: int, cid: int, l: int, mode: str) -> dict:
    q = r * r
    found: dict = {}
    S = np.arange(0, (r - 1) // l, 2, dtype=np.int64)
    L1 = np.arange(l // 2 + 1, dtype=np.int64)
    L2 = np.arange(l // 2 + 1, dtype=np.int64)
    s, l1, l2 = np.meshgrid(S, L1, L2, indexing="ij")
    if cid == 1:
        n = s * l + (l1 + l2) * (r + 1) + 1
        valid = np.ones_like(n, dtype=bool)
    else:
        n = (s + 1) * l + (l1 + l2) * (r + 1) - 2 * l2 + 1
        valid = np.ones_like(n, dtype=bool)
        if mode == "verified":
            valid = (l1 == 0) & (l2 == 0)
    _first_witnesses(n + 1, valid, (s, l1, l2), q, found, (l,))
    return found


def _run_pair_block(r: int, cid: int, u: int, v: int) -> dict:
    q = r * r
    found: dict = {}
    g = math.gcd(u, v)
    a, b = (q - 1) // u, (q - 1) // v
    c = (q - 1) * g // (u * v)
    half = (r + 1) * v // (2 * u)
    SP = np.arange(u // g + 1, dtype=np.int64)
    T = np.arange(v // g + 1, dtype=np.int64)
    sp, t = np.meshgrid(SP, T, indexing="ij")
    for s in range(u // g + 1):
        n = (s + sp) * a + t * b - 2 * c * s * t
        if cid == 3:
            valid = np.full(n.shape, half % 2 == 1) & ((s + sp) % 2 == 1)
            length = n
        else:
            valid = (half % 2 == 0) | ((s % 2 == 0) & (sp % 2 == 0))
            if cid == 4:
                length = n + 2
            else:
                length = np.where(n % 2 == 1, n + 1, n + 2)
        _first_witnesses(length, valid, (sp, t), q, found, (u, v, s))
    return found


def _primed(x: np.ndarray, g: int, d: int) -> np.ndarray:
    # floor((x-1) g / d) + 1, which is 0 at x = 0
    return np.floor_divide((x - 1) * g, d) + 1


def _run_triple_block(r: int, cid: int, u: int, v: int, w: int) -> dict:
    q = r * r
    N = q - 1
    found: dict = {}
    guv, gvw, gwu = math.gcd(u, v), math.gcd(v, w), math.gcd(w, u)
    g = math.gcd(guv, w)
    lab, lbc, lca = N // math.lcm(u, v), N // math.lcm(v, w), N // math.lcm(w, u)
    labc = N // math.lcm(u, v, w)
    kv, kw = (r + 1) * v // u, (r + 1) * w // u
    T = np.arange(v // gvw + 1, dtype=np.int64)
    Fv = np.arange(w // gwu + 1, dtype=np.int64)
    t, f = np.meshgrid(T, Fv, indexing="ij")
    tp = _primed(t, g, guv)
    fp = _primed(f, g, gvw)
    base = t * (N // v) + f * (N // w) - 2 * lbc * t * fp
    for s in range(u // guv + 1):
        if (kv * s) % 2 or (kw * s) % 2:
            continue
        if cid in (7, 8) and (kv * (s * (s - 1) // 2)) % 2:
            continue
        sp = (s - 1) * g // gwu + 1
        n = base + s * (N // u) - 2 * lab * s * tp - 2 * lca * f * sp + 4 * labc * sp * tp * fp
        if cid == 6:
            valid, length = n % 2 == 0, n
        elif cid == 7:
            valid, length = n % 2 == 1, n + 1
        else:
            valid, length = n % 2 == 0, n + 2
        _first_witnesses(length, valid, (t, f), q, found, (u, v, w, s))
    return found


def run_block(r: int, block, mode: str = "stated") -> dict:
    cid, key = block
    if cid in (1, 2):
        return _run_norm_block(r, cid, key[0], mode)
    if cid in (3, 4, 5):
        return _run_pair_block(r, cid, *key)
    return _run_triple_block(r, cid, *key)


def _run_chunk(args):
    r, chunk, mode = args
    return [run_block(r, b, mode) for b in chunk]


# -- the census -------------------------------------------------------------

@dataclass
class LengthCensus:
    r: int
    q: int
    classes: tuple[int, ...]
    mode: str
    thm5_variant: str
    per_class: dict[int, dict[int, tuple]] = dc_field(default_factory=dict)

    @property
    def lengths(self) -> np.ndarray:
        s = set()
        for d in self.per_class.values():
            s.update(d)
        return np.array(sorted(s), dtype=np.int64)

    @property
    def bitset(self) -> np.ndarray:
        bits = np.zeros(self.q + 2, dtype=bool)
        bits[self.lengths] = True
        return bits

    def attribution(self) -> dict[int, tuple[int, tuple]]:
        """length -> (lowest class reaching it, that class's first witness)."""
        out = {}
        for cid in sorted(self.per_class):
            for L, wit in self.per_class[cid].items():
                out.setdefault(L, (cid, wit))
        return dict(sorted(out.items()))

    def first_attributed_counts(self) -> dict[int, int]:
        counts = {cid: 0 for cid in self.classes}
        for cid, _ in self.attribution().values():
            counts[cid] += 1
        return counts

    def class_lengths(self, cid: int) -> np.ndarray:
        return np.array(sorted(self.per_class.get(cid, {})), dtype=np.int64)

    def witness_params(self, length: int, cid: int | None = None) -> ConstructionParams:
        if cid is None:
            cid, wit = self.attribution()[length]
        else:
            wit = self.per_class[cid][length]
        return witness_to_params(self.r, cid, wit)


def witness_to_params(r: int, cid: int, wit: tuple) -> ConstructionParams:
    fam = FAMILY_OF[cid]
    return ConstructionParams.create(fam, r=r, **dict(zip(_witness_names(cid), wit)))


def _witness_names(cid: int) -> tuple[str, ...]:
    fam = FAMILY_OF[cid]
    if cid in (3, 4, 5):
        return ("u", "v", "s", "s_prime", "t")
    return FAMILIES[fam]


def _threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("GRSSD_THREADS")
        threads = int(env) if env else 1
    if threads < 1:
        raise ValueError("thread count must be positive")
    return threads


def enumerate_lengths(r: int, classes: Iterable[int] = ALL_CLASSES, mode: str = "stated",
                      thm5_variant: str = "theorem", threads: int | None = None,
                      progress: bool = False, budget: int = BUDGET) -> LengthCensus:
    """Walk every family's parameter space and collect the reachable even lengths."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if thm5_variant not in THM5_VARIANTS:
        raise ValueError(f"thm5_variant must be one of {THM5_VARIANTS}")
    classes = tuple(sorted(set(classes)))
    if any(c not in ALL_CLASSES for c in classes):
        raise ValueError("class ids run from 1 to 8")
    fp = _check_r(r)
    q = fp.q
    blocks = blocks_for(r, classes, mode, thm5_variant)
    total = sum(block_size(r, b) for b in blocks)
    if total > budget:
        raise BudgetExceeded(f"census for r = {r} would walk {total} parameter tuples (budget {budget})")
    threads = _threads(threads)
    # contiguous chunks keep the merge order canonical
    nchunk = max(1, min(len(blocks), threads * 4))
    bounds = np.linspace(0, len(blocks), nchunk + 1).astype(int)
    chunks = [blocks[bounds[i]:bounds[i + 1]] for i in range(nchunk)]
    if threads == 1:
        results = []
        for i, ch in enumerate(chunks):
            results.append(_run_chunk((r, ch, mode)))
            if progress:
                print(f"census r={r}: block group {i + 1}/{nchunk}", file=sys.stderr)
    else:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = []
            for i, res in enumerate(ex.map(_run_chunk, [(r, ch, mode) for ch in chunks])):
                results.append(res)
                if progress:
                    print(f"census r={r}: block group {i + 1}/{nchunk}", file=sys.stderr)
    census = LengthCensus(r, q, classes, mode, thm5_variant, {c: {} for c in classes})
    for ch, res in zip(chunks, results):
        for (cid, _key), found in zip(ch, res):
            dest = census.per_class[cid]
            for L, wit in found.items():
                if L not in dest:
                    dest[L] = wit
    for cid in classes:
        census.per_class[cid] = dict(sorted(census.per_class[cid].items()))
    return census


# -- ratio ------------------------------------------------------------------

@dataclass(frozen=True)
class RatioReport:
    r: int
    q: int
    N: int
    denominator: Fraction
    mode: str
    universe: str = "even code lengths 2 <= n <= q+1"

    @property
    def ratio(self) -> float:
        return float(self.N / self.denominator) if self.denominator else 0.0

    @property
    def percent(self) -> float:
        return 100.0 * self.ratio


def ratio(census: LengthCensus, classes: Iterable[int] | None = None) -> RatioReport:
    """``N / (q/2)`` with ``N`` the number of distinct reachable lengths."""
    classes = census.classes if classes is None else tuple(classes)
    s = set()
    for c in classes:
        s.update(census.per_class.get(c, {}))
    return RatioReport(census.r, census.q, len(s), Fraction(census.q, 2), census.mode)


# -- I/O ----------------------------------------------------------------------

def export_census(census: LengthCensus, path) -> None:
    """CSV ``length,classId,witnessParams`` sorted by length."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["length", "classId", "witnessParams"])
        for L, (cid, wit) in census.attribution().items():
            wr.writerow([L, cid, witness_to_params(census.r, cid, wit).text()])


def read_census(path, r: int) -> list[tuple[int, int, ConstructionParams]]:
    rows = []
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        head = next(rd)
        if head != ["length", "classId", "witnessParams"]:
            raise ValueError(f"{path}: unexpected census header {head}")
        for L, cid, text in rd:
            rows.append((int(L), int(cid), ConstructionParams.parse(FAMILY_OF[int(cid)], text, r)))
    return rows


def summary(census: LengthCensus) -> dict:
    rep = ratio(census)
    return {
        "r": census.r,
        "q": census.q,
        "mode": census.mode,
        "thm5_variant": census.thm5_variant,
        "N": rep.N,
        "ratio": round(rep.ratio, 6),
        "universe": rep.universe,
        "perClass": {str(c): n for c, n in census.first_attributed_counts().items()},
        "classSizes": {str(c): len(d) for c, d in census.per_class.items()},
    }


def write_summary(census: LengthCensus, path) -> None:
    with open(path, "w") as fh:
        json.dump(summary(census), fh, indent=2, sort_keys=True)
        fh.write("\n")


def thm5_variant_delta(r: int, threads: int | None = None) -> dict:
    """Lengths lost when class 5 follows the table listing instead of the theorem."""
    full = enumerate_lengths(r, threads=threads)
    table = enumerate_lengths(r, thm5_variant="table", threads=threads)
    return {"theorem_N": ratio(full).N, "table_N": ratio(table).N,
            "class5_theorem": len(full.per_class[5]), "class5_table": len(table.per_class[5])}
