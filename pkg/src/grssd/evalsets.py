"""Evaluation sets for self-dual GRS codes.

Two layers live here:

* :func:`combine` is the generic "odd overlap" combiner: from subsets
  ``A_1..A_n`` it keeps every element that lies in an odd number of them,
  recording which index set each element came from.
* The family builders (``thm2`` ... ``cor3``) instantiate the combiner on
  three coset unions built from norm fibers or multiplicative subgroups,
  with the zero element adjoined where the family calls for it.

Every family has a parameter checklist (:func:`validate`) and a closed-form
length record (:func:`length_info`); :func:`build` refuses to return a set
whose size disagrees with the closed form.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from . import cosets as cs
from .cosets import CosetSpec, CosetUnion
from .gf import FieldParams, GaloisField, build_field


class ValidationError(ValueError):
    """Raised by :func:`build` when the parameter checklist fails."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(f"invalid parameters: {report.first_failure()}")


class CardinalityError(RuntimeError):
    """The materialized set disagrees with the closed-form length."""


# -- parameters ------------------------------------------------------------

FAMILIES: dict[str, tuple[str, ...]] = {
    "thm2": ("l", "s", "l1", "l2"),
    "thm3": ("l", "s", "l1", "l2"),
    "thm4": ("u", "v", "s", "s_prime", "t"),
    "cor1": ("u", "v", "s", "s_prime", "t"),
    "thm5": ("u", "v", "s", "s_prime", "t"),
    "thm6": ("u", "v", "w", "s", "t", "f"),
    "cor2": ("u", "v", "w", "s", "t", "f"),
    "cor3": ("u", "v", "w", "s", "t", "f"),
}

# census class id of each family
CLASS_OF: dict[str, int] = {tag: i + 1 for i, tag in enumerate(FAMILIES)}
FAMILY_OF: dict[int, str] = {i: tag for tag, i in CLASS_OF.items()}


@dataclass(frozen=True)
class ConstructionParams:
    """A family tag, the field, and the family's integer parameters."""

    family: str
    p: int
    m: int
    values: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown construction {self.family!r}; expected one of {', '.join(FAMILIES)}")
        names = FAMILIES[self.family]
        given = dict(self.values)
        missing = [k for k in names if k not in given]
        extra = [k for k in given if k not in names]
        if missing or extra:
            raise ValueError(f"{self.family} takes {', '.join(names)}; missing {missing}, unexpected {extra}")
        object.__setattr__(self, "values", tuple((k, int(given[k])) for k in names))

    @classmethod
    def create(cls, family: str, r: int | None = None, p: int | None = None, m: int = 1, **values: int):
        if r is not None:
            fp = FieldParams.from_r(r)
            p, m = fp.p, fp.m
        if p is None:
            raise ValueError("give either r or p")
        return cls(family, int(p), int(m), tuple(values.items()))

    @classmethod
    def parse(cls, family: str, text: str, r: int) -> "ConstructionParams":
        """Inverse of :meth:`text`, e.g. ``parse("thm2", "l=6,s=0,l1=1,l2=0", 7)``."""
        values = {}
        for item in filter(None, text.split(",")):
            k, _, v = item.partition("=")
            values[k.strip()] = int(v)
        return cls.create(family, r=r, **values)

    def __getitem__(self, name: str) -> int:
        return dict(self.values)[name]

    def as_dict(self) -> dict[str, int]:
        return dict(self.values)

    def text(self) -> str:
        return ",".join(f"{k}={v}" for k, v in self.values)

    @property
    def field_params(self) -> FieldParams:
        return FieldParams(self.p, self.m)

    @property
    def r(self) -> int:
        return self.p ** self.m

    @property
    def q(self) -> int:
        return self.r ** 2

    @property
    def class_id(self) -> int:
        return CLASS_OF[self.family]

    def field(self) -> GaloisField:
        return build_field(self.p, self.m)


@dataclass(frozen=True)
class LengthInfo:
    """Closed-form sizes for one parameter set.

    ``n`` is the family's own ``n``; ``set_size`` the stated size of the
    evaluation set; ``code_length`` the stated self-dual code length.
    """

    n: int
    set_size: int
    code_length: int
    extended: bool


def _pair_terms(q, u, v, s, s_prime, t):
    n = (s + s_prime) * ((q - 1) // u) + t * ((q - 1) // v) - 2 * cs.pair_intersection_card(q, u, v, s, t)
    return n


def _triple_n(q, u, v, w, s, t, f):
    c = cs.intersection_card3(q, u, v, w, s, t, f)
    return (s * ((q - 1) // u) + t * ((q - 1) // v) + f * ((q - 1) // w)
            - 2 * (c.AB + c.BC + c.CA) + 4 * c.ABC)


def length_info(params: ConstructionParams) -> LengthInfo:
    """The family's ``n``, stated set size and stated code length."""
    P = params.as_dict()
    r, q = params.r, params.q
    fam = params.family
    if fam == "thm2":
        n = P["s"] * P["l"] + (P["l1"] + P["l2"]) * (r + 1) + 1
        return LengthInfo(n, n, n + 1, True)
    if fam == "thm3":
        n = (P["s"] + 1) * P["l"] + (P["l1"] + P["l2"]) * (r + 1) - 2 * P["l2"] + 1
        return LengthInfo(n, n, n + 1, True)
    if fam in ("thm4", "cor1", "thm5"):
        n = _pair_terms(q, P["u"], P["v"], P["s"], P["s_prime"], P["t"])
        if fam == "thm4":
            return LengthInfo(n, n, n, False)
        if fam == "cor1":
            return LengthInfo(n, n + 1, n + 2, True)
        # zero joins the set; odd n gives an even plain set, even n an extended code
        return LengthInfo(n, n + 1, n + 1, False) if n % 2 else LengthInfo(n, n + 1, n + 2, True)
    n = _triple_n(q, P["u"], P["v"], P["w"], P["s"], P["t"], P["f"])
    if fam == "thm6":
        return LengthInfo(n, n, n, False)
    if fam == "cor2":
        return LengthInfo(n, n, n + 1, True)
    return LengthInfo(n, n + 1, n + 2, True)


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    params: ConstructionParams
    checks: list[Check] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def first_failure(self) -> str | None:
        for c in self.checks:
            if not c.passed:
                return f"{c.name} ({c.detail})" if c.detail else c.name
        return None

    def lines(self) -> list[str]:
        return [f"{'pass' if c.passed else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else "")
                for c in self.checks]


def _divides(a: int, b: int) -> bool:
    return a != 0 and b % a == 0


def _two_adic(x: int) -> int:
    return (x & -x).bit_length() - 1 if x else 0


def validate(params: ConstructionParams, table_variant: bool = False) -> ValidationReport:
    """Check every hypothesis of the family; failures are report entries.

    ``table_variant`` adds the extra ``4 does not divide v`` condition that
    the summary table lists for the ``thm5`` family.
    """
    rep = ValidationReport(params)
    P = params.as_dict()
    r, q = params.r, params.q
    rep.add("r = 3 (mod 4)", r % 4 == 3, f"r = {r}")
    if any(v < 0 for v in P.values()):
        rep.add("parameters non-negative", False)
        return rep
    fam = params.family

    if fam in ("thm2", "thm3"):
        l, s = P["l"], P["s"]
        rep.add("l even and l | r-1", l > 0 and l % 2 == 0 and _divides(l, r - 1), f"l = {l}")
        if not rep.ok:
            return rep
        rep.add("s even", s % 2 == 0, f"s = {s}")
        rep.add("0 <= s <= (r-1)/l - 1", 0 <= s <= (r - 1) // l - 1, f"s = {s}")
        rep.add("0 <= l1 <= l/2", 0 <= P["l1"] <= l // 2, f"l1 = {P['l1']}")
        rep.add("0 <= l2 <= l/2", 0 <= P["l2"] <= l // 2, f"l2 = {P['l2']}")

    elif fam in ("thm4", "cor1", "thm5"):
        u, v = P["u"], P["v"]
        rep.add("u | q-1 and v | q-1", _divides(u, q - 1) and _divides(v, q - 1), f"u = {u}, v = {v}")
        if not rep.ok:
            return rep
        rep.add("u != v", u != v)
        g = math.gcd(u, v)
        rep.add("0 <= s <= u/gcd(u,v)", P["s"] <= u // g, f"s = {P['s']}")
        rep.add("0 <= s' <= u/gcd(u,v)", P["s_prime"] <= u // g, f"s' = {P['s_prime']}")
        rep.add("0 <= t <= v/gcd(u,v)", P["t"] <= v // g, f"t = {P['t']}")
        rep.add("2u | (r+1)v", _divides(2 * u, (r + 1) * v))
        rep.add("v | (r-1)u", _divides(v, (r - 1) * u))
        half = (r + 1) * v // (2 * u) if _divides(2 * u, (r + 1) * v) else None
        if fam in ("thm4", "cor1"):
            rep.add("u and v even", u % 2 == 0 and v % 2 == 0)
            rep.add("4 does not divide v", v % 4 != 0, f"v = {v}")
            if fam == "thm4":
                rep.add("(r+1)v/2u odd", half is not None and half % 2 == 1)
                rep.add("s + s' odd", (P["s"] + P["s_prime"]) % 2 == 1)
        else:
            ell = _two_adic(v)
            rep.add("v = 2^l (mod 2^(l+1)) with l >= 2 and 2^l | u",
                    ell >= 2 and u % (1 << ell) == 0, f"v = {v}, u = {u}")
            if table_variant:
                rep.add("4 does not divide v (table listing)", v % 4 != 0, f"v = {v}")
        if fam in ("cor1", "thm5"):
            rep.add("s and s' even, or (r+1)v/2u even",
                    (P["s"] % 2 == 0 and P["s_prime"] % 2 == 0) or (half is not None and half % 2 == 0))

    else:
        u, v, w = P["u"], P["v"], P["w"]
        rep.add("u, v, w divide q-1", all(_divides(x, q - 1) for x in (u, v, w)), f"u={u}, v={v}, w={w}")
        if not rep.ok:
            return rep
        rep.add("0 <= s <= u/gcd(u,v)", P["s"] <= u // math.gcd(u, v), f"s = {P['s']}")
        rep.add("0 <= t <= v/gcd(v,w)", P["t"] <= v // math.gcd(v, w), f"t = {P['t']}")
        rep.add("0 <= f <= w/gcd(w,u)", P["f"] <= w // math.gcd(w, u), f"f = {P['f']}")
        rep.add("u, v, w even", u % 2 == 0 and v % 2 == 0 and w % 2 == 0)
        for a, an, b, bn, sign in (
            (u, "u", v, "v", 1), (u, "u", w, "w", 1),
            (v, "v", u, "u", -1), (v, "v", w, "w", -1),
            (w, "w", u, "u", -1), (w, "w", v, "v", -1),
        ):
            rr = "r+1" if sign > 0 else "r-1"
            rep.add(f"{an} | ({rr}){bn}", _divides(a, (r + sign) * b))
        if not rep.ok:
            return rep
        s = P["s"]
        kv = (r + 1) * v // u
        kw = (r + 1) * w // u
        rep.add("(r+1)v s/u and (r+1)w s/u even", (kv * s) % 2 == 0 and (kw * s) % 2 == 0)
        if fam in ("cor2", "cor3"):
            rep.add("(r+1)v/u * s(s-1)/2 even", (kv * (s * (s - 1) // 2)) % 2 == 0)
        n = _triple_n(q, u, v, w, P["s"], P["t"], P["f"])
        if fam == "cor2":
            rep.add("n odd", n % 2 == 1, f"n = {n}")
        else:
            rep.add("n even", n % 2 == 0, f"n = {n}")

    if rep.ok:
        info = length_info(params)
        # not one of the family's hypotheses: a self-dual code needs an even length
        rep.add("stated code length even and >= 2", info.code_length % 2 == 0 and info.code_length >= 2,
                f"length = {info.code_length}")
    return rep


# -- the combiner ------------------------------------------------------------

@dataclass(frozen=True)
class SubsetFamily:
    """Subsets ``A_1..A_n`` of one field, each given as sorted distinct encodings.

    ``coset_forms`` optionally carries the coset-union description of each
    subset; the fast character computations need it.
    """

    field: GaloisField
    subsets: tuple[np.ndarray, ...]
    coset_forms: tuple[CosetUnion, ...] | None = None

    def __post_init__(self):
        subs = []
        for a in self.subsets:
            arr = np.asarray(a, dtype=np.int64)
            if arr.size == 0:
                raise ValueError("subsets must be nonempty")
            if np.unique(arr).size != arr.size:
                raise ValueError("duplicate element inside a subset")
            subs.append(np.sort(arr))
        object.__setattr__(self, "subsets", tuple(subs))
        if self.coset_forms is not None and len(self.coset_forms) != len(subs):
            raise ValueError("one coset form per subset")

    @classmethod
    def from_cosets(cls, field: GaloisField, forms: Sequence[CosetUnion]) -> "SubsetFamily":
        forms = tuple(forms)
        return cls(field, tuple(cs.materialize(field, f) for f in forms), forms)

    @property
    def n(self) -> int:
        return len(self.subsets)

    def permuted(self, order: Sequence[int]) -> "SubsetFamily":
        forms = None if self.coset_forms is None else tuple(self.coset_forms[i] for i in order)
        return SubsetFamily(self.field, tuple(self.subsets[i] for i in order), forms)


@dataclass(frozen=True)
class EvalSet:
    """An evaluation set with provenance.

    ``pieces`` maps each odd index set ``I`` (a tuple of subset positions)
    to the elements lying in exactly the subsets of ``I``.
    """

    field: GaloisField
    elements: np.ndarray
    pieces: tuple[tuple[tuple[int, ...], np.ndarray], ...]
    family: SubsetFamily | None = None
    params: ConstructionParams | None = None

    def __len__(self) -> int:
        return int(self.elements.size)

    @property
    def tag(self) -> str:
        return self.params.family if self.params else "custom"


def membership_masks(family: SubsetFamily) -> tuple[np.ndarray, np.ndarray]:
    """Distinct elements of the union and, for each, the bitmask of subsets holding it."""
    if family.n > 62:
        raise ValueError("at most 62 subsets")
    allv = np.concatenate(family.subsets)
    bits = np.concatenate([np.full(a.size, 1 << i, dtype=np.int64) for i, a in enumerate(family.subsets)])
    elems, inv = np.unique(allv, return_inverse=True)
    masks = np.zeros(elems.size, dtype=np.int64)
    np.bitwise_or.at(masks, inv, bits)
    return elems, masks


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    out = np.zeros_like(x)
    while x.any():
        out += x & 1
        x >>= 1
    return out


def _indices(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def combine(family: SubsetFamily, params: ConstructionParams | None = None) -> EvalSet:
    """Keep the elements lying in an odd number of the subsets.

    Equivalently: the union, over odd-size index sets ``I``, of the elements
    in every ``A_i`` with ``i`` in ``I`` and in no other subset.
    """
    elems, masks = membership_masks(family)
    keep = (_popcount(masks) & 1) == 1
    kept, kmask = elems[keep], masks[keep]
    pieces = []
    for m in np.unique(kmask).tolist():
        pieces.append((_indices(m), kept[kmask == m]))
    return EvalSet(family.field, kept, tuple(pieces), family, params)


def multiset_identity_check(family: SubsetFamily) -> bool:
    """Overlap bookkeeping behind the combiner.

    With ``B_l`` the union of ``A_l`` with each other ``A_j``, the multiset
    sum of all ``B_l`` equals the sum of the exact-overlap regions of size
    ``|I| >= 2``, each repeated ``|I|`` times.  Also checked: single-subset
    regions miss every ``B_l``, and a region ``I`` sits in exactly the
    ``B_l`` with ``l`` in ``I``.
    """
    if family.n < 2:
        raise ValueError("needs at least two subsets")
    subs = [set(a.tolist()) for a in family.subsets]
    n = len(subs)
    B = []
    for l in range(n):
        acc = set()
        for j in range(n):
            if j != l:
                acc |= subs[l] & subs[j]
        B.append(acc)
    lhs = Counter()
    for b in B:
        lhs.update(b)
    elems, masks = membership_masks(family)
    rhs = Counter()
    for e, m in zip(elems.tolist(), masks.tolist()):
        idx = _indices(m)
        holders = {l for l in range(n) if e in B[l]}
        if len(idx) == 1:
            if holders:
                return False
            continue
        if holders != set(idx):
            return False
        rhs[e] += len(idx)
    return lhs == rhs


# -- family set definitions ---------------------------------------------------

def family_subsets(params: ConstructionParams) -> tuple[GaloisField, tuple[CosetUnion, CosetUnion, CosetUnion]]:
    """The three coset unions the family combines (zero already adjoined)."""
    F = params.field()
    P = params.as_dict()
    order = F.order
    fam = params.family
    if fam in ("thm2", "thm3"):
        l, s = P["l"], P["s"]
        first = 1 if fam == "thm2" else 0
        A = CosetUnion(tuple(cs.h_coset(F, l, s, k) for k in range(first, s + 1)))
        B = CosetUnion(tuple(cs.norm_fiber(F, l, 2 * i + 1) for i in range(P["l1"])), include_zero=True)
        C = CosetUnion(tuple(cs.norm_fiber(F, l, 2 * j) for j in range(P["l2"])))
        return F, (A, B, C)
    if fam in ("thm4", "cor1", "thm5"):
        u, v = P["u"], P["v"]
        A = cs.cosets_union(order, [i * v for i in range(P["s"])], u, include_zero=fam != "thm4")
        B = cs.cosets_union(order, [j * u for j in range(P["t"])], v)
        C = cs.cosets_union(order, [(v // 2) * (2 * k + 1) for k in range(P["s_prime"])], u)
        return F, (A, B, C)
    u, v, w = P["u"], P["v"], P["w"]
    A = cs.cosets_union(order, [i * v for i in range(P["s"])], u, include_zero=fam == "cor3")
    B = cs.cosets_union(order, [j * w for j in range(P["t"])], v)
    C = cs.cosets_union(order, [k * u for k in range(P["f"])], w)
    return F, (A, B, C)


def build(params: ConstructionParams, check: bool = True) -> EvalSet:
    """Validated evaluation set of a family; sizes are asserted against :func:`length_info`."""
    if check:
        rep = validate(params)
        if not rep.ok:
            raise ValidationError(rep)
    F, forms = family_subsets(params)
    for f in forms:
        if not f.is_disjoint():
            raise CardinalityError(f"{params.family}: coset pieces of one subset overlap")
    present = [f for f in forms if f.size > 0]
    if not present:
        raise CardinalityError(f"{params.family}: all subsets empty")
    fam = SubsetFamily.from_cosets(F, present)
    S = combine(fam, params)
    info = length_info(params)
    if len(S) != info.set_size:
        raise CardinalityError(
            f"{params.family} {params.text()}: combined set has {len(S)} elements, "
            f"closed form gives {info.set_size}")
    return S


# -- serialization ------------------------------------------------------------

def write_evalset(S: EvalSet, path) -> None:
    F = S.field
    head = (f"q={F.q} construction={S.tag} params={S.params.text() if S.params else ''} "
            f"modulus={','.join(map(str, F.modulus))}")
    with open(path, "w") as fh:
        fh.write(head + "\n")
        fh.write("".join(f"{int(x)}\n" for x in S.elements))


def read_evalset(path) -> tuple[dict[str, str], np.ndarray]:
    """Header fields and the element list of a set file."""
    with open(path) as fh:
        head = fh.readline().split()
        fields = dict(item.split("=", 1) for item in head)
        if not {"q", "construction", "modulus"} <= fields.keys():
            raise ValueError(f"{path}: malformed set header")
        elems = np.array([int(line) for line in fh if line.strip()], dtype=np.int64)
    if elems.size and (np.diff(elems) <= 0).any():
        raise ValueError(f"{path}: elements not strictly ascending")
    return fields, elems


# -- parameter spaces for small fields ----------------------------------------

def _even_divisors(x: int) -> list[int]:
    return [d for d in range(2, x + 1, 2) if x % d == 0]


def iter_family_params(family: str, r: int) -> Iterable[ConstructionParams]:
    """Every parameter tuple of the family's stated ranges that passes :func:`validate`.

    Exhaustive; intended for small fields (tests and the self-test).
    """
    q = r * r
    if family in ("thm2", "thm3"):
        for l in _even_divisors(r - 1):
            for s in range(0, (r - 1) // l, 2):
                for l1 in range(l // 2 + 1):
                    for l2 in range(l // 2 + 1):
                        p = ConstructionParams.create(family, r=r, l=l, s=s, l1=l1, l2=l2)
                        if validate(p).ok:
                            yield p
        return
    divs = _even_divisors(q - 1)
    if family in ("thm4", "cor1", "thm5"):
        for u in divs:
            for v in divs:
                if u == v or ((r + 1) * v) % (2 * u) or ((r - 1) * u) % v:
                    continue
                g = math.gcd(u, v)
                for s in range(u // g + 1):
                    for sp in range(u // g + 1):
                        for t in range(v // g + 1):
                            p = ConstructionParams.create(family, r=r, u=u, v=v, s=s, s_prime=sp, t=t)
                            if validate(p).ok:
                                yield p
        return
    for u, v, w in itertools.product(divs, repeat=3):
        if ((r + 1) * v) % u or ((r + 1) * w) % u or ((r - 1) * u) % v or ((r - 1) * w) % v \
                or ((r - 1) * u) % w or ((r - 1) * v) % w:
            continue
        for s in range(u // math.gcd(u, v) + 1):
            for t in range(v // math.gcd(v, w) + 1):
                for f in range(w // math.gcd(w, u) + 1):
                    p = ConstructionParams.create(family, r=r, u=u, v=v, w=w, s=s, t=t, f=f)
                    if validate(p).ok:
                        yield p


def sample_family_params(family: str, r: int, k: int, seed: int = 0) -> list[ConstructionParams]:
    """Up to ``k`` valid parameter tuples drawn uniformly from the exhaustive list."""
    allp = list(iter_family_params(family, r))
    rng = random.Random(seed)
    return allp if len(allp) <= k else rng.sample(allp, k)
