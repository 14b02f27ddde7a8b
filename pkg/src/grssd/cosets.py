"""Multiplicative cosets of GF(q)^* as arithmetic progressions of exponents.

A coset ``theta^o * <theta^d>`` (with ``d | q-1``) is stored as the pair
``(offset, step)``; it is only expanded into field elements on request.
The vanishing polynomial of such a coset has the closed form
``x^N - theta^(o*N)`` with ``N = (q-1)/d``, which is what makes character
computations over unions of cosets cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np
from sympy.ntheory.modular import solve_congruence

from .gf import GaloisField


@dataclass(frozen=True)
class CosetSpec:
    """The coset ``{theta^(offset + k*step) : 0 <= k < order/step}``."""

    offset: int
    step: int
    order: int  # q - 1

    def __post_init__(self):
        if self.step <= 0 or self.order % self.step:
            raise ValueError(f"step {self.step} does not divide {self.order}")
        object.__setattr__(self, "offset", self.offset % self.order)

    @property
    def size(self) -> int:
        return self.order // self.step

    @property
    def key(self) -> tuple[int, int]:
        """Canonical (offset mod step, step); equal keys <=> equal sets."""
        return (self.offset % self.step, self.step)

    def same_set(self, other: "CosetSpec") -> bool:
        return self.order == other.order and self.key == other.key

    def logs(self) -> np.ndarray:
        return (self.offset + self.step * np.arange(self.size, dtype=np.int64)) % self.order

    def contains_log(self, lx):
        return (np.asarray(lx) - self.offset) % self.step == 0

    def intersect(self, other: "CosetSpec") -> "CosetSpec | None":
        """Intersection of two cosets: a coset of the lcm step, or None."""
        sol = solve_congruence((self.offset, self.step), (other.offset, other.step))
        if sol is None:
            return None
        return CosetSpec(int(sol[0]), int(sol[1]), self.order)


@dataclass(frozen=True)
class CosetUnion:
    """A union of cosets, optionally with the zero element adjoined."""

    pieces: tuple[CosetSpec, ...] = ()
    include_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def is_disjoint(self) -> bool:
        ps = self.pieces
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                g = math.gcd(ps[i].step, ps[j].step)
                if (ps[i].offset - ps[j].offset) % g == 0:
                    return False
        return True

    @property
    def size(self) -> int:
        """Cardinality, assuming disjoint pieces."""
        return sum(c.size for c in self.pieces) + int(self.include_zero)

    def with_zero(self) -> "CosetUnion":
        return CosetUnion(self.pieces, True)

    def intersect(self, other: "CosetUnion") -> "CosetUnion":
        pieces = []
        for a in self.pieces:
            for b in other.pieces:
                c = a.intersect(b)
                if c is not None:
                    pieces.append(c)
        return CosetUnion(tuple(pieces), self.include_zero and other.include_zero)


CosetSet = Union[CosetSpec, CosetUnion]


def _as_union(obj: CosetSet) -> CosetUnion:
    return obj if isinstance(obj, CosetUnion) else CosetUnion((obj,))


def materialize(field: GaloisField, obj) -> np.ndarray:
    """Sorted canonical encodings of a coset, a coset union, or an explicit collection."""
    if isinstance(obj, (CosetSpec, CosetUnion)):
        u = _as_union(obj)
        parts = [field.exp[c.logs()] for c in u.pieces]
        if u.include_zero:
            parts.append(np.zeros(1, dtype=np.int64))
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.unique(np.concatenate(parts))
    return np.unique(np.asarray(list(obj) if not isinstance(obj, np.ndarray) else obj, dtype=np.int64))


def membership(field: GaloisField, obj: CosetSet, x) -> np.ndarray:
    """Boolean mask: which entries of ``x`` lie in the set."""
    u = _as_union(obj)
    x = np.asarray(x, dtype=np.int64)
    lx = field.log[x]
    mask = (lx < 0) & u.include_zero
    nz = lx >= 0
    for c in u.pieces:
        mask |= nz & c.contains_log(np.where(nz, lx, 0))
    return mask


# -- named subgroups and cosets ------------------------------------------------

def subgroup_of_size(field: GaloisField, l: int) -> CosetSpec:
    if l <= 0 or field.order % l:
        raise ValueError(f"{l} does not divide q-1 = {field.order}")
    return CosetSpec(0, field.order // l, field.order)


def _check_fiber_divisor(field, l):
    if l <= 0 or (field.r - 1) % l:
        raise ValueError(f"l = {l} must divide r-1 = {field.r - 1}")


def h_coset(field: GaloisField, l: int, s: int, k: int) -> CosetSpec:
    """``H_k = b_k M`` with ``M`` the order-l subgroup of GF(r)^*.

    ``b_0 = 1``, ``b_i = beta^i`` and ``b_{s/2+i} = beta^-i`` for ``1 <= i <= s/2``,
    where ``beta = theta^(r+1)`` generates GF(r)^*.
    """
    _check_fiber_divisor(field, l)
    if s % 2 or not 0 <= s <= (field.r - 1) // l - 1:
        raise ValueError(f"s = {s} must be even with 0 <= s <= (r-1)/l - 1")
    if not 0 <= k <= s:
        raise ValueError(f"k = {k} out of range 0..{s}")
    half = s // 2
    if k == 0:
        offset = 0
    elif k <= half:
        offset = k * (field.r + 1)
    else:
        offset = -(k - half) * (field.r + 1)
    return CosetSpec(offset, field.order // l, field.order)


def norm_fiber(field: GaloisField, l: int, i: int) -> CosetSpec:
    """``N_i = {x : N(x) = alpha^i}`` with ``alpha = theta^((q-1)/l)``."""
    _check_fiber_divisor(field, l)
    if not 0 <= i < l:
        raise ValueError(f"i = {i} out of range 0..{l - 1}")
    return CosetSpec(i * ((field.r - 1) // l), field.r - 1, field.order)


def fiber_field_intersection(field: GaloisField, l: int, i: int) -> np.ndarray:
    """``N_i`` intersected with GF(r)^*, in closed form (needs l even, r = 3 mod 4)."""
    _check_fiber_divisor(field, l)
    if l % 2 or field.r % 4 != 3:
        raise ValueError("requires l even and r = 3 (mod 4)")
    if not 0 <= i < l:
        raise ValueError(f"i = {i} out of range 0..{l - 1}")
    if i % 2:
        return np.zeros(0, dtype=np.int64)
    step = field.order // l
    return np.sort(field.exp[[(i // 2) * step % field.order, (i // 2 + l // 2) * step % field.order]])


# -- closed-form vanishing polynomials ----------------------------------------

def pi_at(field: GaloisField, coset: CosetSpec, x):
    """``prod_{a in coset} (x - a) = x^N - theta^(offset*N)``."""
    n = coset.size
    return field.sub(field.pow(x, n), field.theta_pow(coset.offset * n))


def delta_at(field: GaloisField, coset: CosetSpec, x):
    """``prod_{a in coset, a != x} (x - a) = N * x^(N-1)`` for members ``x``."""
    x_arr = np.asarray(x, dtype=np.int64)
    if not membership(field, coset, x_arr).all():
        raise ValueError("delta_at: point is not a member of the coset")
    n = coset.size
    return field.mul(field.scalar(n), field.pow(x, n - 1))


def union_pi(field: GaloisField, union: CosetSet, x):
    """Vanishing polynomial of a disjoint coset union, evaluated at ``x``."""
    u = _as_union(union)
    x = np.asarray(x, dtype=np.int64)
    out = np.ones_like(x)
    for c in u.pieces:
        out = field.mul(out, pi_at(field, c, x))
    if u.include_zero:
        out = field.mul(out, x)
    return field._out(out)


def union_delta(field: GaloisField, union: CosetSet, x):
    """``delta_U(x)`` for members of a disjoint coset union (factored per piece)."""
    u = _as_union(union)
    x = np.asarray(x, dtype=np.int64)
    lx = field.log[x]
    covered = np.zeros(x.shape, dtype=bool)
    out = np.ones_like(x)
    for c in u.pieces:
        inside = (lx >= 0) & c.contains_log(np.where(lx >= 0, lx, 0))
        covered |= inside
        n = c.size
        own = field.mul(field.scalar(n), field.pow(x, n - 1))
        out = field.mul(out, np.where(inside, own, pi_at(field, c, x)))
    is_zero = lx < 0
    if u.include_zero:
        covered |= is_zero
        out = field.mul(out, np.where(is_zero, 1, x))
    if not covered.all():
        raise ValueError("union_delta: point outside the set")
    return field._out(out)


# -- intersection cardinalities -------------------------------------------------

def pair_intersection_card(q: int, u: int, v: int, s: int, t: int) -> int:
    """``|A cap B|`` for ``A = U beta^i<alpha>``, ``B = U alpha^j<beta>`` (s and t cosets)."""
    return (q - 1) * math.gcd(u, v) // (u * v) * s * t


@dataclass(frozen=True)
class TripleCards:
    AB: int
    BC: int
    CA: int
    ABC: int
    s_prime: int
    t_prime: int
    f_prime: int


def intersection_card3(q: int, u: int, v: int, w: int, s: int, t: int, f: int) -> TripleCards:
    """Intersection sizes of ``A = U_{i<s} beta^i<alpha>``, ``B = U_{j<t} gamma^j<beta>``,
    ``C = U_{k<f} alpha^k<gamma>`` with ``alpha, beta, gamma = theta^u, theta^v, theta^w``.

    Pure integer arithmetic: a coset pair meets exactly when the CRT system
    on the exponents is solvable, which happens for every ``gcd(.,.)/g``-th index.
    """
    n = q - 1
    for name, d in (("u", u), ("v", v), ("w", w)):
        if d <= 0 or n % d:
            raise ValueError(f"{name} = {d} does not divide q-1 = {n}")
    guv, gvw, gwu = math.gcd(u, v), math.gcd(v, w), math.gcd(w, u)
    if not (0 <= s <= u // guv and 0 <= t <= v // gvw and 0 <= f <= w // gwu):
        raise ValueError("s, t, f outside 0..u/gcd(u,v), 0..v/gcd(v,w), 0..w/gcd(w,u)")
    g = math.gcd(guv, w)
    s1 = (s - 1) * g // gwu + 1
    t1 = (t - 1) * g // guv + 1
    f1 = (f - 1) * g // gvw + 1
    return TripleCards(
        AB=n // math.lcm(u, v) * s * t1,
        BC=n // math.lcm(v, w) * t * f1,
        CA=n // math.lcm(w, u) * f * s1,
        ABC=n // math.lcm(u, v, w) * s1 * t1 * f1,
        s_prime=s1,
        t_prime=t1,
        f_prime=f1,
    )


def cosets_union(order: int, offsets: Iterable[int], step: int, include_zero=False) -> CosetUnion:
    return CosetUnion(tuple(CosetSpec(o, step, order) for o in offsets), include_zero)
