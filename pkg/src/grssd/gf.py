"""Table-driven arithmetic in GF(p^(2m)).

A field is built once per ``(p, m)`` and is immutable afterwards.  Elements
are plain Python/numpy integers in ``[0, q)``: the canonical encoding
``sum(c_i * p**i)`` of the polynomial-basis coefficients of an element.
Multiplicative work goes through discrete logarithms to the fixed primitive
element ``theta`` (the class of ``x`` modulo the defining polynomial);
additive work goes through the base-p coefficient digits.

The defining polynomial is the lexicographically smallest monic primitive
polynomial of degree 2m, comparing the coefficient tuple ``(c0, c1, ...)``
from ``c0`` upwards.  The choice is deterministic, so the same ``theta`` is
produced on every run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from sympy import factorint, isprime

Q_CAP = 1 << 26

ZERO_LOG = -1  # log sentinel for the zero element


@dataclass(frozen=True)
class FieldParams:
    """Parameters of GF(q) with ``q = r**2`` and ``r = p**m``."""

    p: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.p < 3 or not isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.q > Q_CAP:
            raise ValueError(f"q = {self.q} exceeds the table cap 2^26")

    @property
    def r(self) -> int:
        return self.p ** self.m

    @property
    def q(self) -> int:
        return self.r ** 2

    @property
    def degree(self) -> int:
        return 2 * self.m

    @classmethod
    def from_r(cls, r: int) -> "FieldParams":
        """Parameters for GF(r^2) given the odd prime power ``r``."""
        fac = factorint(r) if r > 1 else {}
        if len(fac) != 1:
            raise ValueError(f"r = {r} is not a prime power")
        (p, m), = fac.items()
        return cls(p, m)


def _polymulmod(a, b, f, p):
    """Product of residues ``a*b`` modulo the monic ``f`` (coefficient lists, low first)."""
    d = len(f) - 1
    prod = [0] * (2 * d - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[k] % p
        if c:
            for i in range(d):
                prod[k - d + i] -= c * f[i]
        prod[k] = 0
    return [c % p for c in prod[:d]]


def _x_power(e, f, p):
    d = len(f) - 1
    result = [1] + [0] * (d - 1)
    base = [0] * d
    if d == 1:
        base[0] = (-f[0]) % p
    else:
        base[1] = 1
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        e >>= 1
    return result


def is_primitive(coeffs, p) -> bool:
    """True when the monic polynomial ``coeffs`` (low first, leading 1) is primitive over GF(p).

    ``x`` has order exactly ``p**d - 1`` modulo the polynomial, which also
    forces irreducibility.
    """
    d = len(coeffs) - 1
    if coeffs[-1] != 1 or coeffs[0] % p == 0:
        return False
    order = p ** d - 1
    one = [1] + [0] * (d - 1)
    if _x_power(order, coeffs, p) != one:
        return False
    return all(_x_power(order // ell, coeffs, p) != one for ell in factorint(order))


def smallest_primitive_polynomial(p: int, d: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=d):
        coeffs = list(low) + [1]
        if is_primitive(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError(f"no primitive polynomial of degree {d} over GF({p})")


class GaloisField:
    """GF(q) with q = p^(2m), backed by exp/log/Zech tables of size q."""

    def __init__(self, params: FieldParams):
        self.params = params
        self.p = params.p
        self.m = params.m
        self.r = params.r
        self.q = params.q
        self.order = self.q - 1  # size of the multiplicative group
        self.degree = params.degree
        self.modulus = smallest_primitive_polynomial(self.p, self.degree)
        self._place = self.p ** np.arange(self.degree, dtype=np.int64)

        exp = self._build_exp_table()
        log = np.full(self.q, ZERO_LOG, dtype=np.int64)
        log[exp] = np.arange(self.order, dtype=np.int64)
        if (log[1:] < 0).any():
            raise RuntimeError("theta does not generate the multiplicative group")
        self.exp = exp
        self.log = log
        # doubled so that sums of two logs index without a modulo
        self._exp2 = np.concatenate([exp, exp])
        self.half = self.order // 2  # log of -1
        # zech[k] = log(1 + theta^k); ZERO_LOG where 1 + theta^k = 0
        self.zech = log[self.add(exp, 1)]
        for arr in (self.exp, self.log, self._exp2, self.zech):
            arr.setflags(write=False)

    def __repr__(self):
        return f"GaloisField(p={self.p}, m={self.m}, q={self.q})"

    # -- construction -------------------------------------------------------

    def _mul_block(self, block, g):
        """Multiply each canonical element of ``block`` by the fixed residue ``g``."""
        p, d = self.p, self.degree
        digits = [(block // int(self._place[i])) % p for i in range(d)]
        prod = [np.zeros_like(block) for _ in range(2 * d - 1)]
        for i in range(d):
            for j in range(d):
                if g[j]:
                    prod[i + j] += digits[i] * g[j]
        f = self.modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k] % p
            for i in range(d):
                if f[i]:
                    prod[k - d + i] -= c * f[i]
        out = np.zeros_like(block)
        for i in range(d):
            out += (prod[i] % p) * int(self._place[i])
        return out

    def _build_exp_table(self):
        p, d, f = self.p, self.degree, list(self.modulus)
        seed = min(self.order, 1024)
        exp = np.empty(self.order, dtype=np.int64)
        cur = [1] + [0] * (d - 1)
        x = [0] * d
        if d > 1:
            x[1] = 1
        for i in range(seed):
            exp[i] = sum(c * p ** k for k, c in enumerate(cur))
            cur = _polymulmod(cur, x, f, p)
        filled = seed
        while filled < self.order:
            shift = _x_power(filled, f, p)
            take = min(filled, self.order - filled)
            exp[filled:filled + take] = self._mul_block(exp[:take], shift)
            filled += take
        return exp

    # -- digits ---------------------------------------------------------------

    def to_coeffs(self, a: int) -> tuple[int, ...]:
        a = int(a)
        out = []
        for _ in range(self.degree):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        if len(coeffs) != self.degree:
            raise ValueError(f"expected {self.degree} coefficients")
        return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def digits(self, a):
        """Coefficient digits of canonical array ``a`` with shape ``(degree,) + a.shape``."""
        a = np.asarray(a, dtype=np.int64)
        return (a[None, ...] // self._place.reshape((-1,) + (1,) * a.ndim)) % self.p

    def from_digits(self, digits):
        digits = np.asarray(digits, dtype=np.int64) % self.p
        return np.tensordot(self._place, digits, axes=(0, 0))

    # -- elementwise arithmetic (scalars or arrays) ---------------------------

    @staticmethod
    def _out(x):
        return int(x) if np.ndim(x) == 0 else x

    def _combine(self, a, b, sign):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for place in self._place.tolist():
            da = (a // place) % self.p
            db = (b // place) % self.p
            out += ((da + sign * db) % self.p) * place
        return self._out(out)

    def add(self, a, b):
        return self._combine(a, b, 1)

    def sub(self, a, b):
        return self._combine(a, b, -1)

    def neg(self, a):
        return self._combine(0, a, -1)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log[a], self.log[b]
        zero = (la < 0) | (lb < 0)
        out = np.where(zero, 0, self._exp2[np.where(zero, 0, la + lb)])
        return self._out(out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError("inverse of zero in GF(q)")
        return self._out(self.exp[(-self.log[a]) % self.order])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        la = self.log[a]
        if e == 0:
            return self._out(np.ones_like(a))
        if e < 0 and (la < 0).any():
            raise ZeroDivisionError("negative power of zero")
        out = np.where(la < 0, 0, self.exp[(np.maximum(la, 0) * (e % self.order)) % self.order])
        return self._out(out)

    def theta_pow(self, i):
        """theta**i for integer (array) ``i``, any sign."""
        return self._out(self.exp[np.asarray(i, dtype=np.int64) % self.order])

    def log_of(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ValueError("log of zero")
        return self._out(self.log[a])

    # -- characters, roots, norm ----------------------------------------------

    def eta(self, x):
        """Quadratic character: +1 on nonzero squares, -1 on non-squares."""
        lx = self.log[np.asarray(x, dtype=np.int64)]
        if (lx < 0).any():
            raise ValueError("quadratic character of zero is undefined")
        return self._out(1 - 2 * (lx & 1))

    def sqrt(self, x):
        """Both square roots ``(y, -y)`` of ``x``, or ``None`` for a non-square."""
        x = int(x)
        if x == 0:
            return (0, 0)
        lx = int(self.log[x])
        if lx & 1:
            return None
        y = int(self.exp[lx // 2])
        return (y, self.neg(y))

    def norm(self, x):
        """Norm to GF(r): x**(r+1)."""
        x = np.asarray(x, dtype=np.int64)
        if (x == 0).any():
            raise ValueError("norm of zero")
        return self.pow(self._out(x), self.r + 1)

    # -- small helpers ----------------------------------------------------------

    def scalar(self, n: int) -> int:
        """Image of the integer ``n`` in the prime field."""
        return n % self.p

    def prod(self, values) -> int:
        """Product of a 1-D array of elements (zero if any factor is zero)."""
        values = np.asarray(values, dtype=np.int64)
        if values.size == 0:
            return 1
        logs = self.log[values]
        if (logs < 0).any():
            return 0
        return int(self.exp[int(logs.sum() % self.order)])

    def sum(self, values, axis=None):
        """Field sum of an array of elements along ``axis``."""
        d = self.digits(values)
        if axis is None:
            return int(self.from_digits(d.reshape(self.degree, -1).sum(axis=1)))
        ax = axis + 1 if axis >= 0 else axis
        return self._out(self.from_digits(d.sum(axis=ax)))

    @cached_property
    def subfield(self) -> np.ndarray:
        """Sorted elements of GF(r)^*."""
        return np.sort(self.exp[:: self.r + 1])

    def random_elements(self, rng, size, nonzero=False):
        lo = 1 if nonzero else 0
        return rng.integers(lo, self.q, size=size, dtype=np.int64)


@lru_cache(maxsize=16)
def build_field(p: int, m: int = 1) -> GaloisField:
    """GF(p^(2m)) with its canonical primitive element (cached per (p, m))."""
    return GaloisField(FieldParams(p, m))


def field_for_r(r: int) -> GaloisField:
    params = FieldParams.from_r(r)
    return build_field(params.p, params.m)
