"""Slow, independent reference implementations used as test oracles.

Nothing here touches the package's tables: field elements are coefficient
integers multiplied by schoolbook polynomial arithmetic, and sets are
Python sets.
"""

from __future__ import annotations

import itertools
from functools import reduce


class OracleField:
    """GF(p^d), elements encoded as ``sum c_i p^i`` like the package."""

    def __init__(self, p: int, d: int):
        self.p, self.d = p, d
        self.q = p ** d
        self.modulus = self._smallest_primitive()
        self.theta = p if d > 1 else self._prime_generator()

    # polynomial helpers on coefficient lists (low first)
    def _coeffs(self, a):
        return [(a // self.p ** i) % self.p for i in range(self.d)]

    def _enc(self, c):
        return sum((x % self.p) * self.p ** i for i, x in enumerate(c))

    def _mulmod(self, a, b, f):
        p, d = self.p, self.d
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k] % p
            for i in range(d + 1):
                prod[k - d + i] -= c * f[i]
        return [x % p for x in prod[:d]]

    def _smallest_primitive(self):
        p, d = self.p, self.d
        if d == 1:
            return None
        one = [1] + [0] * (d - 1)
        x = [0, 1] + [0] * (d - 2)
        for low in itertools.product(range(p), repeat=d):
            f = list(low) + [1]
            cur, order = x, 1
            while cur != one and order <= self.q:
                cur = self._mulmod(cur, x, f)
                order += 1
            if order == self.q - 1:
                return tuple(f)
        raise AssertionError("no primitive polynomial")

    def _prime_generator(self):
        for g in range(2, self.p):
            if len({pow(g, k, self.p) for k in range(self.p - 1)}) == self.p - 1:
                return g
        return 1

    def add(self, a, b):
        return self._enc([x + y for x, y in zip(self._coeffs(a), self._coeffs(b))])

    def sub(self, a, b):
        return self._enc([x - y for x, y in zip(self._coeffs(a), self._coeffs(b))])

    def neg(self, a):
        return self.sub(0, a)

    def mul(self, a, b):
        if self.d == 1:
            return a * b % self.p
        return self._enc(self._mulmod(self._coeffs(a), self._coeffs(b), self.modulus))

    def pow(self, a, e):
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a):
        assert a != 0
        return self.pow(a, self.q - 2)

    def eta(self, a):
        """Euler's criterion."""
        assert a != 0
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def theta_pow(self, k):
        return self.pow(self.theta, k % (self.q - 1))

    def prod(self, xs):
        return reduce(self.mul, xs, 1)

    def delta(self, S, e):
        return self.prod(self.sub(e, x) for x in S if x != e)

    def pi(self, S, x):
        return self.prod(self.sub(x, e) for e in S)

    def coset(self, offset, step):
        """``{theta^(offset + k step)}`` as a Python set."""
        return {self.theta_pow(offset + k * step) for k in range((self.q - 1) // step)}


def odd_overlap(subsets):
    """Elements lying in an odd number of the given sets."""
    count = {}
    for A in subsets:
        for x in A:
            count[x] = count.get(x, 0) + 1
    return {x for x, c in count.items() if c % 2}


def family_sets(O: OracleField, family: str, P: dict, r: int):
    """The three subsets of a construction family, built from the definitions."""
    n = O.q - 1
    if family in ("thm2", "thm3"):
        l, s = P["l"], P["s"]
        M = (n // l)
        beta = r + 1  # log of a generator of GF(r)^*
        offs = [0] + [k * beta for k in range(1, s // 2 + 1)] + [-k * beta for k in range(1, s // 2 + 1)]
        first = 1 if family == "thm2" else 0
        A = set().union(*[O.coset(offs[k], M) for k in range(first, s + 1)]) if s + 1 > first else set()
        fib = (r - 1) // l
        B = set().union(*[O.coset((2 * i + 1) * fib, r - 1) for i in range(P["l1"])]) | {0}
        C = set().union(*[O.coset(2 * j * fib, r - 1) for j in range(P["l2"])]) if P["l2"] else set()
        return A, B, C
    if family in ("thm4", "cor1", "thm5"):
        u, v = P["u"], P["v"]
        A = set().union(*[O.coset(i * v, u) for i in range(P["s"])]) if P["s"] else set()
        if family != "thm4":
            A |= {0}
        B = set().union(*[O.coset(j * u, v) for j in range(P["t"])]) if P["t"] else set()
        C = set().union(*[O.coset((v // 2) * (2 * k + 1), u) for k in range(P["s_prime"])]) if P["s_prime"] else set()
        return A, B, C
    u, v, w = P["u"], P["v"], P["w"]
    A = set().union(*[O.coset(i * v, u) for i in range(P["s"])]) if P["s"] else set()
    if family == "cor3":
        A |= {0}
    B = set().union(*[O.coset(j * w, v) for j in range(P["t"])]) if P["t"] else set()
    C = set().union(*[O.coset(k * u, w) for k in range(P["f"])]) if P["f"] else set()
    return A, B, C
