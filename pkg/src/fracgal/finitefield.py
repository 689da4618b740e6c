"""Small finite fields F_p[x]/(g) and discrete logarithms.

Residue fields of the number fields in play have size at most ~10^12;
Pohlig-Hellman with baby-step/giant-step per prime factor covers that
comfortably.
"""

from __future__ import annotations

from math import gcd, isqrt

from .dirichlet import factorize
from .errors import DomainError


class GF:
    """F_p[x]/(g(x)), g monic irreducible, degree 1 or 2 here (any works)."""

    def __init__(self, p: int, modulus):
        self.p = p
        g = [c % p for c in modulus]
        assert g[-1] == 1, "modulus must be monic"
        self.modulus = tuple(g)
        self.deg = len(g) - 1
        self.q = p ** self.deg

    def elt(self, coeffs):
        c = [x % self.p for x in coeffs]
        c = c[:self.deg] + [0] * (self.deg - len(c))
        return tuple(c)

    def zero(self):
        return tuple([0] * self.deg)

    def one(self):
        return self.elt([1])

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        p = self.p
        prod = [0] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus
        for i in range(len(prod) - 1, self.deg - 1, -1):
            c = prod[i]
            if c:
                for j in range(self.deg + 1):
                    prod[i - self.deg + j] = (
                        prod[i - self.deg + j] - c * self.modulus[j]) % p
        return tuple(prod[:self.deg])

    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inverse(a), -k)
        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inverse(self, a):
        return self.pow(a, self.q - 2)

    def is_zero(self, a):
        return not any(a)

    def element_order(self, a) -> int:
        if self.is_zero(a):
            raise DomainError("zero has no multiplicative order")
        o = self.q - 1
        for p_, _ in factorize(self.q - 1):
            while o % p_ == 0 and self.pow(a, o // p_) == self.one():
                o //= p_
        return o

    def multiplicative_generator(self):
        fac = [p_ for p_, _ in factorize(self.q - 1)]
        # deterministic search
        for trial in range(1, 10000):
            cand = self.elt([trial % self.p, trial // self.p])
            if self.is_zero(cand):
                continue
            if all(self.pow(cand, (self.q - 1) // p_) != self.one()
                   for p_ in fac):
                return cand
        raise DomainError("no generator found (modulus not irreducible?)")


def bsgs(field: GF, base, target, order: int):
    """x with base^x = target, base of the given order; None if no solution."""
    m = isqrt(order) + 1
    table = {}
    cur = field.one()
    for j in range(m):
        table.setdefault(cur, j)
        cur = field.mul(cur, base)
    factor = field.pow(base, -m)
    cur = target
    for i in range(m):
        if cur in table:
            return (i * m + table[cur]) % order
        cur = field.mul(cur, factor)
    return None


def discrete_log(field: GF, base, target, order: int):
    """Pohlig-Hellman: x with base^x = target mod the given base order."""
    if field.is_zero(target):
        raise DomainError("discrete log of zero")
    residues = []
    moduli = []
    for p_, a in factorize(order):
        pe = p_ ** a
        b_i = field.pow(base, order // pe)
        t_i = field.pow(target, order // pe)
        # lift digit by digit
        x = 0
        gamma = field.pow(b_i, p_ ** (a - 1))  # order p_
        for k in range(a):
            rhs = field.pow(
                field.mul(t_i, field.pow(b_i, -x)), p_ ** (a - 1 - k))
            d = bsgs(field, gamma, rhs, p_)
            if d is None:
                return None
            x += d * p_ ** k
        residues.append(x)
        moduli.append(pe)
    # CRT
    x, m = 0, 1
    for r, mod in zip(residues, moduli):
        g, u, _ = _xgcd(m, mod)
        assert g == 1
        x = (x + (r - x) * u % mod * m) % (m * mod)
        m *= mod
    return x


def _xgcd(a, b):
    x0, x1 = 1, 0
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
    return a, x0, 0
