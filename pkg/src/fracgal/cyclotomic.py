"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Numbers are dense coefficient vectors over the power basis
1, z, ..., z^(phi(n)-1) of Q[x]/Phi_n(x), with Fraction coefficients.
Level 1 is Q itself.  Levels only ever move up (n | m), never get reduced
mid-computation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


def euler_phi(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod_exact(num, den):
    """Divide integer polynomials (lists, low degree first), exact division."""
    num = list(num)
    d = len(den) - 1
    lead = den[-1]
    q = [0] * (len(num) - d)
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i]
        if c % lead:
            raise ArithmeticError("non-exact polynomial division")
        f = c // lead
        q[i - d] = f
        if f:
            for j in range(d + 1):
                num[i - d + j] -= f * den[j]
    if any(num[:d]) or any(num[d:]):
        # num now holds the remainder in low positions
        if any(num):
            raise ArithmeticError("nonzero remainder in cyclotomic division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int):
    """Coefficients of Phi_n, low degree first, integer."""
    if n == 1:
        return (-1, 1)
    # x^n - 1 divided by product of Phi_d for proper divisors d
    num = [0] * (n + 1)
    num[0] = -1
    num[n] = 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divmod_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_rows(n: int):
    """Rows expressing z^k (k = 0 .. 2*phi-2) over the power basis."""
    phi = euler_phi(n)
    poly = cyclotomic_polynomial(n)
    rows = []
    for k in range(phi):
        row = [Fraction(0)] * phi
        row[k] = Fraction(1)
        rows.append(tuple(row))
    for k in range(phi, 2 * phi - 1):
        # z^k = z * z^(k-1), then reduce the overflow via Phi_n
        prev = list(rows[k - 1])
        top = prev[phi - 1]
        row = [Fraction(0)] + prev[:-1]
        if top:
            for j in range(phi):
                row[j] -= top * poly[j]
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def _power_rows_mod_n(n: int):
    """z^k over the power basis for k = 0 .. n-1."""
    phi = euler_phi(n)
    poly = cyclotomic_polynomial(n)
    rows = []
    for k in range(n):
        if k < phi:
            row = [Fraction(0)] * phi
            row[k] = Fraction(1)
        else:
            prev = list(rows[k - 1])
            top = prev[phi - 1]
            row = [Fraction(0)] + prev[:-1]
            if top:
                for j in range(phi):
                    row[j] -= top * poly[j]
        rows.append(tuple(row))
    return tuple(rows)


class CyclotomicNumber:
    """Element of Q(zeta_n) over the power basis of Phi_n."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs):
        phi = euler_phi(level)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"need {phi} coefficients at level {level}")
        self.level = level
        self.coeffs = coeffs

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(q, level: int = 1) -> "CyclotomicNumber":
        phi = euler_phi(level)
        coeffs = [Fraction(q)] + [Fraction(0)] * (phi - 1)
        return CyclotomicNumber(level, coeffs)

    @staticmethod
    def zero(level: int = 1) -> "CyclotomicNumber":
        return CyclotomicNumber.from_rational(0, level)

    @staticmethod
    def one(level: int = 1) -> "CyclotomicNumber":
        return CyclotomicNumber.from_rational(1, level)

    @staticmethod
    def zeta_pow(level: int, k: int) -> "CyclotomicNumber":
        """zeta_level ** k."""
        rows = _power_rows_mod_n(level)
        return CyclotomicNumber(level, rows[k % level])

    # -- level handling ----------------------------------------------------

    def lift(self, level: int) -> "CyclotomicNumber":
        """Embed into Q(zeta_level); requires self.level | level."""
        if level == self.level:
            return self
        if level % self.level:
            raise ValueError(f"cannot lift level {self.level} into {level}")
        step = level // self.level
        rows = _power_rows_mod_n(level)
        phi = euler_phi(level)
        out = [Fraction(0)] * phi
        for i, c in enumerate(self.coeffs):
            if c:
                row = rows[(i * step) % level]
                for j in range(phi):
                    out[j] += c * row[j]
        return CyclotomicNumber(level, out)

    @staticmethod
    def common(a: "CyclotomicNumber", b: "CyclotomicNumber"):
        if a.level == b.level:
            return a, b
        m = a.level * b.level // gcd(a.level, b.level)
        return a.lift(m), b.lift(m)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other, self.level)
        if other is None:
            return NotImplemented
        a, b = CyclotomicNumber.common(self, other)
        return CyclotomicNumber(a.level,
                                [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.level, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = _coerce(other, self.level)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other, self.level)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other, self.level)
        if other is None:
            return NotImplemented
        a, b = CyclotomicNumber.common(self, other)
        phi = len(a.coeffs)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        rows = _reduction_rows(a.level)
        out = [Fraction(0)] * phi
        for k, c in enumerate(prod):
            if c:
                row = rows[k]
                for j in range(phi):
                    out[j] += c * row[j]
        return CyclotomicNumber(a.level, out)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via extended Euclid in Q[x] mod Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        phi_poly = [Fraction(c) for c in cyclotomic_polynomial(self.level)]
        a = list(self.coeffs)
        # extended gcd of a and Phi_n over Q[x]
        r0, r1 = phi_poly, _trim(a)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        # invariant: r_i = t_i * Phi + s_i * a  (t not tracked)
        while _deg(r1) > 0:
            q, r = _poly_divmod_q(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if _deg(r1) != 0 or not r1:
            raise ZeroDivisionError("element not invertible (zero divisor?)")
        c = r1[0]
        inv_coeffs = [x / c for x in s1]
        inv_coeffs += [Fraction(0)] * (len(self.coeffs) - len(inv_coeffs))
        # reduce mod Phi_n in case deg crept up (it cannot, but be safe)
        return CyclotomicNumber(self.level, inv_coeffs[:len(self.coeffs)])

    def __truediv__(self, other):
        other = _coerce(other, self.level)
        if other is None:
            return NotImplemented
        a, b = CyclotomicNumber.common(self, other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other, self.level)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.one(self.level)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure ---------------------------------------------------------

    def galois(self, a: int) -> "CyclotomicNumber":
        """Apply zeta -> zeta^a; requires gcd(a, level) = 1."""
        n = self.level
        if gcd(a % n if n > 1 else 1, n) != 1:
            raise ValueError("galois exponent not coprime to level")
        rows = _power_rows_mod_n(n)
        phi = len(self.coeffs)
        out = [Fraction(0)] * phi
        for i, c in enumerate(self.coeffs):
            if c:
                row = rows[(i * a) % n]
                for j in range(phi):
                    out[j] += c * row[j]
        return CyclotomicNumber(n, out)

    def conjugate(self) -> "CyclotomicNumber":
        """Complex conjugation zeta -> zeta^(-1)."""
        if self.level == 1:
            return self
        return self.galois(self.level - 1)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = CyclotomicNumber.common(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.level, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                z = f"z{self.level}" + (f"^{i}" if i > 1 else "")
                terms.append(f"{c}*{z}" if c != 1 else z)
        return " + ".join(terms) if terms else "0"


def _coerce(x, level):
    if isinstance(x, CyclotomicNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return CyclotomicNumber.from_rational(x, 1)
    return None


# -- small Q[x] helpers (lists, low degree first) ---------------------------


def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _deg(p):
    return len(p) - 1


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _poly_sub(p, q):
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else Fraction(0)) -
           (q[i] if i < len(q) else Fraction(0)) for i in range(n)]
    return _trim(out)


def _poly_divmod_q(num, den):
    num = list(num)
    den = _trim(den)
    q = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(num) - 1, len(den) - 2, -1):
        if num[i]:
            f = num[i] / lead
            q[i - len(den) + 1] = f
            for j, d in enumerate(den):
                num[i - len(den) + 1 + j] -= f * d
    return _trim(q), _trim(num)
