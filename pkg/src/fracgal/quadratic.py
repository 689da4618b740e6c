"""Quadratic fields Q(sqrt(m)): exact elements, ideals, forms, class groups.

Elements are u + v*omega with omega = (1+sqrt(m))/2 or sqrt(m); ideals are
2x2 HNF lattices over the ring of integers.  Principality tests and
generators come from binary-form reduction with transform tracking, so no
unit-sized search bounds ever appear.  Class groups are computed from the
reduced-form representatives with the group law done on ideals.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .errors import DomainError, UnsupportedFieldError
from .finitefield import GF, discrete_log
from .intlinalg import hnf, lattice_contains
from .realball import BallComplex, BallReal, RealContext


def squarefree_part(n: int) -> int:
    if n == 0:
        raise DomainError("zero has no squarefree part")
    s = 1 if n > 0 else -1
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            cnt = 0
            while n % d == 0:
                n //= d
                cnt += 1
            if cnt % 2:
                out *= d
        d += 1
    return s * out * n


class QuadElt:
    """u + v*omega, exact rational coordinates."""

    __slots__ = ("field", "u", "v")

    def __init__(self, field: "QuadraticField", u, v):
        self.field = field
        self.u = Fraction(u)
        self.v = Fraction(v)

    def __add__(self, other):
        other = self.field.coerce(other)
        return QuadElt(self.field, self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(self.field, -self.u, -self.v)

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return self.field.coerce(other) + (-self)

    def __mul__(self, other):
        other = self.field.coerce(other)
        t, n = self.field.omega_t, self.field.omega_n
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        return QuadElt(self.field,
                       u1 * u2 - n * v1 * v2,
                       u1 * v2 + u2 * v1 + t * v1 * v2)

    __rmul__ = __mul__

    def conj(self) -> "QuadElt":
        t = self.field.omega_t
        return QuadElt(self.field, self.u + self.v * t, -self.v)

    def norm(self) -> Fraction:
        t, n = self.field.omega_t, self.field.omega_n
        return self.u * self.u + self.u * self.v * t + self.v * self.v * n

    def trace(self) -> Fraction:
        return 2 * self.u + self.v * self.field.omega_t

    def inverse(self) -> "QuadElt":
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return QuadElt(self.field, c.u / nm, c.v / nm)

    def __truediv__(self, other):
        return self * self.field.coerce(other).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_integral(self) -> bool:
        return self.u.denominator == 1 and self.v.denominator == 1

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        return (isinstance(other, QuadElt) and self.field.m == other.field.m
                and self.u == other.u and self.v == other.v)

    def __hash__(self):
        return hash((self.field.m, self.u, self.v))

    def __repr__(self):
        return f"({self.u} + {self.v}*w{self.field.m})"

    def embeddings(self, rc: RealContext):
        """Archimedean embeddings as balls: two reals, or one complex."""
        return self.field.embed(self, rc)


class QuadraticField:
    def __init__(self, m: int):
        m = int(m)
        if m in (0, 1) or squarefree_part(m) != m:
            raise DomainError("need a squarefree m != 0, 1")
        self.m = m
        self.is_real = m > 0
        if m % 4 == 1:
            self.D = m
            self.omega_t, self.omega_n = 1, (1 - m) // 4
        else:
            self.D = 4 * m
            self.omega_t, self.omega_n = 0, -m
        self._fund_unit = None

    # -- elements ------------------------------------------------------------

    def element(self, u, v=0) -> QuadElt:
        return QuadElt(self, u, v)

    def zero(self):
        return QuadElt(self, 0, 0)

    def one(self):
        return QuadElt(self, 1, 0)

    def omega(self):
        return QuadElt(self, 0, 1)

    def sqrt_m(self) -> QuadElt:
        if self.m % 4 == 1:
            return QuadElt(self, Fraction(-1), Fraction(2))  # 2w - 1
        return QuadElt(self, 0, 1)

    def from_sqrt_coords(self, x, y) -> QuadElt:
        """x + y*sqrt(m)."""
        return self.element(Fraction(x)) + self.sqrt_m() * Fraction(y)

    def coerce(self, x) -> QuadElt:
        if isinstance(x, QuadElt):
            if x.field.m != self.m:
                raise DomainError("field mismatch")
            return x
        if isinstance(x, (int, Fraction)):
            return QuadElt(self, x, 0)
        raise DomainError(f"cannot coerce {x!r}")

    def embed(self, x: QuadElt, rc: RealContext):
        if self.is_real:
            s = rc.from_int(self.m).sqrt()
            if self.m % 4 == 1:
                w1 = (rc.from_int(1) + s) * Fraction(1, 2)
                w2 = (rc.from_int(1) - s) * Fraction(1, 2)
            else:
                w1, w2 = s, -s
            return [rc.from_fraction(x.u) + rc.from_fraction(x.v) * w1,
                    rc.from_fraction(x.u) + rc.from_fraction(x.v) * w2]
        s = rc.from_int(-self.m).sqrt()
        if self.m % 4 == 1:
            re = rc.from_fraction(x.u) + rc.from_fraction(x.v) * Fraction(1, 2)
            im = rc.from_fraction(x.v) * s * Fraction(1, 2)
        else:
            re = rc.from_fraction(x.u)
            im = rc.from_fraction(x.v) * s
        return [BallComplex(re, im)]

    # -- units ----------------------------------------------------------------

    @property
    def torsion_order(self) -> int:
        if self.m == -1:
            return 4
        if self.m == -3:
            return 6
        return 2

    def torsion_generator(self) -> QuadElt:
        if self.m == -1:
            return self.omega()  # i
        if self.m == -3:
            # zeta_6 = (1 + sqrt(-3))/2 = omega
            return self.omega()
        return self.element(-1)

    def fundamental_unit(self) -> QuadElt:
        """Fundamental unit > 1 of the maximal order (real fields)."""
        if not self.is_real:
            raise DomainError("imaginary fields have no fundamental unit")
        if self._fund_unit is not None:
            return self._fund_unit
        m = self.m
        # Pell via continued fraction of sqrt(m): unit of Z[sqrt(m)]
        x_pell, y_pell = _pell_pm1(m)
        # fundamental unit of the maximal order: minimal y with
        # x^2 - m y^2 = +-4 over half-integer coordinates
        best = None
        for y in range(1, 2 * y_pell + 2):
            my2 = m * y * y
            for s in (-4, 4):
                x2 = my2 + s
                if x2 <= 0:
                    continue
                x = isqrt(x2)
                if x * x == x2 and (x - y * self.omega_t) % 2 == 0:
                    best = (x, y)
                    break
            if best:
                break
        assert best is not None, "Pell bound violated"
        x, y = best
        # (x + y sqrt(m))/2 in omega coordinates
        if m % 4 == 1:
            eps = QuadElt(self, Fraction(x - y, 2), Fraction(y))
        else:
            assert x % 2 == 0 and y % 2 == 0
            eps = QuadElt(self, Fraction(x // 2), Fraction(y // 2))
        assert eps.is_integral()
        assert abs(eps.norm()) == 1
        self._fund_unit = eps
        return eps

    # -- splitting ---------------------------------------------------------------

    def split_type(self, p: int) -> str:
        D = self.D
        if p == 2:
            if D % 2 == 0:
                return "ramified"
            return "split" if D % 8 == 1 else "inert"
        if D % p == 0:
            return "ramified"
        return "split" if pow(D % p, (p - 1) // 2, p) == 1 else "inert"

    def minpoly_roots_mod_p(self, p: int):
        """Roots of x^2 - t x + n mod p (the omega minimal polynomial)."""
        t, n = self.omega_t, self.omega_n
        return [r for r in range(p) if (r * r - t * r + n) % p == 0]

    def prime_ideals_above(self, p: int):
        """List of (Ideal, residue_degree); one entry per place."""
        st = self.split_type(p)
        if st == "inert":
            return [(Ideal.from_generators(self, [self.element(p)]), 2)]
        roots = self.minpoly_roots_mod_p(p)
        if st == "ramified":
            r = roots[0]
            I = Ideal.from_rows(self, [[p, 0], [-r % p, 1]])
            return [(I, 1)]
        assert len(roots) == 2, (self.m, p, roots)
        out = []
        for r in sorted(roots):
            out.append((Ideal.from_rows(self, [[p, 0], [-r % p, 1]]), 1))
        return out

    # -- residue fields -----------------------------------------------------------

    def residue_field(self, p: int, root=None):
        """Residue data at a place above p.

        root: for split/ramified places, which root of the omega minimal
        polynomial defines the reduction (None picks the smallest).
        """
        st = self.split_type(p)
        if st == "inert":
            t, n = self.omega_t, self.omega_n
            gf = GF(p, [n % p, (-t) % p, 1])  # x^2 - t x + n
            def red(x: QuadElt):
                return gf.elt([_frac_mod(x.u, p), _frac_mod(x.v, p)])
            return ResiduePlace(self, p, gf, red, None)
        roots = self.minpoly_roots_mod_p(p)
        r = roots[0] if root is None else root
        gf = GF(p, [0, 1])  # F_p realized as F_p[x]/(x)
        def red(x: QuadElt, r=r):
            return gf.elt([(_frac_mod(x.u, p) + _frac_mod(x.v, p) * r) % p])
        return ResiduePlace(self, p, gf, red, r)


class ResiduePlace:
    """A place above p with its residue field and unit-group dlog."""

    def __init__(self, field, p, gf: GF, reduce_fn, root):
        self.field = field
        self.p = p
        self.gf = gf
        self.reduce = reduce_fn
        self.root = root
        self.unit_order = gf.q - 1
        self._gen = None

    def generator(self):
        if self._gen is None:
            self._gen = self.gf.multiplicative_generator()
        return self._gen

    def dlog(self, x: QuadElt) -> int:
        r = self.reduce(x)
        if self.gf.is_zero(r):
            raise DomainError("element not a unit at this place")
        out = discrete_log(self.gf, self.generator(), r, self.unit_order)
        assert out is not None
        return out


def _frac_mod(q: Fraction, p: int) -> int:
    den = q.denominator % p
    if den == 0:
        raise DomainError("denominator not invertible at p")
    return q.numerator * pow(den, -1, p) % p


def _pell_pm1(m: int):
    """Minimal (x, y) with x^2 - m y^2 = +-1, y > 0 (m > 1 nonsquare)."""
    a0 = isqrt(m)
    P, Q, a = 0, 1, a0
    num1, num = 1, a0
    den1, den = 0, 1
    for _ in range(10 ** 7):
        if num * num - m * den * den in (1, -1):
            return num, den
        P = a * Q - P
        Q = (m - P * P) // Q
        a = (a0 + P) // Q
        num1, num = num, a * num + num1
        den1, den = den, a * den + den1
    raise UnsupportedFieldError("Pell solver iteration cap")


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """Integral ideal as HNF rows [[a, b], [0, c]] over the basis (1, omega).

    The lattice is Z*(a + b*omega) + Z*(c*omega); norm a*c.
    """

    def __init__(self, field: QuadraticField, rows):
        self.field = field
        self.rows = [list(map(int, r)) for r in rows]
        assert len(self.rows) == 2
        a, b = self.rows[0]
        z, c = self.rows[1]
        assert z == 0 and a > 0 and c > 0, rows

    @staticmethod
    def from_rows(field, rows) -> "Ideal":
        H = hnf([list(map(int, r)) for r in rows])
        if len(H) != 2:
            raise DomainError("rows do not span a full lattice")
        return Ideal(field, H)

    @staticmethod
    def from_generators(field, gens) -> "Ideal":
        """Ideal generated by elements (integral QuadElts) over the order."""
        rows = []
        w = field.omega()
        for g in gens:
            for mult in (field.one(), w):
                x = g * mult
                assert x.is_integral()
                rows.append([int(x.u), int(x.v)])
        return Ideal.from_rows(field, rows)

    @staticmethod
    def unit_ideal(field) -> "Ideal":
        return Ideal(field, [[1, 0], [0, 1]])

    def basis_elements(self):
        a, b = self.rows[0]
        _, c = self.rows[1]
        return (self.field.element(a, b), self.field.element(0, c))

    def norm(self) -> int:
        return self.rows[0][0] * self.rows[1][1]

    def contains(self, x: QuadElt) -> bool:
        if not x.is_integral():
            return False
        return lattice_contains(self.rows, [int(x.u), int(x.v)])

    def __mul__(self, other: "Ideal") -> "Ideal":
        rows = []
        for g1 in self.basis_elements():
            for g2 in other.basis_elements():
                x = g1 * g2
                rows.append([int(x.u), int(x.v)])
        return Ideal.from_rows(self.field, rows)

    def __pow__(self, k: int) -> "Ideal":
        result = Ideal.unit_ideal(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "Ideal":
        rows = []
        for g in self.basis_elements():
            x = g.conj()
            rows.append([int(x.u), int(x.v)])
            y = x * self.field.omega()
            rows.append([int(y.u), int(y.v)])
        return Ideal.from_rows(self.field, rows)

    def scale(self, n: int) -> "Ideal":
        return Ideal(self.field,
                     [[self.rows[0][0] * n, self.rows[0][1] * n],
                      [0, self.rows[1][1] * n]])

    def __eq__(self, other):
        return (isinstance(other, Ideal) and self.field.m == other.field.m
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field.m, tuple(map(tuple, self.rows))))

    def __repr__(self):
        return f"Ideal{self.rows} of Q(sqrt {self.field.m})"

    # -- forms ------------------------------------------------------------------

    def oriented_basis(self):
        """Basis with the sqrt(D)-part of (conj(a) b - a conj(b)) positive;
        the wrong orientation would land forms in the inverse class."""
        alpha, beta = self.basis_elements()
        delta = alpha.conj() * beta - alpha * beta.conj()
        if delta.v < 0:
            alpha, beta = beta, alpha
        return alpha, beta

    def to_form(self):
        alpha, beta = self.oriented_basis()
        # Q(x, y) = N(x alpha - y beta) / N(I)
        N = Fraction(self.norm())
        A = alpha.norm() / N
        B = -(alpha * beta.conj() + beta * alpha.conj()).u / N  # -Tr term
        C = beta.norm() / N
        assert A.denominator == B.denominator == C.denominator == 1
        form = (int(A), int(B), int(C))
        assert form[1] ** 2 - 4 * form[0] * form[2] == self.field.D
        return form

    def principal_generator(self):
        """A generator if principal, else None (exact)."""
        A, B, C = self.to_form()
        alpha, beta = self.basis_elements()
        rep = _represent_unit(A, B, C, self.field.D)
        if rep is None:
            return None
        x, y = rep
        g = alpha * x + beta * y
        assert abs(g.norm()) == self.norm()
        return g

    def is_principal(self) -> bool:
        return self.principal_generator() is not None


# ---------------------------------------------------------------------------
# binary quadratic forms: reduction with transform, representations of +-1


def _apply(form, M):
    a, b, c = form
    p, q = M[0]
    r, s = M[1]
    A = a * p * p + b * p * r + c * r * r
    B = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s
    C = a * q * q + b * q * s + c * s * s
    return (A, B, C)


def _mat_mul2(M, N):
    return [[M[0][0] * N[0][0] + M[0][1] * N[1][0],
             M[0][0] * N[0][1] + M[0][1] * N[1][1]],
            [M[1][0] * N[0][0] + M[1][1] * N[1][0],
             M[1][0] * N[0][1] + M[1][1] * N[1][1]]]


def reduce_definite(form):
    """Reduce a positive-definite form; returns (reduced, M) with
    form o M = reduced."""
    a, b, c = form
    assert b * b - 4 * a * c < 0 and a > 0
    M = [[1, 0], [0, 1]]
    while True:
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            T = [[1, k], [0, 1]]
            a, b, c = _apply((a, b, c), T)
            M = _mat_mul2(M, T)
        if a > c or (a == c and b < 0):
            S = [[0, -1], [1, 0]]
            a, b, c = _apply((a, b, c), S)
            M = _mat_mul2(M, S)
            continue
        if b < 0 and a == -b:
            # b = -a -> b = a
            T = [[1, 1], [0, 1]]
            a, b, c = _apply((a, b, c), T)
            M = _mat_mul2(M, T)
        break
    return (a, b, c), M


def is_reduced_definite(form) -> bool:
    a, b, c = form
    if not (-a < b <= a <= c):
        return False
    if b < 0 and (a == -b or a == c):
        return False
    return True


def is_reduced_indefinite(form, sqD: int, D: int) -> bool:
    a, b, c = form
    if b <= 0 or b * b >= D:
        return False
    # |sqrt(D) - 2|a|| < b  <=>  D + 4a^2 - b^2 < 4|a| sqrt(D)
    lhs = D + 4 * a * a - b * b
    if lhs < 0:
        return True
    return lhs * lhs < 16 * a * a * D


def _rho_indefinite(form, D: int, sqD: int):
    """One reduction step; returns (new_form, M_step)."""
    a, b, c = form
    # r = -b mod 2c in the right window
    twoc = 2 * abs(c)
    if abs(c) > sqD:
        # -|c| < r <= |c|
        r = (-b) % twoc
        if r > abs(c):
            r -= twoc
    else:
        # sqD - 2|c| < r < sqD + 1  (integer window (sqD - 2|c|, sqD])
        r = (-b) % twoc
        hi = sqD
        lo = sqD - twoc
        while r > hi:
            r -= twoc
        while r <= lo:
            r += twoc
    s = (b + r) // (2 * c)
    new = (c, r, (r * r - D) // (4 * c))
    M = [[0, -1], [1, s]]
    assert _apply(form, M) == new, (form, new, s)
    return new, M


def reduce_indefinite(form, D: int):
    sqD = isqrt(D)
    M = [[1, 0], [0, 1]]
    f = form
    for _ in range(10 ** 6):
        if is_reduced_indefinite(f, sqD, D):
            return f, M
        f, step = _rho_indefinite(f, D, sqD)
        M = _mat_mul2(M, step)
    raise DomainError("indefinite reduction did not terminate")


def indefinite_cycle(form, D: int):
    """The rho-cycle through a reduced form: list of (form, transform)."""
    sqD = isqrt(D)
    out = []
    f, M = form, [[1, 0], [0, 1]]
    seen = set()
    for _ in range(10 ** 6):
        if f in seen:
            return out
        seen.add(f)
        out.append((f, M))
        f2, step = _rho_indefinite(f, D, sqD)
        f, M = f2, _mat_mul2(M, step)
    raise DomainError("cycle enumeration did not terminate")


def _represent_unit(A, B, C, D):
    """(x, y) with form value +-1, or None (exact principality test)."""
    if D < 0:
        red, M = reduce_definite((A, B, C))
        if red[0] != 1:
            return None
        return (M[0][0], M[1][0])
    red, M0 = reduce_indefinite((A, B, C), D)
    for f, M in indefinite_cycle(red, D):
        if abs(f[0]) == 1:
            MM = _mat_mul2(M0, M)
            return (MM[0][0], MM[1][0])
    return None


# ---------------------------------------------------------------------------
# class groups


def enumerate_reduced_definite(D: int):
    assert D < 0 and D % 4 in (0, 1)
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == -b or a == c):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue  # only primitive forms (fundamental D anyway)
            out.append((a, b, c))
    return out


def enumerate_reduced_indefinite(D: int):
    assert D > 0
    sqD = isqrt(D)
    out = []
    for b in range(1, sqD + 1):
        if (b - D) % 2:
            continue
        rest = (b * b - D) // 4  # = a*c, negative
        if rest == 0:
            continue
        for a in _divisors_signed(-rest):
            c = rest // a
            f = (a, b, c)
            if is_reduced_indefinite(f, sqD, D) and \
                    gcd(gcd(abs(a), b), abs(c)) == 1:
                out.append(f)
    return out


def _divisors_signed(n: int):
    n = abs(n)
    out = []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            out.extend([d, -d, n // d, -(n // d)])
    return sorted(set(out))


def form_to_ideal(field: QuadraticField, form) -> Ideal:
    """Ideal Z a + Z((-b + sqrt(D))/2 for a form (a, b, c) with a > 0."""
    a, b, c = form
    assert a > 0
    if field.m % 4 == 1:
        # (-b + sqrt(D))/2 = -(b+1)/2 + omega
        w_part = (-(b + 1)) // 2
        assert (b + 1) % 2 == 0
    else:
        assert b % 2 == 0
        w_part = (-b) // 2
    return Ideal.from_rows(field, [[a, 0], [w_part, 1]])


class QuadClassGroup:
    """Class group (narrow, for real fields) with explicit representatives."""

    def __init__(self, field: QuadraticField):
        self.field = field
        D = field.D
        if D < 0:
            forms = enumerate_reduced_definite(D)
        else:
            forms = enumerate_reduced_indefinite(D)
        self._sqD = isqrt(abs(D))
        # canonical keys
        keys = set()
        key_rep = {}
        for f in forms:
            k = self._key_of_form(f)
            if k not in keys:
                keys.add(k)
                keep = f if f[0] > 0 else None
                if keep is None:
                    # find a positive-leading form in the cycle
                    red, _ = reduce_indefinite(f, D)
                    for g, _m in indefinite_cycle(red, D):
                        if g[0] > 0:
                            keep = g
                            break
                key_rep[k] = keep
        self.keys = sorted(keys)
        self.rep_ideal = {k: form_to_ideal(field, key_rep[k])
                          for k in self.keys}
        self.h = len(self.keys)
        self._build_structure()

    def _key_of_form(self, f):
        D = self.field.D
        if D < 0:
            red, _ = reduce_definite(f)
            return red
        red, _ = reduce_indefinite(f, D)
        cyc = [g for g, _ in indefinite_cycle(red, D)]
        return min(cyc)

    def class_key(self, I: Ideal):
        return self._key_of_form(I.to_form())

    def identity_key(self):
        return self.class_key(Ideal.unit_ideal(self.field))

    def _build_structure(self):
        idk = self.identity_key()
        gen_ideals = []
        spanned = {idk}
        # greedy generating set
        for k in self.keys:
            if k in spanned:
                continue
            gen_ideals.append(self.rep_ideal[k])
            spanned = self._span(gen_ideals)
        self.gen_ideals = gen_ideals
        # orders of each generator
        orders = []
        for I in gen_ideals:
            o = 1
            J = I
            while self.class_key(J) != idk:
                J = J * I
                o += 1
                assert o <= self.h
            orders.append(o)
        self.gen_orders = orders
        # dlog table and relation lattice by box enumeration
        from itertools import product as iproduct
        table = {}
        rels = []
        for e in iproduct(*(range(o) for o in orders)):
            J = Ideal.unit_ideal(self.field)
            for I, k in zip(gen_ideals, e):
                if k:
                    J = J * I ** k
            key = self.class_key(J)
            if key == idk and any(e):
                rels.append(list(e))
            table.setdefault(key, list(e))
        assert len(table) == self.h, (len(table), self.h)
        self._dlog = table
        rel_rows = [r for r in rels]
        for i, o in enumerate(orders):
            rel_rows.append([o if j == i else 0 for j in range(len(orders))])
        from .intlinalg import abelian_invariants
        invs, proj = abelian_invariants(rel_rows, len(orders))
        self.invariants = [d for d in invs if d not in (1,)]
        assert all(d != 0 for d in self.invariants)
        self._proj = proj

    def _span(self, gen_ideals):
        idk = self.identity_key()
        out = {idk}
        frontier = [Ideal.unit_ideal(self.field)]
        seen = {idk}
        while frontier:
            J = frontier.pop()
            for I in gen_ideals:
                K = J * I
                k = self.class_key(K)
                if k not in seen:
                    seen.add(k)
                    frontier.append(K)
        return seen

    def coordinates(self, I: Ideal):
        """Coordinates of [I] in prod Z/invariants."""
        e = self._dlog[self.class_key(I)]
        return self._proj(e)

    def order_of(self, I: Ideal) -> int:
        idk = self.identity_key()
        o = 1
        J = I
        while self.class_key(J) != idk:
            J = J * I
            o += 1
            assert o <= self.h + 1
        return o
