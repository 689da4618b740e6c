"""Arbitrary-precision real/complex intervals over stdlib decimal.

A BallReal is a midpoint Decimal plus a nonnegative radius Decimal; every
operation rounds the midpoint at the context precision and inflates the
radius by a rigorous (slightly generous) bound for the propagated and
rounding error.  Downstream equality claims are interval claims followed by
exact verification after rational reconstruction, so radii only need to be
honest upper bounds, not tight ones.
"""

from __future__ import annotations

import decimal
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache

from .errors import PrecisionError

_ZERO = Decimal(0)

# radii are computed with directed rounding so they are always honest
# upper bounds; 8 digits of radius precision is plenty
_RAD_UP = decimal.Context(prec=8, rounding=decimal.ROUND_UP,
                          Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN)
_RAD_DOWN = decimal.Context(prec=8, rounding=decimal.ROUND_DOWN,
                            Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN)


def _rup(x: Decimal) -> Decimal:
    return _RAD_UP.plus(x)


def rad_add(*xs) -> Decimal:
    """Sum of nonnegative bounds, rounded up."""
    total = _ZERO
    for x in xs:
        total = _RAD_UP.add(total, x)
    return total


def rad_mul(a: Decimal, b: Decimal) -> Decimal:
    return _RAD_UP.multiply(a, b)


def frac_to_dec_up(q) -> Decimal:
    """Upper bound for |q| as a Decimal (never underflows to zero)."""
    q = Fraction(q)
    if q == 0:
        return _ZERO
    return _RAD_UP.divide(Decimal(abs(q.numerator)), Decimal(q.denominator))


class RealContext:
    """Precision bundle: `digits` working digits plus guard digits."""

    GUARD = 10

    def __init__(self, digits: int):
        if digits < 5:
            raise PrecisionError("need at least 5 digits")
        self.digits = digits
        self.prec = digits + self.GUARD
        self.ctx = decimal.Context(prec=self.prec,
                                   Emax=decimal.MAX_EMAX,
                                   Emin=decimal.MIN_EMIN)

    def _ulp(self, x: Decimal) -> Decimal:
        if not x:
            return Decimal((0, (1,), -self.prec - 2))
        return Decimal((0, (1,), x.adjusted() - self.prec + 1))

    # -- constructors -------------------------------------------------------

    def from_int(self, n: int) -> "BallReal":
        return BallReal(self, Decimal(n), _ZERO)

    def from_fraction(self, q) -> "BallReal":
        q = Fraction(q)
        mid = self.ctx.divide(Decimal(q.numerator), Decimal(q.denominator))
        exact = (q.denominator == 1 and mid == Decimal(q.numerator))
        err = _ZERO if exact else self._ulp(mid)
        return BallReal(self, mid, err)

    def from_decimal(self, d: Decimal, rad: Decimal = _ZERO) -> "BallReal":
        return BallReal(self, Decimal(d), Decimal(rad))

    def zero(self) -> "BallReal":
        return BallReal(self, _ZERO, _ZERO)

    # -- cached constants ----------------------------------------------------

    def pi(self) -> "BallReal":
        return _pi_ball(self)

    def ln2pi(self) -> "BallReal":
        two_pi = self.pi() * 2
        return two_pi.ln()


@lru_cache(maxsize=8)
def _pi_cached(prec: int) -> Decimal:
    """Machin: pi = 16 atan(1/5) - 4 atan(1/239), computed at prec digits."""
    ctx = decimal.Context(prec=prec + 10)

    def atan_inv(x: int) -> Decimal:
        total = Decimal(0)
        term = ctx.divide(Decimal(1), Decimal(x))
        x2 = Decimal(x * x)
        k = 0
        sign = 1
        limit = Decimal((0, (1,), -(prec + 8)))
        while term.copy_abs() > limit:
            piece = ctx.divide(term, Decimal(2 * k + 1))
            total = ctx.add(total,
                            piece if sign > 0 else piece.copy_negate())
            term = ctx.divide(term, x2)
            k += 1
            sign = -sign
        return total

    return ctx.subtract(ctx.multiply(Decimal(16), atan_inv(5)),
                        ctx.multiply(Decimal(4), atan_inv(239)))


def _pi_ball(rc: RealContext) -> "BallReal":
    mid = rc.ctx.plus(_pi_cached(rc.prec))
    return BallReal(rc, mid, _RAD_UP.multiply(Decimal(4), rc._ulp(mid)))


class BallReal:
    __slots__ = ("rc", "mid", "rad")

    def __init__(self, rc: RealContext, mid: Decimal, rad: Decimal):
        self.rc = rc
        self.mid = mid
        self.rad = rad
        if rad < 0:
            raise ValueError("negative radius")

    # -- helpers -------------------------------------------------------------

    def _wrap(self, other):
        if isinstance(other, BallReal):
            if other.rc.digits != self.rc.digits:
                raise PrecisionError("mixing precision contexts")
            return other
        if isinstance(other, int):
            return self.rc.from_int(other)
        if isinstance(other, Fraction):
            return self.rc.from_fraction(other)
        return None

    def __repr__(self):
        return f"Ball({self.mid}, ±{self.rad})"

    def to_json(self) -> dict:
        return {"value": str(self.mid), "radius": str(self.rad)}

    @staticmethod
    def from_json(rc: RealContext, data: dict) -> "BallReal":
        return BallReal(rc, Decimal(data["value"]), Decimal(data["radius"]))

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        ctx = self.rc.ctx
        mid = ctx.add(self.mid, other.mid)
        rad = _RAD_UP.add(_RAD_UP.add(self.rad, other.rad), self.rc._ulp(mid))
        return BallReal(self.rc, mid, rad)

    __radd__ = __add__

    def __neg__(self):
        return BallReal(self.rc, self.mid.copy_negate(), self.rad)

    def __sub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        ctx = self.rc.ctx
        mid = ctx.multiply(self.mid, other.mid)
        rad = _ZERO
        if other.rad:
            rad = _RAD_UP.add(rad, _RAD_UP.multiply(self.mid.copy_abs(), other.rad))
        if self.rad:
            rad = _RAD_UP.add(rad, _RAD_UP.multiply(other.mid.copy_abs(), self.rad))
        if self.rad and other.rad:
            rad = _RAD_UP.add(rad, _RAD_UP.multiply(self.rad, other.rad))
        rad = _RAD_UP.add(rad, self.rc._ulp(mid))
        return BallReal(self.rc, mid, rad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        b = other.mid.copy_abs()
        if b <= other.rad:
            raise PrecisionError("division by an interval containing zero")
        ctx = self.rc.ctx
        mid = ctx.divide(self.mid, other.mid)
        num = _RAD_UP.add(self.rad, _RAD_UP.multiply(mid.copy_abs(), other.rad))
        den = _RAD_DOWN.subtract(b, other.rad)
        rad = _RAD_UP.add(_RAD_UP.divide(num, den) if num else _ZERO,
                          self.rc._ulp(mid))
        return BallReal(self.rc, mid, rad)

    def __rtruediv__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return other / self

    def abs(self) -> "BallReal":
        return BallReal(self.rc, self.mid.copy_abs(), self.rad)

    def pow_int(self, k: int) -> "BallReal":
        if k < 0:
            return (self.rc.from_int(1) / self).pow_int(-k)
        result = self.rc.from_int(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- transcendental -----------------------------------------------------

    def exp(self) -> "BallReal":
        ctx = self.rc.ctx
        mid = ctx.exp(self.mid)
        if self.rad:
            if self.rad > 1:
                raise PrecisionError("exp of a wide interval")
            rad = _RAD_UP.add(
                _RAD_UP.multiply(_RAD_UP.multiply(mid.copy_abs(), self.rad),
                                 Decimal(3)),
                self.rc._ulp(mid))
        else:
            rad = self.rc._ulp(mid)
        return BallReal(self.rc, mid, rad)

    def ln(self) -> "BallReal":
        if self.mid <= self.rad:
            raise PrecisionError("ln of an interval touching zero")
        ctx = self.rc.ctx
        mid = ctx.ln(self.mid)
        if self.rad:
            rad = _RAD_UP.divide(self.rad,
                                 _RAD_DOWN.subtract(self.mid, self.rad))
        else:
            rad = _ZERO
        rad = _RAD_UP.add(rad, self.rc._ulp(mid))
        return BallReal(self.rc, mid, rad)

    def sqrt(self) -> "BallReal":
        if self.mid < self.rad:
            raise PrecisionError("sqrt of an interval touching negatives")
        ctx = self.rc.ctx
        mid = ctx.sqrt(self.mid)
        if self.rad:
            if self.mid > self.rad:
                lo = ctx.sqrt(_RAD_DOWN.subtract(self.mid, self.rad))
                rad = _RAD_UP.divide(self.rad, _RAD_DOWN.multiply(Decimal(2), lo))
            else:
                rad = _RAD_UP.sqrt(self.rad)
        else:
            rad = _ZERO
        rad = _RAD_UP.add(rad, self.rc._ulp(mid))
        return BallReal(self.rc, mid, rad)

    # -- predicates ----------------------------------------------------------

    def contains_zero(self) -> bool:
        return self.mid.copy_abs() <= self.rad

    def definitely_positive(self) -> bool:
        return self.mid > self.rad

    def definitely_negative(self) -> bool:
        return self.mid < -self.rad

    def mignitude(self) -> Decimal:
        """Lower bound for |x| on the interval."""
        m = _RAD_DOWN.subtract(self.mid.copy_abs(), self.rad)
        return m if m > 0 else _ZERO

    def magnitude(self) -> Decimal:
        return _RAD_UP.add(self.mid.copy_abs(), self.rad)

    def contains_fraction(self, q) -> bool:
        q = Fraction(q)
        diff = Fraction(self.mid) - q
        return abs(diff) <= Fraction(self.rad) if self.rad else diff == 0

    def distance_to_fraction(self, q) -> Fraction:
        return abs(Fraction(self.mid) - Fraction(q))


# ---------------------------------------------------------------------------
# trigonometry at rational multiples of 2*pi


def cos_sin_2pi(rc: RealContext, q) -> tuple[BallReal, BallReal]:
    """(cos(2 pi q), sin(2 pi q)) for a Fraction q, exact range reduction."""
    q = Fraction(q) % 1  # exact reduction mod 1
    if q > Fraction(1, 2):
        q -= 1  # theta in (-pi, pi]
    theta = rc.pi() * 2 * rc.from_fraction(q)
    return _cos_ball(theta), _sin_ball(theta)


def _sin_ball(x: BallReal) -> BallReal:
    rc = x.rc
    ctx = rc.ctx
    # Taylor: sum (-1)^k x^(2k+1)/(2k+1)!; |x| <= pi so terms decay fast
    t = x.mid
    x2 = ctx.multiply(t, t)
    neg_x2 = x2.copy_negate()
    term = t
    total = t
    k = 0
    limit = Decimal((0, (1,), -(rc.prec + 2)))
    nops = 1
    while term.copy_abs() > limit:
        k += 1
        term = ctx.divide(ctx.multiply(term, neg_x2),
                          Decimal((2 * k) * (2 * k + 1)))
        total = ctx.add(total, term)
        nops += 2
        if k > 10000:
            raise PrecisionError("sin series did not converge")
    rad = _RAD_UP.add(_RAD_UP.add(x.rad, term.copy_abs()),
                      _RAD_UP.multiply(Decimal(nops + 4), rc._ulp(Decimal(1))))
    return BallReal(rc, total, rad)


def _cos_ball(x: BallReal) -> BallReal:
    rc = x.rc
    ctx = rc.ctx
    t = x.mid
    x2 = ctx.multiply(t, t)
    neg_x2 = x2.copy_negate()
    term = Decimal(1)
    total = Decimal(1)
    k = 0
    limit = Decimal((0, (1,), -(rc.prec + 2)))
    nops = 1
    while term.copy_abs() > limit:
        k += 1
        term = ctx.divide(ctx.multiply(term, neg_x2),
                          Decimal((2 * k - 1) * (2 * k)))
        total = ctx.add(total, term)
        nops += 2
        if k > 10000:
            raise PrecisionError("cos series did not converge")
    rad = _RAD_UP.add(_RAD_UP.add(x.rad, term.copy_abs()),
                      _RAD_UP.multiply(Decimal(nops + 4), rc._ulp(Decimal(1))))
    return BallReal(rc, total, rad)


# ---------------------------------------------------------------------------
# complex balls


class BallComplex:
    __slots__ = ("re", "im")

    def __init__(self, re: BallReal, im: BallReal):
        self.re = re
        self.im = im

    @staticmethod
    def from_real(x: BallReal) -> "BallComplex":
        return BallComplex(x, x.rc.zero())

    @staticmethod
    def root_of_unity(rc: RealContext, k: int, n: int) -> "BallComplex":
        c, s = cos_sin_2pi(rc, Fraction(k, n))
        return BallComplex(c, s)

    def __add__(self, other):
        other = _as_complex(other, self.re.rc)
        if other is None:
            return NotImplemented
        return BallComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return BallComplex(-self.re, -self.im)

    def __sub__(self, other):
        other = _as_complex(other, self.re.rc)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_complex(other, self.re.rc)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_complex(other, self.re.rc)
        if other is None:
            return NotImplemented
        return BallComplex(self.re * other.re - self.im * other.im,
                           self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_complex(other, self.re.rc)
        if other is None:
            return NotImplemented
        den = other.re * other.re + other.im * other.im
        num = self * other.conjugate()
        return BallComplex(num.re / den, num.im / den)

    def conjugate(self) -> "BallComplex":
        return BallComplex(self.re, -self.im)

    def abs2(self) -> BallReal:
        return self.re * self.re + self.im * self.im

    def abs(self) -> BallReal:
        return self.abs2().sqrt()

    def magnitude(self):
        """Decimal upper bound for |z| (sqrt-free)."""
        return _RAD_UP.add(self.re.magnitude(), self.im.magnitude())

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def __repr__(self):
        return f"BallComplex({self.re!r}, {self.im!r})"


def _as_complex(x, rc: RealContext):
    if isinstance(x, BallComplex):
        return x
    if isinstance(x, BallReal):
        return BallComplex.from_real(x)
    if isinstance(x, int):
        return BallComplex.from_real(rc.from_int(x))
    if isinstance(x, Fraction):
        return BallComplex.from_real(rc.from_fraction(x))
    return None


def embed_cyclotomic(x, rc: RealContext) -> BallComplex:
    """Embed a CyclotomicNumber via zeta_n -> exp(2 pi i / n)."""
    total = BallComplex.from_real(rc.zero())
    n = x.level
    for i, c in enumerate(x.coeffs):
        if c:
            total = total + BallComplex.root_of_unity(rc, i, n) * c
    return total


def to_ball(x, rc: RealContext):
    """Coerce an exact scalar (or ball) into a BallComplex."""
    from .cyclotomic import CyclotomicNumber

    if isinstance(x, BallComplex):
        return x
    if isinstance(x, BallReal):
        return BallComplex.from_real(x)
    if isinstance(x, CyclotomicNumber):
        return embed_cyclotomic(x, rc)
    if isinstance(x, (int, Fraction)):
        return BallComplex.from_real(rc.from_fraction(x))
    raise TypeError(f"cannot embed {type(x)!r}")


# ---------------------------------------------------------------------------
# rational reconstruction


def reconstruct_fraction(ball: BallReal, max_denominator: int):
    """Best bounded-denominator rational in/near the interval, or None.

    Continued-fraction (Stern-Brocot) reconstruction of the midpoint;
    accepted only if the candidate lies within the interval inflated by a
    few guard ulps.  Callers must re-validate at doubled precision before
    trusting the result.
    """
    mid = Fraction(ball.mid)
    cand = mid.limit_denominator(max_denominator)
    tol = Fraction(ball.rad) + Fraction(10) ** (-(ball.rc.digits - 2))
    if abs(cand - mid) <= tol:
        return cand
    return None
