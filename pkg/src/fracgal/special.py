"""Special values: Bernoulli numbers, log-Gamma, Hurwitz zeta.

log-Gamma at positive rationals uses the Stirling series after shifting the
argument up (real part >= 32, more at high precision); the truncation error
is the first omitted term, tracked explicitly in the ball radius.  Hurwitz
zeta uses Euler-Maclaurin for real s near 0 and doubles as the independent
numeric oracle for L-values.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import PrecisionError
from .realball import BallReal, RealContext, frac_to_dec_up, rad_add, rad_mul

# zeta(0) and zeta'(0); standard analysis, used on the trivial-character path
ZETA_AT_0 = Fraction(-1, 2)
ZETA_PRIME_AT_0_IS_MINUS_HALF_LN_2PI = True

_bernoulli_cache = [Fraction(1), Fraction(-1, 2)]


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2 (only even indices matter downstream)."""
    while len(_bernoulli_cache) <= n:
        m = len(_bernoulli_cache)
        if m % 2 == 1:
            _bernoulli_cache.append(Fraction(0))
            continue
        total = Fraction(0)
        for k in range(m):
            total += comb(m + 1, k) * _bernoulli_cache[k]
        _bernoulli_cache.append(-total / (m + 1))
    return _bernoulli_cache[n]


def log_gamma_frac(q, rc: RealContext) -> BallReal:
    """log Gamma(q) for a positive rational q, as a ball."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log_gamma_frac needs a positive argument")
    digits = rc.digits
    # e^(-2 pi z) floor of the Stirling error: shift beyond it with margin
    z_target = max(32, (56 * (digits + 8)) // 100 + 2)
    m = 0
    if q < z_target:
        m = int(z_target - q) + 1
    z = q + m
    zb = rc.from_fraction(z)
    ln_z = zb.ln()
    # (z - 1/2) ln z - z + (1/2) ln 2 pi
    total = (zb - Fraction(1, 2)) * ln_z - zb + rc.ln2pi() * Fraction(1, 2)
    # sum B_2n / (2n (2n-1) z^(2n-1))
    tol = Fraction(10) ** (-(digits + rc.GUARD - 2))
    z_pow = Fraction(1) / z  # z^{-(2n-1)} running value, exact rational
    z2 = Fraction(1) / (z * z)
    n = 1
    while True:
        term = bernoulli(2 * n) / (2 * n * (2 * n - 1)) * z_pow
        total = total + rc.from_fraction(term)
        nxt = abs(bernoulli(2 * n + 2) / ((2 * n + 2) * (2 * n + 1))
                  * z_pow * z2)
        if nxt < tol:
            # remainder is bounded by the first omitted term (real z > 0)
            total = BallReal(total.rc, total.mid,
                             rad_add(total.rad,
                                     rad_mul(frac_to_dec_up(nxt), Decimal(2)),
                                     total.rc._ulp(total.mid)))
            break
        z_pow *= z2
        n += 1
        if n > 4000:
            raise PrecisionError("Stirling series failed to converge")
    # undo the shift: log Gamma(q) = log Gamma(q + m) - sum log(q + j)
    for j in range(m):
        total = total - rc.from_fraction(q + j).ln()
    return total


def _pow_ball(base: BallReal, s: BallReal) -> BallReal:
    """base ** (-s) for positive base, via exp(-s ln base)."""
    return (-(s * base.ln())).exp()


def hurwitz_zeta(s, x, rc: RealContext) -> BallReal:
    """zeta(s, x) for real s (ball or exact) away from 1, x in (0, 1].

    Euler-Maclaurin with explicit remainder; valid for the s-range used
    here (|s| <= 2).  At s = 0 the analytic continuation evaluates through
    genuine cancellation of the cutoff, making this an independent check
    of closed forms like zeta(0, x) = 1/2 - x.
    """
    x = Fraction(x)
    if not 0 < x <= 1:
        raise ValueError("x must be in (0, 1]")
    if not isinstance(s, BallReal):
        s = rc.from_fraction(Fraction(s))
    if (s - 1).contains_zero():
        raise PrecisionError("hurwitz_zeta pole at s = 1")
    digits = rc.digits
    N = max(16, digits + 4)
    total = rc.zero()
    for k in range(N):
        total = total + _pow_ball(rc.from_fraction(k + x), s)
    Nx = rc.from_fraction(N + x)
    ln_Nx = Nx.ln()
    # (N+x)^(1-s) / (s-1)
    tail = ((s - 1) * (-ln_Nx)).exp() / (s - 1)
    total = total + tail
    total = total + _pow_ball(Nx, s) * Fraction(1, 2)
    # correction terms with Pochhammer factors
    poch = s  # s (s+1) ... (s + 2j - 2), running
    Nx_pow = _pow_ball(Nx, s + 1)  # (N+x)^{-s-2j+1}, running
    inv_Nx2 = rc.from_fraction(1 / (N + x) ** 2)
    tol_dec = Decimal(1).scaleb(-(digits + rc.GUARD - 2))
    j = 1
    while True:
        coeff = bernoulli(2 * j) / _factorial(2 * j)
        term = poch * Nx_pow * coeff
        total = total + term
        # next-term magnitude bound decides truncation
        poch_next = poch * (s + (2 * j - 1)) * (s + 2 * j)
        Nx_pow_next = Nx_pow * inv_Nx2
        nxt_bound = rad_mul(
            rad_mul(poch_next.magnitude(), Nx_pow_next.magnitude()),
            frac_to_dec_up(abs(bernoulli(2 * j + 2)) / _factorial(2 * j + 2)))
        if tol_dec > nxt_bound:
            total = BallReal(total.rc, total.mid,
                             rad_add(total.rad,
                                     rad_mul(nxt_bound, Decimal(2)),
                                     total.rc._ulp(total.mid)))
            break
        poch = poch_next
        Nx_pow = Nx_pow_next
        j += 1
        if j > 2 * digits + 60:
            raise PrecisionError("Euler-Maclaurin tail failed to converge")
    return total


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def digamma_frac(q, rc: RealContext) -> BallReal:
    """psi(q) for a positive rational q: Stirling derivative with shift."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("digamma_frac needs a positive argument")
    digits = rc.digits
    z_target = max(32, (56 * (digits + 8)) // 100 + 2)
    m = int(z_target - q) + 1 if q < z_target else 0
    z = q + m
    zb = rc.from_fraction(z)
    total = zb.ln() - rc.from_fraction(Fraction(1, 2 * z))
    tol = Fraction(10) ** (-(digits + rc.GUARD - 2))
    z2 = Fraction(1) / (z * z)
    z_pow = z2
    n = 1
    while True:
        term = bernoulli(2 * n) / (2 * n) * z_pow
        total = total - rc.from_fraction(term)
        nxt = abs(bernoulli(2 * n + 2) / (2 * n + 2) * z_pow * z2)
        if nxt < tol:
            total = BallReal(total.rc, total.mid,
                             rad_add(total.rad,
                                     rad_mul(frac_to_dec_up(nxt), Decimal(2)),
                                     total.rc._ulp(total.mid)))
            break
        z_pow *= z2
        n += 1
        if n > 4000:
            raise PrecisionError("digamma series failed to converge")
    # psi(q) = psi(q + m) - sum_{j<m} 1/(q + j)
    for j in range(m):
        total = total - rc.from_fraction(1 / (q + j))
    return total
