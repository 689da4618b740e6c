import random
from fractions import Fraction

import pytest

from fracgal.cyclotomic import (
    CyclotomicNumber,
    cyclotomic_polynomial,
    euler_phi,
)

rng = random.Random(7)


def random_cyclo(n):
    return CyclotomicNumber(
        n, [Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            for _ in range(euler_phi(n))])


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    # degree is phi(n)
    for n in range(1, 40):
        assert len(cyclotomic_polynomial(n)) == euler_phi(n) + 1


def test_euler_phi():
    vals = {1: 1, 2: 1, 3: 2, 4: 2, 5: 4, 6: 2, 8: 4, 9: 6, 12: 4, 23: 22}
    for n, p in vals.items():
        assert euler_phi(n) == p


def test_roots_of_unity():
    for n in [1, 2, 3, 4, 5, 6, 8, 12]:
        z = CyclotomicNumber.zeta_pow(n, 1)
        assert (z ** n) == 1
        for k in range(1, n):
            assert (z ** k) != 1 or n == 1
        # sum of all n-th roots of unity is 0 for n > 1
        if n > 1:
            total = CyclotomicNumber.zero(n)
            for k in range(n):
                total = total + CyclotomicNumber.zeta_pow(n, k)
            assert total.is_zero()


def test_ring_axioms_random():
    for n in [3, 4, 5, 6, 8, 12]:
        for _ in range(20):
            a, b, c = random_cyclo(n), random_cyclo(n), random_cyclo(n)
            assert (a + b) * c == a * c + b * c
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)


def test_inverse():
    for n in [3, 4, 5, 7, 8, 12]:
        for _ in range(10):
            a = random_cyclo(n)
            if a.is_zero():
                continue
            assert a * a.inverse() == 1
    with pytest.raises(ZeroDivisionError):
        CyclotomicNumber.zero(5).inverse()


def test_lift_and_mixed_levels():
    z3 = CyclotomicNumber.zeta_pow(3, 1)
    z6 = CyclotomicNumber.zeta_pow(6, 1)
    # zeta_3 = zeta_6^2
    assert z3.lift(6) == z6 * z6
    # mixed arithmetic lifts to lcm
    z4 = CyclotomicNumber.zeta_pow(4, 1)
    w = z3 * z4
    assert w.level == 12
    assert w ** 12 == 1
    assert (w ** 6) != 1


def test_galois_and_conjugation():
    z5 = CyclotomicNumber.zeta_pow(5, 1)
    assert z5.galois(2) == z5 ** 2
    assert z5.conjugate() == z5 ** 4
    a = random_cyclo(5)
    b = random_cyclo(5)
    assert (a * b).galois(3) == a.galois(3) * b.galois(3)
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    # conjugation is an involution
    assert a.conjugate().conjugate() == a


def test_rationality():
    z = CyclotomicNumber.zeta_pow(4, 1)
    assert not z.is_rational()
    assert (z * z).is_rational()
    assert (z * z).as_fraction() == -1
    three = CyclotomicNumber.from_rational(Fraction(3, 2), 8)
    assert three.as_fraction() == Fraction(3, 2)


def test_quadratic_gauss_sum():
    # (sum over a of legendre(a|5) zeta_5^a)^2 = 5
    z = CyclotomicNumber.zeta_pow(5, 1)
    squares = {a * a % 5 for a in range(1, 5)}
    s = CyclotomicNumber.zero(5)
    for a in range(1, 5):
        term = z ** a
        s = s + (term if a in squares else -term)
    assert (s * s).as_fraction() == 5
