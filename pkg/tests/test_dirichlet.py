from fractions import Fraction
from math import gcd

import pytest

from fracgal.cyclotomic import CyclotomicNumber, euler_phi
from fracgal.errors import DomainError
from fracgal.dirichlet import (
    bernoulli_b1,
    character_label,
    characters_mod,
    galois_orbit,
    unit_group,
)


def quadratic_char(f):
    """The (unique) real primitive quadratic character of small modulus f."""
    cands = [c for c in characters_mod(f)
             if c.order == 2 and c.is_primitive()]
    assert len(cands) == 1, f
    return cands[0]


def test_unit_group_structures():
    assert unit_group(1).group.invariant_factors == ()
    assert unit_group(4).group.invariant_factors == (2,)
    assert unit_group(5).group.invariant_factors == (4,)
    assert unit_group(8).group.invariant_factors == (2, 2)
    assert unit_group(15).group.invariant_factors == (2, 4)
    assert unit_group(16).group.invariant_factors == (2, 4)
    assert unit_group(24).group.invariant_factors == (2, 2, 2)
    assert unit_group(23).group.invariant_factors == (22,)


def test_to_tuple_is_homomorphism():
    for f in [5, 8, 12, 15, 21, 24]:
        U = unit_group(f)
        units = U.units()
        for a in units[:8]:
            for b in units[:8]:
                ta, tb = U.to_tuple(a), U.to_tuple(b)
                assert U.group.op(ta, tb) == U.to_tuple(a * b % f)


def test_characters_mod_1():
    chars = characters_mod(1)
    assert len(chars) == 1
    chi = chars[0]
    assert chi.is_trivial() and chi.conductor == 1 and chi.is_even()


def test_characters_mod_4():
    chars = characters_mod(4)
    assert len(chars) == 2
    triv = next(c for c in chars if c.is_trivial())
    chi4 = next(c for c in chars if not c.is_trivial())
    assert triv.conductor == 1
    assert chi4.conductor == 4 and chi4.is_odd() and chi4.is_primitive()
    assert chi4(3) == -1 and chi4(1) == 1 and chi4(2) is None


def test_characters_mod_5():
    chars = characters_mod(5)
    assert len(chars) == 4
    conductors = sorted(c.conductor for c in chars)
    assert conductors == [1, 5, 5, 5]
    quad = [c for c in chars if c.order == 2]
    assert len(quad) == 1 and quad[0].is_even()
    quartic = [c for c in chars if c.order == 4]
    assert len(quartic) == 2 and all(c.is_odd() for c in quartic)


def test_character_labels():
    chars = characters_mod(5)
    labels = [character_label(c) for c in chars]
    assert labels == ["5.0", "5.1", "5.2", "5.3"]


def test_orthogonality():
    for f in range(1, 25):
        chars = characters_mod(f)
        phi = euler_phi(f)
        for chi in chars:
            for psi in chars:
                total = CyclotomicNumber.zero(1)
                for a in range(1, f + 1):
                    va = chi(a)
                    vb = psi(a)
                    if va is not None and vb is not None:
                        total = total + va * vb.conjugate()
                expected = phi if chi == psi else 0
                assert total == expected, (f, chi, psi)


def test_conductor_vs_primitivize():
    # induced characters recover their primitive counterparts
    for f in [8, 9, 12, 15]:
        for chi in characters_mod(f):
            chi0 = chi.primitivize()
            assert chi0.is_primitive()
            assert chi0.conductor == chi.conductor
            for a in range(1, f + 1):
                if gcd(a, f) == 1:
                    assert Fraction(chi.value_exponent(a), chi.level) % 1 == \
                        Fraction(chi0.value_exponent(a), chi0.level) % 1


def test_galois_orbits():
    # quadratic characters are rational-valued: singleton orbits
    chi = quadratic_char(5)
    assert galois_orbit(chi, 3) == [chi]
    assert galois_orbit(chi, "rational") == [chi]
    # quartic mod 5: conjugation swaps the two quartic characters
    quartic = [c for c in characters_mod(5) if c.order == 4]
    orb = galois_orbit(quartic[0], "rational")
    assert sorted(orb, key=lambda c: c.gchar.exponents) == \
        sorted(quartic, key=lambda c: c.gchar.exponents)
    # 5-adic orbit: 5 = 1 mod 4 fails, use the character mod 5 with p = 5:
    # order 4, 5 = 1 mod 4, singleton orbit {chi}
    assert galois_orbit(quartic[0], 5) == [quartic[0]]
    # 3-adic orbit: 3 generates (Z/4)^x, so the orbit has both quartics
    orb3 = galois_orbit(quartic[0], 3)
    assert len(orb3) == 2
    with pytest.raises(DomainError):
        galois_orbit(quartic[0], 2)


def test_bernoulli_b1_small_values():
    chi3 = quadratic_char(3)
    assert chi3.is_odd()
    assert bernoulli_b1(chi3) == Fraction(-1, 3)
    chi4 = quadratic_char(4)
    assert bernoulli_b1(chi4) == Fraction(-1, 2)
    chi5 = quadratic_char(5)
    assert chi5.is_even()
    assert bernoulli_b1(chi5).is_zero()


def test_bernoulli_b1_quartic_mod5():
    quartic = [c for c in characters_mod(5) if c.order == 4]
    vals = [bernoulli_b1(c) for c in quartic]
    # values are (-3 -+ i)/5; conjugate characters give conjugate values
    assert vals[0].conjugate() == vals[1]
    prod = vals[0] * vals[1]
    assert prod.as_fraction() == Fraction(10, 25)  # |(-3+i)/5|^2 = 2/5


def test_bernoulli_b1_rejects_bad_input():
    with pytest.raises(DomainError):
        bernoulli_b1(characters_mod(5)[0])  # trivial
    imprim = [c for c in characters_mod(12) if not c.is_primitive()
              and not c.is_trivial()]
    with pytest.raises(DomainError):
        bernoulli_b1(imprim[0])


def test_b1_conjugation_and_parity_sweep():
    # conductors up to 40: conjugation symmetry and parity/vanishing
    for f in range(3, 41):
        for chi in characters_mod(f):
            if not chi.is_primitive() or chi.is_trivial():
                continue
            b = bernoulli_b1(chi)
            assert bernoulli_b1(chi.conjugate()) == b.conjugate()
            assert b.is_zero() == chi.is_even()
