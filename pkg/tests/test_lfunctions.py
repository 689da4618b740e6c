from decimal import Decimal
from fractions import Fraction

import pytest

from fracgal.errors import DomainError, HypothesisError, PrecisionError
from fracgal.fields import (
    AbelianFieldQ,
    parse_field,
    quadratic_as_abelian,
)
from fracgal.groupring import GroupRingElement
from fracgal.lfunctions import (
    LeadingTermCache,
    PlaceSet,
    leading_term_primitive,
    leading_term_ST,
    numeric_L_S,
    slope_probe_order,
    theta_element,
    vanishing_order,
)
from fracgal.quadratic import QuadraticField
from fracgal.realball import RealContext

# frozen: log((1+sqrt5)/2), log(1+sqrt2)
LOG_GOLDEN = "0.481211825059603447497758913424368423135184334385660519661018"
LOG_1_SQRT2 = "0.881373587019543025232609324979792309028160328261635410753296"


def field_qi():
    return parse_field("i").abelian


def field_sqrt5():
    return parse_field("sqrt5").abelian


def chi_of(field, predicate):
    return next(c for c in field.characters() if predicate(c))


def test_parse_field_and_galois_groups():
    F = field_qi()
    assert F.f == 4 and F.degree == 2
    F5 = field_sqrt5()
    assert F5.f == 5 and F5.degree == 2
    assert F5.is_totally_real()
    assert not field_qi().is_totally_real()
    F7 = parse_field("zeta7+").abelian
    assert F7.degree == 3 and F7.is_totally_real()
    # full cyclotomic field mod 5
    F = parse_field("5").abelian
    assert F.degree == 4 and not F.is_totally_real()


def test_field_conductor_non_minimal_presentation():
    # conductor-15 presentation of Q(sqrt 5): H = kernel of the quadratic
    # character mod 15 induced from conductor 5
    from fracgal.dirichlet import characters_mod, unit_group
    chi = next(c for c in characters_mod(15)
               if c.order == 2 and c.conductor == 5)
    H = [a for a in unit_group(15).units() if chi.value_exponent(a) == 0]
    F = AbelianFieldQ(15, H)
    assert F.degree == 2
    assert F.field_conductor() == 5
    assert F.ramified_primes() == [5]


def test_place_set_validation():
    F = field_qi()
    with pytest.raises(HypothesisError):
        PlaceSet(F, ["inf"], [5])          # missing ramified 2
    with pytest.raises(HypothesisError):
        PlaceSet(F, [2], [5])              # missing infinity
    with pytest.raises(DomainError):
        PlaceSet(F, ["inf", 2], [])        # empty T
    with pytest.raises(DomainError):
        PlaceSet(F, ["inf", 2], [2])       # S, T overlap
    with pytest.raises(DomainError):
        PlaceSet(F, ["inf", 2, 5], [5])    # overlap again
    ps = PlaceSet(F, ["inf", 2], [5])
    assert ps.S == ("inf", 2) and ps.T == (5,)


def test_ramified_prime_in_T_rejected():
    # a field where 3 ramifies: Q(sqrt -3); T containing 3 must be rejected
    F = parse_field("sqrt-3").abelian
    with pytest.raises((DomainError, HypothesisError)):
        PlaceSet(F, ["inf", 3], [3])


def test_vanishing_orders_spec_examples():
    F5 = field_sqrt5()
    triv = chi_of(F5, lambda c: c.is_trivial())
    chi5 = chi_of(F5, lambda c: not c.is_trivial())
    # chi = 1, S = {inf, 3}: need a field unramified everywhere relevant:
    # use the trivial field Q (conductor 1)
    FQ = AbelianFieldQ(1)
    t1 = FQ.characters()[0]
    assert vanishing_order(t1, ["inf", 3], FQ) == 1
    # chi_{-4}, S = {inf, 2} -> 0
    Fi = field_qi()
    chi4 = chi_of(Fi, lambda c: not c.is_trivial())
    assert vanishing_order(chi4, ["inf", 2], Fi) == 0
    # chi_5, S = {inf, 5, 11} -> 2 (11 = 1 mod 5)
    assert vanishing_order(chi5, ["inf", 5, 11], F5) == 2
    assert vanishing_order(chi5, ["inf", 5], F5) == 1
    assert vanishing_order(triv, ["inf", 5], F5) == 1


def test_leading_term_primitive_odd_and_trivial():
    Fi = field_qi()
    chi4 = chi_of(Fi, lambda c: not c.is_trivial()).primitivize()
    lt = leading_term_primitive(chi4, 40)
    assert lt.order == 0 and lt.exact == Fraction(1, 2)
    triv = AbelianFieldQ(1).characters()[0]
    lt = leading_term_primitive(triv, 40)
    assert lt.order == 0 and lt.exact == Fraction(-1, 2)
    with pytest.raises(PrecisionError):
        leading_term_primitive(chi4, 10)


def test_leading_term_primitive_even_golden_ratio():
    F5 = field_sqrt5()
    chi5 = chi_of(F5, lambda c: not c.is_trivial()).primitivize()
    lt = leading_term_primitive(chi5, 60)
    assert lt.order == 1 and lt.exact is None
    assert abs(lt.ball.re.mid - Decimal(LOG_GOLDEN)) < Decimal("1e-55")
    assert lt.ball.im.contains_zero()


def test_leading_term_primitive_even_sqrt2():
    F = parse_field("sqrt2").abelian
    chi8 = chi_of(F, lambda c: not c.is_trivial()).primitivize()
    lt = leading_term_primitive(chi8, 60)
    assert abs(lt.ball.re.mid - Decimal(LOG_1_SQRT2)) < Decimal("1e-55")


def test_leading_term_ST_spec_examples():
    # chi_{-4}, S = {inf,2}, T = {5}: exact -2
    Fi = field_qi()
    chi4 = chi_of(Fi, lambda c: not c.is_trivial())
    ps = PlaceSet(Fi, ["inf", 2], [5])
    lt = leading_term_ST(chi4, ps, 60)
    assert lt.order == 0 and lt.exact == -2
    # trivial character of Q, S = {inf, 2}, T = {3}:
    # (order 1, (-1/2) log2 (1-3) = log 2)
    FQ = AbelianFieldQ(1)
    t1 = FQ.characters()[0]
    psq = PlaceSet(FQ, ["inf", 2], [3])
    lt = leading_term_ST(t1, psq, 60)
    assert lt.order == 1 and lt.exact is None
    two = RealContext(60).from_int(2)
    assert (lt.ball.re - two.ln()).contains_zero()
    # chi_5, S = {inf,5}, T = {3}: order 1, 4 log((1+sqrt5)/2)
    F5 = field_sqrt5()
    chi5 = chi_of(F5, lambda c: not c.is_trivial())
    ps5 = PlaceSet(F5, ["inf", 5], [3])
    lt = leading_term_ST(chi5, ps5, 60)
    assert lt.order == 1
    quarter = lt.ball.re * Fraction(1, 4)
    assert abs(quarter.mid - Decimal(LOG_GOLDEN)) < Decimal("1e-50")


def test_theta_element_qi():
    # L = Q(i), S = {inf,2}, T = {5}: theta = (2 log 2) e_1 + (-2) e_chi
    Fi = field_qi()
    ps = PlaceSet(Fi, ["inf", 2], [5])
    th = theta_element(Fi, ps, 60)
    assert th.orders == [1, 0]
    e0theta = th.rank0_exact()
    # -2 e_chi = -2 (1 - sigma)/2 = -1 + sigma
    G = Fi.galois_group
    expected = GroupRingElement(G, {(0,): Fraction(-1), (1,): Fraction(1)})
    assert e0theta == expected
    # numeric coefficients are real and match 2log2 e1 - 2 e_chi
    num = th.numeric_group_ring()
    rc = RealContext(60)
    log2 = rc.from_int(2).ln()
    # coefficient at identity: (2log2 - 2)/2, at sigma: (2log2 + 2)/2
    c0 = num.coefficient((0,))
    c1 = num.coefficient((1,))
    assert ((c0 - log2) + 1).contains_zero()
    assert ((c1 - log2) - 1).contains_zero()


def test_theta_element_sqrt5_rank0_empty():
    F5 = field_sqrt5()
    ps = PlaceSet(F5, ["inf", 5], [3])
    th = theta_element(F5, ps, 50)
    assert th.orders == [1, 1]
    assert th.rank0_exact().is_zero()
    assert th.rank_idempotent(1) == GroupRingElement.one(F5.galois_group)


def test_theta_conjugation_symmetry():
    # quartic field mod 5: coefficients at chi and conj(chi) are conjugate,
    # so group-element coefficients are real
    F = parse_field("5").abelian
    ps = PlaceSet(F, ["inf", 5], [3])
    th = theta_element(F, ps, 45)
    for g, z in th.numeric_coefficients().items():
        assert z.im.contains_zero()


def test_numeric_vs_exact_rank0_40_digits():
    # the Hurwitz-zeta numeric route reproduces the exact -B_1 value
    Fi = field_qi()
    chi4 = chi_of(Fi, lambda c: not c.is_trivial())
    rc = RealContext(60)
    L0 = numeric_L_S(chi4, ["inf", 2], Fi, 0, rc)
    assert L0.im.contains_zero()
    assert abs(L0.re.mid - Decimal("0.5")) < Decimal("1e-40")


def test_slope_probe():
    Fi = field_qi()
    chi4 = chi_of(Fi, lambda c: not c.is_trivial())
    s = slope_probe_order(chi4, ["inf", 2], Fi, digits=50)
    assert abs(s - 0) < Fraction(1, 10)
    F5 = field_sqrt5()
    chi5 = chi_of(F5, lambda c: not c.is_trivial())
    s = slope_probe_order(chi5, ["inf", 5], F5, digits=50)
    assert abs(s - 1) < Fraction(1, 8)
    s = slope_probe_order(chi5, ["inf", 5, 11], F5, digits=50)
    assert abs(s - 2) < Fraction(1, 4)


def test_precision_stability_60_vs_120():
    F5 = field_sqrt5()
    ps = PlaceSet(F5, ["inf", 5], [3])
    lo = theta_element(F5, ps, 60)
    hi = theta_element(F5, ps, 120)
    for g in F5.galois_group.elements():
        a = lo.numeric_coefficients()[g]
        b = hi.numeric_coefficients()[g]
        assert abs(a.re.mid - b.re.mid) < Decimal("1e-50")


def test_leading_term_cache_round_trip(tmp_path):
    Fi = field_qi()
    chi4 = chi_of(Fi, lambda c: not c.is_trivial())
    ps = PlaceSet(Fi, ["inf", 2], [5])
    cache = LeadingTermCache(str(tmp_path))
    lt1 = leading_term_ST(chi4, ps, 45, cache=cache)
    lt2 = leading_term_ST(chi4, ps, 45, cache=cache)
    assert lt2.ball.re.mid == lt1.ball.re.mid
    assert lt2.ball.re.rad == lt1.ball.re.rad
    assert lt2.exact == lt1.exact and lt2.order == lt1.order
