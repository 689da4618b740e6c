"""T-modified L-function leading terms at s = 0 and the theta element.

Leading-term arithmetic is a graded-value algebra: (order, coefficient)
pairs multiply by adding orders and multiplying coefficients.  Exact
cyclotomic values are kept alongside ball enclosures whenever every factor
is algebraic (odd characters, T-factors, non-vanishing Euler factors); the
rank-0 projection of theta is exact by construction.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from math import gcd

from .abgroup import enumerate_characters
from .cyclotomic import CyclotomicNumber
from .dirichlet import DirichletCharacter, bernoulli_b1
from .errors import DomainError, HypothesisError, PrecisionError
from .fields import AbelianFieldQ
from .groupring import (
    GroupRingElement,
    RankAssignment,
    char_idempotent,
    rank_idempotent,
)
from .realball import (
    BallComplex,
    BallReal,
    RealContext,
    embed_cyclotomic,
    rad_add,
)
from .special import ZETA_AT_0, hurwitz_zeta, log_gamma_frac


def validate_S(field: AbelianFieldQ, S) -> tuple:
    """Canonicalize S and enforce H1 (infinite place + ramified primes)."""
    finite = sorted({int(v) for v in S if v != "inf"})
    has_inf = any(v == "inf" for v in S)
    if not has_inf:
        raise HypothesisError("H1", "S must contain the infinite place")
    for p in finite:
        if p < 2 or any(p % q == 0 and p != q for q in range(2, p)):
            raise DomainError(f"{p} is not a prime")
    ram = field.ramified_primes()
    missing = [p for p in ram if p not in finite]
    if missing:
        raise HypothesisError(
            "H1", f"S must contain the ramified places; missing {missing}")
    return ("inf",) + tuple(finite)


class PlaceSet:
    """(S, T) data for a fixed abelian field; checks H1 and disjointness."""

    def __init__(self, field: AbelianFieldQ, S, T):
        self.field = field
        self.S = validate_S(field, S)
        T = sorted({int(t) for t in T})
        if not T:
            raise DomainError("T must be a non-empty set of primes")
        if set(T) & set(self.S[1:]):
            raise DomainError("S and T must be disjoint")
        ram = set(field.ramified_primes())
        bad = [t for t in T if t in ram]
        if bad:
            raise DomainError(
                f"primes {bad} in T are ramified in L; unsupported convention")
        self.T = tuple(T)

    def finite_S(self):
        return self.S[1:]

    def split_places(self):
        return [v for v in self.S if self.field.splits_completely(v)]

    def check_h2_h3(self, r: int):
        if len(self.S) < r + 1:
            raise HypothesisError(
                "H3", f"S must contain at least {r + 1} places, has {len(self.S)}")
        ns = len(self.split_places())
        if ns < r:
            raise HypothesisError(
                "H2", f"S needs >= {r} places that split completely in L/K; "
                f"found {ns}")

    def label(self) -> str:
        s = ",".join(str(v) for v in self.S)
        t = ",".join(str(v) for v in self.T)
        return f"S[{s}]T[{t}]"

    def __repr__(self):
        return f"PlaceSet({self.field!r}, S={list(self.S)}, T={list(self.T)})"


def vanishing_order(chi: DirichletCharacter, S, field: AbelianFieldQ) -> int:
    """Order of vanishing of L_{S}(s, chi) at s = 0 (group-theoretic)."""
    S = validate_S(field, S)
    if chi.is_trivial():
        return len(S) - 1
    chi0 = chi.primitivize()
    fchi = chi0.modulus
    r = 0
    if chi.is_even():
        r += 1
    for p in S[1:]:
        if fchi % p and chi0.value_exponent(p) == 0:
            r += 1
    return r


class LeadingTerm:
    """(order of vanishing, leading coefficient) at s = 0."""

    def __init__(self, order: int, exact, ball: BallComplex, digits: int):
        self.order = order
        self.exact = exact  # CyclotomicNumber or None
        self.ball = ball
        self.digits = digits

    def __repr__(self):
        ex = "exact" if self.exact is not None else "numeric"
        return f"LeadingTerm(order={self.order}, {ex}, {self.ball!r})"

    def to_json(self) -> dict:
        out = {"order": self.order,
               "digits": self.digits,
               "value": {"re": self.ball.re.to_json(),
                         "im": self.ball.im.to_json()}}
        if self.exact is not None:
            out["exact"] = {"level": self.exact.level,
                            "coeffs": [str(c) for c in self.exact.coeffs]}
        return out

    @staticmethod
    def from_json(data: dict, rc: RealContext) -> "LeadingTerm":
        exact = None
        if "exact" in data:
            exact = CyclotomicNumber(
                data["exact"]["level"],
                [Fraction(s) for s in data["exact"]["coeffs"]])
        ball = BallComplex(BallReal.from_json(rc, data["value"]["re"]),
                           BallReal.from_json(rc, data["value"]["im"]))
        return LeadingTerm(data["order"], exact, ball, data["digits"])


def leading_term_primitive(chi: DirichletCharacter, digits: int) -> LeadingTerm:
    """Leading term of the primitive L-function at s = 0.

    Odd chi: order 0, exact -B_{1,chi}.  Even nontrivial chi: order 1,
    numeric L'(0, chi) by the log-Gamma formula.  Trivial chi: zeta, order
    0, value -1/2.
    """
    if digits < 20:
        raise PrecisionError("need at least 20 digits of headroom")
    rc = RealContext(digits)
    if chi.is_trivial():
        if chi.modulus != 1:
            raise DomainError("primitivize the trivial character to modulus 1")
        exact = CyclotomicNumber.from_rational(ZETA_AT_0)
        return LeadingTerm(0, exact, _embed(exact, rc), digits)
    if not chi.is_primitive():
        raise DomainError("character must be primitive")
    if chi.is_odd():
        exact = -bernoulli_b1(chi)
        return LeadingTerm(0, exact, _embed(exact, rc), digits)
    # even nontrivial: L'(0, chi) = sum_a chi(a) (log Gamma(a/f)
    #                  - (1/2) log 2 pi + (a/f - 1/2) log f)
    f = chi.modulus
    log_f = rc.from_int(f).ln()
    half_ln2pi = rc.ln2pi() * Fraction(1, 2)
    total = BallComplex.from_real(rc.zero())
    for a in range(1, f + 1):
        if gcd(a, f) != 1:
            continue
        val = chi(a)
        piece = (log_gamma_frac(Fraction(a, f), rc)
                 - half_ln2pi
                 + rc.from_fraction(Fraction(a, f) - Fraction(1, 2)) * log_f)
        total = total + embed_cyclotomic(val, rc) * piece
    return LeadingTerm(1, None, total, digits)


def _embed(x: CyclotomicNumber, rc: RealContext) -> BallComplex:
    return embed_cyclotomic(x, rc)


def leading_term_ST(chi: DirichletCharacter, places: PlaceSet,
                    digits: int, cache=None) -> LeadingTerm:
    """Leading term of L_{S,T}(s, chi) at s = 0 for chi of Gal(L/Q).

    Multiplies the primitive leading term by the S-imprimitivity Euler
    factors at s = 0 (a vanishing factor raises the order by one and
    contributes log v) and the exact T-factors 1 - chi(v) v.
    """
    field = places.field
    if cache is not None:
        hit = cache.get(field, places, chi, digits)
        if hit is not None:
            return hit
    rc = RealContext(digits)
    chi0 = chi.primitivize()
    base = leading_term_primitive(chi0, digits)
    order = base.order
    exact = base.exact
    ball = base.ball
    fchi = chi0.modulus
    for p in places.finite_S():
        if fchi % p == 0:
            continue
        a = chi0(p)
        if a == 1:
            order += 1
            lp = BallComplex.from_real(rc.from_int(p).ln())
            ball = ball * lp
            exact = None
        else:
            fac = CyclotomicNumber.one() - a
            ball = ball * _embed(fac, rc)
            exact = None if exact is None else exact * fac
    for t in places.T:
        if fchi % t == 0:
            raise DomainError(f"prime {t} in T divides the conductor of chi")
        fac = CyclotomicNumber.one() - chi0(t) * Fraction(t)
        ball = ball * _embed(fac, rc)
        exact = None if exact is None else exact * fac
    out = LeadingTerm(order, exact, ball, digits)
    if cache is not None:
        cache.put(field, places, chi, digits, out)
    return out


# ---------------------------------------------------------------------------
# theta


class ThetaElement:
    """theta_{S,T} = sum over chi of L*_{S,T}(0, chi) e_{conj chi}."""

    def __init__(self, field: AbelianFieldQ, places: PlaceSet, digits: int,
                 cache=None):
        self.field = field
        self.places = places
        self.digits = digits
        self.characters = field.characters()
        self.gchars = enumerate_characters(field.galois_group)
        self.terms = [leading_term_ST(chi, places, digits, cache=cache)
                      for chi in self.characters]
        self.orders = [vanishing_order(chi, places.S, field)
                       for chi in self.characters]
        for lt, r in zip(self.terms, self.orders):
            assert lt.order == r, "analytic and group-theoretic orders differ"

    def rank_assignment(self) -> RankAssignment:
        return RankAssignment(
            self.field.galois_group,
            {g: r for g, r in zip(self.gchars, self.orders)})

    def rank_idempotent(self, r: int) -> GroupRingElement:
        return rank_idempotent(self.rank_assignment(), r)

    def leading_term(self, chi_index: int) -> LeadingTerm:
        return self.terms[chi_index]

    def rank0_exact(self) -> GroupRingElement:
        """The exact rank-0 projection e_0 theta, rational coefficients."""
        G = self.field.galois_group
        total = GroupRingElement.zero(G)
        for g, lt, r in zip(self.gchars, self.terms, self.orders):
            if r != 0:
                continue
            assert lt.exact is not None, "rank-0 term must be exact"
            total = total + char_idempotent(g.conjugate()).scale(lt.exact)
        if not total.is_rational():
            raise DomainError("rank-0 theta projection is not rational")
        return total.to_rational()

    def numeric_coefficients(self, r=None):
        """Coefficients of theta (or of e_r theta) on group elements.

        Returns {group element: BallComplex}; the imaginary parts enclose 0
        by conjugation symmetry.
        """
        rc = RealContext(self.digits)
        G = self.field.galois_group
        n = G.order
        out = {}
        for g in G.elements():
            acc = BallComplex.from_real(rc.zero())
            for gchar, lt, rr in zip(self.gchars, self.terms, self.orders):
                if r is not None and rr != r:
                    continue
                acc = acc + lt.ball * embed_cyclotomic(gchar(g), rc)
            out[g] = acc * Fraction(1, n)
        return out

    def numeric_group_ring(self, r=None) -> GroupRingElement:
        """Real-ball group-ring element for theta or e_r theta."""
        coeffs = {}
        for g, z in self.numeric_coefficients(r).items():
            if not z.im.contains_zero():
                raise PrecisionError("theta coefficient has nonreal enclosure")
            re = BallReal(z.re.rc, z.re.mid,
                          rad_add(z.re.rad, z.im.magnitude()))
            coeffs[g] = re
        return GroupRingElement(self.field.galois_group, coeffs)

    def to_json(self) -> dict:
        return {
            "field": {"conductor": self.field.f,
                      "subgroup": list(self.field.subgroup_gens)},
            "S": list(self.places.S),
            "T": list(self.places.T),
            "digits": self.digits,
            "characters": [
                {"index": k,
                 "conductor": chi.conductor,
                 "parity": "even" if chi.is_even() else "odd",
                 "vanishing_order": r,
                 "leading_term": lt.to_json()}
                for k, (chi, lt, r) in enumerate(
                    zip(self.characters, self.terms, self.orders))],
        }


def theta_element(field: AbelianFieldQ, places: PlaceSet, digits: int,
                  cache=None) -> ThetaElement:
    return ThetaElement(field, places, digits, cache=cache)


# ---------------------------------------------------------------------------
# numeric probe of L_S(s, chi) near s = 0


def numeric_L_S(chi: DirichletCharacter, S, field: AbelianFieldQ, s,
                rc: RealContext) -> BallComplex:
    """L_S(s, chi) for real s near 0 via Hurwitz zeta (independent route)."""
    S = validate_S(field, S)
    chi0 = chi.primitivize()
    f0 = chi0.modulus
    sb = s if isinstance(s, BallReal) else rc.from_fraction(Fraction(s))
    total = BallComplex.from_real(rc.zero())
    for a in range(1, f0 + 1):
        if f0 > 1 and gcd(a, f0) != 1:
            continue
        val = chi0(a)
        hz = hurwitz_zeta(sb, Fraction(a, f0), rc)
        total = total + embed_cyclotomic(val, rc) * hz
    if f0 > 1:
        # f0^(-s)
        scale = (-(sb * rc.from_int(f0).ln())).exp()
        total = total * scale
    for p in S[1:]:
        if f0 % p == 0:
            continue
        p_ms = (-(sb * rc.from_int(p).ln())).exp()
        total = total * (BallComplex.from_real(rc.from_int(1))
                         - embed_cyclotomic(chi0(p), rc)
                         * BallComplex.from_real(p_ms))
    return total


def slope_probe_order(chi: DirichletCharacter, S, field: AbelianFieldQ,
                      digits: int = 60) -> Fraction:
    """Estimate ord_{s=0} L_S(s, chi) from |L| at s = 1e-3, 1e-4."""
    rc = RealContext(digits)
    s1, s2 = Fraction(1, 1000), Fraction(1, 10000)
    L1 = numeric_L_S(chi, S, field, s1, rc).abs()
    L2 = numeric_L_S(chi, S, field, s2, rc).abs()
    if L1.contains_zero() or L2.contains_zero():
        raise PrecisionError("L-value enclosure touches zero in the probe")
    num = L1.ln() - L2.ln()
    den = rc.from_fraction(s1).ln() - rc.from_fraction(s2).ln()
    slope = num / den
    return Fraction(slope.mid)


# ---------------------------------------------------------------------------
# on-disk cache


class LeadingTermCache:
    """One plain-text file per (field, S, T, chi index, digits)."""

    def __init__(self, directory: str):
        self.dir = directory
        os.makedirs(directory, exist_ok=True)

    def _path(self, field, places, chi, digits):
        k = field.character_index(chi)
        name = (f"lt_{field.label()}_{places.label()}_chi{k}_d{digits}.json"
                .replace(",", "_"))
        return os.path.join(self.dir, name)

    def get(self, field, places, chi, digits):
        path = self._path(field, places, chi, digits)
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            data = json.load(fh)
        return LeadingTerm.from_json(data, RealContext(digits))

    def put(self, field, places, chi, digits, lt: LeadingTerm):
        path = self._path(field, places, chi, digits)
        fd, tmp = tempfile.mkstemp(dir=self.dir)
        with os.fdopen(fd, "w") as fh:
            json.dump(lt.to_json(), fh, indent=1)
        os.replace(tmp, path)
