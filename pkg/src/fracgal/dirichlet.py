"""Dirichlet characters mod f: conductors, parity, Galois orbits, B_{1,chi}.

The unit group (Z/f)^x is built from an explicit generator decomposition
(brute-force order search per prime-power factor, f at desk scale) and
converted to invariant-factor form so characters are plain GroupCharacters.
The class of a prime p maps to Frob_p (arithmetic Frobenius convention),
so chi(Frob_p) = chi(p) literally.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .abgroup import FiniteAbelianGroup, GroupCharacter
from .cyclotomic import CyclotomicNumber, euler_phi
from .errors import DomainError
from .intlinalg import abelian_invariants


def factorize(n: int):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            out.append((p, a))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def crt_lift(residues, moduli):
    """x mod prod(moduli) with x = residues[i] mod moduli[i]."""
    x, m = 0, 1
    for r, mod in zip(residues, moduli):
        g, u, _ = _xgcd(m, mod)
        assert g == 1
        x = (x + (r - x) * u % mod * m) % (m * mod)
        m *= mod
    return x


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _primitive_root_mod_pk(p: int, k: int) -> int:
    """Primitive root mod p^k for odd prime p."""
    phi = p - 1
    fac = [q for q, _ in factorize(phi)]
    g = None
    for cand in range(2, p):
        if all(pow(cand, phi // q, p) != 1 for q in fac):
            g = cand
            break
    assert g is not None
    if k == 1:
        return g
    # lift: g works mod p^k unless g^(p-1) = 1 mod p^2
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


class UnitGroupModF:
    """(Z/f)^x with generator decomposition and invariant-factor form."""

    def __init__(self, f: int):
        if f < 1:
            raise DomainError("modulus must be >= 1")
        self.f = f
        gens = []   # (lifted generator mod f, order)
        for p, a in factorize(f):
            q = p ** a
            others = f // q
            if p == 2:
                if a == 2:
                    gens.append((self._lift(q - 1, q, others), 2))
                elif a >= 3:
                    gens.append((self._lift(q - 1, q, others), 2))
                    gens.append((self._lift(5, q, others), 2 ** (a - 2)))
            else:
                g = _primitive_root_mod_pk(p, a)
                gens.append((self._lift(g, q, others), euler_phi(q)))
        self.raw_gens = gens
        # discrete-log tables per raw generator block
        self._dlog_table = {}
        self._build_dlog()
        # invariant-factor form via SNF of the diagonal order matrix
        k = len(gens)
        diag = [[gens[i][1] if i == j else 0 for j in range(k)]
                for i in range(k)]
        invs, proj = abelian_invariants(diag, k)
        invs = [d for d in invs if d != 1]
        self.group = FiniteAbelianGroup(invs)
        self._proj = proj

    def _lift(self, r: int, q: int, others: int) -> int:
        if others == 1:
            return r % self.f
        return crt_lift([r, 1], [q, others])

    def _build_dlog(self):
        f = self.f
        # enumerate all unit exponent vectors once; f is desk scale
        table = {}
        orders = [o for _, o in self.raw_gens]

        def rec(i, acc, vec):
            if i == len(self.raw_gens):
                table[acc] = tuple(vec)
                return
            g, o = self.raw_gens[i]
            cur = acc
            for e in range(o):
                rec(i + 1, cur, vec + [e])
                cur = cur * g % f
        rec(0, 1 % f, [])
        assert len(table) == euler_phi(f)
        self._dlog_table = table

    def to_tuple(self, a: int):
        """Image of a unit in the invariant-factor group."""
        a %= self.f
        if self.f == 1:
            return ()
        if gcd(a, self.f) != 1:
            raise DomainError(f"{a} is not a unit mod {self.f}")
        raw = self._dlog_table[a]
        t = self._proj(list(raw))
        return tuple(x % d for x, d in zip(t, self.group.invariant_factors))

    def units(self):
        return sorted(self._dlog_table)


@lru_cache(maxsize=None)
def unit_group(f: int) -> UnitGroupModF:
    return UnitGroupModF(f)


class DirichletCharacter:
    """Character of (Z/f)^x, tagged with conductor and parity."""

    def __init__(self, modulus: int, gchar: GroupCharacter):
        self.modulus = modulus
        self.ugroup = unit_group(modulus)
        if gchar.group != self.ugroup.group:
            raise DomainError("character group mismatch")
        self.gchar = gchar
        self._conductor = None

    # -- values --------------------------------------------------------------

    def value_exponent(self, a: int):
        """k with chi(a) = zeta_e^k (e the unit-group exponent), or None."""
        a %= self.modulus
        if self.modulus > 1 and gcd(a, self.modulus) != 1:
            return None
        return self.gchar.value_exponent(self.ugroup.to_tuple(a))

    def __call__(self, a: int):
        k = self.value_exponent(a)
        if k is None:
            return None
        return CyclotomicNumber.zeta_pow(self.level, k)

    @property
    def level(self) -> int:
        return self.ugroup.group.exponent

    @property
    def order(self) -> int:
        return self.gchar.order

    def is_trivial(self) -> bool:
        return self.gchar.is_trivial()

    # -- parity / conductor ---------------------------------------------------

    def is_even(self) -> bool:
        k = self.value_exponent(self.modulus - 1)  # chi(-1)
        return k == 0

    def is_odd(self) -> bool:
        return not self.is_even()

    @property
    def conductor(self) -> int:
        if self._conductor is None:
            f = self.modulus
            for d in sorted(_divisors(f)):
                ok = all(self.value_exponent(a) == 0
                         for a in self.ugroup.units()
                         if (a - 1) % d == 0)
                if ok:
                    self._conductor = d
                    break
        return self._conductor

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitivize(self) -> "DirichletCharacter":
        """The primitive character of conductor f_chi inducing this one."""
        fc = self.conductor
        if fc == self.modulus:
            return self
        U = unit_group(fc)
        e_old = self.level
        e_new = U.group.exponent
        exps = []
        for gen_idx, d in enumerate(U.group.invariant_factors):
            # generator of the new group as a residue: find a preimage unit
            gen_tuple = tuple(1 if i == gen_idx else 0
                              for i in range(len(U.group.invariant_factors)))
            b = next(a for a in U.units() if U.to_tuple(a) == gen_tuple)
            a = _coprime_lift(b, fc, self.modulus)
            v = self.value_exponent(a)
            # zeta_{e_old}^v = zeta_{e_new}^{v'}; the order divides e_new
            vp = Fraction(v, e_old) * e_new
            if vp.denominator != 1:
                raise DomainError("value outside the target cyclotomic level")
            # solve t * (e_new/d) = v' mod e_new
            t = Fraction(int(vp) % e_new, e_new // d)
            if t.denominator != 1:
                raise DomainError("inconsistent generator order")
            exps.append(int(t) % d)
        out = DirichletCharacter(fc, GroupCharacter(U.group, exps))
        # safety: the induced values must agree on units coprime to both
        for a in range(1, min(self.modulus, 50) + 1):
            if gcd(a, self.modulus) == 1:
                va = self.value_exponent(a)
                vb = out.value_exponent(a % fc)
                assert Fraction(va, e_old) % 1 == Fraction(vb, e_new) % 1
        return out

    # -- structure -------------------------------------------------------------

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, self.gchar.conjugate())

    def power(self, k: int) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, self.gchar.power(k))

    def __eq__(self, other):
        return (isinstance(other, DirichletCharacter)
                and self.modulus == other.modulus
                and self.gchar.exponents == other.gchar.exponents)

    def __hash__(self):
        return hash((self.modulus, self.gchar.exponents))

    def __repr__(self):
        par = "even" if self.is_even() else "odd"
        return (f"DirichletCharacter(mod {self.modulus}, "
                f"exps {list(self.gchar.exponents)}, {par}, "
                f"conductor {self.conductor})")


def _divisors(n: int):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _coprime_lift(b: int, fc: int, f: int) -> int:
    """Some a = b (mod fc) with gcd(a, f) = 1."""
    a = b % fc
    if a == 0:
        a = fc
    while gcd(a, f) != 1:
        a += fc
    return a


def characters_mod(f: int):
    """All phi(f) characters mod f, deterministic lexicographic order."""
    U = unit_group(f)
    import itertools
    out = []
    for exps in itertools.product(*(range(d)
                                    for d in U.group.invariant_factors)):
        out.append(DirichletCharacter(f, GroupCharacter(U.group, exps)))
    return out


def character_label(chi: DirichletCharacter) -> str:
    """Label "f.k", k the index in the deterministic enumeration."""
    for k, c in enumerate(characters_mod(chi.modulus)):
        if c == chi:
            return f"{chi.modulus}.{k}"
    raise DomainError("character not found in its own enumeration")


def galois_orbit(chi: DirichletCharacter, p) -> list:
    """Orbit of chi under Galois: p-adic (Frobenius powers) or "rational".

    For a prime p not dividing order(chi), the orbit is {chi^(p^j)};
    for "rational", the orbit under all of Gal(Qbar/Q): {chi^k, gcd(k, d)=1}.
    """
    d = chi.order
    if d == 1:
        return [chi]
    if p == "rational":
        ks = [k for k in range(1, d) if gcd(k, d) == 1]
    else:
        p = int(p)
        if d % p == 0:
            raise DomainError("p must not divide the order of chi")
        ks = []
        k = 1
        while True:
            ks.append(k)
            k = k * p % d
            if k == 1:
                break
    orbit = {chi.power(k) for k in ks}
    return sorted(orbit, key=lambda c: c.gchar.exponents)


def bernoulli_b1(chi: DirichletCharacter) -> CyclotomicNumber:
    """B_{1,chi} = (1/f) sum_a chi(a) a for primitive nontrivial chi."""
    if chi.is_trivial():
        raise DomainError("B_{1,chi} requires a nontrivial character")
    if not chi.is_primitive():
        raise DomainError("character must be primitive; primitivize first")
    f = chi.modulus
    total = CyclotomicNumber.zero(chi.level)
    for a in range(1, f + 1):
        v = chi(a)
        if v is not None:
            total = total + v * Fraction(a)
    return total * Fraction(1, f)
