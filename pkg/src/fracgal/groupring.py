"""Group rings F[G] for finite abelian G: elements, idempotents, determinants.

Coefficients may be Fractions/ints (Q), CyclotomicNumbers, or ball reals /
complexes (duck-typed; anything supporting ring arithmetic works).  Exact
coefficients stay exact through every operation.
"""

from __future__ import annotations

from fractions import Fraction
import itertools

from .abgroup import FiniteAbelianGroup, GroupCharacter, enumerate_characters
from .cyclotomic import CyclotomicNumber
from .errors import DomainError, EmptyMorphismError, InvalidRankAssignment


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, CyclotomicNumber))


def _scalar_is_zero(x) -> bool:
    if isinstance(x, CyclotomicNumber):
        return x.is_zero()
    if isinstance(x, (int, Fraction)):
        return x == 0
    return False  # balls are never dropped


class GroupRingElement:
    """Element of F[G], a coefficient map from group elements to scalars."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteAbelianGroup, coeffs=None):
        self.group = group
        self.coeffs = {}
        if coeffs:
            for g, c in coeffs.items():
                if not _scalar_is_zero(c):
                    self.coeffs[tuple(g)] = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(group):
        return GroupRingElement(group)

    @staticmethod
    def one(group):
        return GroupRingElement(group, {group.identity(): Fraction(1)})

    @staticmethod
    def from_element(group, g, scalar=Fraction(1)):
        return GroupRingElement(group, {tuple(g): scalar})

    @staticmethod
    def from_scalar(group, scalar):
        return GroupRingElement(group, {group.identity(): scalar})

    # -- basic structure ----------------------------------------------------

    def coefficient(self, g):
        return self.coeffs.get(tuple(g), Fraction(0))

    def support(self):
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return all(_scalar_is_zero(c) for c in self.coeffs.values())

    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs.values())

    def is_rational(self) -> bool:
        for c in self.coeffs.values():
            if isinstance(c, CyclotomicNumber):
                if not c.is_rational():
                    return False
            elif not isinstance(c, (int, Fraction)):
                return False
        return True

    def rational_coefficient(self, g) -> Fraction:
        c = self.coefficient(g)
        if isinstance(c, CyclotomicNumber):
            return c.as_fraction()
        return Fraction(c)

    def to_rational(self) -> "GroupRingElement":
        if not self.is_rational():
            raise DomainError("element has irrational coefficients")
        return GroupRingElement(
            self.group,
            {g: self.rational_coefficient(g) for g in self.coeffs})

    def coefficient_vector(self):
        """Rational coefficients in the group's element order."""
        return [self.rational_coefficient(g) for g in self.group.elements()]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out[g] + c if g in out else c
        return GroupRingElement(self.group, out)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.group,
                                {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        G = self.group
        out = {}
        for g, c in self.coeffs.items():
            for h, d in other.coeffs.items():
                k = G.op(g, h)
                p = c * d
                out[k] = out[k] + p if k in out else p
        return GroupRingElement(G, out)

    __rmul__ = __mul__

    def scale(self, scalar):
        return GroupRingElement(self.group,
                                {g: c * scalar for g, c in self.coeffs.items()})

    def __pow__(self, k: int):
        result = GroupRingElement.one(self.group)
        base = self
        if k < 0:
            raise ValueError("negative powers not supported")
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, GroupRingElement):
            if other.group != self.group:
                raise DomainError("group mismatch")
            return other
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return GroupRingElement.from_scalar(self.group, other)
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        for g in keys:
            a = self.coeffs.get(g, Fraction(0))
            b = other.coeffs.get(g, Fraction(0))
            if isinstance(a, CyclotomicNumber) or isinstance(b, CyclotomicNumber):
                a = a if isinstance(a, CyclotomicNumber) else CyclotomicNumber.from_rational(a)
                b = b if isinstance(b, CyclotomicNumber) else CyclotomicNumber.from_rational(b)
            if a != b:
                return False
        return True

    def __hash__(self):
        return hash((self.group, tuple(sorted(self.coeffs.items(),
                                              key=lambda kv: kv[0]))))

    # -- G-structure ---------------------------------------------------------

    def antipode(self) -> "GroupRingElement":
        """g -> g^(-1) on the group-element basis."""
        G = self.group
        return GroupRingElement(G, {G.inv(g): c for g, c in self.coeffs.items()})

    def galois_coeffs(self, a: int) -> "GroupRingElement":
        """Apply zeta -> zeta^a to every (cyclotomic) coefficient."""
        out = {}
        for g, c in self.coeffs.items():
            out[g] = c.galois(a) if isinstance(c, CyclotomicNumber) else c
        return GroupRingElement(self.group, out)

    def conjugate_coeffs(self) -> "GroupRingElement":
        out = {}
        for g, c in self.coeffs.items():
            if isinstance(c, CyclotomicNumber):
                out[g] = c.conjugate()
            elif hasattr(c, "conjugate") and not isinstance(c, (int, Fraction)):
                out[g] = c.conjugate()
            else:
                out[g] = c
        return GroupRingElement(self.group, out)

    def char_eval(self, chi: GroupCharacter) -> CyclotomicNumber:
        """chi extended linearly to F[G] (exact coefficients only)."""
        total = CyclotomicNumber.zero(chi.group.exponent)
        for g, c in self.coeffs.items():
            if isinstance(c, CyclotomicNumber):
                total = total + c * chi(g)
            else:
                total = total + chi(g) * Fraction(c)
        return total

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for g in sorted(self.coeffs):
            parts.append(f"({self.coeffs[g]!r})*{g}")
        return " + ".join(parts)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        dom = "rational"
        for c in self.coeffs.values():
            if isinstance(c, CyclotomicNumber):
                dom = f"cyclotomic/{c.level}"
                break
        coeffs = {}
        for g, c in sorted(self.coeffs.items()):
            key = ",".join(str(x) for x in g)
            if isinstance(c, CyclotomicNumber):
                coeffs[key] = {"level": c.level,
                               "coeffs": [str(q) for q in c.coeffs]}
            else:
                coeffs[key] = str(Fraction(c))
        return {"group": list(self.group.invariant_factors),
                "coefficient_domain": dom,
                "coefficients": coeffs}

    @staticmethod
    def from_json_dict(data: dict) -> "GroupRingElement":
        G = FiniteAbelianGroup(data["group"])
        coeffs = {}
        for key, val in data["coefficients"].items():
            g = tuple(int(x) for x in key.split(",")) if key else ()
            if isinstance(val, dict):
                coeffs[g] = CyclotomicNumber(
                    val["level"], [Fraction(s) for s in val["coeffs"]])
            else:
                coeffs[g] = Fraction(val)
        return GroupRingElement(G, coeffs)


# ---------------------------------------------------------------------------
# idempotents


def char_idempotent(chi: GroupCharacter) -> GroupRingElement:
    """e_chi = (1/|G|) sum_g chi(g^(-1)) g, cyclotomic coefficients."""
    G = chi.group
    n = G.order
    coeffs = {}
    for g in G.elements():
        coeffs[g] = chi(G.inv(g)) * Fraction(1, n)
    return GroupRingElement(G, coeffs)


class RankAssignment:
    """Map chi -> r(chi) covering every character of G."""

    def __init__(self, group: FiniteAbelianGroup, ranks: dict):
        self.group = group
        chars = enumerate_characters(group)
        self._ranks = {}
        for chi in chars:
            if chi not in ranks:
                raise InvalidRankAssignment(
                    f"assignment missing character {chi!r}")
            r = int(ranks[chi])
            if r < 0:
                raise InvalidRankAssignment("ranks must be non-negative")
            self._ranks[chi] = r

    def rank(self, chi: GroupCharacter) -> int:
        return self._ranks[chi]

    def ranks_present(self):
        return sorted(set(self._ranks.values()))

    def characters_with_rank(self, r: int):
        return [chi for chi in enumerate_characters(self.group)
                if self._ranks[chi] == r]

    def items(self):
        return self._ranks.items()


def rank_idempotent(assignment: RankAssignment, r: int) -> GroupRingElement:
    """e_r = sum of e_chi over chi with r(chi) = r, as a rational element.

    Raises InvalidRankAssignment if the sum is not rational (the assignment
    was not constant on Galois-conjugate characters: a caller bug).
    """
    G = assignment.group
    total = GroupRingElement.zero(G)
    for chi in assignment.characters_with_rank(r):
        total = total + char_idempotent(chi)
    if not total.is_rational():
        raise InvalidRankAssignment(
            f"rank-{r} idempotent is not rational; "
            "assignment is not Galois-stable")
    return total.to_rational()


# ---------------------------------------------------------------------------
# matrices over F[G]


class GRMatrix:
    """Matrix over a group ring (rows of GroupRingElements)."""

    def __init__(self, group: FiniteAbelianGroup, rows):
        self.group = group
        self.rows = [list(row) for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for row in self.rows:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")

    @staticmethod
    def identity(group, n):
        one = GroupRingElement.one(group)
        zero = GroupRingElement.zero(group)
        return GRMatrix(group, [[one if i == j else zero for j in range(n)]
                                for i in range(n)])

    @staticmethod
    def scalar(group, n, x: GroupRingElement):
        zero = GroupRingElement.zero(group)
        return GRMatrix(group, [[x if i == j else zero for j in range(n)]
                                for i in range(n)])

    def __add__(self, other):
        return GRMatrix(self.group,
                        [[a + b for a, b in zip(r1, r2)]
                         for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return GRMatrix(self.group,
                        [[a - b for a, b in zip(r1, r2)]
                         for r1, r2 in zip(self.rows, other.rows)])

    def __mul__(self, other):
        if isinstance(other, GRMatrix):
            assert self.ncols == other.nrows
            out = []
            for i in range(self.nrows):
                row = []
                for j in range(other.ncols):
                    acc = GroupRingElement.zero(self.group)
                    for k in range(self.ncols):
                        acc = acc + self.rows[i][k] * other.rows[k][j]
                    row.append(acc)
                out.append(row)
            return GRMatrix(self.group, out)
        # scalar (group ring element or rational)
        return GRMatrix(self.group,
                        [[a * other for a in row] for row in self.rows])

    def __eq__(self, other):
        return (isinstance(other, GRMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols
                and all(a == b for r1, r2 in zip(self.rows, other.rows)
                        for a, b in zip(r1, r2)))

    def det_leibniz(self) -> GroupRingElement:
        """Determinant by the Leibniz sum (exact, any commutative scalars)."""
        assert self.nrows == self.ncols
        n = self.nrows
        total = GroupRingElement.zero(self.group)
        for perm in itertools.permutations(range(n)):
            sign = _perm_sign(perm)
            term = GroupRingElement.one(self.group)
            for i in range(n):
                term = term * self.rows[i][perm[i]]
            total = total + (term if sign > 0 else -term)
        return total

    def char_matrix(self, chi: GroupCharacter):
        """Entrywise chi-evaluation, a matrix over Q(zeta)."""
        return [[x.char_eval(chi) for x in row] for row in self.rows]

    def det_via_characters(self) -> GroupRingElement:
        """Determinant assembled from per-character scalar determinants.

        Independent route used to cross-check det_leibniz: evaluates every
        entry at each character, takes cyclotomic-field determinants, and
        recombines through the idempotents.
        """
        assert self.nrows == self.ncols
        G = self.group
        total = GroupRingElement.zero(G)
        for chi in enumerate_characters(G):
            d = _cyclo_det(self.char_matrix(chi))
            total = total + char_idempotent(chi).scale(d)
        return total


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _cyclo_det(M) -> CyclotomicNumber:
    """Gaussian elimination determinant over a cyclotomic field."""
    n = len(M)
    if n == 0:
        return CyclotomicNumber.one()
    M = [row[:] for row in M]
    det = CyclotomicNumber.one()
    for col in range(n):
        piv = None
        for i in range(col, n):
            if not M[i][col].is_zero():
                piv = i
                break
        if piv is None:
            return CyclotomicNumber.zero()
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col]
        inv = M[col][col].inverse()
        for i in range(col + 1, n):
            if not M[i][col].is_zero():
                f = M[i][col] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return det


# ---------------------------------------------------------------------------
# Det of endomorphisms of projective modules e.F[G]^n


def det_endomorphism(h: GRMatrix, idem) -> GroupRingElement:
    """Det of h on the module E.F[G]^n, via the complement (1-E).F[G]^n.

    `idem` is either a GroupRingElement idempotent e (the module is
    e.F[G]^n with e acting diagonally) or a GRMatrix idempotent E.
    Precondition (checked): h maps the module into itself, h E = E h E.
    Returns det(h E + (1 - E)).
    """
    G = h.group
    n = h.nrows
    if isinstance(idem, GroupRingElement):
        E = GRMatrix.scalar(G, n, idem)
    else:
        E = idem
    if not (E * E == E):
        raise DomainError("presentation matrix is not idempotent")
    hE = h * E
    if not (hE == E * hE):
        raise DomainError("endomorphism does not stabilize the module")
    I = GRMatrix.identity(G, n)
    return (hE + (I - E)).det_leibniz()


# ---------------------------------------------------------------------------
# the determinant functor on finitely generated Q[G]-modules


class ModulePresentation:
    """Q[G]-module presented as a diagonal idempotent slice of Q[G]^n.

    slots[i] is an exact idempotent of Q[G] (a sum of character
    idempotents); the module is the direct sum of slots[i].Q[G].
    """

    def __init__(self, group: FiniteAbelianGroup, slots):
        self.group = group
        self.slots = list(slots)
        for e in self.slots:
            if not (e * e == e):
                raise DomainError("slot is not idempotent")

    @staticmethod
    def free(group, n: int):
        return ModulePresentation(group,
                                  [GroupRingElement.one(group)] * n)

    def multiplicity(self, chi: GroupCharacter) -> int:
        # chi(e) is 1 or 0 for a sum of character idempotents
        count = 0
        for e in self.slots:
            v = e.char_eval(chi)
            if v == 1:
                count += 1
            elif not v.is_zero():
                raise DomainError("slot is not a sum of character idempotents")
        return count

    def multiplicity_vector(self) -> dict:
        return {chi: self.multiplicity(chi)
                for chi in enumerate_characters(self.group)}

    def active_indices(self, chi: GroupCharacter):
        return [i for i, e in enumerate(self.slots)
                if e.char_eval(chi) == 1]

    def idempotent_matrix(self) -> GRMatrix:
        zero = GroupRingElement.zero(self.group)
        n = len(self.slots)
        return GRMatrix(self.group,
                        [[self.slots[i] if i == j else zero
                          for j in range(n)] for i in range(n)])


def lin_decomposition(module: ModulePresentation):
    """[(r, e_r)] over the multiplicities realized by the module.

    e_r is the rational idempotent cutting out the characters of
    multiplicity r; the returned idempotents sum to 1.
    """
    mults = module.multiplicity_vector()
    by_r = {}
    for chi, m in mults.items():
        by_r.setdefault(m, []).append(chi)
    out = []
    for r in sorted(by_r):
        total = GroupRingElement.zero(module.group)
        for chi in by_r[r]:
            total = total + char_idempotent(chi)
        if not total.is_rational():
            raise InvalidRankAssignment(
                "multiplicity vector is not Galois-stable")
        out.append((r, total.to_rational()))
    return out


class LambdaMap:
    """Image of a module map under the determinant functor.

    Stores, per character chi, the determinant of the chi-isotypic block,
    i.e. the scalar by which the map acts on the corresponding rank-one
    piece of the functor image.
    """

    def __init__(self, group: FiniteAbelianGroup, char_dets: dict):
        self.group = group
        self.char_dets = char_dets

    def det(self) -> GroupRingElement:
        total = GroupRingElement.zero(self.group)
        for chi, d in self.char_dets.items():
            total = total + char_idempotent(chi).scale(d)
        return total


def apply_lin(alpha: GRMatrix, source: ModulePresentation,
              target: ModulePresentation) -> LambdaMap:
    """Determinant functor on a map alpha: source -> target.

    Requires equal multiplicity vectors (isomorphic module shapes);
    otherwise the morphism set is empty.  The chi-component acts on the
    top exterior power of the chi-isotypic part as the determinant of the
    chi-block of alpha.
    """
    G = alpha.group
    mults_s = source.multiplicity_vector()
    mults_t = target.multiplicity_vector()
    if mults_s != mults_t:
        raise EmptyMorphismError(
            "source and target have different multiplicity vectors")
    # well-definedness: alpha must map the source slice into the target slice
    Es = source.idempotent_matrix()
    Et = target.idempotent_matrix()
    aEs = alpha * Es
    if not (aEs == Et * aEs):
        raise DomainError("map does not send the source module into the target")
    dets = {}
    for chi in enumerate_characters(G):
        rows = target.active_indices(chi)
        cols = source.active_indices(chi)
        block = [[alpha.rows[i][j].char_eval(chi) for j in cols] for i in rows]
        dets[chi] = _cyclo_det(block)
    return LambdaMap(G, dets)
