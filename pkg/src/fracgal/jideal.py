"""The fractional Galois ideal: annihilator path and sampling path.

The primary computation is per rank component: e_r J = e_r Ann(Lambda/E)
with E the span of the Stark element (the constructive content of the
equality theorem).  The defining formula, which quantifies over a lattice
of integrally-constrained module maps, is sampled independently as a
falsification check: every sampled generator must land inside the
annihilator-path ideal, with equality of spans where the sample covers a
generating set (always, on rank-0 components).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .cyclotomic import CyclotomicNumber
from .errors import (
    ConjectureViolation,
    DomainError,
    HypothesisError,
    PrecisionError,
    ReconstructionError,
    UnsupportedFieldError,
)
from .fields import FieldDescriptor
from .groupring import GroupRingElement, char_idempotent
from .intlinalg import (
    clear_denominators,
    hnf,
    kernel_int,
    lattice_contains,
    mat_vec,
    solve_rational,
    transpose,
)
from .lfunctions import PlaceSet, theta_element
from .realball import BallComplex, RealContext, reconstruct_fraction
from .units import (
    GLattice,
    RubinLattice,
    StarkElement,
    UnitLattice,
    WedgeSpace,
    _lambda_groupring_entries,
    _solve_ball_system,
    _tx_of_representation,
    stark_element,
    xs_wedge_vectors,
)


class IdealInGroupAlgebra:
    """Z[G]-submodule of Q[G], stored as generators plus a scaled HNF."""

    def __init__(self, group, generators):
        self.group = group
        self.generators = list(generators)
        rows = []
        for y in self.generators:
            for g in group.elements():
                z = GroupRingElement.from_element(group, g) * y
                rows.append(z.coefficient_vector())
        if rows:
            scaled, den = clear_denominators(rows)
            self.lattice = hnf(scaled)
            self.den = den
        else:
            self.lattice = []
            self.den = 1

    def canonical(self):
        """(HNF rows, denominator) with the gcd content normalized away."""
        from math import gcd
        if not self.lattice:
            return [], 1
        g = self.den
        for row in self.lattice:
            for x in row:
                g = gcd(g, x)
        rows = [[x // g for x in row] for row in self.lattice]
        return rows, self.den // g

    def __eq__(self, other):
        return (isinstance(other, IdealInGroupAlgebra)
                and self.group == other.group
                and self.canonical() == other.canonical())

    def contains_element(self, y: GroupRingElement) -> bool:
        vec = [Fraction(x) * self.den for x in y.coefficient_vector()]
        if any(q.denominator != 1 for q in vec):
            return False
        return lattice_contains(self.lattice, [int(q) for q in vec])

    def contains_ideal(self, other: "IdealInGroupAlgebra") -> bool:
        return all(self.contains_element(y) for y in other.generators)

    def scale_by(self, x: GroupRingElement) -> "IdealInGroupAlgebra":
        return IdealInGroupAlgebra(self.group,
                                   [x * y for y in self.generators])

    def is_zero(self) -> bool:
        return not self.lattice

    def to_json(self) -> dict:
        return {"group": list(self.group.invariant_factors),
                "generators": [y.to_json_dict() for y in self.generators]}

    def __repr__(self):
        return f"IdealInGroupAlgebra({len(self.generators)} gens, den {self.den})"


def annihilator_of_quotient(rubin: RubinLattice,
                            eps: StarkElement) -> IdealInGroupAlgebra:
    """e_r-component of J: {y in Z[G] : y Lambda <= Z[G] eps}, projected.

    Exact integer linear algebra: for each Lambda basis vector v, the
    condition y*v in E is a lattice condition on the coefficient vector of
    y; the solution lattices are intersected via one combined kernel.
    """
    group = rubin.group
    elems = group.elements()
    if all(x == 0 for x in eps.wedge_vec):
        if rubin.basis:
            raise DomainError("degenerate: eps = 0 but Lambda is nonzero")
        return IdealInGroupAlgebra(group, [GroupRingElement.one(group)])
    E_rows = hnf(eps.zg_span_rows())
    dim = rubin.wspace.dim
    B = len(rubin.basis)
    rE = len(E_rows)
    nG = len(elems)
    # columns: y_g (nG) then z_{i,j} (B * rE)
    rows = []
    for i, v in enumerate(rubin.basis):
        moved = {g: rubin.wspace.act_group_element(g, list(v)) for g in elems}
        for k in range(dim):
            row = [Fraction(moved[g][k]) for g in elems]
            row += [Fraction(0)] * (B * rE)
            for j in range(rE):
                row[nG + i * rE + j] = Fraction(-E_rows[j][k])
            rows.append(row)
    scaled, _ = clear_denominators(rows)
    ker = kernel_int(scaled)
    y_rows = hnf([r[:nG] for r in ker])
    gens = []
    for row in y_rows:
        if not any(row):
            continue
        gens.append(GroupRingElement(
            group, {g: Fraction(c) for g, c in zip(elems, row)}))
    ann = IdealInGroupAlgebra(group, gens)
    e_r = rubin.e_r
    component = IdealInGroupAlgebra(group, [e_r * y for y in gens])
    component.ann_integral = ann
    return component


def quotient_module_data(rubin: RubinLattice, eps: StarkElement):
    """Lambda/E as (invariants, action matrices, projection) over the
    Lambda basis."""
    from .intlinalg import abelian_invariants
    B = len(rubin.basis)
    E_rows = hnf(eps.zg_span_rows())
    rel = []
    for row in E_rows:
        sol = solve_rational(transpose(rubin.basis), list(row))
        assert sol is not None and all(s.denominator == 1 for s in sol)
        rel.append([int(s) for s in sol])
    invs, proj = abelian_invariants(rel, B)
    if any(d == 0 for d in invs):
        raise DomainError("quotient is infinite (eps does not generate "
                          "a finite-index module)")
    actions = {}
    for g in rubin.group.elements():
        cols = []
        for v in rubin.basis:
            img = rubin.wspace.act_group_element(g, list(v))
            sol = solve_rational(transpose(rubin.basis), img)
            assert sol is not None and all(s.denominator == 1 for s in sol)
            cols.append([int(s) for s in sol])
        actions[g] = transpose(cols)
    return invs, actions, proj, rel


# ---------------------------------------------------------------------------
# full ideal across rank components


class FractionalIdealResult:
    def __init__(self, group):
        self.group = group
        self.components = {}     # r -> dict with e_r, ideal, rubin, eps
        self.skipped = {}        # r -> reason

    def component(self, r) -> IdealInGroupAlgebra:
        return self.components[r]["ideal"]

    def combined(self) -> IdealInGroupAlgebra:
        gens = []
        for data in self.components.values():
            gens.extend(data["ideal"].generators)
        return IdealInGroupAlgebra(self.group, gens)

    def to_json(self):
        out = {"components": {}, "skipped": dict(self.skipped)}
        for r, data in self.components.items():
            out["components"][str(r)] = data["ideal"].to_json()
        return out


def fractional_ideal(fd: FieldDescriptor, S, T, digits: int,
                     cache=None) -> FractionalIdealResult:
    """Annihilator-path J, one component per realized vanishing order.

    Components whose rank fails H2/H3 (the equality theorem's hypotheses)
    are skipped with the failing hypothesis recorded.
    """
    places = PlaceSet(fd.abelian, S, T)
    theta = theta_element(fd.abelian, places, digits, cache=cache)
    ranks = sorted(set(theta.orders))
    out = FractionalIdealResult(fd.abelian.galois_group)
    for r in ranks:
        try:
            places.check_h2_h3(r)
            eps = stark_element(fd, S, T, r, digits, cache=cache)
            ideal = annihilator_of_quotient(eps.rubin, eps)
            out.components[r] = {"e_r": eps.rubin.e_r, "ideal": ideal,
                                 "rubin": eps.rubin, "eps": eps}
        except HypothesisError as err:
            out.skipped[r] = str(err)
    return out


# ---------------------------------------------------------------------------
# sampling the defining formula


def _component_generator(wspace: WedgeSpace):
    """An element generating the e_r-part of the wedge space over Q[G]e_r."""
    target_rank = len(wspace.rubin_basis)
    from .intlinalg import rank as qrank
    # single symbols first, then doubled combinations, deterministically
    cands = [wspace.symbol_coords(wspace.group.identity(), I)
             for I in wspace.subsets]
    for extra in range(len(cands)):
        for base in _combos(cands, extra):
            rows = [wspace.apply_group_ring(
                GroupRingElement.from_element(wspace.group, g),
                wspace.er_projection(base)) for g in wspace.elems]
            if qrank(rows) == target_rank:
                return wspace.er_projection(base)
    raise DomainError("no cyclic generator found for the wedge component")


def _combos(cands, extra):
    if extra == 0:
        for c in cands:
            yield list(c)
    else:
        base = cands[extra - 1]
        for c in cands[extra:]:
            yield [a + b for a, b in zip(base, c)]


def _express_in_generator(wspace: WedgeSpace, gen, vec):
    """mu in e_r Q[G] with mu * gen = vec (coordinates)."""
    cols = [wspace.apply_group_ring(
        GroupRingElement.from_element(wspace.group, g), list(gen))
        for g in wspace.elems]
    sol = solve_rational(transpose(cols), [Fraction(x) for x in vec])
    if sol is None:
        raise DomainError("vector not in the cyclic span of the generator")
    mu = GroupRingElement(wspace.group,
                          {g: q for g, q in zip(wspace.elems, sol)})
    return wspace.e_r * mu


def _invert_in_component(ell_coeffs, e_r, group, rc):
    """w with ell * w = e_r in the component (ball group-ring arithmetic)."""
    from .units import left_mult_matrix
    elems = group.elements()
    n = len(elems)
    idx = {g: i for i, g in enumerate(elems)}
    cols = []
    for g in elems:
        # column: coefficients of ell * g
        col = [BallComplex.from_real(rc.zero()) for _ in range(2 * n)]
        for h, c in ell_coeffs.items():
            col[idx[group.op(h, g)]] = col[idx[group.op(h, g)]] + c
        # lower block: (1 - e_r) w = 0 constraint rows
        P = left_mult_matrix(group, e_r)
        for i in range(n):
            acc = rc.zero()
            row = P[i]
            delta = Fraction(1) if idx[g] == i else Fraction(0)
            colval = delta - row[idx[g]]
            col[n + i] = BallComplex.from_real(rc.from_fraction(colval))
        cols.append(col)
    target = [BallComplex.from_real(rc.zero()) for _ in range(2 * n)]
    for i, g in enumerate(elems):
        target[i] = BallComplex.from_real(
            rc.from_fraction(Fraction(e_r.rational_coefficient(g))))
    sol, _ = _solve_ball_system(cols, target, rc)
    return {g: s for g, s in zip(elems, sol)}


class SamplingReport:
    def __init__(self):
        self.per_rank = {}
        self.all_contained = True
        self.rank0_equal = None
        self.mixed_equal_direct_sum = None


def sample_definition_generators(fd: FieldDescriptor, S, T, digits: int,
                                 sample_budget: int = 8, seed: int = 20260810,
                                 annihilator: FractionalIdealResult = None,
                                 cache=None):
    """Sample theta * Det(alpha o Lambda(lambda)^(-1)) over the constraint
    lattice of alpha, per rank component; cross-check against the
    annihilator path."""
    rng = random.Random(seed)
    places = PlaceSet(fd.abelian, S, T)
    theta = theta_element(fd.abelian, places, digits, cache=cache)
    U = UnitLattice(fd, places)
    group = U.group
    ranks_assign = theta.rank_assignment()
    if annihilator is None:
        annihilator = fractional_ideal(fd, S, T, digits, cache=cache)
    report = SamplingReport()
    sampled = FractionalIdealResult(group)
    rc = RealContext(digits)
    xlat = GLattice(group, U.x_action_matrices())

    mixed_gens = []
    for r in sorted(set(theta.orders)):
        if r not in annihilator.components:
            continue
        rubin = annihilator.components[r]["rubin"]
        e_r = rubin.e_r
        wu = rubin.wspace
        wx = WedgeSpace(xlat, r, e_r)
        GU = _component_generator(wu)
        GX = _component_generator(wx)
        # constraint lattice: a with a mu_b GX in the e_r X-wedge image
        mus = [_express_in_generator(wu, GU, v) for v in rubin.basis]
        LX_rows = wx.er_image_lattice_rows()
        # parametrize a over e_r g for a Q-basis subset of {e_r g}
        basis_elts = []
        basis_cols = []
        from .intlinalg import rank as qrank
        for g in group.elements():
            cand = e_r * GroupRingElement.from_element(group, g)
            col = cand.coefficient_vector()
            if qrank(basis_cols + [col]) > len(basis_cols):
                basis_elts.append(cand)
                basis_cols.append(col)
        # C: coordinates of (e_r g_j) mu_b GX stacked over b
        C_cols = []
        for a in basis_elts:
            stacked = []
            for mu in mus:
                vec = wx.apply_group_ring(a * mu, list(GX))
                stacked.extend(vec)
            C_cols.append(stacked)
        L_rows = []
        width = len(C_cols[0])
        for row in LX_rows:
            for shift in range(len(mus)):
                big = [Fraction(0)] * width
                big[shift * len(row):(shift + 1) * len(row)] = row
                L_rows.append(big)
        from .intlinalg import rational_preimage_lattice
        H = rational_preimage_lattice(C_cols, L_rows)
        alphas = []
        for row in H:
            if any(row):
                alphas.append(_assemble(basis_elts, row))
        extra = max(0, sample_budget - len(alphas))
        for _ in range(extra):
            coeffs = [rng.randint(-3, 3) for _ in H]
            vec = [sum(c * r_[i] for c, r_ in zip(coeffs, H))
                   for i in range(len(basis_elts))]
            if any(vec):
                alphas.append(_assemble(basis_elts, vec))
        # Lambda(lambda) on the component: ell with lambda^(r)(GU) = ell GX
        if r == 0:
            ell_inv = {group.identity():
                       BallComplex.from_real(rc.from_int(1))}
            ell_inv_exact = GroupRingElement.one(group)
        else:
            lam = _lambda_groupring_entries(U, xlat, rc)
            rep = wu.solve_symbol_representation(GU)
            lam_gu = _tx_of_representation(wx, lam, rep, rc)
            cols = []
            for g in group.elements():
                col = wx.apply_group_ring(
                    GroupRingElement.from_element(group, g), list(GX))
                cols.append([BallComplex.from_real(rc.from_fraction(Fraction(x)))
                             for x in col])
            ell_vec, _ = _solve_ball_system(cols, lam_gu, rc)
            ell = {g: BallComplex.from_real(rc.zero())
                   for g in group.elements()}
            ell = {g: v for g, v in zip(group.elements(), ell_vec)}
            ell_inv = _invert_in_component(ell, e_r, group, rc)
            ell_inv_exact = None
        theta_r = theta.numeric_coefficients(r)
        gens = []
        for a in alphas:
            gen = _sampled_generator(theta_r, a, ell_inv, ell_inv_exact,
                                     theta, r, group, rc, digits)
            gens.append(gen)
        comp = IdealInGroupAlgebra(group, gens)
        sampled.components[r] = {"e_r": e_r, "ideal": comp}
        ann_comp = annihilator.components[r]["ideal"]
        contained = ann_comp.contains_ideal(comp)
        report.per_rank[r] = {
            "num_samples": len(gens),
            "contained_in_annihilator_path": contained,
            "equal_span": comp == ann_comp,
        }
        if not contained:
            report.all_contained = False
        if r == 0:
            report.rank0_equal = comp == ann_comp
        mixed_gens.extend(gens[:2])
    if mixed_gens and len(annihilator.components) == len(set(theta.orders)):
        # cross-component generator: every e_r-projection must lie back in
        # the annihilator-path ideal (the rank-decomposition property)
        mixed = sum(mixed_gens[1:], mixed_gens[0])
        ok = True
        for r, data in annihilator.components.items():
            proj = data["e_r"] * mixed
            if not annihilator.combined().contains_element(proj):
                ok = False
        report.mixed_equal_direct_sum = ok
    return sampled, report


def _assemble(basis_elts, coeffs):
    from functools import reduce
    total = None
    for c, b in zip(coeffs, basis_elts):
        piece = b.scale(Fraction(c))
        total = piece if total is None else total + piece
    return total


def _sampled_generator(theta_r, a, ell_inv, ell_inv_exact, theta, r, group,
                       rc, digits):
    """theta_r * a * ell^{-1}, reconstructed to exact rationals."""
    if ell_inv_exact is not None and all(
            lt.exact is not None for lt, rr in
            zip(theta.terms, theta.orders) if rr == r):
        # exact rank-0 path
        e0theta = theta.rank0_exact()
        return e0theta * a
    # ball product
    prod = {}
    for g in group.elements():
        prod[g] = BallComplex.from_real(rc.zero())
    for g, c in theta_r.items():
        for h, w in ell_inv.items():
            k = group.op(g, h)
            prod[k] = prod[k] + c * w
    out = {}
    for g in group.elements():
        acc = BallComplex.from_real(rc.zero())
        for h, c in a.coeffs.items():
            gh_inv = group.op(g, group.inv(h))
            acc = acc + prod[gh_inv] * Fraction(c)
        out[g] = acc
    coeffs = {}
    bound = 10 ** (digits // 4)
    for g, z in out.items():
        if not z.im.contains_zero():
            raise ReconstructionError("sampled generator not real")
        q = reconstruct_fraction(z.re, bound)
        if q is None:
            raise ReconstructionError(
                "sampled generator coefficient did not reconstruct")
        coeffs[g] = q
    return GroupRingElement(group, coeffs)


# ---------------------------------------------------------------------------
# eigencomponent principal forms


def eigencomponent_form(J: IdealInGroupAlgebra, chi, invert_g: int):
    """A principal generator of the chi-component of J over Z[1/g][chi].

    Supported when the component ring has class number one (d <= 2 always;
    d = 4 via Q(i)).  Returns (generator CyclotomicNumber, p-free of the
    inverted g)."""
    d = chi.order
    if d > 2 and d != 4:
        raise UnsupportedFieldError(
            f"component ring Z[1/g][zeta_{d}] not in the configured "
            "class-number-one list; HNF report only")
    vals = [y.char_eval(chi) for y in J.generators]
    vals = [v for v in vals if not v.is_zero()]
    if not vals:
        return CyclotomicNumber.zero(), None
    if d <= 2:
        qs = [v.as_fraction() for v in vals]
        from math import gcd
        # common denominator, then gcd of numerators
        den = 1
        for q in qs:
            den = den * q.denominator // gcd(den, q.denominator)
        nums = [int(q * den) for q in qs]
        g0 = 0
        for n_ in nums:
            g0 = gcd(g0, n_)
        gen = Fraction(g0, den)
        gen = _strip_g(gen, invert_g)
        return CyclotomicNumber.from_rational(gen), gen
    # d = 4: norm-bounded search over the Z[1/g]-lattice spanned by the values
    rows = []
    for v in vals:
        for k in range(4):
            w = v * CyclotomicNumber.zeta_pow(4, k)
            w4 = w.lift(4)
            rows.append([w4.coeffs[0], w4.coeffs[1]])
    scaled, den = clear_denominators(rows)
    H = hnf(scaled)
    # enumerate small elements x of the lattice, accept when N(x)/N(lattice)
    # is +- a power of g
    det = abs(H[0][0] * H[1][1]) if len(H) == 2 else 0
    if det == 0:
        raise DomainError("degenerate quartic component")
    best = None
    for a in range(-12, 13):
        for b in range(-12, 13):
            if a == 0 and b == 0:
                continue
            vec = [a * H[0][0] + b * H[1][0], a * H[0][1] + b * H[1][1]]
            norm = vec[0] * vec[0] + vec[1] * vec[1]
            ratio = Fraction(norm, det)
            if _is_pm_g_power(ratio, invert_g):
                best = CyclotomicNumber(
                    4, [Fraction(vec[0], den), Fraction(vec[1], den)])
                break
        if best is not None:
            break
    if best is None:
        raise UnsupportedFieldError("no principal generator found by search")
    return best, None


def _strip_g(q: Fraction, g: int) -> Fraction:
    from math import gcd
    for p in set(_prime_factors(g)):
        while q.numerator % p == 0:
            q = q / p
        while q.denominator % p == 0:
            q = q * p
    return abs(q)


def _prime_factors(n: int):
    out = []
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _is_pm_g_power(q: Fraction, g: int) -> bool:
    return abs(_strip_g(abs(q), g)) == 1


def component_valuation_at_p(J: IdealInGroupAlgebra, chi, p: int,
                             invert_g: int) -> int:
    """v_p of the chi-component of J (rational-valued chi only)."""
    if chi.order > 2:
        raise UnsupportedFieldError("p-valuation implemented for "
                                    "rational-valued characters")
    vals = [y.char_eval(chi) for y in J.generators]
    vals = [v.as_fraction() for v in vals if not v.is_zero()]
    if not vals:
        raise DomainError("zero component has no p-valuation")
    def vp(q):
        v = 0
        n, d = q.numerator, q.denominator
        while n % p == 0:
            n //= p
            v += 1
        while d % p == 0:
            d //= p
            v -= 1
        return v
    return min(vp(abs(q)) for q in vals)
