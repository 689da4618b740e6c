"""Finite abelian groups in invariant-factor form and their characters."""

from __future__ import annotations

import itertools
from math import gcd

from .cyclotomic import CyclotomicNumber


class FiniteAbelianGroup:
    """Product of cyclic groups Z/d1 x ... x Z/dk with d1 | d2 | ... | dk.

    Elements are exponent tuples, written additively.
    """

    def __init__(self, invariant_factors):
        factors = tuple(int(d) for d in invariant_factors)
        for d in factors:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisor chain")
        self.invariant_factors = factors

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def identity(self):
        return tuple(0 for _ in self.invariant_factors)

    def elements(self):
        """All elements, lexicographic order."""
        return list(itertools.product(
            *(range(d) for d in self.invariant_factors)))

    def op(self, a, b):
        return tuple((x + y) % d
                     for x, y, d in zip(a, b, self.invariant_factors))

    def inv(self, a):
        return tuple((-x) % d for x, d in zip(a, self.invariant_factors))

    def pow(self, a, k: int):
        return tuple((x * k) % d for x, d in zip(a, self.invariant_factors))

    def element_order(self, a) -> int:
        o = 1
        for x, d in zip(a, self.invariant_factors):
            if x:
                o_i = d // gcd(x, d)
                o = o * o_i // gcd(o, o_i)
        return o

    def subgroup_elements(self, generators):
        """All elements of the subgroup generated by the given elements."""
        seen = {self.identity()}
        frontier = [self.identity()]
        while frontier:
            cur = frontier.pop()
            for g in generators:
                nxt = self.op(cur, tuple(g))
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen

    def __eq__(self, other):
        return (isinstance(other, FiniteAbelianGroup)
                and self.invariant_factors == other.invariant_factors)

    def __hash__(self):
        return hash(self.invariant_factors)

    def __repr__(self):
        return "C" + "xC".join(str(d) for d in self.invariant_factors)


class GroupCharacter:
    """Character of a FiniteAbelianGroup.

    Stored as exponents t_i: the value on the i-th generator is
    zeta_e^(t_i * e / d_i), e the group exponent.
    """

    __slots__ = ("group", "exponents")

    def __init__(self, group: FiniteAbelianGroup, exponents):
        self.group = group
        self.exponents = tuple(
            t % d for t, d in zip(exponents, group.invariant_factors))

    def value_exponent(self, g) -> int:
        """k such that chi(g) = zeta_e^k, e = group exponent."""
        e = self.group.exponent
        total = 0
        for t, x, d in zip(self.exponents, g, self.group.invariant_factors):
            total += t * x * (e // d)
        return total % e

    def __call__(self, g) -> CyclotomicNumber:
        return CyclotomicNumber.zeta_pow(self.group.exponent,
                                         self.value_exponent(g))

    @property
    def order(self) -> int:
        e = self.group.exponent
        o = 1
        for t, d in zip(self.exponents, self.group.invariant_factors):
            if t:
                # value on generator i has order d_i / gcd(t, d_i)
                oi = d // gcd(t, d)
                o = o * oi // gcd(o, oi)
        return o

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def mul(self, other: "GroupCharacter") -> "GroupCharacter":
        if self.group != other.group:
            raise ValueError("characters of different groups")
        return GroupCharacter(self.group,
                              [a + b for a, b in
                               zip(self.exponents, other.exponents)])

    def power(self, k: int) -> "GroupCharacter":
        return GroupCharacter(self.group, [t * k for t in self.exponents])

    def conjugate(self) -> "GroupCharacter":
        return self.power(-1)

    def kernel(self):
        return {g for g in self.group.elements()
                if self.value_exponent(g) == 0}

    def is_trivial_on(self, elements) -> bool:
        return all(self.value_exponent(g) == 0 for g in elements)

    def __eq__(self, other):
        return (isinstance(other, GroupCharacter)
                and self.group == other.group
                and self.exponents == other.exponents)

    def __hash__(self):
        return hash((self.group, self.exponents))

    def __repr__(self):
        return f"chi{list(self.exponents)} of {self.group}"


def enumerate_characters(group: FiniteAbelianGroup):
    """All |G| characters, lexicographic on generator-value exponents."""
    return [GroupCharacter(group, t)
            for t in itertools.product(
                *(range(d) for d in group.invariant_factors))]
