"""Abelian class-field covers and the fiber geometry over them.

A cover is specified by a modulus m and a subgroup K of the units mod m;
the deck group is G = (Z/mZ)^* / K.  An unramified prime p maps to its
Frobenius class, the image of p in G; the fiber over p decomposes into
|G| / ord(Frob_p) components, each of degree ord(Frob_p).  Primes dividing
the modulus are ramified exactly when their inertia (units congruent to 1
away from p) maps onto a nontrivial subgroup of G, and the archimedean
place is always marked as ramified: the fiber there is a single absorbing
point covered by the full profinite unit group.

The module also carries the concrete fiber arithmetic used by property
tests: the circle fiber over a prime p (positive rationals modulo the group
generated by p), its absorbing archimedean analogue, and representatives of
the suspension flow on the prime-indexed mapping torus, normalized into a
fundamental domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from .adeles import FiniteAdele
from .divisors import PrimeSet, Rational
from .errors import (
    NonUnitGeneratorError,
    PrimeMismatchError,
    RamifiedError,
    UsageError,
    ZeroInputError,
)
from .numtheory import INF, is_inf, kronecker, require_prime, strip_prime, valuation


class CoverSpec:
    """A finite abelian cover: modulus, kernel subgroup, quotient group."""

    __slots__ = ("modulus", "kernel", "cosets", "coset_of", "order")

    def __init__(self, modulus: int, kernel: Iterable[int]):
        if not isinstance(modulus, int) or modulus < 1:
            raise UsageError("modulus must be a positive integer")
        self.modulus = modulus
        units = [r for r in range(1, max(modulus, 2)) if math.gcd(r, modulus) == 1]
        if modulus == 1:
            units = [0]  # the trivial group on the zero residue
        closed = {1 % modulus}
        frontier = [1 % modulus]
        gens = []
        for g in kernel:
            g %= modulus
            if math.gcd(g, modulus) != 1 and modulus > 1:
                raise NonUnitGeneratorError(f"{g} is not a unit modulo {modulus}")
            gens.append(g)
        for g in gens:
            if g not in closed:
                closed.add(g)
                frontier.append(g)
        while frontier:
            a = frontier.pop()
            for g in gens:
                b = a * g % modulus
                if b not in closed:
                    closed.add(b)
                    frontier.append(b)
        # close under the group structure (powers of generators suffice for
        # finite abelian groups, but run a full closure for safety)
        changed = True
        while changed:
            changed = False
            pairs = list(closed)
            for a in pairs:
                for b in pairs:
                    c = a * b % modulus
                    if c not in closed:
                        closed.add(c)
                        changed = True
        self.kernel: FrozenSet[int] = frozenset(closed)
        # partition units into kernel cosets
        coset_of: Dict[int, int] = {}
        cosets: List[FrozenSet[int]] = []
        for u in units:
            if u in coset_of:
                continue
            coset = frozenset(u * k % modulus for k in self.kernel) if modulus > 1 else frozenset({0})
            rep = min(coset)
            for v in coset:
                coset_of[v] = rep
            cosets.append(coset)
        self.coset_of = coset_of
        self.cosets = sorted(cosets, key=min)
        self.order = len(self.cosets)

    # -- group operations on coset representatives -------------------------

    def identity(self) -> int:
        return min(self.kernel) if self.modulus > 1 else 0

    def coset_rep(self, u: int) -> int:
        u %= self.modulus
        if self.modulus == 1:
            return 0
        if math.gcd(u, self.modulus) != 1:
            raise NonUnitGeneratorError(f"{u} is not a unit modulo {self.modulus}")
        return self.coset_of[u]

    def multiply(self, a: int, b: int) -> int:
        return self.coset_rep(a * b % self.modulus) if self.modulus > 1 else 0

    def element_order(self, u: int) -> int:
        e = self.identity()
        acc = self.coset_rep(u)
        n = 1
        while acc != e:
            acc = self.multiply(acc, u)
            n += 1
            if n > self.order:
                raise RuntimeError("order computation runaway")  # pragma: no cover
        return n

    def __eq__(self, other):
        if not isinstance(other, CoverSpec):
            return NotImplemented
        return self.modulus == other.modulus and self.kernel == other.kernel

    def __hash__(self):
        return hash((self.modulus, self.kernel))

    def __repr__(self):
        return f"CoverSpec(m={self.modulus}, |G|={self.order})"

    def to_json(self):
        return {"modulus": self.modulus, "kernel": sorted(self.kernel),
                "order": self.order}


def cover_from_character(modulus: int, kernel_gens: Iterable[int]) -> CoverSpec:
    """Build the cover cut out by a character group with the given kernel."""
    return CoverSpec(modulus, kernel_gens)


def cover_for_quadratic(d: int) -> CoverSpec:
    """The degree-2 cover attached to a squarefree d with |d| <= 50.

    Uses the discriminant conductor (d for d = 1 mod 4, else 4d) and the
    kernel of the associated quadratic residue character.
    """
    if not isinstance(d, int) or d in (0, 1):
        raise UsageError("need a squarefree integer d != 0, 1")
    if abs(d) > 50:
        raise UsageError("quadratic constructor supports |d| <= 50")
    for p in range(2, abs(d) + 1):
        if d % (p * p) == 0:
            raise UsageError(f"{d} is not squarefree")
    disc = d if d % 4 == 1 else 4 * d
    m = abs(disc)
    kernel = [u for u in range(1, m) if math.gcd(u, m) == 1 and kronecker(disc, u) == 1]
    spec = CoverSpec(m, kernel)
    if spec.order != 2:
        raise UsageError(f"character for d={d} did not cut out a degree-2 cover")
    return spec


def frobenius(cover: CoverSpec, p: int) -> int:
    """Frobenius class of an unramified prime: the coset of p mod m."""
    require_prime(p)
    if cover.modulus > 1 and cover.modulus % p == 0:
        raise RamifiedError(f"{p} divides the modulus {cover.modulus}")
    return cover.coset_rep(p)


@dataclass(frozen=True)
class FiberDecomposition:
    prime: int
    frobenius: int
    degree: int
    components: int

    def to_json(self):
        return {"p": self.prime, "frobenius": self.frobenius,
                "degree": self.degree, "components": self.components}


def fiber_decomposition(cover: CoverSpec, p: int) -> FiberDecomposition:
    """Splitting of an unramified prime: |G|/ord(Frob) components of degree
    ord(Frob)."""
    fr = frobenius(cover, p)
    d = cover.element_order(fr)
    return FiberDecomposition(p, fr, d, cover.order // d)


def ramified_set(cover: CoverSpec) -> Tuple[PrimeSet, bool]:
    """Finite ramified primes plus the always-set archimedean flag.

    A prime p | m is ramified iff its inertia -- the units congruent to 1
    modulo the away-from-p part of m -- maps onto a nontrivial subgroup of
    the deck group.
    """
    ramified = set()
    m = cover.modulus
    for p in _prime_divisors(m):
        away = m
        while away % p == 0:
            away //= p
        inertia_nontrivial = any(
            u % away == 1 % away and cover.coset_rep(u) != cover.identity()
            for u in range(1, m)
            if math.gcd(u, m) == 1
        )
        if inertia_nontrivial:
            ramified.add(p)
    return PrimeSet(frozenset(ramified)), True


def _prime_divisors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- fibers of the structural map -------------------------------------------


@dataclass(frozen=True)
class FiberPoint:
    """A point of the fiber over a place of the base.

    * over a finite prime p: a positive rational coordinate with all powers
      of p removed (the circle R_+^x / p^Z has exact rational
      representatives of this form);
    * over the generic point: a positive rational, no identification;
    * over the archimedean place: the single absorbing point (no
      coordinate).
    """

    place: Union[int, str]  # a prime / "eta" / "arch"
    coordinate: Optional[Fraction] = None

    def __post_init__(self):
        if self.place == "arch":
            if self.coordinate is not None:
                raise UsageError("the archimedean fiber is a single point")
            return
        if self.place == "eta":
            coord = Fraction(self.coordinate)
        else:
            require_prime(self.place)
            coord = strip_prime(Fraction(self.coordinate), self.place)
        if coord <= 0:
            raise ZeroInputError("fiber coordinates are positive")
        object.__setattr__(self, "coordinate", coord)


def fiber_point(place, coordinate=None) -> FiberPoint:
    return FiberPoint(place, coordinate if place != "arch" else None)


def cp_product(x: FiberPoint, y: FiberPoint) -> FiberPoint:
    """Group law on a fiber: coordinates multiply (mod p-powers over p);
    the archimedean point absorbs."""
    if x.place != y.place:
        raise PrimeMismatchError(f"cannot combine fibers over {x.place} and {y.place}")
    if x.place == "arch":
        return x
    return FiberPoint(x.place, x.coordinate * y.coordinate)


def cp_identity(place) -> FiberPoint:
    return FiberPoint(place) if place == "arch" else FiberPoint(place, Fraction(1))


def cp_inverse(x: FiberPoint) -> FiberPoint:
    if x.place == "arch":
        return x
    return FiberPoint(x.place, 1 / x.coordinate)


def stabilizer_contains(p: int, q: Rational) -> bool:
    """Whether a nonzero rational lies in the stabilizer {+-p^k} of the
    base lattice class in the fiber over p."""
    require_prime(p)
    q = Fraction(q)
    if q == 0:
        return False
    return strip_prime(abs(q), p) == 1


@dataclass(frozen=True)
class FiberDescriptor:
    """Structured description of the fiber over a point, at both levels:
    the metrized-class level and its universal (adelic) cover."""

    place: Union[int, str]
    circle: str
    universal: str
    period: Optional[str]
    is_galois_group: bool

    def to_json(self):
        return {"place": str(self.place), "circle": self.circle,
                "universal": self.universal, "period": self.period,
                "galois": self.is_galois_group}


def fiber_descriptor(place) -> FiberDescriptor:
    if place == "eta":
        return FiberDescriptor("eta", "positive reals (no identification)",
                               "full idele class group", None, False)
    if place == "arch":
        return FiberDescriptor("arch", "single absorbing point",
                               "profinite integral units: abelian Galois group of Q",
                               None, True)
    require_prime(place)
    return FiberDescriptor(place, "circle of circumference log p",
                           "idele classes modulo the local units at p",
                           f"log {place}", False)


# -- the mapping torus over a prime ------------------------------------------


class TorusPoint:
    """A representative (u, e) on the mapping torus over p.

    u is a finite adele supported away from p whose components are units,
    stored together with a rational time exponent e (the flow time in units
    of log p).  The defining identification is (p*u, e) ~ (u, e + 1): one
    full loop of the flow eats one factor of p from the unit coordinate.
    """

    __slots__ = ("prime", "unit_part", "time_exponent")

    def __init__(self, prime: int, unit_part: FiniteAdele, time_exponent: Rational):
        require_prime(prime)
        self.prime = prime
        if not isinstance(unit_part, FiniteAdele):
            raise UsageError("unit part must be a finite adele")
        cleaned = {q: c for q, c in unit_part.explicit.items() if q != prime}
        for q, comp in cleaned.items():
            if is_inf(comp.valuation) or comp.valuation != 0:
                raise UsageError(f"component at {q} must be a unit")
        default = unit_part.default
        if default == 0:
            raise ZeroInputError("unit part cannot vanish")
        if strip_prime(abs(default), prime) != 1:
            raise UsageError("default of the unit part must be +-(a power of p)")
        self.unit_part = FiniteAdele(cleaned, default)
        self.time_exponent = Fraction(time_exponent)

    def apply_relation(self, j: int = 1) -> "TorusPoint":
        """Apply the defining identification j times: (u, e) -> (p^-j u, e + j)."""
        return TorusPoint(self.prime,
                          self.unit_part.scale(Fraction(self.prime) ** (-j)),
                          self.time_exponent + j)

    def __eq__(self, other):
        if not isinstance(other, TorusPoint):
            return NotImplemented
        return (self.prime == other.prime and self.time_exponent == other.time_exponent
                and self.unit_part == other.unit_part)

    def __hash__(self):
        return hash((self.prime, self.unit_part, self.time_exponent))

    def __repr__(self):
        return f"TorusPoint(p={self.prime}, u={self.unit_part!r}, e={self.time_exponent})"


def torus_normalize(pt: TorusPoint) -> TorusPoint:
    """Canonical representative with time exponent in [0, 1).

    Undoes the identification: lowering e by one full loop multiplies the
    unit part by p, so applying the relation k times and then normalizing
    returns the original representative exactly.
    """
    k = math.floor(pt.time_exponent)
    if k == 0:
        return pt
    return TorusPoint(pt.prime,
                      pt.unit_part.scale(Fraction(pt.prime) ** k),
                      pt.time_exponent - k)
