"""Picard monoid of divisor classes with archimedean scale, and its
Jacobian quotient.

A class is canonically presented by

* ``s_locus`` -- the set of primes carrying an infinite coefficient
  (possibly cofinite),
* ``scale``  -- a nonnegative rational, *reduced modulo the subgroup of
  Q^* generated by the primes of the locus* by simply deleting those primes
  from its factorization,
* ``degenerate`` -- whether the scale is zero (an absorbing state).

Reducing the scale this way makes equality of classes a finite, exact
check, and multiplication of classes is componentwise.  The map from pairs
(divisor, scale) factors through linear equivalence, and the valuation map
from adeles lands here via ``xq_class``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

from .adeles import Adele, FiniteAdele, adele_to_divisor
from .divisors import (
    ALL_PRIMES,
    NO_PRIMES,
    ArithmeticDivisor,
    PrimeSet,
    Rational,
    class_normalize,
    divisor_from_localization,
    sections_generator,
)
from .errors import (
    InfiniteTypeError,
    MissingCapError,
    NegativeScaleError,
    UsageError,
    ZeroScaleError,
)
from .numtheory import factorize_fraction, require_prime, strip_prime


def _strip_scale(scale: Fraction, locus: PrimeSet) -> Fraction:
    """Delete every prime of the locus from the scale's factorization."""
    if scale == 0:
        return Fraction(0)
    if not locus.complemented:
        for p in locus.members:
            scale = strip_prime(scale, p)
        return scale
    # cofinite locus: only the exceptional primes survive
    kept = Fraction(1)
    for p, e in factorize_fraction(scale).items():
        if p in locus.members:
            kept *= Fraction(p) ** e
    return kept


class PicClass:
    """Canonical form of a Picard class: (locus, reduced scale)."""

    __slots__ = ("s_locus", "scale", "degenerate")

    def __init__(self, s_locus: PrimeSet, scale: Rational):
        scale = Fraction(scale)
        if scale < 0:
            raise NegativeScaleError("archimedean scale must be nonnegative")
        if not isinstance(s_locus, PrimeSet):
            s_locus = PrimeSet(frozenset(s_locus))
        self.s_locus = s_locus
        self.scale = _strip_scale(scale, s_locus)
        self.degenerate = scale == 0

    def __eq__(self, other):
        if not isinstance(other, PicClass):
            return NotImplemented
        return (self.s_locus == other.s_locus and self.scale == other.scale
                and self.degenerate == other.degenerate)

    def __hash__(self):
        return hash((self.s_locus, self.scale, self.degenerate))

    def __repr__(self):
        return f"PicClass(s={self.s_locus!r}, scale={self.scale}, degenerate={self.degenerate})"

    def to_json(self):
        return {
            "s": self.s_locus.to_json(),
            "scale": f"{self.scale.numerator}/{self.scale.denominator}",
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_json(cls, data) -> "PicClass":
        try:
            locus = PrimeSet.from_json(data["s"])
            scale = Fraction(data["scale"])
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError(f"bad Picard class JSON: {exc}") from exc
        out = cls(locus, scale)
        if "degenerate" in data and bool(data["degenerate"]) != out.degenerate:
            raise UsageError("degenerate flag inconsistent with scale")
        return out


def pic_from_data(d: ArithmeticDivisor, scale: Rational) -> PicClass:
    """Class of (D, scale): locus = infinite locus of D, scale folded with
    the witness prod p^{n_p} of the finite part."""
    scale = Fraction(scale)
    if scale < 0:
        raise NegativeScaleError("archimedean scale must be nonnegative")
    locus, witness = class_normalize(d)
    return PicClass(locus, scale * witness)


def pic_product(c1: PicClass, c2: PicClass) -> PicClass:
    return PicClass(c1.s_locus.union(c2.s_locus), c1.scale * c2.scale)


def pic_equal(c1: PicClass, c2: PicClass) -> bool:
    return c1 == c2


def theta_class(s: PrimeSet) -> PicClass:
    """Theta(S): the idempotent class of the localization Z_S."""
    return pic_from_data(divisor_from_localization(s), 1)


def xq_class(a: Adele) -> PicClass:
    """Class of an adele in Q^* \\ A / unit-ideles.

    The finite part contributes its valuation divisor (witness w = prod
    p^{v_p}); the archimedean part enters inverted, lam = 1/|a_inf|, so that
    a diagonal rational q scales w by |q| and lam by 1/|q| and the class is
    a genuine orbit invariant.  A vanishing archimedean part collapses to
    the degenerate class.
    """
    if a.infinite == 0:
        return PicClass(adele_to_divisor(a.finite).inf_locus(), 0)
    lam = 1 / abs(Fraction(a.infinite))
    return pic_from_data(adele_to_divisor(a.finite), lam)


# -- value spectra ---------------------------------------------------------


class SpectrumSample:
    """The nonnegative value spectrum of a class, up to a bound.

    Stored as integers over a common denominator so that equality testing
    stays exact and cheap even for large samples; rational elements are
    materialized on demand.
    """

    __slots__ = ("denominator", "scaled", "bound", "caps", "_elements")

    def __init__(self, denominator: int, scaled: Tuple[int, ...], bound: Fraction,
                 caps: Mapping[int, int]):
        self.denominator = denominator
        self.scaled = tuple(scaled)
        self.bound = Fraction(bound)
        self.caps = dict(caps)
        self._elements = None

    @property
    def elements(self) -> Tuple[Fraction, ...]:
        if self._elements is None:
            self._elements = tuple(Fraction(n, self.denominator) for n in self.scaled)
        return self._elements

    def __len__(self):
        return len(self.scaled)

    def __eq__(self, other):
        if not isinstance(other, SpectrumSample):
            return NotImplemented
        if len(self.scaled) != len(other.scaled):
            return False
        g = math.gcd(self.denominator, other.denominator)
        m_self = other.denominator // g
        m_other = self.denominator // g
        return all(x * m_self == y * m_other for x, y in zip(self.scaled, other.scaled))

    def __repr__(self):
        head = ", ".join(str(Fraction(n, self.denominator)) for n in self.scaled[:6])
        tail = ", ..." if len(self.scaled) > 6 else ""
        return f"SpectrumSample([{head}{tail}], n={len(self.scaled)}, bound={self.bound})"

    def to_json(self):
        return {
            "bound": str(self.bound),
            "caps": {str(p): k for p, k in self.caps.items()},
            "elements": [f"{Fraction(n, self.denominator)}" for n in self.scaled],
        }


def value_spectrum_sample(c: PicClass, bound: Rational,
                          caps: Mapping[int, int]) -> SpectrumSample:
    """All spectrum values in [0, bound] with denominator exponents capped.

    The spectrum of a nondegenerate class (S, s) is {s * m / prod p^{k_p}}
    over integers m >= 0 and primes p in S; within the stated caps the
    enumeration is complete and reconstruction-faithful.
    """
    bound = Fraction(bound)
    if bound < 0:
        raise NegativeScaleError("bound must be nonnegative")
    if c.degenerate:
        return SpectrumSample(1, (0,), bound, caps)
    if c.s_locus.complemented:
        raise MissingCapError("cofinite singular locus: no finite cap assignment exists")
    for p in c.s_locus.members:
        if p not in caps:
            raise MissingCapError(f"no denominator cap supplied for prime {p}")
    primes = c.s_locus.sorted_members()
    cap_list = [caps[p] for p in primes]
    a, b = c.scale.numerator, c.scale.denominator
    denom = b * math.prod(p**k for p, k in zip(primes, cap_list))
    limit = bound * denom  # values n/denom <= bound  <=>  n <= limit
    limit_int = int(limit)
    values = set()
    for expos in itertools.product(*(range(k + 1) for k in cap_list)):
        # value = (a/b) * m / prod p^e; scaled by denom it is a multiple of:
        step = a * math.prod(p ** (k - e) for p, k, e in zip(primes, cap_list, expos))
        values.update(range(0, limit_int + 1, step))
    return SpectrumSample(denom, tuple(sorted(values)), bound, caps)


# -- unit balls ------------------------------------------------------------


def unit_ball_sections(d: ArithmeticDivisor, scale: Rational) -> Tuple[int, list[Fraction]]:
    """Sections x of L(D) with scale * |x| <= 1, for finite-type D.

    Returns (count, sorted list); the count is 2*floor(1/(scale*g)) + 1
    where g generates L(D).  Divisors with an infinite coefficient impose no
    archimedean constraint near that prime, so the ball is infinite and the
    call errors instead.
    """
    scale = Fraction(scale)
    if d.has_infinite_coefficient():
        raise InfiniteTypeError("unit ball is infinite for divisors of infinite type")
    if scale == 0:
        raise ZeroScaleError("scale must be positive")
    if scale < 0:
        raise NegativeScaleError("scale must be positive")
    g = sections_generator(d)
    k_max = int(Fraction(1) / (scale * g))  # floor, both positive
    sections = [g * k for k in range(-k_max, k_max + 1)]
    return 2 * k_max + 1, sections


# -- Jacobian --------------------------------------------------------------


class _GenericPoint:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "eta"


class _ArchimedeanPlace:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "infinity"


GENERIC_POINT = _GenericPoint()
ARCHIMEDEAN_PLACE = _ArchimedeanPlace()

CurvePoint = Union[int, _GenericPoint, _ArchimedeanPlace]


class JacClass:
    """A Jacobian class: the Picard class with the positive reals divided
    out.  Only the singular locus and the degeneracy flag survive."""

    __slots__ = ("s_locus", "infinite")

    def __init__(self, s_locus: PrimeSet, infinite: bool):
        if not isinstance(s_locus, PrimeSet):
            s_locus = PrimeSet(frozenset(s_locus))
        self.s_locus = s_locus
        self.infinite = bool(infinite)

    def __eq__(self, other):
        if not isinstance(other, JacClass):
            return NotImplemented
        return self.s_locus == other.s_locus and self.infinite == other.infinite

    def __hash__(self):
        return hash((self.s_locus, self.infinite))

    def __repr__(self):
        flag = "infinite" if self.infinite else "finite"
        return f"JacClass(s={self.s_locus!r}, {flag})"

    def to_json(self):
        return {"s": self.s_locus.to_json(), "arch": "infinite" if self.infinite else "finite"}


def jac_project(c: PicClass) -> JacClass:
    return JacClass(c.s_locus, c.degenerate)


def jac_product(j1: JacClass, j2: JacClass) -> JacClass:
    """Locus union; the degenerate flag is absorbing."""
    return JacClass(j1.s_locus.union(j2.s_locus), j1.infinite or j2.infinite)


def abel_jacobi(point: CurvePoint) -> JacClass:
    """Pointwise extended Abel-Jacobi map.

    The generic point goes to the trivial class, a finite prime p to the
    class of the localization away from p, and the archimedean place to the
    absorbing degenerate class.
    """
    if point is GENERIC_POINT:
        return JacClass(NO_PRIMES, False)
    if point is ARCHIMEDEAN_PLACE:
        return JacClass(NO_PRIMES, True)
    require_prime(point)
    return JacClass(PrimeSet(frozenset({point})), False)


def abel_jacobi_set(points: Iterable[CurvePoint]) -> JacClass:
    """Sum of pointwise images; for a set of finite primes S this is the
    class of Theta(S)."""
    out = JacClass(NO_PRIMES, False)
    for pt in points:
        out = jac_product(out, abel_jacobi(pt))
    return out


def jac_theta(s: PrimeSet) -> JacClass:
    """Theta(S) seen in the Jacobian."""
    return JacClass(s, False)
