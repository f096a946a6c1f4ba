"""Finite adeles with truncated p-adic components, and the valuation map.

A local component is stored as (prime, valuation, unit, precision): the
value is unit * p**valuation with the unit known modulo p**precision.  Two
storage modes coexist:

* *exact* components carry the unit as a rational number prime to p
  (precision ``INF``); any number of digits can be materialized on demand;
* *truncated* components carry a residue modulo p**precision.

Exact zero is encoded as valuation ``INF`` (the convention v_p(0) = oo).

A finite adele holds finitely many explicit components over a rational
``default`` embedded diagonally at every other prime.  The default is 1 for
generic adeles, but any rational (including 0) is allowed so that diagonal
embeddings of rationals, rational rescalings, and idempotents with
cofinitely many zero components are all representable exactly.

Operations never invent digits: when a result digit is not determined by
the inputs, the computation raises ``InsufficientPrecisionError`` rather
than guess.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Union

from .divisors import ArithmeticDivisor, Rational
from .errors import InsufficientPrecisionError, UsageError, ZeroInputError
from .numtheory import (
    INF,
    ExtInt,
    factorize_fraction,
    is_inf,
    require_prime,
    unit_part,
    valuation,
)


def _residue_of_unit(u: Fraction, p: int, k: int) -> int:
    """The residue of a p-adic unit given as a rational, modulo p**k."""
    pk = p**k
    num = u.numerator % pk
    den = u.denominator % pk
    return num * pow(den, -1, pk) % pk


class TruncatedPadic:
    """One local component: unit * p**valuation, unit known mod p**precision."""

    __slots__ = ("prime", "valuation", "unit", "precision")

    def __init__(self, prime: int, valuation: ExtInt, unit=None, precision: ExtInt = INF):
        require_prime(prime)
        self.prime = prime
        if is_inf(valuation):
            # exact zero: unit and precision carry no information
            self.valuation: ExtInt = INF
            self.unit = None
            self.precision: ExtInt = INF
            return
        if not isinstance(valuation, int) or isinstance(valuation, bool):
            raise UsageError(f"valuation must be an integer or inf, got {valuation!r}")
        self.valuation = valuation
        if is_inf(precision):
            u = Fraction(unit)
            if u == 0 or u.numerator % prime == 0 or u.denominator % prime == 0:
                raise UsageError(f"unit {unit!r} is not a {prime}-adic unit")
            self.unit = u
            self.precision = INF
        else:
            if not isinstance(precision, int) or precision < 1:
                raise UsageError("precision must be a positive integer or inf")
            if not isinstance(unit, int):
                raise UsageError("a truncated component needs an integer unit residue")
            r = unit % prime**precision
            if r % prime == 0:
                raise UsageError(f"unit residue {unit!r} is not invertible mod {prime}**{precision}")
            self.unit = r
            self.precision = precision

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return is_inf(self.valuation)

    def is_exact(self) -> bool:
        return is_inf(self.precision)

    def unit_mod(self, k: int) -> int:
        """Unit residue modulo p**k, erroring when digits are missing."""
        if self.is_zero():
            raise UsageError("the zero component has no unit part")
        if k < 1:
            raise UsageError("need at least one digit")
        if self.is_exact():
            return _residue_of_unit(self.unit, self.prime, k)
        if k > self.precision:
            raise InsufficientPrecisionError(
                f"component at {self.prime} carries {self.precision} digits, {k} needed",
                prime=self.prime, needed=k)
        return self.unit % self.prime**k

    def exact_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_exact():
            raise InsufficientPrecisionError(
                f"component at {self.prime} is truncated; exact value unavailable",
                prime=self.prime)
        return self.unit * Fraction(self.prime) ** self.valuation

    def same_value(self, other: "TruncatedPadic") -> bool:
        """Mathematical agreement, certified to the available digits.

        Exact vs exact compares outright.  When a truncated side is
        involved, the comparison uses min(available precisions) >= 1 digits
        and reports agreement at that level; with no common digit to
        compare, it raises rather than guess.
        """
        if self.prime != other.prime:
            raise UsageError("cannot compare components at different primes")
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self.valuation != other.valuation:
            return False
        if self.is_exact() and other.is_exact():
            return self.unit == other.unit
        k = min(self.precision if not self.is_exact() else other.precision,
                other.precision if not other.is_exact() else self.precision)
        if is_inf(k) or k < 1:
            raise InsufficientPrecisionError(
                f"no digits available to compare components at {self.prime}",
                prime=self.prime, needed=1)
        return self.unit_mod(k) == other.unit_mod(k)

    def multiply(self, other: "TruncatedPadic") -> "TruncatedPadic":
        if self.prime != other.prime:
            raise UsageError("cannot multiply components at different primes")
        p = self.prime
        if self.is_zero() or other.is_zero():
            return TruncatedPadic(p, INF)
        v = self.valuation + other.valuation
        if self.is_exact() and other.is_exact():
            return TruncatedPadic(p, v, self.unit * other.unit, INF)
        k = min(self.precision, other.precision) if not (self.is_exact() or other.is_exact()) \
            else (other.precision if self.is_exact() else self.precision)
        return TruncatedPadic(p, v, self.unit_mod(k) * other.unit_mod(k), k)

    def __eq__(self, other):
        if not isinstance(other, TruncatedPadic):
            return NotImplemented
        return (self.prime == other.prime and self.valuation == other.valuation
                and self.precision == other.precision and self.unit == other.unit)

    def __hash__(self):
        return hash((self.prime, repr(self.valuation), repr(self.precision), self.unit))

    def __repr__(self):
        if self.is_zero():
            return f"O({self.prime}: exact 0)"
        prec = "exact" if self.is_exact() else f"prec {self.precision}"
        return f"O({self.prime}: {self.unit} * {self.prime}^{self.valuation}, {prec})"

    # -- serialization -------------------------------------------------------

    def to_json(self):
        if self.is_zero():
            return {"v": "inf"}
        if self.is_exact():
            return {"v": self.valuation, "unit": f"{self.unit.numerator}/{self.unit.denominator}",
                    "prec": "inf"}
        return {"v": self.valuation, "unit": str(self.unit), "prec": self.precision}

    @classmethod
    def from_json(cls, prime: int, data) -> "TruncatedPadic":
        try:
            v = data["v"]
            if v == "inf":
                return cls(prime, INF)
            prec = data.get("prec", "inf")
            if prec == "inf":
                return cls(prime, int(v), Fraction(data["unit"]), INF)
            return cls(prime, int(v), int(data["unit"]), int(prec))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad p-adic component JSON at {prime}: {exc}") from exc


def padic_from_rational(p: int, q: Rational, precision: ExtInt = INF) -> TruncatedPadic:
    """Embed a rational as a local component; exact by default.

    With a finite ``precision`` the unit is truncated to that many digits,
    which is how the truncation error paths get exercised.
    """
    require_prime(p)
    q = Fraction(q)
    if q == 0:
        return TruncatedPadic(p, INF)
    v = valuation(q, p)
    u = unit_part(q, p)
    if is_inf(precision):
        return TruncatedPadic(p, v, u, INF)
    return TruncatedPadic(p, v, _residue_of_unit(u, p, precision), precision)


class FiniteAdele:
    """Finitely many explicit local components over a diagonal rational default."""

    __slots__ = ("explicit", "default")

    def __init__(self, explicit: Mapping[int, TruncatedPadic] | None = None,
                 default: Rational = 1):
        self.default = Fraction(default)
        clean: Dict[int, TruncatedPadic] = {}
        for p, comp in (explicit or {}).items():
            require_prime(p)
            if not isinstance(comp, TruncatedPadic) or comp.prime != p:
                raise UsageError(f"component at {p} must be a TruncatedPadic at {p}")
            if comp.is_exact() or comp.is_zero():
                if comp.exact_value() == self.default:
                    continue  # canonical: drop components that repeat the default
            clean[p] = comp
        self.explicit = dict(sorted(clean.items()))

    # -- structure -----------------------------------------------------------

    def default_support(self) -> Dict[int, int]:
        """Primes where the diagonal default has nonzero valuation."""
        if self.default == 0:
            return {}
        return factorize_fraction(self.default)

    def support_primes(self) -> list[int]:
        return sorted(set(self.explicit) | set(self.default_support()))

    def component(self, p: int) -> TruncatedPadic:
        require_prime(p)
        if p in self.explicit:
            return self.explicit[p]
        return padic_from_rational(p, self.default)

    def is_integral(self) -> bool:
        return all(is_inf(c.valuation) or c.valuation >= 0
                   for c in map(self.component, self.support_primes()))

    def multiply(self, other: "FiniteAdele") -> "FiniteAdele":
        primes = set(self.explicit) | set(other.explicit)
        explicit = {p: self.component(p).multiply(other.component(p)) for p in primes}
        return FiniteAdele(explicit, self.default * other.default)

    def scale(self, q: Rational) -> "FiniteAdele":
        """Multiply by the diagonal embedding of a nonzero rational."""
        q = Fraction(q)
        if q == 0:
            raise ZeroInputError("scaling by 0 would destroy all components")
        explicit = {p: comp.multiply(padic_from_rational(p, q))
                    for p, comp in self.explicit.items()}
        return FiniteAdele(explicit, self.default * q)

    @classmethod
    def from_rational(cls, q: Rational) -> "FiniteAdele":
        """The diagonal embedding of a rational (0 allowed: the zero adele)."""
        return cls({}, Fraction(q))

    @classmethod
    def idempotent(cls, primes) -> "FiniteAdele":
        """e_S: exact zero at the given primes, exact 1 elsewhere."""
        return cls({p: TruncatedPadic(p, INF) for p in primes}, 1)

    def __eq__(self, other):
        if not isinstance(other, FiniteAdele):
            return NotImplemented
        return self.default == other.default and self.explicit == other.explicit

    def __hash__(self):
        return hash((self.default, tuple(self.explicit.items())))

    def __repr__(self):
        comps = ", ".join(repr(c) for c in self.explicit.values())
        return f"FiniteAdele([{comps}], default={self.default})"

    def to_json(self):
        return {
            "finite": {str(p): c.to_json() for p, c in self.explicit.items()},
            "default": f"{self.default.numerator}/{self.default.denominator}",
        }

    @classmethod
    def from_json(cls, data) -> "FiniteAdele":
        try:
            default = Fraction(data.get("default", "1"))
            explicit = {int(p): TruncatedPadic.from_json(int(p), comp)
                        for p, comp in data.get("finite", {}).items()}
        except (AttributeError, ValueError, TypeError) as exc:
            raise UsageError(f"bad finite adele JSON: {exc}") from exc
        return cls(explicit, default)


@dataclass(frozen=True)
class Adele:
    """A finite adele together with an exact rational archimedean part.

    ``real_lift`` is an optional float shadow of the archimedean part used
    purely for reporting; the rational is authoritative.
    """

    finite: FiniteAdele
    infinite: Fraction
    real_lift: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "infinite", Fraction(self.infinite))
        if self.real_lift is not None:
            object.__setattr__(self, "real_lift", float(self.infinite))

    @classmethod
    def from_rational(cls, q: Rational, with_lift: bool = False) -> "Adele":
        q = Fraction(q)
        return cls(FiniteAdele.from_rational(q), q, float(q) if with_lift else None)

    def to_json(self):
        out = self.finite.to_json()
        out["inf"] = f"{self.infinite.numerator}/{self.infinite.denominator}"
        if self.real_lift is not None:
            out["realLift"] = self.real_lift
        return out

    @classmethod
    def from_json(cls, data) -> "Adele":
        finite = FiniteAdele.from_json(data)
        try:
            infinite = Fraction(data.get("inf", "1"))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad archimedean part: {exc}") from exc
        return cls(finite, infinite, data.get("realLift"))


def adele_multiply(a: Adele, b: Adele) -> Adele:
    lift = None if a.real_lift is None and b.real_lift is None else 0.0
    return Adele(a.finite.multiply(b.finite), a.infinite * b.infinite, lift)


def adele_to_divisor(a: FiniteAdele | Adele) -> ArithmeticDivisor:
    """The valuation map: a |-> sum_p v_p(a_p) [p], with v_p(0) = oo.

    Exactness note: valuations of truncated components are exact data, so
    this map never loses precision.
    """
    fin = a.finite if isinstance(a, Adele) else a
    coeffs: Dict[int, ExtInt] = {p: fin.component(p).valuation for p in fin.support_primes()}
    default = INF if fin.default == 0 else 0
    return ArithmeticDivisor(coeffs, default)


def divisor_to_adele(d: ArithmeticDivisor) -> FiniteAdele:
    """Canonical section of the valuation map: a_p = p**n_p (0 at oo-primes)."""
    if is_inf(d.default):
        explicit = {p: padic_from_rational(p, Fraction(p) ** c)
                    for p, c in d.explicit.items()}  # finite coefficients only
        return FiniteAdele(explicit, 0)
    explicit = {}
    for p, c in d.explicit.items():
        explicit[p] = TruncatedPadic(p, INF) if is_inf(c) else padic_from_rational(p, Fraction(p) ** c)
    return FiniteAdele(explicit, 1)


def subgroup_membership(a: FiniteAdele | Adele, x: Rational) -> bool:
    """Whether x lies in the rank-one group L_a = {q in Q : q * a integral}."""
    fin = a.finite if isinstance(a, Adele) else a
    x = Fraction(x)
    if x == 0:
        return True
    primes = set(fin.support_primes()) | set(factorize_fraction(x))
    for p in primes:
        v = fin.component(p).valuation
        if is_inf(v):
            continue
        if v + valuation(x, p) < 0:
            return False
    return True


def yq_reduce(a: Adele) -> tuple[Adele, Fraction]:
    """Normal form of a modulo the diagonal Q^*: returns (a', r), a' = r*a.

    The rational r clears every finite nonzero valuation (leaving unit or
    exact-zero components) and makes the archimedean part nonnegative.
    """
    fin = a.finite
    w = Fraction(1)
    for p in fin.support_primes():
        v = fin.component(p).valuation
        if not is_inf(v) and v != 0:
            w *= Fraction(p) ** v
    r = 1 / w
    if a.infinite * r < 0:
        r = -r
    scaled = Adele(fin.scale(r), a.infinite * r, a.real_lift)
    return scaled, r


@dataclass(frozen=True)
class QmodZ:
    """An element of Q/Z stored as its canonical representative in [0,1)."""

    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        object.__setattr__(self, "value", v - v.__floor__())

    def add(self, other: "QmodZ") -> "QmodZ":
        return QmodZ(self.value + other.value)

    def scale(self, n: int) -> "QmodZ":
        return QmodZ(self.value * n)

    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self):
        return f"{self.value.numerator}/{self.value.denominator} mod 1"


def fractional_part(comp: TruncatedPadic) -> Fraction:
    """{x}_p: the canonical representative in [0,1) of x mod Z_p.

    Zero for integral components; otherwise needs |v| unit digits.
    """
    if comp.is_zero() or comp.valuation >= 0:
        return Fraction(0)
    k = -comp.valuation
    r = comp.unit_mod(k)
    return Fraction(r, comp.prime**k)


def psi_pair(a: FiniteAdele | Adele, q: Rational) -> QmodZ:
    """The duality pairing psi(a)(q) = sum_p {q * a_p}_p in Q/Z.

    Only primes where q * a_p is non-integral contribute; the sum is exact
    and raises when a truncated component lacks the digits that the
    fractional part needs.
    """
    fin = a.finite if isinstance(a, Adele) else a
    q = Fraction(q)
    if q == 0:
        return QmodZ(Fraction(0))
    primes = set(fin.support_primes()) | set(factorize_fraction(q))
    total = Fraction(0)
    for p in primes:
        comp = fin.component(p).multiply(padic_from_rational(p, q))
        total += fractional_part(comp)
    return QmodZ(total)
