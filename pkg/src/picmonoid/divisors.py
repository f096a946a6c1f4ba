"""Divisors over the primes with coefficients in Z u {oo}.

A divisor here is a formal sum ``sum_p n_p [p]`` over the rational primes
with extended-integer coefficients, finitely many of them negative.  We
represent the *eventually constant* subclass: finitely many explicit
exceptions over a default coefficient that is either 0 or oo.  That subclass
is closed under addition and contains every divisor of a nonzero rational,
every divisor cut out by finitely many generators, and every localization
divisor, which is all the rest of the package needs.

The section group of a divisor D is L(D) = {x in Q : v_p(x) >= -n_p for all
p}; divisors correspond one-to-one with the rank-one subgroups of Q this
way, and addition of divisors matches multiplication of adeles upstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple, Union

from .errors import (
    AllZeroError,
    InfiniteCoefficientError,
    UsageError,
    ZeroInputError,
)
from .numtheory import (
    INF,
    ExtInt,
    factorize,
    factorize_fraction,
    is_inf,
    require_prime,
    valuation,
)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class PrimeSet:
    """A finite or cofinite set of primes.

    ``complemented=False`` means "exactly the members"; ``complemented=True``
    means "every prime except the members".
    """

    members: frozenset = frozenset()
    complemented: bool = False

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(require_prime(p) for p in self.members))

    def __contains__(self, p: int) -> bool:
        return (p in self.members) != self.complemented

    def union(self, other: "PrimeSet") -> "PrimeSet":
        if not self.complemented and not other.complemented:
            return PrimeSet(self.members | other.members)
        if self.complemented and other.complemented:
            return PrimeSet(self.members & other.members, complemented=True)
        if self.complemented:
            normal, co = other, self
        else:
            normal, co = self, other
        # everything except (exceptions of the cofinite set not rescued by the finite set)
        return PrimeSet(co.members - normal.members, complemented=True)

    def is_empty(self) -> bool:
        return not self.complemented and not self.members

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def to_json(self):
        if self.complemented:
            return {"complement": self.sorted_members()}
        return self.sorted_members()

    @classmethod
    def from_json(cls, data) -> "PrimeSet":
        if isinstance(data, dict):
            if set(data) != {"complement"}:
                raise UsageError("prime set object must have a single 'complement' key")
            return cls(frozenset(data["complement"]), complemented=True)
        return cls(frozenset(data))

    def __repr__(self):
        base = "{" + ", ".join(str(p) for p in self.sorted_members()) + "}"
        return f"all primes except {base}" if self.complemented else base


ALL_PRIMES = PrimeSet(complemented=True)
NO_PRIMES = PrimeSet()


def _check_coefficient(c) -> ExtInt:
    if is_inf(c):
        return INF
    if isinstance(c, bool) or not isinstance(c, int):
        raise UsageError(f"divisor coefficient must be an integer or inf, got {c!r}")
    return c


class ArithmeticDivisor:
    """Eventually constant divisor: finitely many exceptions over 0 or oo."""

    __slots__ = ("explicit", "default")

    def __init__(self, explicit: Mapping[int, ExtInt] | None = None, default: ExtInt = 0):
        if not (default == 0 or is_inf(default)):
            raise UsageError("divisor default coefficient must be 0 or inf")
        clean: Dict[int, ExtInt] = {}
        for p, c in (explicit or {}).items():
            require_prime(p)
            c = _check_coefficient(c)
            if c == default or (is_inf(c) and is_inf(default)):
                continue  # canonical sparsity: drop entries equal to the default
            clean[p] = c
        self.explicit = dict(sorted(clean.items()))
        self.default = INF if is_inf(default) else 0

    # -- basic queries ---------------------------------------------------

    def coefficient(self, p: int) -> ExtInt:
        return self.explicit.get(p, self.default)

    def support_primes(self) -> list[int]:
        return list(self.explicit)

    def finite_support(self) -> Dict[int, int]:
        """Primes carrying a finite nonzero coefficient."""
        return {p: c for p, c in self.explicit.items() if not is_inf(c) and c != 0}

    def inf_locus(self) -> PrimeSet:
        if is_inf(self.default):
            return PrimeSet(frozenset(p for p, c in self.explicit.items() if not is_inf(c)),
                            complemented=True)
        return PrimeSet(frozenset(p for p, c in self.explicit.items() if is_inf(c)))

    def has_infinite_coefficient(self) -> bool:
        return is_inf(self.default) or any(is_inf(c) for c in self.explicit.values())

    def __eq__(self, other):
        if not isinstance(other, ArithmeticDivisor):
            return NotImplemented
        return self.default == other.default and self.explicit == other.explicit

    def __hash__(self):
        return hash((self.default, tuple(sorted((p, repr(c)) for p, c in self.explicit.items()))))

    def __repr__(self):
        return divisor_to_text(self)

    # -- serialization ---------------------------------------------------

    def to_json(self):
        return {
            "explicit": {str(p): ("inf" if is_inf(c) else str(c)) for p, c in self.explicit.items()},
            "default": "inf" if is_inf(self.default) else "0",
        }

    @classmethod
    def from_json(cls, data) -> "ArithmeticDivisor":
        try:
            default = INF if data.get("default", "0") == "inf" else int(data.get("default", "0"))
            explicit = {int(p): (INF if c == "inf" else int(c)) for p, c in data.get("explicit", {}).items()}
        except (AttributeError, ValueError, TypeError) as exc:
            raise UsageError(f"bad divisor JSON: {exc}") from exc
        return cls(explicit, default)


def divisor_to_text(d: ArithmeticDivisor) -> str:
    """Render as ``{2:3, 5:inf; default:0}``."""
    inner = ", ".join(f"{p}:{c}" for p, c in d.explicit.items())
    return "{" + inner + ("; " if inner else "") + f"default:{d.default}" + "}"


def divisor_from_text(text: str) -> ArithmeticDivisor:
    """Parse the ``{2:3, 5:inf; default:0}`` format (default part optional)."""
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise UsageError(f"divisor text must be brace-delimited: {text!r}")
    body = s[1:-1].strip()
    default: ExtInt = 0
    if ";" in body:
        body, _, tail = body.partition(";")
        tail = tail.strip()
    elif body.startswith("default:"):
        # empty explicit part renders without a semicolon, e.g. "{default:0}"
        body, tail = "", body
    else:
        tail = ""
    if tail:
        if not tail.startswith("default:"):
            raise UsageError(f"expected 'default:' clause, got {tail!r}")
        val = tail[len("default:"):].strip()
        default = INF if val == "inf" else int(val)
    explicit: Dict[int, ExtInt] = {}
    body = body.strip()
    if body:
        for item in body.split(","):
            p_text, _, c_text = item.partition(":")
            try:
                p = int(p_text.strip())
            except ValueError as exc:
                raise UsageError(f"bad prime in divisor text: {item!r}") from exc
            c_text = c_text.strip()
            c: ExtInt = INF if c_text == "inf" else int(c_text)
            if p in explicit:
                raise UsageError(f"repeated prime {p} in divisor text")
            explicit[p] = c
    return ArithmeticDivisor(explicit, default)


# -- constructors --------------------------------------------------------


def divisor_from_rational(q: Rational) -> ArithmeticDivisor:
    """div(q) = sum_p v_p(q) [p] for a nonzero rational q."""
    q = Fraction(q)
    if q == 0:
        raise ZeroInputError("div(0) is undefined")
    return ArithmeticDivisor(factorize_fraction(q), 0)


def divisor_from_generators(gens: Iterable[Rational]) -> ArithmeticDivisor:
    """Divisor of the subgroup of Q generated by finitely many rationals.

    The coefficient at p is -min_i v_p(g_i) over the nonzero generators:
    the group they generate is cyclic and this is the divisor whose section
    group realizes it.
    """
    nonzero = [Fraction(g) for g in gens if Fraction(g) != 0]
    if not nonzero:
        raise AllZeroError("need at least one nonzero generator")
    factored = [factorize_fraction(g) for g in nonzero]
    primes = set().union(*factored)
    coeffs = {p: max(-f.get(p, 0) for f in factored) for p in primes}
    return ArithmeticDivisor({p: c for p, c in coeffs.items() if c != 0}, 0)


def divisor_from_localization(s: PrimeSet) -> ArithmeticDivisor:
    """The idempotent divisor of Z_S = Z[1/p : p in S]: oo on S, 0 elsewhere."""
    if s.complemented:
        return ArithmeticDivisor({p: 0 for p in s.members}, INF)
    return ArithmeticDivisor({p: INF for p in s.members}, 0)


# -- arithmetic ----------------------------------------------------------


def divisor_add(d1: ArithmeticDivisor, d2: ArithmeticDivisor) -> ArithmeticDivisor:
    """Coefficientwise sum; oo is absorbing."""
    default = d1.default + d2.default
    explicit: Dict[int, ExtInt] = {}
    for p in set(d1.explicit) | set(d2.explicit):
        explicit[p] = d1.coefficient(p) + d2.coefficient(p)
    return ArithmeticDivisor(explicit, default)


def divisor_negate(d: ArithmeticDivisor) -> ArithmeticDivisor:
    if d.has_infinite_coefficient():
        raise InfiniteCoefficientError("cannot negate a divisor with infinite coefficients")
    return ArithmeticDivisor({p: -c for p, c in d.explicit.items()}, 0)


def sections_contains(d: ArithmeticDivisor, x: Rational) -> bool:
    """Membership in L(D) = {x in Q : v_p(x) >= -n_p for all p}; 0 always in."""
    x = Fraction(x)
    if x == 0:
        return True
    primes = set(d.explicit) | set(factorize_fraction(x))
    for p in primes:
        c = d.coefficient(p)
        if is_inf(c):
            continue
        if valuation(x, p) < -c:
            return False
    return True


def sections_generator(d: ArithmeticDivisor) -> Fraction:
    """Positive generator of L(D) for a finite-type divisor: prod p^{-n_p}."""
    if d.has_infinite_coefficient():
        raise InfiniteCoefficientError("L(D) is not cyclic when D has infinite coefficients")
    g = Fraction(1)
    for p, c in d.explicit.items():
        g *= Fraction(p) ** (-c)
    return g


# -- linear equivalence and class normal forms ----------------------------


def classes_equivalent(d1: ArithmeticDivisor, d2: ArithmeticDivisor) -> Optional[Fraction]:
    """Positive rational q with d1 = d2 + div(q), or None.

    Two eventually constant divisors are linearly equivalent exactly when
    their infinite loci coincide; the witness is forced coefficientwise.
    """
    if d1.inf_locus() != d2.inf_locus():
        return None
    q = Fraction(1)
    for p in set(d1.explicit) | set(d2.explicit):
        c1, c2 = d1.coefficient(p), d2.coefficient(p)
        if is_inf(c1) and is_inf(c2):
            continue
        if is_inf(c1) or is_inf(c2):
            return None
        q *= Fraction(p) ** (c1 - c2)
    # sanity: the witness must transport d2 onto d1 exactly
    transported = divisor_add(d2, divisor_from_rational(q)) if q != 1 else d2
    if transported != d1:
        return None
    return q


def class_normalize(d: ArithmeticDivisor) -> Tuple[PrimeSet, Fraction]:
    """Canonical pair (S, q): S the infinite locus, q = prod p^{n_p} over
    the finite nonzero coefficients, so that d ~ (oo on S) + div(q)."""
    s = d.inf_locus()
    q = Fraction(1)
    for p, c in d.finite_support().items():
        q *= Fraction(p) ** c
    return s, q


def is_idempotent_class(d: ArithmeticDivisor) -> bool:
    """True iff d + d ~ d, i.e. the class of d is idempotent.

    For eventually constant divisors this always holds with witness
    q = prod p^{n_p}; the check goes through the generic equivalence test.
    """
    return classes_equivalent(divisor_add(d, d), d) is not None


# -- oracle-backed extension hook -----------------------------------------


class OracleDivisor:
    """A divisor given by a coefficient oracle with declared negative support.

    Supports addition (oracles compose) and section membership, but no
    equality test: deciding equality of two black-box coefficient streams is
    not possible, so it is deliberately not offered.
    """

    __slots__ = ("oracle", "negative_support")

    def __init__(self, oracle: Callable[[int], ExtInt], negative_support: Iterable[int]):
        self.oracle = oracle
        self.negative_support = frozenset(require_prime(p) for p in negative_support)

    def coefficient(self, p: int) -> ExtInt:
        c = _check_coefficient(self.oracle(require_prime(p)))
        if (not is_inf(c)) and c < 0 and p not in self.negative_support:
            raise UsageError(f"oracle returned undeclared negative coefficient at {p}")
        return c

    def add(self, other: "OracleDivisor | ArithmeticDivisor") -> "OracleDivisor":
        other_coeff = other.coefficient
        if isinstance(other, ArithmeticDivisor):
            other_neg = frozenset(p for p, c in other.explicit.items() if not is_inf(c) and c < 0)
        else:
            other_neg = other.negative_support
        return OracleDivisor(lambda p: self.coefficient(p) + other_coeff(p),
                             self.negative_support | other_neg)

    def sections_contains(self, x: Rational) -> bool:
        x = Fraction(x)
        if x == 0:
            return True
        primes = set(self.negative_support) | set(factorize_fraction(x))
        for p in primes:
            c = self.coefficient(p)
            if is_inf(c):
                continue
            if valuation(x, p) < -c:
                return False
        return True

    def __eq__(self, other):  # pragma: no cover - documented refusal
        raise UsageError("equality of oracle-backed divisors is undecidable and not offered")
