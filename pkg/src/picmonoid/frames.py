"""Framed divisor classes and their torsion-dual root systems.

A *frame* is a pair (multiplier, tau): a finite adele whose componentwise
valuations cut out a divisor D (tightness: v_p(a_p) = n_p holds by
construction when the frame is built from its multiplier), together with a
rational archimedean multiplier tau.  The multiplier realizes the section
group L(D) as a subgroup of the finite integral adeles via x |-> a*x, and
reduction of that pairing modulo n gives a compatible system of torsion
points -- the *roots* of the frame:

    root at level n, evaluated on x in L(D):  (a*x mod n) / n  in Q/Z.

Roots vanish at every level supported on the singular locus (where the
multiplier component is an exact zero) and are surjective onto level-n
torsion away from it.  Tensoring frames multiplies multipliers and taus,
and the root of a tensor is the levelwise product pairing of the factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from .adeles import (
    FiniteAdele,
    QmodZ,
    TruncatedPadic,
    adele_to_divisor,
    padic_from_rational,
    psi_pair,
)
from .divisors import ArithmeticDivisor, PrimeSet, Rational, classes_equivalent, sections_contains
from .errors import (
    InsufficientPrecisionError,
    NotInGroupError,
    UsageError,
    ZeroInputError,
)
from .numtheory import INF, crt, factorize, is_inf, require_prime, valuation


class Frame:
    """A framed divisor class: finite multiplier adele plus rational tau."""

    __slots__ = ("multiplier", "tau", "divisor")

    def __init__(self, multiplier: FiniteAdele, tau: Rational):
        if not isinstance(multiplier, FiniteAdele):
            raise UsageError("frame multiplier must be a finite adele")
        self.multiplier = multiplier
        self.tau = Fraction(tau)
        self.divisor = adele_to_divisor(multiplier)

    def s_locus(self) -> PrimeSet:
        return self.divisor.inf_locus()

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return self.tau == other.tau and self.multiplier == other.multiplier

    def __hash__(self):
        return hash((self.tau, self.multiplier))

    def __repr__(self):
        return f"Frame({self.multiplier!r}, tau={self.tau})"

    def to_json(self):
        out = self.multiplier.to_json()
        out["tau"] = f"{self.tau.numerator}/{self.tau.denominator}"
        return out

    @classmethod
    def from_json(cls, data) -> "Frame":
        try:
            tau = Fraction(data.get("tau", "1"))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad tau: {exc}") from exc
        return cls(FiniteAdele.from_json(data), tau)


def frame_from_rational(q: Rational) -> Frame:
    """The principal frame of div(q): diagonal multiplier and tau both q."""
    q = Fraction(q)
    if q == 0:
        raise ZeroInputError("the zero rational does not define a principal frame")
    return Frame(FiniteAdele.from_rational(q), q)


def frame_check_tight(multiplier: FiniteAdele, d: ArithmeticDivisor) -> bool:
    """Whether v_p(a_p) = n_p at every prime (zero component <-> oo)."""
    return adele_to_divisor(multiplier) == d


def frame_tensor(f1: Frame, f2: Frame) -> Frame:
    """Tensor of framed classes: multipliers multiply, taus multiply.

    The divisor of the tensor is the sum of the divisors, because
    valuations add.
    """
    return Frame(f1.multiplier.multiply(f2.multiplier), f1.tau * f2.tau)


# -- roots -----------------------------------------------------------------


def root_eval(f: Frame, n: int, x: Rational) -> QmodZ:
    """The level-n root of the frame evaluated at a section x.

    Computes (a*x mod n)/n by CRT over the prime powers of n.  Components
    over the singular locus contribute zero exactly (the multiplier is an
    exact zero there); truncated components must carry enough digits for
    the residue, otherwise the computation refuses loudly.
    """
    if not isinstance(n, int) or n < 1:
        raise UsageError(f"level must be a positive integer, got {n!r}")
    x = Fraction(x)
    if not sections_contains(f.divisor, x):
        raise NotInGroupError(f"{x} is not a section of the frame's divisor")
    if n == 1:
        return QmodZ(Fraction(0))
    residues = []
    for p, e in factorize(n).items():
        comp = f.multiplier.component(p)
        if comp.is_zero() or x == 0:
            residues.append((0, p**e))
            continue
        comp = comp.multiply(padic_from_rational(p, x))
        v = comp.valuation
        # x in L(D) forces v >= 0 at every prime
        if v >= e:
            residues.append((0, p**e))
        else:
            digits_needed = e - v
            r = comp.unit_mod(digits_needed) * p**v % p**e
            residues.append((r, p**e))
    r, mod = crt(residues)
    return QmodZ(Fraction(r, mod))


def root_consistency_check(f: Frame, n: int, k: int, x: Rational) -> bool:
    """Divisibility compatibility: the level-n root is k times the level-nk root."""
    return root_eval(f, n, x) == root_eval(f, n * k, x).scale(k)


def root_tensor_check(f1: Frame, f2: Frame, n: int, x: Rational, y: Rational) -> bool:
    """Levelwise product law: the tensor's root at x*y is the product of the
    factors' level-n residues, taken mod n."""
    lhs = root_eval(frame_tensor(f1, f2), n, Fraction(x) * Fraction(y))
    r1 = root_eval(f1, n, x).value * n  # integer residue mod n
    r2 = root_eval(f2, n, y).value * n
    rhs = QmodZ(Fraction(int(r1) * int(r2) % n, n))
    return lhs == rhs


def _section_samples(f: Frame, p: int, k: int, width: int = 12) -> list[Fraction]:
    """A finite probe set inside L(D) stressing the p-direction."""
    base = Fraction(1)
    for q, c in f.divisor.explicit.items():
        if not is_inf(c) and c != 0:
            base *= Fraction(q) ** (-c)
    samples = []
    p_extra = k + 1 if p in f.s_locus() else 0
    for j in range(0, p_extra + 1):
        for m in range(1, width + 1):
            samples.append(base * m * Fraction(p) ** (-j))
    return samples


def root_vanishing(f: Frame, p: int, k: int) -> bool:
    """True iff the level p**k root vanishes on all probed sections.

    For a tight frame this is equivalent to p lying in the singular locus:
    torsion duals admit no nonzero map at singular levels, while away from
    the locus the root hits a unit residue at the section generator.
    """
    require_prime(p)
    if k < 1:
        raise UsageError("level exponent must be >= 1")
    return all(root_eval(f, p**k, x).is_zero() for x in _section_samples(f, p, k))


def root_level_values(f: Frame, p: int, k: int) -> set[Fraction]:
    """Values of the level p**k root over a full residue sweep of sections."""
    require_prime(p)
    base = Fraction(1)
    for q, c in f.divisor.explicit.items():
        if not is_inf(c) and c != 0:
            base *= Fraction(q) ** (-c)
    return {root_eval(f, p**k, base * m).value for m in range(p**k)}


def root_table(f: Frame, p: int, k: int) -> list[tuple[Fraction, Fraction]]:
    """(section, root value) rows for a full residue sweep at level p**k."""
    require_prime(p)
    base = Fraction(1)
    for q, c in f.divisor.explicit.items():
        if not is_inf(c) and c != 0:
            base *= Fraction(q) ** (-c)
    level = p**k
    return [(base * m, root_eval(f, level, base * m).value) for m in range(level)]


def root_psi_compatible(f: Frame, n: int, x: Rational) -> bool:
    """Cross-check: the root pairing agrees with the adelic duality pairing
    psi evaluated at x/n."""
    return root_eval(f, n, x).value == psi_pair(f.multiplier, Fraction(x) / n).value


# -- torsion duals ----------------------------------------------------------


@dataclass(frozen=True)
class DualTorsionDescriptor:
    """Shape of the torsion part of the dual of L(D).

    The torsion is a direct sum over the primes *away* from the singular
    locus of p-primary coclic groups Q_p / a_p Z_p; ``local_shift`` records
    v_p(a_p) at the explicitly shifted primes (0 elsewhere).  For a trivial
    multiplier this is the group of roots of unity of order prime to the
    locus.
    """

    support: PrimeSet
    local_shift: Dict[int, int]

    def element_order(self, x: Rational, p: int) -> int:
        """Order of the image of x in Q_p / a_p Z_p."""
        require_prime(p)
        if p not in self.support:
            raise UsageError(f"prime {p} is not in the torsion support")
        x = Fraction(x)
        if x == 0:
            return 1
        shift = self.local_shift.get(p, 0)
        v = valuation(x, p)
        return p ** max(0, shift - v)

    def to_json(self):
        return {"support": self.support.to_json(),
                "localShift": {str(p): s for p, s in self.local_shift.items()}}


def dual_torsion(f: Frame) -> DualTorsionDescriptor:
    locus = f.s_locus()
    if locus.complemented:
        support = PrimeSet(locus.members)
    else:
        support = PrimeSet(locus.members, complemented=True)
    shifts: Dict[int, int] = {}
    for p in f.multiplier.support_primes():
        v = f.multiplier.component(p).valuation
        if not is_inf(v) and v != 0 and p in support:
            shifts[p] = v
    return DualTorsionDescriptor(support, shifts)


# -- equality of framed classes ---------------------------------------------


def _verify_scaling(m1: FiniteAdele, m2: FiniteAdele, q: Fraction) -> bool:
    """Certify m2 = q * m1 componentwise to the available precision."""
    if m2.default != m1.default * q:
        return False
    primes = set(m1.explicit) | set(m2.explicit)
    if q != 0:
        primes |= set(factorize(abs(q.numerator))) | set(factorize(q.denominator))
    for p in primes:
        scaled = m1.component(p).multiply(padic_from_rational(p, q))
        if not m2.component(p).same_value(scaled):
            return False
    return True


def pic_framed_class(f1: Frame, f2: Frame) -> bool:
    """Whether two frames present the same framed class, i.e. differ by a
    global rational scaling q acting on both multiplier and tau.

    With nonzero taus the candidate q is forced; with both taus zero it is
    read off the divisors, up to sign.  Two zero-tau frames whose
    multipliers are identically zero are equal by canonical form.
    """
    if (f1.tau == 0) != (f2.tau == 0):
        return False
    if f1.tau != 0:
        q = f2.tau / f1.tau
        return _verify_scaling(f1.multiplier, f2.multiplier, q)
    # both taus zero: derive candidates from the divisors
    q0 = classes_equivalent(f2.divisor, f1.divisor)
    if q0 is None:
        return False
    undetermined: Optional[InsufficientPrecisionError] = None
    for q in (q0, -q0):
        try:
            if _verify_scaling(f1.multiplier, f2.multiplier, q):
                return True
        except InsufficientPrecisionError as exc:
            undetermined = exc
    if undetermined is not None:
        raise undetermined
    return False
